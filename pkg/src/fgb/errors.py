"""Exception types shared across the toolkit."""


class FgbError(Exception):
    """Base class for all toolkit errors."""


class NoCircleFound(FgbError):
    """Hough accumulator produced no cell above the vote threshold."""


class DegenerateCrop(FgbError):
    """Crop region collapsed below the minimum usable size."""


class InsufficientMinorityClass(FgbError):
    """Not enough minority-class images to build the requested test split."""


class DomainError(FgbError):
    """Loss input outside its mathematical domain (e.g. probability <= 0)."""


class NumericalError(FgbError):
    """Non-finite value encountered where a finite one is required."""


class UsageError(FgbError):
    """Operation called in a way its contract forbids."""


class ModelLoadError(FgbError):
    """Model or weights file missing or unreadable."""


class InsufficientSamples(FgbError):
    """Too few samples for the requested statistic."""


class ConfigError(FgbError):
    """Invalid or inconsistent configuration."""


class DegenerateClassBalance(FgbError):
    """A two-class operation received a single-class input."""


class InsufficientPool(FgbError):
    """Image pool too small for the requested study composition."""


class NotFound(FgbError):
    """Unknown identifier."""


class SequenceError(FgbError):
    """Response submitted out of order."""


class DuplicateResponse(FgbError):
    """Response already recorded for this item."""


class NotComplete(FgbError):
    """Operation requires a completed session."""
