"""Gaussian moment fitting over feature matrices."""

from dataclasses import dataclass

import numpy as np

from ..errors import InsufficientSamples


@dataclass(frozen=True)
class FidStats:
    """Mean vector and covariance of one image set in feature space."""

    mu: np.ndarray
    sigma: np.ndarray
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise InsufficientSamples(f"need at least 2 samples, got {self.n}")
        asym = np.abs(self.sigma - self.sigma.T).max()
        if asym > 1e-8:
            raise ValueError(f"covariance not symmetric (max asymmetry {asym:.3e})")


def gaussian_stats(features: np.ndarray) -> FidStats:
    """Fit (mu, sigma) to the rows of an n x d feature matrix.

    Uses the unbiased covariance estimator (n - 1 divisor).
    """
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2:
        raise ValueError(f"expected 2-D feature matrix, got shape {features.shape}")
    n = features.shape[0]
    if n < 2:
        raise InsufficientSamples(f"need at least 2 samples, got {n}")
    mu = features.mean(axis=0)
    sigma = np.cov(features, rowvar=False, ddof=1)
    sigma = np.atleast_2d(sigma)
    # np.cov is symmetric up to rounding; enforce exactly for downstream checks
    sigma = (sigma + sigma.T) / 2.0
    return FidStats(mu=mu, sigma=sigma, n=n)
