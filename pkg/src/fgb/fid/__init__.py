from .stats import FidStats, gaussian_stats
from .distance import FidResult, frechet_distance, fid
from .features import extract_features, load_extractor, PatchFeatureExtractor

__all__ = [
    "FidStats",
    "FidResult",
    "gaussian_stats",
    "frechet_distance",
    "fid",
    "extract_features",
    "load_extractor",
    "PatchFeatureExtractor",
]
