"""Frechet distance between Gaussian fits of two feature distributions.

d^2 = ||mu_a - mu_b||^2 + Tr(sigma_a + sigma_b - 2 (sigma_a sigma_b)^{1/2})
"""

from dataclasses import dataclass, asdict

import numpy as np
import scipy.linalg

from ..errors import NumericalError
from .stats import FidStats, gaussian_stats
from .features import extract_features

# Imaginary mass above this (relative to the real part) triggers the
# eps-stabilized retry instead of being silently discarded.
_IMAG_TOL = 1e-3


@dataclass(frozen=True)
class FidResult:
    value: float
    mean_term: float
    trace_term: float
    stabilization_eps_used: float
    n_a: int
    n_b: int

    def to_dict(self) -> dict:
        return asdict(self)


def _sqrtm_trace(sigma_a: np.ndarray, sigma_b: np.ndarray) -> tuple[float, bool]:
    """Trace of (sigma_a sigma_b)^{1/2}; flags a non-negligible imaginary part."""
    covmean, _ = scipy.linalg.sqrtm(sigma_a @ sigma_b, disp=False)
    if not np.isfinite(covmean).all():
        return float("nan"), True
    if np.iscomplexobj(covmean):
        imag_max = np.abs(covmean.imag).max()
        real_scale = max(np.abs(covmean.real).max(), 1.0)
        if imag_max / real_scale > _IMAG_TOL:
            return float(np.trace(covmean.real)), True
        covmean = covmean.real
    return float(np.trace(covmean)), False


def frechet_distance(a: FidStats, b: FidStats, eps: float = 1e-6) -> FidResult:
    """Closed-form Gaussian Frechet distance with eps-stabilized retry.

    The matrix square root is taken on the plain covariance product first;
    only when it comes back with a material imaginary component (near-singular
    product) are both covariances jittered by eps*I and the root recomputed.
    """
    if a.mu.shape != b.mu.shape:
        raise ValueError(f"dimension mismatch: {a.mu.shape} vs {b.mu.shape}")
    for stats in (a, b):
        if not (np.isfinite(stats.mu).all() and np.isfinite(stats.sigma).all()):
            raise NumericalError("non-finite moments")

    diff = a.mu - b.mu
    mean_term = float(diff @ diff)

    tr_ab, unstable = _sqrtm_trace(a.sigma, b.sigma)
    eps_used = 0.0
    if unstable:
        eye = np.eye(a.sigma.shape[0])
        tr_ab, unstable = _sqrtm_trace(a.sigma + eps * eye, b.sigma + eps * eye)
        eps_used = eps
        if unstable or not np.isfinite(tr_ab):
            raise NumericalError("matrix square root failed even after stabilization")

    trace_term = float(np.trace(a.sigma) + np.trace(b.sigma) - 2.0 * tr_ab)
    value = mean_term + trace_term
    if value < -1e-6:
        raise NumericalError(f"distance {value} below tolerance; inputs inconsistent")
    return FidResult(
        value=max(value, 0.0),
        mean_term=mean_term,
        trace_term=trace_term,
        stabilization_eps_used=eps_used,
        n_a=a.n,
        n_b=b.n,
    )


def fid(images_a, images_b, extractor, eps: float = 1e-6) -> FidResult:
    """End-to-end distance between two image sets under one extractor."""
    feats_a = extract_features(images_a, extractor)
    feats_b = extract_features(images_b, extractor)
    return frechet_distance(gaussian_stats(feats_a), gaussian_stats(feats_b), eps=eps)
