"""Retina localization via a gradient-voting circular Hough transform.

Edge pixels vote for candidate centers along their gradient line over the
configured radius range; the highest-vote accumulator cell seeds the
circle, whose center and radius are then refined by a least-squares fit on
the inlier edge pixels. Falls below the vote threshold -> NoCircleFound.
"""

from dataclasses import dataclass

import cv2
import numpy as np

from ..errors import NoCircleFound
from .manifest import RetinaCircle


@dataclass(frozen=True)
class HoughParams:
    min_radius_frac: float = 0.25
    max_radius_frac: float = 0.60
    edge_threshold: float = 20.0
    vote_threshold: float = 30.0
    blur_sigma: float = 1.0


def _kasa_fit(xs, ys, w):
    # algebraic circle fit: minimize ||(x-a)^2 + (y-b)^2 - r^2||, linear in (a, b, c)
    a_mat = np.stack([2 * xs, 2 * ys, np.ones_like(xs)], axis=1)
    rhs = xs**2 + ys**2
    sol, *_ = np.linalg.lstsq(a_mat * w[:, None], rhs * w, rcond=None)
    a, b, c = sol
    r = np.sqrt(max(c + a * a + b * b, 1e-9))
    return float(a), float(b), float(r)


def detect_retina_circle(
    image: np.ndarray, params: HoughParams = HoughParams()
) -> RetinaCircle:
    """Locate the circular field of view in an 8-bit grayscale image."""
    if image.ndim != 2:
        raise ValueError("expected a single-channel image")
    if image.dtype != np.uint8:
        raise ValueError("expected an 8-bit image")
    h, w = image.shape
    if min(h, w) < 64:
        raise ValueError("minimum dimension is 64 px")

    r_min = int(params.min_radius_frac * min(h, w))
    r_max = int(params.max_radius_frac * min(h, w))

    smooth = cv2.GaussianBlur(image, (0, 0), params.blur_sigma).astype(np.float32)
    gx = cv2.Sobel(smooth, cv2.CV_32F, 1, 0, ksize=3)
    gy = cv2.Sobel(smooth, cv2.CV_32F, 0, 1, ksize=3)
    mag = np.hypot(gx, gy)
    ys, xs = np.nonzero(mag > params.edge_threshold)
    if len(xs) == 0:
        raise NoCircleFound("no edges above threshold")

    m = mag[ys, xs]
    ux, uy = gx[ys, xs] / m, gy[ys, xs] / m
    acc = np.zeros((h, w), np.float32)
    ts = np.arange(r_min, r_max + 1, 1.0, dtype=np.float32)
    for sign in (1.0, -1.0):
        cxi = np.rint(xs[None, :] + sign * ts[:, None] * ux[None, :]).astype(np.int64)
        cyi = np.rint(ys[None, :] + sign * ts[:, None] * uy[None, :]).astype(np.int64)
        ok = (cxi >= 0) & (cxi < w) & (cyi >= 0) & (cyi < h)
        np.add.at(acc, (cyi[ok], cxi[ok]), 1.0)

    peak = float(acc.max())
    if peak < params.vote_threshold:
        raise NoCircleFound(f"best accumulator cell has {peak:.0f} votes")

    py, px = np.unravel_index(int(acc.argmax()), acc.shape)
    cx, cy = float(px), float(py)

    dist = np.hypot(xs - cx, ys - cy)
    in_range = (dist >= r_min) & (dist <= r_max)
    if not in_range.any():
        raise NoCircleFound("no edge support in radius range")
    hist, bin_edges = np.histogram(dist[in_range], bins=r_max - r_min + 1, range=(r_min, r_max + 1))
    r = float(bin_edges[int(hist.argmax())]) + 0.5

    xs_f, ys_f, m_f = xs.astype(np.float64), ys.astype(np.float64), m.astype(np.float64)
    for _ in range(3):
        dist = np.hypot(xs_f - cx, ys_f - cy)
        inlier = np.abs(dist - r) <= max(2.0, 0.02 * r)
        if inlier.sum() < 10:
            break
        cx, cy, r = _kasa_fit(xs_f[inlier], ys_f[inlier], m_f[inlier])

    if not (r_min - 2 <= r <= r_max + 2):
        raise NoCircleFound(f"refined radius {r:.1f} outside [{r_min}, {r_max}]")
    if not (0 <= cx < w and 0 <= cy < h):
        raise NoCircleFound("refined center left image bounds")
    return RetinaCircle(cx=cx, cy=cy, r=r)
