"""Adaptive discriminator augmentation: feedback controller + image ops."""

from dataclasses import replace

import numpy as np
import torch

from .config import AdaState

DEFAULT_OPS = ("rotate90", "translate", "flip", "color")


def ada_update(state: AdaState, d_real_signs, target: float = 0.8) -> AdaState:
    """Fold a batch of sign(D(x_real)) into the overfit estimate, nudge p.

    p_aug moves by step_size toward whichever side closes the gap between
    the running sign statistic and the target; it never leaves [0, 1].
    """
    signs = np.asarray(d_real_signs, dtype=np.float64)
    if signs.size and not np.isin(signs, (-1.0, 0.0, 1.0)).all():
        raise ValueError("signs must be -1, 0 or +1")
    beta = 0.5 ** (1.0 / state.half_life)
    r = beta * state.r_estimate + (1.0 - beta) * (signs.mean() if signs.size else 0.0)
    r = float(np.clip(r, -1.0, 1.0))
    gap = r - target
    direction = 0.0 if abs(gap) < 1e-12 else np.sign(gap)
    p = float(np.clip(state.p_aug + state.step_size * direction, 0.0, 1.0))
    return replace(state, p_aug=p, r_estimate=r)


def augment_pipeline(
    images: torch.Tensor,
    p_aug: float,
    rng: np.random.Generator,
    ops: tuple[str, ...] = DEFAULT_OPS,
    max_shift_frac: float = 0.125,
    jitter: float = 0.2,
) -> torch.Tensor:
    """Apply each enabled augmentation independently with probability p_aug.

    Operates on a (B, C, H, W) tensor in [-1, 1]; augmentations happen on
    the discriminator inputs, so no differentiability is required.
    """
    if not 0.0 <= p_aug <= 1.0:
        raise ValueError("p_aug must lie in [0, 1]")
    if p_aug == 0.0 or images.shape[0] == 0:
        return images
    out = images.clone()
    n = out.shape[0]
    h, w = out.shape[2], out.shape[3]
    max_shift = max(1, int(round(max_shift_frac * min(h, w))))

    for i in range(n):
        img = out[i]
        if "rotate90" in ops and rng.random() < p_aug:
            img = torch.rot90(img, k=int(rng.integers(1, 4)), dims=(1, 2))
        if "translate" in ops and rng.random() < p_aug:
            dx = dy = 0
            while dx == 0 and dy == 0:
                dx = int(rng.integers(-max_shift, max_shift + 1))
                dy = int(rng.integers(-max_shift, max_shift + 1))
            img = torch.roll(img, shifts=(dy, dx), dims=(1, 2))
        if "flip" in ops and rng.random() < p_aug:
            img = torch.flip(img, dims=(2,))
        if "color" in ops and rng.random() < p_aug:
            brightness = float(rng.uniform(-jitter, jitter))
            contrast = float(rng.uniform(1.0 - jitter, 1.0 + jitter))
            img = (img * contrast + brightness).clamp(-1.0, 1.0)
        out[i] = img
    return out
