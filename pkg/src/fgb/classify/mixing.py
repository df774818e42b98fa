"""Batch mixing with synthetic images, minority oversampling weights, and
classic photometric augmentations."""

import numpy as np
import torch

from ..errors import DegenerateClassBalance, UsageError
from ..data.manifest import DatasetManifest, Label, Split
from ..gans.train import INDEX_TO_LABEL, generate as gan_generate
from .spec import MixingConfig


def _as_label(label) -> Label:
    if isinstance(label, Label):
        return label
    if isinstance(label, (int, np.integer)):
        return INDEX_TO_LABEL[int(label)]
    return Label(label)


class PoolSynthSource:
    """Fixed pre-generated pools, one list of images per label."""

    def __init__(self, pools: dict[Label, list]):
        self.pools = {Label(k): list(v) for k, v in pools.items()}
        for label, pool in self.pools.items():
            if not pool:
                raise ValueError(f"empty synthetic pool for {label.value}")

    def sample(self, label, rng: np.random.Generator):
        pool = self.pools[_as_label(label)]
        return pool[int(rng.integers(len(pool)))]


class GanSynthSource:
    """Draws a fresh image per request from a conditional checkpoint."""

    def __init__(self, checkpoint):
        if not checkpoint.spec.conditional:
            raise UsageError("mixing needs a label-conditional checkpoint")
        self.checkpoint = checkpoint

    def sample(self, label, rng: np.random.Generator):
        seed = int(rng.integers(2**31 - 1))
        return gan_generate(self.checkpoint, 1, label=_as_label(label), seed=seed)[0]


def mix_batch(
    batch: list[tuple],
    cfg: MixingConfig,
    rng: np.random.Generator,
) -> list[tuple]:
    """Swap each (image, label) for a same-label synthetic draw when p > x,
    x ~ U[0,1]. Labels are never altered."""
    if cfg.p > 0 and cfg.synth_source is None:
        raise UsageError("p > 0 requires a synth_source")
    out = []
    for image, label in batch:
        x = rng.uniform()
        if cfg.p > x:
            image = cfg.synth_source.sample(label, rng)
        out.append((image, label))
    return out


def sampler_weights(manifest: DatasetManifest) -> list[float]:
    """Inverse-class-frequency weight per TRAIN record (replacement sampling
    under these weights draws each class with probability 1/2)."""
    records = manifest.subset(split=Split.TRAIN)
    counts = {
        Label.AMD: sum(r.label is Label.AMD for r in records),
        Label.NON_AMD: sum(r.label is Label.NON_AMD for r in records),
    }
    if min(counts.values()) == 0:
        raise DegenerateClassBalance(f"single-class TRAIN split: {counts}")
    return [1.0 / counts[r.label] for r in records]


def classic_augment(
    image: torch.Tensor,
    rng: np.random.Generator,
    jitter: float = 0.2,
    flip_prob: float = 0.5,
    crop_scale: tuple[float, float] = (0.9, 1.0),
) -> torch.Tensor:
    """Random resize-crop, brightness/contrast/saturation jitter and
    horizontal flip on a (C, H, W) tensor in [-1, 1]."""
    c, h, w = image.shape
    out = image

    scale = float(rng.uniform(*crop_scale))
    if scale < 1.0:
        ch, cw = max(1, int(round(h * scale))), max(1, int(round(w * scale)))
        y0 = int(rng.integers(0, h - ch + 1))
        x0 = int(rng.integers(0, w - cw + 1))
        out = torch.nn.functional.interpolate(
            out[None, :, y0 : y0 + ch, x0 : x0 + cw],
            size=(h, w), mode="bilinear", align_corners=False,
        )[0]

    if jitter > 0:
        brightness = float(rng.uniform(-jitter, jitter))
        contrast = float(rng.uniform(1 - jitter, 1 + jitter))
        saturation = float(rng.uniform(1 - jitter, 1 + jitter))
        out = out * contrast + brightness
        gray = out.mean(dim=0, keepdim=True)
        out = gray + (out - gray) * saturation

    if rng.uniform() < flip_prob:
        out = torch.flip(out, dims=(2,))

    return out.clamp(-1.0, 1.0)
