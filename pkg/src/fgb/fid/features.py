"""Feature extraction backends for the Frechet distance.

Two backends:

* ``load_extractor(path)`` wraps a TorchScript network (e.g. an exported
  Inception-v3 pool layer, d=2048) together with the preprocessing recorded
  in its JSON sidecar, so scores stay comparable across runs.
* ``PatchFeatureExtractor`` is a deterministic, weight-free extractor for
  desk-scale work: images are downsampled to a small grayscale patch whose
  pixels are the features.
"""

import json
from pathlib import Path

import cv2
import numpy as np

from ..errors import ModelLoadError

_DEFAULT_SIDECAR = {
    "input_size": 299,
    "mean": [0.485, 0.456, 0.406],
    "std": [0.229, 0.224, 0.225],
}


def _to_unit_range(images) -> np.ndarray:
    """Stack images to (n, h, w, 3) float32 in [0, 1].

    uint8 inputs are divided by 255; float inputs are assumed to follow the
    pipeline's [-1, 1] convention. Grayscale images are channel-replicated.
    """
    arrs = [np.asarray(im) for im in images]
    if not arrs:
        raise ValueError("empty image set")
    out = []
    for a in arrs:
        if a.ndim == 2:
            a = np.stack([a] * 3, axis=-1)
        if a.dtype == np.uint8:
            a = a.astype(np.float32) / 255.0
        else:
            a = (a.astype(np.float32) + 1.0) / 2.0
        out.append(np.clip(a, 0.0, 1.0))
    shapes = {a.shape for a in out}
    if len(shapes) != 1:
        raise ValueError(f"images must share one shape, got {sorted(shapes)}")
    return np.stack(out)


class PatchFeatureExtractor:
    """Downsampled-grayscale features; deterministic and dependency-free."""

    def __init__(self, patch: int = 8):
        self.patch = patch
        self.dim = patch * patch

    def features(self, batch01: np.ndarray) -> np.ndarray:
        feats = np.empty((batch01.shape[0], self.dim), dtype=np.float64)
        for i, img in enumerate(batch01):
            gray = img.mean(axis=-1)
            small = cv2.resize(gray, (self.patch, self.patch), interpolation=cv2.INTER_AREA)
            feats[i] = small.reshape(-1)
        return feats


class TorchScriptExtractor:
    """Pretrained network loaded from a portable serialized-model file."""

    def __init__(self, module, input_size: int, mean, std, batch_size: int = 32):
        self.module = module
        self.input_size = input_size
        self.mean = np.asarray(mean, dtype=np.float32)
        self.std = np.asarray(std, dtype=np.float32)
        self.batch_size = batch_size

    def features(self, batch01: np.ndarray) -> np.ndarray:
        import torch

        x = torch.from_numpy(np.ascontiguousarray(batch01.transpose(0, 3, 1, 2)))
        if x.shape[-1] != self.input_size:
            x = torch.nn.functional.interpolate(
                x, size=(self.input_size, self.input_size),
                mode="bilinear", align_corners=False,
            )
        mean = torch.from_numpy(self.mean).view(1, 3, 1, 1)
        std = torch.from_numpy(self.std).view(1, 3, 1, 1)
        x = (x - mean) / std
        outs = []
        with torch.no_grad():
            for i in range(0, x.shape[0], self.batch_size):
                feat = self.module(x[i : i + self.batch_size])
                outs.append(feat.reshape(feat.shape[0], -1).double().numpy())
        return np.concatenate(outs, axis=0)


def load_extractor(path: str | Path) -> TorchScriptExtractor:
    """Load a TorchScript feature network plus its preprocessing sidecar.

    The sidecar ``<path>.json`` may carry ``input_size``, ``mean`` and
    ``std``; absent keys fall back to the standard 299-px ImageNet setup.
    """
    import torch

    path = Path(path)
    if not path.exists():
        raise ModelLoadError(f"extractor weights not found: {path}")
    try:
        module = torch.jit.load(str(path), map_location="cpu")
    except Exception as exc:
        raise ModelLoadError(f"cannot load extractor from {path}: {exc}") from exc
    module.eval()
    sidecar = dict(_DEFAULT_SIDECAR)
    sidecar_path = path.with_suffix(path.suffix + ".json")
    if sidecar_path.exists():
        sidecar.update(json.loads(sidecar_path.read_text()))
    return TorchScriptExtractor(
        module, int(sidecar["input_size"]), sidecar["mean"], sidecar["std"]
    )


def extract_features(images, extractor) -> np.ndarray:
    """n x d feature matrix, one row per image, deterministic in row order."""
    batch01 = _to_unit_range(images)
    feats = extractor.features(batch01)
    feats = np.asarray(feats, dtype=np.float64)
    if feats.ndim != 2 or feats.shape[0] != batch01.shape[0]:
        raise ValueError(f"extractor returned bad shape {feats.shape}")
    return feats
