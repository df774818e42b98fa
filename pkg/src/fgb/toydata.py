"""Synthetic fundus-like toy corpus for desk-scale training and tests.

Images are ellipse discs on black: the healthy class is a plain disc, the
diseased class carries a cluster of bright deposits near the center. Small
enough to train every zoo variant on a CPU in seconds.
"""

from pathlib import Path

import cv2
import numpy as np
from PIL import Image

from .data import (
    DatasetManifest,
    Grade,
    ImageRecord,
    Label,
    SourceDataset,
    Split,
    build_splits,
)


def toy_image(rng: np.random.Generator, size: int = 32, diseased: bool = False) -> np.ndarray:
    """One fundus-like toy image, uint8 HxWx3."""
    img = np.zeros((size, size, 3), np.uint8)
    cx = size // 2 + int(rng.integers(-size // 10, size // 10 + 1))
    cy = size // 2 + int(rng.integers(-size // 10, size // 10 + 1))
    ax = int(rng.integers(int(size * 0.32), int(size * 0.45)))
    ay = int(rng.integers(int(size * 0.32), int(size * 0.45)))
    base = (
        int(rng.integers(150, 210)),
        int(rng.integers(60, 110)),
        int(rng.integers(20, 60)),
    )
    cv2.ellipse(img, (cx, cy), (ax, ay), 0, 0, 360, base, -1, lineType=cv2.LINE_AA)
    # optic-disc-like bright spot off to one side
    ox = cx + int(rng.choice([-1, 1]) * ax * 0.5)
    oy = cy + int(rng.integers(-ay // 4, ay // 4 + 1))
    cv2.circle(img, (ox, oy), max(1, size // 12), (230, 200, 120), -1, lineType=cv2.LINE_AA)
    if diseased:
        for _ in range(int(rng.integers(3, 7))):
            dx = cx + int(rng.integers(-ax // 3, ax // 3 + 1))
            dy = cy + int(rng.integers(-ay // 3, ay // 3 + 1))
            cv2.circle(img, (dx, dy), max(1, size // 16), (255, 230, 140), -1,
                       lineType=cv2.LINE_AA)
    noise = rng.normal(0, 4, img.shape)
    return np.clip(img.astype(np.float32) + noise, 0, 255).astype(np.uint8)


def make_toy_arrays(
    n: int, size: int = 32, seed: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """n images (uint8 NHWC) with alternating labels (1 = diseased)."""
    rng = np.random.default_rng(seed)
    images = np.stack([toy_image(rng, size, diseased=bool(i % 2)) for i in range(n)])
    labels = np.array([i % 2 for i in range(n)], dtype=np.int64)
    return images, labels


def write_toy_dataset(
    root: str | Path, n: int = 500, size: int = 32, seed: int = 0,
    test_per_class: int = 0,
) -> DatasetManifest:
    """Write a toy corpus to disk and return its (optionally split) manifest."""
    root = Path(root)
    images, labels = make_toy_arrays(n, size, seed)
    records = []
    for i, (img, lab) in enumerate(zip(images, labels)):
        label = Label.AMD if lab == 1 else Label.NON_AMD
        sub = "AMD" if lab == 1 else "Non-AMD"
        path = root / sub / f"toy_{i:04d}.png"
        path.parent.mkdir(parents=True, exist_ok=True)
        Image.fromarray(img).save(path)
        records.append(ImageRecord(
            id=f"toy_{i:04d}",
            source_dataset=SourceDataset.ICHALLENGE_AMD,
            path=str(path),
            label=label,
            grade=Grade.GOOD,
            split=Split.UNASSIGNED,
        ))
    manifest = DatasetManifest(records=records, seed=seed)
    if test_per_class > 0:
        return build_splits([manifest], seed=seed, test_per_class=test_per_class)
    return DatasetManifest(
        records=[r.with_split(Split.TRAIN) for r in records], seed=seed
    )
