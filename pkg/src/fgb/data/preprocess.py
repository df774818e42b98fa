"""Crop/resize chain from a localized retina to model-ready rasters.

Chain: crop the circle's bounding square (clipped to image bounds and
black-padded back to square) -> resample to 390x390 -> center-crop
256x256. The GAN target stops there; the classifier target further
resamples to 224x224 and rescales channels to [-1, 1].
"""

from enum import Enum

import cv2
import numpy as np

from ..errors import DegenerateCrop
from .manifest import RetinaCircle


class CropTarget(str, Enum):
    GAN_256 = "GAN_256"
    CLF_224 = "CLF_224"


_RESAMPLE_SIZE = 390
_CENTER_CROP = 256
_CLF_SIZE = 224


def crop_and_resize(
    image: np.ndarray, circle: RetinaCircle, target: CropTarget
) -> np.ndarray:
    target = CropTarget(target)
    if image.ndim != 3 or image.shape[2] != 3:
        raise ValueError("expected an HxWx3 color raster")
    h, w = image.shape[:2]

    side = 2.0 * circle.r
    if side < 8:
        raise DegenerateCrop(f"bounding square {side:.1f} px is below 8 px")

    x0 = int(round(circle.cx - circle.r))
    y0 = int(round(circle.cy - circle.r))
    side_i = int(round(side))

    # clip to bounds, pad the overrun with black (fundus background)
    x0c, y0c = max(x0, 0), max(y0, 0)
    x1c, y1c = min(x0 + side_i, w), min(y0 + side_i, h)
    if x1c <= x0c or y1c <= y0c:
        raise DegenerateCrop("circle does not intersect the image")
    square = np.zeros((side_i, side_i, 3), dtype=image.dtype)
    square[y0c - y0 : y1c - y0, x0c - x0 : x1c - x0] = image[y0c:y1c, x0c:x1c]

    resampled = cv2.resize(
        square, (_RESAMPLE_SIZE, _RESAMPLE_SIZE), interpolation=cv2.INTER_LINEAR
    )
    off = (_RESAMPLE_SIZE - _CENTER_CROP) // 2
    cropped = resampled[off : off + _CENTER_CROP, off : off + _CENTER_CROP]

    if target is CropTarget.GAN_256:
        return cropped

    clf = cv2.resize(cropped, (_CLF_SIZE, _CLF_SIZE), interpolation=cv2.INTER_LINEAR)
    clf = clf.astype(np.float32) / 127.5 - 1.0
    return np.clip(clf, -1.0, 1.0)
