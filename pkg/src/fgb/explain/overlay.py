"""Colormapped heatmap blending for clinician-facing renderings."""

import cv2
import numpy as np

from ..errors import UsageError
from .gradcam import Heatmap


def overlay(image: np.ndarray, heatmap: Heatmap, alpha: float = 0.4) -> np.ndarray:
    """Alpha-blend the jet-colormapped heatmap onto an image.

    image: HxWx3, uint8 or float in [-1, 1]. Returns uint8 HxWx3.
    alpha=0 reproduces the image; alpha=1 is the pure colormap.
    """
    if image.ndim != 3 or image.shape[2] != 3:
        raise UsageError("expected an HxWx3 image")
    if heatmap.values.shape != image.shape[:2]:
        raise UsageError(
            f"heatmap {heatmap.values.shape} does not match image {image.shape[:2]}"
        )
    if image.dtype != np.uint8:
        image = np.clip((image.astype(np.float32) + 1.0) * 127.5, 0, 255).astype(np.uint8)

    heat_u8 = np.clip(heatmap.values * 255.0, 0, 255).astype(np.uint8)
    colored = cv2.applyColorMap(heat_u8, cv2.COLORMAP_JET)[:, :, ::-1]  # BGR -> RGB
    blended = (1.0 - alpha) * image.astype(np.float32) + alpha * colored.astype(np.float32)
    return np.clip(np.rint(blended), 0, 255).astype(np.uint8)
