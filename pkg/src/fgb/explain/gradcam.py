"""Gradient-weighted class activation heatmaps."""

from dataclasses import dataclass

import numpy as np
import torch
import torch.nn.functional as F

from ..errors import UsageError


@dataclass(frozen=True)
class Heatmap:
    """Non-negative saliency map, max-normalized unless identically zero."""

    values: np.ndarray
    target_layer: str
    target_class: int

    def __post_init__(self):
        if (self.values < 0).any():
            raise ValueError("heatmap values must be non-negative")
        peak = self.values.max()
        if peak > 0 and abs(peak - 1.0) > 1e-6:
            raise ValueError("non-zero heatmap must be max-normalized")


def _resolve_layer(model: torch.nn.Module, layer: str | torch.nn.Module) -> torch.nn.Module:
    if isinstance(layer, torch.nn.Module):
        return layer
    module = dict(model.named_modules()).get(layer)
    if module is None:
        raise UsageError(f"model has no layer named {layer!r}")
    return module


def combine_maps(activations: torch.Tensor, gradients: torch.Tensor) -> np.ndarray:
    """ReLU of the gradient-mean-weighted activation sum, pre-normalization.

    activations/gradients: (K, H, W) feature maps and the class-score
    gradients at them. Channel weights are the spatial gradient means.
    """
    weights = gradients.mean(dim=(1, 2))
    combined = (weights[:, None, None] * activations).sum(dim=0)
    return torch.relu(combined).detach().numpy()


def gradcam(
    model: torch.nn.Module,
    image: torch.Tensor,
    target_class: int,
    layer: str | torch.nn.Module,
) -> Heatmap:
    """Heatmap of `target_class`'s score over `layer`'s spatial features,
    bilinearly upsampled to the input size and max-normalized."""
    module = _resolve_layer(model, layer)
    layer_name = layer if isinstance(layer, str) else layer.__class__.__name__

    captured: dict[str, torch.Tensor] = {}

    def fwd_hook(_m, _inp, out):
        captured["activations"] = out
        out.retain_grad()

    handle = module.register_forward_hook(fwd_hook)
    try:
        model.eval()
        x = image[None] if image.dim() == 3 else image
        scores = model(x)
        if "activations" not in captured:
            raise UsageError(f"layer {layer_name!r} saw no forward pass")
        acts = captured["activations"]
        if acts.dim() != 4:
            raise UsageError(f"layer {layer_name!r} has no spatial extent")
        model.zero_grad(set_to_none=True)
        scores[0, target_class].backward()
        grads = acts.grad
        if grads is None:
            grads = torch.zeros_like(acts)
    finally:
        handle.remove()

    raw = combine_maps(acts[0].detach(), grads[0].detach())
    up = F.interpolate(
        torch.from_numpy(raw)[None, None].float(),
        size=x.shape[-2:], mode="bilinear", align_corners=False,
    )[0, 0].numpy()
    up = np.maximum(up, 0.0)
    peak = up.max()
    if peak > 0:
        up = up / peak
    return Heatmap(values=up, target_layer=layer_name, target_class=int(target_class))
