"""Reduced-scale style generator: mapping network, weight-demodulated
convolutions, and an upsampling synthesis stack.

Feature normalization drops the mean entirely: styles scale the
convolution weights per input channel, and demodulation rescales each
output channel's weight group to unit norm. Bias and noise are added
after the convolution.
"""

import numpy as np
import torch
import torch.nn as nn
import torch.nn.functional as F

from .config import StyleConfig

_EPS = 1e-8


def normalize_latent(z: torch.Tensor, eps: float = _EPS) -> torch.Tensor:
    """Scale each latent to unit RMS; the eps guard absorbs zero vectors."""
    return z * torch.rsqrt(z.square().mean(dim=1, keepdim=True) + eps)


class MappingNetwork(nn.Module):
    def __init__(self, z_dim: int, layers: int):
        super().__init__()
        self.layers = nn.ModuleList(nn.Linear(z_dim, z_dim) for _ in range(layers))

    def forward(self, z: torch.Tensor) -> torch.Tensor:
        w = normalize_latent(z)
        for layer in self.layers:
            w = F.leaky_relu(layer(w), 0.2)
        return w


def modulated_conv(
    features: torch.Tensor,
    styles: torch.Tensor,
    weight: torch.Tensor,
    demodulate: bool = True,
    eps: float = _EPS,
) -> torch.Tensor:
    """Convolution with per-sample input-channel weight modulation.

    features: (B, C_in, H, W); styles: (B, C_in) scale per input channel;
    weight: (C_out, C_in, k, k). When demodulate is set, each output
    channel's modulated weight group is divided by sqrt(sum w'^2 + eps).
    """
    b, c_in, h, w_sp = features.shape
    c_out, _, kh, kw = weight.shape
    w = weight.unsqueeze(0) * styles.reshape(b, 1, c_in, 1, 1)
    if demodulate:
        denom = torch.rsqrt(w.square().sum(dim=(2, 3, 4), keepdim=True) + eps)
        w = w * denom
    x = features.reshape(1, b * c_in, h, w_sp)
    w = w.reshape(b * c_out, c_in, kh, kw)
    out = F.conv2d(x, w, padding=kh // 2, groups=b)
    return out.reshape(b, c_out, out.shape[2], out.shape[3])


class StyleLayer(nn.Module):
    """One modulated 3x3 convolution with noise broadcast and bias."""

    def __init__(self, in_ch: int, out_ch: int, w_dim: int, kernel: int = 3):
        super().__init__()
        self.affine = nn.Linear(w_dim, in_ch)
        nn.init.ones_(self.affine.bias)  # style starts at identity
        self.weight = nn.Parameter(torch.randn(out_ch, in_ch, kernel, kernel) * 0.1)
        self.bias = nn.Parameter(torch.zeros(out_ch))
        self.noise_strength = nn.Parameter(torch.zeros(()))

    def forward(self, x: torch.Tensor, w: torch.Tensor, noise: torch.Tensor | None) -> torch.Tensor:
        styles = self.affine(w)
        x = modulated_conv(x, styles, self.weight, demodulate=True)
        if noise is not None:
            x = x + self.noise_strength * noise
        x = x + self.bias.reshape(1, -1, 1, 1)
        return F.leaky_relu(x, 0.2)


class StyleGenerator(nn.Module):
    """Constant seed grid -> style-modulated upsampling blocks -> tanh RGB."""

    def __init__(self, cfg: StyleConfig):
        super().__init__()
        self.cfg = cfg
        self.mapping = MappingNetwork(cfg.z_dim, cfg.mapping_layers)
        resolutions = cfg.block_resolutions()
        base_ch = cfg.channels_for(resolutions[0])
        self.const = nn.Parameter(torch.randn(1, base_ch, cfg.base_resolution, cfg.base_resolution))
        layers = []
        in_ch = base_ch
        for i, res in enumerate(resolutions):
            out_ch = cfg.channels_for(res)
            layers.append(StyleLayer(in_ch, out_ch, cfg.w_dim))
            layers.append(StyleLayer(out_ch, out_ch, cfg.w_dim))
            in_ch = out_ch
        self.layers = nn.ModuleList(layers)
        self.to_rgb = nn.Conv2d(in_ch, 3, 1)

    def forward(self, z: torch.Tensor, noise_rng: torch.Generator | None = None) -> torch.Tensor:
        w = self.mapping(z)
        x = self.const.expand(z.shape[0], -1, -1, -1)
        for i, layer in enumerate(self.layers):
            if i > 0 and i % 2 == 0:
                x = F.interpolate(x, scale_factor=2, mode="bilinear", align_corners=False)
            noise = torch.randn(
                (x.shape[0], 1, x.shape[2], x.shape[3]), generator=noise_rng
            )
            x = layer(x, w, noise)
        return torch.tanh(self.to_rgb(x))


class StyleDiscriminator(nn.Module):
    """Plain strided-conv critic for the toy adversarial loop."""

    def __init__(self, cfg: StyleConfig):
        super().__init__()
        blocks = []
        ch = 16
        in_ch, res = 3, cfg.max_resolution
        while res > 4:
            blocks += [nn.Conv2d(in_ch, ch, 4, 2, 1), nn.LeakyReLU(0.2, inplace=True)]
            in_ch, ch, res = ch, min(ch * 2, 128), res // 2
        self.features = nn.Sequential(*blocks)
        self.score = nn.Linear(in_ch * res * res, 1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.score(self.features(x).flatten(1)).squeeze(1)
