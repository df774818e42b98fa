"""Convolutional backbones shared by all zoo variants.

The generator upsamples from a small seed grid through four transposed
convolutions; a final bilinear resize maps the power-of-two-ish output to
the exact requested size (e.g. 96 -> 100). The discriminator mirrors it
with four strided convolutions. Conditional variants concatenate a label
embedding to the latent (generator) or as an extra input plane
(discriminator).
"""

import torch
import torch.nn as nn

from .spec import GanSpec, GanVariant


def _weights_init(m):
    if isinstance(m, (nn.Conv2d, nn.ConvTranspose2d, nn.Linear)):
        nn.init.normal_(m.weight, 0.0, 0.02)
        if m.bias is not None:
            nn.init.zeros_(m.bias)


def _seed_size(image_size: int) -> int:
    return max(2, round(image_size / 16))


class ConvGenerator(nn.Module):
    def __init__(self, spec: GanSpec, base_channels: int = 32):
        super().__init__()
        self.spec = spec
        nf = base_channels
        s0 = _seed_size(spec.image_size)
        self.s0 = s0
        self.grown = s0 * 16
        # label embedding matches the latent width so conditioning cannot drown
        self.label_embed = (
            nn.Embedding(spec.class_count, spec.latent_dim) if spec.conditional else None
        )
        in_dim = spec.latent_dim * (2 if spec.conditional else 1)
        self.project = nn.Linear(in_dim, nf * 8 * s0 * s0)
        self.blocks = nn.Sequential(
            nn.BatchNorm2d(nf * 8),
            nn.ReLU(True),
            nn.ConvTranspose2d(nf * 8, nf * 4, 4, 2, 1),
            nn.BatchNorm2d(nf * 4),
            nn.ReLU(True),
            nn.ConvTranspose2d(nf * 4, nf * 2, 4, 2, 1),
            nn.BatchNorm2d(nf * 2),
            nn.ReLU(True),
            nn.ConvTranspose2d(nf * 2, nf, 4, 2, 1),
            nn.BatchNorm2d(nf),
            nn.ReLU(True),
            nn.ConvTranspose2d(nf, nf, 4, 2, 1),
            nn.BatchNorm2d(nf),
            nn.ReLU(True),
            nn.Conv2d(nf, 3, 3, 1, 1),
            nn.Tanh(),
        )
        self.apply(_weights_init)

    def forward(self, z: torch.Tensor, labels: torch.Tensor | None = None) -> torch.Tensor:
        if self.spec.conditional:
            z = torch.cat([z, self.label_embed(labels)], dim=1)
        x = self.project(z).view(-1, self.blocks[0].num_features, self.s0, self.s0)
        x = self.blocks(x)
        if self.grown != self.spec.image_size:
            x = nn.functional.interpolate(
                x, size=(self.spec.image_size,) * 2, mode="bilinear", align_corners=False
            )
        return x


class ConvDiscriminator(nn.Module):
    """Strided-conv critic; raw score head plus optional class-logit head."""

    def __init__(self, spec: GanSpec, base_channels: int = 32, with_class_head: bool = False):
        super().__init__()
        self.spec = spec
        nf = base_channels
        # label conditioning enters as one constant one-hot plane per class
        self.conditioned = spec.variant is GanVariant.CGAN
        in_ch = 3 + (spec.class_count if self.conditioned else 0)
        self.features = nn.Sequential(
            nn.Conv2d(in_ch, nf, 4, 2, 1),
            nn.LeakyReLU(0.2, inplace=True),
            nn.Conv2d(nf, nf * 2, 4, 2, 1),
            nn.LeakyReLU(0.2, inplace=True),
            nn.Conv2d(nf * 2, nf * 4, 4, 2, 1),
            nn.LeakyReLU(0.2, inplace=True),
            nn.Conv2d(nf * 4, nf * 8, 4, 2, 1),
            nn.LeakyReLU(0.2, inplace=True),
        )
        with torch.no_grad():
            probe = self.features(torch.zeros(1, in_ch, spec.image_size, spec.image_size))
        flat = probe.numel()
        self.score = nn.Linear(flat, 1)
        self.class_head = nn.Linear(flat, spec.class_count) if with_class_head else None
        self.apply(_weights_init)

    def forward(self, x: torch.Tensor, labels: torch.Tensor | None = None):
        if self.conditioned:
            n, _, h, w = x.shape
            planes = torch.zeros(n, self.spec.class_count, h, w, dtype=x.dtype)
            planes[torch.arange(n), labels] = 1.0
            x = torch.cat([x, planes], dim=1)
        h = self.features(x).flatten(1)
        score = self.score(h).squeeze(1)
        if self.class_head is not None:
            return score, self.class_head(h)
        return score


class ConvAutoencoder(nn.Module):
    """Autoencoder critic for the energy/equilibrium variants."""

    def __init__(self, spec: GanSpec, base_channels: int = 32, latent: int = 64):
        super().__init__()
        nf = base_channels
        size = spec.image_size
        self.enc = nn.Sequential(
            nn.Conv2d(3, nf, 4, 2, 1),
            nn.LeakyReLU(0.2, inplace=True),
            nn.Conv2d(nf, nf * 2, 4, 2, 1),
            nn.LeakyReLU(0.2, inplace=True),
            nn.Conv2d(nf * 2, nf * 4, 4, 2, 1),
            nn.LeakyReLU(0.2, inplace=True),
        )
        with torch.no_grad():
            probe = self.enc(torch.zeros(1, 3, size, size))
        self._enc_shape = probe.shape[1:]
        flat = probe.numel()
        self.to_latent = nn.Linear(flat, latent)
        self.from_latent = nn.Linear(latent, flat)
        self.dec = nn.Sequential(
            nn.ConvTranspose2d(nf * 4, nf * 2, 4, 2, 1),
            nn.ReLU(True),
            nn.ConvTranspose2d(nf * 2, nf, 4, 2, 1),
            nn.ReLU(True),
            nn.ConvTranspose2d(nf, 3, 4, 2, 1),
            nn.Tanh(),
        )
        self.out_size = size
        self.apply(_weights_init)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        h = self.enc(x).flatten(1)
        h = self.from_latent(self.to_latent(h))
        recon = self.dec(h.view(-1, *self._enc_shape))
        if recon.shape[-1] != self.out_size:
            recon = nn.functional.interpolate(
                recon, size=(self.out_size,) * 2, mode="bilinear", align_corners=False
            )
        return recon


def build_networks(spec: GanSpec, base_channels: int = 32) -> tuple[nn.Module, nn.Module]:
    gen = ConvGenerator(spec, base_channels)
    if spec.variant in (GanVariant.EBGAN, GanVariant.BEGAN):
        disc = ConvAutoencoder(spec, base_channels)
    else:
        disc = ConvDiscriminator(
            spec, base_channels, with_class_head=spec.variant is GanVariant.ACGAN
        )
    return gen, disc
