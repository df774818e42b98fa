"""Shared training loop for the nine zoo variants.

One discriminator step per batch; the Wasserstein critics take n_critic
discriminator steps per generator step, everything else alternates 1:1.
Adam everywhere, weight clipping for the plain Wasserstein critic, k-control
for the equilibrium variant. Fully reproducible under the config seed.
"""

import json
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from PIL import Image

from ..errors import NumericalError, UsageError
from ..data.manifest import DatasetManifest, Label, Split
from .losses import LossAux, began_update_k, discriminator_loss, generator_loss
from .nets import build_networks
from .penalty import PenaltyMode, gradient_penalty
from .spec import (
    CRITIC_HEAVY_VARIANTS,
    GanSpec,
    GanVariant,
    TrainConfig,
    TrainHistory,
)

_PROB_VARIANTS = {GanVariant.DCGAN, GanVariant.CGAN, GanVariant.DRAGAN, GanVariant.ACGAN}
_PROB_EPS = 1e-6

LABEL_TO_INDEX = {Label.NON_AMD: 0, Label.AMD: 1}
INDEX_TO_LABEL = {v: k for k, v in LABEL_TO_INDEX.items()}


@dataclass
class GanCheckpoint:
    spec: GanSpec
    cfg: TrainConfig
    epoch: int
    generator_state: dict
    discriminator_state: dict
    base_channels: int = 32
    k_value: float = 0.0

    def save(self, path: str | Path) -> None:
        path = Path(path)
        torch.save(
            {
                "generator": self.generator_state,
                "discriminator": self.discriminator_state,
                "k_value": self.k_value,
            },
            path,
        )
        sidecar = {
            "variant": self.spec.variant.value,
            "spec": self.spec.to_dict(),
            "cfg": self.cfg.to_dict(),
            "seed": self.cfg.seed,
            "epoch": self.epoch,
            "base_channels": self.base_channels,
        }
        path.with_suffix(path.suffix + ".json").write_text(
            json.dumps(sidecar, indent=2, sort_keys=True) + "\n"
        )

    @classmethod
    def load(cls, path: str | Path) -> "GanCheckpoint":
        path = Path(path)
        meta = json.loads(path.with_suffix(path.suffix + ".json").read_text())
        blob = torch.load(path, map_location="cpu", weights_only=True)
        return cls(
            spec=GanSpec.from_dict(meta["spec"]),
            cfg=TrainConfig.from_dict(meta["cfg"]),
            epoch=meta["epoch"],
            generator_state=blob["generator"],
            discriminator_state=blob["discriminator"],
            base_channels=meta.get("base_channels", 32),
            k_value=blob.get("k_value", 0.0),
        )


def _clone_state(module: torch.nn.Module) -> dict:
    return {k: v.detach().clone() for k, v in module.state_dict().items()}


def load_split_images(
    manifest: DatasetManifest, image_size: int, split: Split = Split.TRAIN
) -> tuple[torch.Tensor, torch.Tensor]:
    """Stack a manifest split as ([-1,1] NCHW float tensor, label indices)."""
    records = manifest.subset(split=split)
    if not records:
        raise ValueError(f"manifest has no {split.value} records")
    images, labels = [], []
    for r in records:
        with Image.open(r.path) as im:
            arr = np.asarray(im.convert("RGB").resize((image_size,) * 2, Image.BILINEAR))
        images.append(arr.astype(np.float32) / 127.5 - 1.0)
        labels.append(LABEL_TO_INDEX[r.label])
    x = torch.from_numpy(np.stack(images)).permute(0, 3, 1, 2).contiguous()
    return x, torch.tensor(labels, dtype=torch.long)


def _prob(scores: torch.Tensor) -> torch.Tensor:
    return torch.sigmoid(scores).clamp(_PROB_EPS, 1.0 - _PROB_EPS)


class _ZooTrainer:
    def __init__(self, spec: GanSpec, cfg: TrainConfig, base_channels: int):
        self.spec, self.cfg = spec, cfg
        self.gen, self.disc = build_networks(spec, base_channels)
        betas = (cfg.adam_beta1, cfg.adam_beta2)
        self.opt_g = torch.optim.Adam(self.gen.parameters(), lr=cfg.lr, betas=betas)
        self.opt_d = torch.optim.Adam(self.disc.parameters(), lr=cfg.lr, betas=betas)
        self.k = cfg.k0
        self.last_m = 0.0

    def sample_latent(self, n: int) -> torch.Tensor:
        return torch.randn(n, self.spec.latent_dim)

    def sample_labels(self, n: int) -> torch.Tensor:
        return torch.randint(0, self.spec.class_count, (n,))

    def _recon_error(self, x: torch.Tensor) -> torch.Tensor:
        recon = self.disc(x)
        if self.spec.variant is GanVariant.EBGAN:
            return ((recon - x) ** 2).flatten(1).mean(dim=1)
        return (recon - x).abs().flatten(1).mean(dim=1)

    def d_step(self, real: torch.Tensor, real_labels: torch.Tensor) -> float:
        spec, cfg = self.spec, self.cfg
        variant = spec.variant
        n = real.shape[0]
        z = self.sample_latent(n)
        self.opt_d.zero_grad()

        if variant in (GanVariant.EBGAN, GanVariant.BEGAN):
            fake = self.gen(z).detach()
            aux = LossAux(
                recon_real=self._recon_error(real),
                recon_fake=self._recon_error(fake),
                k=self.k,
                margin=cfg.margin_m,
            )
            loss = discriminator_loss(variant, None, None, aux)
            if variant is GanVariant.BEGAN:
                self.k, self.last_m = began_update_k(
                    self.k, cfg.gamma, cfg.lambda_k,
                    float(aux.recon_real.detach().mean()),
                    float(aux.recon_fake.detach().mean()),
                )
        elif variant is GanVariant.CGAN:
            fake_labels = self.sample_labels(n)
            fake = self.gen(z, fake_labels).detach()
            loss = discriminator_loss(
                variant, _prob(self.disc(real, real_labels)), _prob(self.disc(fake, fake_labels))
            )
        elif variant is GanVariant.ACGAN:
            fake_labels = self.sample_labels(n)
            fake = self.gen(z, fake_labels).detach()
            score_r, logits_r = self.disc(real)
            score_f, logits_f = self.disc(fake)
            aux = LossAux(
                class_logits_real=logits_r, labels_real=real_labels,
                class_logits_fake=logits_f, labels_fake=fake_labels,
            )
            loss = discriminator_loss(variant, _prob(score_r), _prob(score_f), aux)
        else:
            fake = self.gen(z).detach()
            d_real, d_fake = self.disc(real), self.disc(fake)
            if variant in _PROB_VARIANTS:
                d_real, d_fake = _prob(d_real), _prob(d_fake)
            loss = discriminator_loss(variant, d_real, d_fake)
            if variant is GanVariant.WGAN_GP:
                loss = loss + gradient_penalty(
                    self.disc, real, fake, PenaltyMode.INTERPOLATE, cfg.lambda_gp
                )
            elif variant is GanVariant.DRAGAN:
                loss = loss + gradient_penalty(
                    self.disc, real, None, PenaltyMode.PERTURB_REAL, cfg.lambda_gp
                )

        loss.backward()
        self.opt_d.step()
        if variant is GanVariant.WGAN:
            with torch.no_grad():
                for p in self.disc.parameters():
                    p.clamp_(-cfg.clip_c, cfg.clip_c)
        return float(loss.detach())

    def g_step(self, n: int) -> float:
        variant = self.spec.variant
        z = self.sample_latent(n)
        self.opt_g.zero_grad()

        if variant in (GanVariant.EBGAN, GanVariant.BEGAN):
            fake = self.gen(z)
            loss = generator_loss(variant, None, LossAux(recon_fake=self._recon_error(fake)))
        elif variant is GanVariant.CGAN:
            labels = self.sample_labels(n)
            loss = generator_loss(variant, _prob(self.disc(self.gen(z, labels), labels)))
        elif variant is GanVariant.ACGAN:
            labels = self.sample_labels(n)
            score, logits = self.disc(self.gen(z, labels))
            loss = generator_loss(
                variant, _prob(score), LossAux(class_logits_fake=logits, labels_fake=labels)
            )
        else:
            d_fake = self.disc(self.gen(z))
            if variant in _PROB_VARIANTS:
                d_fake = _prob(d_fake)
            loss = generator_loss(variant, d_fake)

        loss.backward()
        self.opt_g.step()
        return float(loss.detach())

    def checkpoint(self, epoch: int, base_channels: int) -> GanCheckpoint:
        return GanCheckpoint(
            spec=self.spec,
            cfg=self.cfg,
            epoch=epoch,
            generator_state=_clone_state(self.gen),
            discriminator_state=_clone_state(self.disc),
            base_channels=base_channels,
            k_value=self.k,
        )


def train_gan(
    spec: GanSpec,
    manifest: DatasetManifest,
    cfg: TrainConfig,
    base_channels: int = 32,
) -> tuple[GanCheckpoint, TrainHistory]:
    torch.manual_seed(cfg.seed)
    images, labels = load_split_images(manifest, spec.image_size, Split.TRAIN)
    trainer = _ZooTrainer(spec, cfg, base_channels)
    history = TrainHistory()
    order_rng = np.random.default_rng(cfg.seed)

    last_good = trainer.checkpoint(0, base_channels)
    if cfg.epochs == 0:
        return last_good, history

    n_critic = cfg.n_critic if spec.variant in CRITIC_HEAVY_VARIANTS else 1
    step = 0
    last_g = None
    for epoch in range(cfg.epochs):
        t0 = time.monotonic()
        perm = order_rng.permutation(len(images))
        for start in range(0, len(images), cfg.batch_size):
            idx = perm[start : start + cfg.batch_size]
            if len(idx) < 2:
                continue
            real = images[idx]
            real_labels = labels[idx]
            loss_d = trainer.d_step(real, real_labels)
            if step % n_critic == 0 or last_g is None:
                last_g = trainer.g_step(len(idx))
            aux_k = trainer.k if spec.variant is GanVariant.BEGAN else 0.0
            aux_m = trainer.last_m if spec.variant is GanVariant.BEGAN else 0.0
            if not (np.isfinite(loss_d) and np.isfinite(last_g)):
                err = NumericalError(
                    f"non-finite loss at step {step} "
                    f"(loss_d={loss_d}, loss_g={last_g}); aborting"
                )
                err.last_good_checkpoint = last_good
                err.history = history
                raise err
            history.append(step, epoch, loss_d, last_g, aux_k, aux_m)
            step += 1
        history.epoch_seconds.append(time.monotonic() - t0)
        last_good = trainer.checkpoint(epoch + 1, base_channels)

    return last_good, history


def generate(
    checkpoint: GanCheckpoint,
    n: int,
    label: Label | int | None = None,
    seed: int = 0,
) -> list[np.ndarray]:
    """Sample n images (HxWx3 float32 in [-1, 1]) from a checkpoint."""
    spec = checkpoint.spec
    if spec.conditional and label is None:
        raise UsageError(f"{spec.variant.value} checkpoint needs a label")
    if not spec.conditional and label is not None:
        raise UsageError(f"{spec.variant.value} checkpoint is unconditional")
    if n == 0:
        return []

    gen, _ = build_networks(spec, checkpoint.base_channels)
    gen.load_state_dict(checkpoint.generator_state)
    gen.eval()
    g = torch.Generator().manual_seed(seed)
    z = torch.randn(n, spec.latent_dim, generator=g)
    labels_t = None
    if spec.conditional:
        index = LABEL_TO_INDEX[label] if isinstance(label, Label) else int(label)
        labels_t = torch.full((n,), index, dtype=torch.long)
    with torch.no_grad():
        out = gen(z, labels_t) if spec.conditional else gen(z)
    out = out.clamp(-1.0, 1.0).permute(0, 2, 3, 1).numpy()
    return [out[i] for i in range(n)]
