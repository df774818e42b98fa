"""Toy-scale adversarial training for the style generator.

Non-saturating logistic loss with R1 regularization on reals; the ADA
controller adjusts the augmentation probability from the discriminator's
sign statistic each step. Capped at 64 px; the full-resolution run belongs
to the external trainer via the export adapter.
"""

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch
import torch.nn.functional as F

from ..errors import NumericalError
from ..data.manifest import DatasetManifest, Split
from ..gans.train import load_split_images
from .ada import ada_update, augment_pipeline
from .config import AdaState, StyleConfig
from .net import StyleDiscriminator, StyleGenerator

R1_COEF = 1.0


@dataclass
class StyleHistory:
    steps: list[int] = field(default_factory=list)
    loss_d: list[float] = field(default_factory=list)
    loss_g: list[float] = field(default_factory=list)
    p_aug: list[float] = field(default_factory=list)
    r_estimate: list[float] = field(default_factory=list)
    epoch_seconds: list[float] = field(default_factory=list)

    def all_finite(self) -> bool:
        return all(np.isfinite(v) for v in self.loss_d + self.loss_g)


@dataclass
class StyleCheckpoint:
    cfg: StyleConfig
    epoch: int
    seed: int
    generator_state: dict
    discriminator_state: dict
    ada: AdaState

    def save(self, path: str | Path) -> None:
        path = Path(path)
        torch.save(
            {"generator": self.generator_state, "discriminator": self.discriminator_state},
            path,
        )
        meta = {
            "cfg": self.cfg.to_dict(),
            "epoch": self.epoch,
            "seed": self.seed,
            "ada": {"p_aug": self.ada.p_aug, "r_estimate": self.ada.r_estimate,
                    "step_size": self.ada.step_size, "half_life": self.ada.half_life},
        }
        path.with_suffix(path.suffix + ".json").write_text(json.dumps(meta, indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "StyleCheckpoint":
        path = Path(path)
        meta = json.loads(path.with_suffix(path.suffix + ".json").read_text())
        blob = torch.load(path, map_location="cpu", weights_only=True)
        return cls(
            cfg=StyleConfig.from_dict(meta["cfg"]),
            epoch=meta["epoch"],
            seed=meta["seed"],
            generator_state=blob["generator"],
            discriminator_state=blob["discriminator"],
            ada=AdaState(**meta["ada"]),
        )


def _snapshot(gen, disc, cfg, epoch, seed, ada) -> StyleCheckpoint:
    clone = lambda m: {k: v.detach().clone() for k, v in m.state_dict().items()}
    return StyleCheckpoint(cfg, epoch, seed, clone(gen), clone(disc), ada)


def train_style_toy(
    cfg: StyleConfig,
    manifest: DatasetManifest,
    epochs: int,
    seed: int = 0,
) -> tuple[StyleCheckpoint, StyleHistory]:
    if cfg.max_resolution > 64:
        raise ValueError("toy trainer is capped at 64 px; use the export adapter")
    torch.manual_seed(seed)
    images, _ = load_split_images(manifest, cfg.max_resolution, Split.TRAIN)

    gen = StyleGenerator(cfg)
    disc = StyleDiscriminator(cfg)
    opt_g = torch.optim.Adam(gen.parameters(), lr=cfg.lr, betas=cfg.adam_betas, eps=cfg.adam_eps)
    opt_d = torch.optim.Adam(disc.parameters(), lr=cfg.lr, betas=cfg.adam_betas, eps=cfg.adam_eps)
    ada = AdaState()
    history = StyleHistory()
    order_rng = np.random.default_rng(seed)
    aug_rng = np.random.default_rng(seed + 1)

    checkpoint = _snapshot(gen, disc, cfg, 0, seed, ada)
    if epochs == 0:
        return checkpoint, history

    batch = cfg.batch_size
    step = 0
    for epoch in range(epochs):
        t0 = time.monotonic()
        perm = order_rng.permutation(len(images))
        for start in range(0, len(images), batch):
            idx = perm[start : start + batch]
            if len(idx) < 2:
                continue
            real = images[idx]

            # discriminator step with R1 on (augmented) reals
            z = torch.randn(len(idx), cfg.z_dim)
            fake = gen(z).detach()
            real_aug = augment_pipeline(real, ada.p_aug, aug_rng).requires_grad_(True)
            fake_aug = augment_pipeline(fake, ada.p_aug, aug_rng)
            d_real = disc(real_aug)
            d_fake = disc(fake_aug)
            loss_d = F.softplus(-d_real).mean() + F.softplus(d_fake).mean()
            r1_grads = torch.autograd.grad(d_real.sum(), real_aug, create_graph=True)[0]
            loss_d = loss_d + 0.5 * R1_COEF * r1_grads.square().sum(dim=(1, 2, 3)).mean()
            opt_d.zero_grad()
            loss_d.backward()
            opt_d.step()

            ada = ada_update(ada, torch.sign(d_real.detach()).numpy(), target=cfg.ada_target)

            # generator step
            z = torch.randn(len(idx), cfg.z_dim)
            d_out = disc(augment_pipeline(gen(z), ada.p_aug, aug_rng))
            loss_g = F.softplus(-d_out).mean()
            opt_g.zero_grad()
            loss_g.backward()
            opt_g.step()

            ld, lg = float(loss_d.detach()), float(loss_g.detach())
            if not (np.isfinite(ld) and np.isfinite(lg)):
                err = NumericalError(f"non-finite loss at step {step}; aborting")
                err.last_good_checkpoint = checkpoint
                err.history = history
                raise err
            history.steps.append(step)
            history.loss_d.append(ld)
            history.loss_g.append(lg)
            history.p_aug.append(ada.p_aug)
            history.r_estimate.append(ada.r_estimate)
            step += 1
        history.epoch_seconds.append(time.monotonic() - t0)
        checkpoint = _snapshot(gen, disc, cfg, epoch + 1, seed, ada)

    return checkpoint, history


def generate_style(
    checkpoint: StyleCheckpoint, n: int, seed: int = 0
) -> list[np.ndarray]:
    """Sample n images (HxWx3 float32 in [-1, 1]) from a style checkpoint."""
    if n == 0:
        return []
    gen = StyleGenerator(checkpoint.cfg)
    gen.load_state_dict(checkpoint.generator_state)
    gen.eval()
    g = torch.Generator().manual_seed(seed)
    z = torch.randn(n, checkpoint.cfg.z_dim, generator=g)
    with torch.no_grad():
        out = gen(z, noise_rng=g)
    out = out.clamp(-1.0, 1.0).permute(0, 2, 3, 1).numpy()
    return [out[i] for i in range(n)]
