"""Configuration and history records for the adversarial generator zoo."""

import csv
import math
from dataclasses import dataclass, field, asdict
from enum import Enum
from pathlib import Path


class GanVariant(str, Enum):
    DCGAN = "DCGAN"
    LSGAN = "LSGAN"
    WGAN = "WGAN"
    WGAN_GP = "WGAN_GP"
    DRAGAN = "DRAGAN"
    EBGAN = "EBGAN"
    BEGAN = "BEGAN"
    CGAN = "CGAN"
    ACGAN = "ACGAN"


CONDITIONAL_VARIANTS = {GanVariant.CGAN, GanVariant.ACGAN}

# Variants whose critic trains several steps per generator step.
CRITIC_HEAVY_VARIANTS = {GanVariant.WGAN, GanVariant.WGAN_GP}


@dataclass
class GanSpec:
    variant: GanVariant
    latent_dim: int = 100
    image_size: int = 100
    conditional: bool | None = None
    class_count: int = 2

    def __post_init__(self):
        self.variant = GanVariant(self.variant)
        expected = self.variant in CONDITIONAL_VARIANTS
        if self.conditional is None:
            self.conditional = expected
        elif self.conditional != expected:
            raise ValueError(
                f"{self.variant.value} conditional flag must be {expected}"
            )
        if self.latent_dim < 1:
            raise ValueError("latent_dim must be >= 1")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["variant"] = self.variant.value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GanSpec":
        return cls(**d)


@dataclass
class TrainConfig:
    epochs: int = 50
    batch_size: int = 32
    lr: float = 0.0002
    adam_beta1: float = 0.5
    adam_beta2: float = 0.999
    lambda_gp: float = 10.0
    clip_c: float = 0.01
    margin_m: float = 10.0
    gamma: float = 0.75
    lambda_k: float = 0.001
    k0: float = 0.0
    n_critic: int = 5
    seed: int = 0

    def __post_init__(self):
        for name in ("lr", "lambda_gp", "clip_c", "margin_m", "gamma", "lambda_k", "k0"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if not 0.0 <= self.k0 <= 1.0:
            raise ValueError("k0 must lie in [0, 1]")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "TrainConfig":
        return cls(**d)


@dataclass
class TrainHistory:
    """Per-step loss trace plus auxiliary control scalars."""

    steps: list[int] = field(default_factory=list)
    epochs: list[int] = field(default_factory=list)
    loss_d: list[float] = field(default_factory=list)
    loss_g: list[float] = field(default_factory=list)
    aux_k: list[float] = field(default_factory=list)
    aux_m: list[float] = field(default_factory=list)
    epoch_seconds: list[float] = field(default_factory=list)

    def append(self, step, epoch, loss_d, loss_g, aux_k=float("nan"), aux_m=float("nan")):
        self.steps.append(step)
        self.epochs.append(epoch)
        self.loss_d.append(loss_d)
        self.loss_g.append(loss_g)
        self.aux_k.append(aux_k)
        self.aux_m.append(aux_m)

    def __len__(self) -> int:
        return len(self.steps)

    def all_finite(self) -> bool:
        core = self.loss_d + self.loss_g
        return all(math.isfinite(v) for v in core)

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["step", "epoch", "loss_d", "loss_g", "aux_k", "aux_M"])
            for row in zip(self.steps, self.epochs, self.loss_d, self.loss_g,
                           self.aux_k, self.aux_m):
                w.writerow(row)
