"""Per-variant adversarial losses.

All functions take discriminator outputs as tensors and return scalar
tensors, so they are usable both in training graphs and as pure fixtures.
Probability-domain variants (DCGAN, CGAN, DRAGAN) expect outputs strictly
inside (0, 1); score-domain variants take raw critic values; the
autoencoder variants (EBGAN, BEGAN) read per-sample reconstruction errors
from ``aux``.
"""

from dataclasses import dataclass

import torch
import torch.nn.functional as F

from ..errors import DomainError
from .spec import GanVariant

_PROB_VARIANTS = {GanVariant.DCGAN, GanVariant.CGAN, GanVariant.DRAGAN}
_RECON_VARIANTS = {GanVariant.EBGAN, GanVariant.BEGAN}


@dataclass
class LossAux:
    """Variant-specific side inputs.

    recon_real / recon_fake: per-sample autoencoder reconstruction errors.
    k: current BEGAN balance coefficient.
    margin: EBGAN hinge margin.
    class_logits_* / labels_*: ACGAN auxiliary classifier head.
    """

    recon_real: torch.Tensor | None = None
    recon_fake: torch.Tensor | None = None
    k: float = 0.0
    margin: float = 10.0
    class_logits_real: torch.Tensor | None = None
    class_logits_fake: torch.Tensor | None = None
    labels_real: torch.Tensor | None = None
    labels_fake: torch.Tensor | None = None


def _check_prob(t: torch.Tensor, name: str) -> None:
    if t.numel() == 0:
        raise ValueError(f"{name} is empty")
    if bool((t <= 0).any()) or bool((t >= 1).any()):
        raise DomainError(f"{name} must lie strictly in (0, 1) for log losses")


def _bce_d(d_real: torch.Tensor, d_fake: torch.Tensor) -> torch.Tensor:
    _check_prob(d_real, "d_real")
    _check_prob(d_fake, "d_fake")
    return -(torch.log(d_real).mean() + torch.log1p(-d_fake).mean())


def _bce_g(d_fake: torch.Tensor) -> torch.Tensor:
    # non-saturating form: minimize -E log D(G(z))
    _check_prob(d_fake, "d_fake")
    return -torch.log(d_fake).mean()


def discriminator_loss(
    variant: GanVariant,
    d_real: torch.Tensor | None,
    d_fake: torch.Tensor | None,
    aux: LossAux | None = None,
) -> torch.Tensor:
    variant = GanVariant(variant)
    aux = aux or LossAux()

    if variant in _RECON_VARIANTS:
        if aux.recon_real is None or aux.recon_fake is None:
            raise ValueError(f"{variant.value} needs reconstruction errors in aux")
        if variant is GanVariant.EBGAN:
            hinge = torch.clamp(aux.margin - aux.recon_fake, min=0.0)
            return aux.recon_real.mean() + hinge.mean()
        return aux.recon_real.mean() - aux.k * aux.recon_fake.mean()

    if d_real is None or d_fake is None or d_real.numel() == 0 or d_fake.numel() == 0:
        raise ValueError("d_real and d_fake must be non-empty")

    if variant in _PROB_VARIANTS:
        return _bce_d(d_real, d_fake)
    if variant is GanVariant.LSGAN:
        return 0.5 * ((d_real - 1.0) ** 2).mean() + 0.5 * (d_fake ** 2).mean()
    if variant in (GanVariant.WGAN, GanVariant.WGAN_GP):
        return -(d_real.mean() - d_fake.mean())
    if variant is GanVariant.ACGAN:
        loss = _bce_d(d_real, d_fake)
        loss = loss + F.cross_entropy(aux.class_logits_real, aux.labels_real)
        loss = loss + F.cross_entropy(aux.class_logits_fake, aux.labels_fake)
        return loss
    raise ValueError(f"unhandled variant {variant}")


def generator_loss(
    variant: GanVariant,
    d_fake: torch.Tensor | None,
    aux: LossAux | None = None,
) -> torch.Tensor:
    variant = GanVariant(variant)
    aux = aux or LossAux()

    if variant in _RECON_VARIANTS:
        if aux.recon_fake is None:
            raise ValueError(f"{variant.value} needs recon_fake in aux")
        return aux.recon_fake.mean()

    if d_fake is None or d_fake.numel() == 0:
        raise ValueError("d_fake must be non-empty")

    if variant in _PROB_VARIANTS:
        return _bce_g(d_fake)
    if variant is GanVariant.LSGAN:
        return 0.5 * ((d_fake - 1.0) ** 2).mean()
    if variant in (GanVariant.WGAN, GanVariant.WGAN_GP):
        return -d_fake.mean()
    if variant is GanVariant.ACGAN:
        return _bce_g(d_fake) + F.cross_entropy(aux.class_logits_fake, aux.labels_fake)
    raise ValueError(f"unhandled variant {variant}")


def began_update_k(
    k_t: float, gamma: float, lambda_k: float, loss_real: float, loss_fake: float
) -> tuple[float, float]:
    """One step of the BEGAN balance control.

    k_next = clamp(k_t + lambda_k * (gamma * loss_real - loss_fake), 0, 1)
    M      = loss_real + |gamma * loss_real - loss_fake|
    """
    if not 0.0 <= k_t <= 1.0:
        raise ValueError("k_t must lie in [0, 1]")
    if loss_real < 0 or loss_fake < 0:
        raise ValueError("reconstruction losses must be >= 0")
    balance = gamma * loss_real - loss_fake
    k_next = min(1.0, max(0.0, k_t + lambda_k * balance))
    convergence_m = loss_real + abs(balance)
    return k_next, convergence_m
