"""Critic input-gradient penalty (interpolated and real-perturbed modes)."""

from enum import Enum

import torch

from ..errors import NumericalError


class PenaltyMode(str, Enum):
    INTERPOLATE = "INTERPOLATE"
    PERTURB_REAL = "PERTURB_REAL"


def gradient_penalty(
    critic,
    x_real: torch.Tensor,
    x_fake: torch.Tensor | None,
    mode: PenaltyMode,
    lambda_gp: float = 10.0,
    rng: torch.Generator | None = None,
) -> torch.Tensor:
    """lambda * E[(||grad_xhat critic(xhat)||_2 - 1)^2].

    INTERPOLATE samples xhat = eps*x_real + (1-eps)*x_fake with per-sample
    eps ~ U[0,1]; PERTURB_REAL samples xhat = x_real + 0.5*std(x_real)*u
    with u ~ U[0,1] elementwise.
    """
    mode = PenaltyMode(mode)
    n = x_real.shape[0]
    if n == 0:
        raise ValueError("empty batch")
    eps_shape = (n,) + (1,) * (x_real.dim() - 1)

    if mode is PenaltyMode.INTERPOLATE:
        if x_fake is None:
            raise ValueError("INTERPOLATE mode needs x_fake")
        eps = torch.rand(eps_shape, generator=rng, dtype=x_real.dtype)
        x_hat = eps * x_real + (1.0 - eps) * x_fake
    else:
        noise = torch.rand(x_real.shape, generator=rng, dtype=x_real.dtype)
        x_hat = x_real + 0.5 * x_real.std() * noise

    x_hat = x_hat.detach().requires_grad_(True)
    scores = critic(x_hat)
    grads = torch.autograd.grad(
        outputs=scores.sum(),
        inputs=x_hat,
        create_graph=True,
        retain_graph=True,
    )[0]
    if not torch.isfinite(grads).all():
        raise NumericalError("non-finite critic gradient")
    flat = grads.reshape(n, -1)
    norms = torch.sqrt((flat ** 2).sum(dim=1) + 1e-12)
    return lambda_gp * ((norms - 1.0) ** 2).mean()
