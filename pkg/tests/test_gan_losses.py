import math

import numpy as np
import pytest
import torch
from hypothesis import given, settings
from hypothesis import strategies as st

from fgb.errors import DomainError, NumericalError
from fgb.gans import (
    GanVariant,
    LossAux,
    PenaltyMode,
    began_update_k,
    discriminator_loss,
    generator_loss,
    gradient_penalty,
)


def t64(*vals):
    return torch.tensor(vals, dtype=torch.float64)


class TestDiscriminatorLoss:
    def test_dcgan_maximal_uncertainty(self):
        loss = discriminator_loss(GanVariant.DCGAN, t64(0.5, 0.5), t64(0.5, 0.5))
        assert abs(float(loss) - 2 * math.log(2)) <= 1e-9

    def test_lsgan_perfect_split(self):
        loss = discriminator_loss(GanVariant.LSGAN, t64(1.0), t64(0.0))
        assert abs(float(loss)) <= 1e-9

    def test_wgan_critic_objective(self):
        loss = discriminator_loss(GanVariant.WGAN, t64(3.0), t64(1.0))
        assert abs(float(loss) - (-2.0)) <= 1e-9

    def test_prob_domain_enforced(self):
        with pytest.raises(DomainError):
            discriminator_loss(GanVariant.DCGAN, t64(1.0), t64(0.5))
        with pytest.raises(DomainError):
            discriminator_loss(GanVariant.DCGAN, t64(0.5), t64(0.0))

    def test_dcgan_grid_minimum_at_confident_corner(self):
        # loss over constant outputs is minimized at d_real -> 1, d_fake -> 0
        grid = np.linspace(0.01, 0.99, 25)
        best = min(
            ((r, f) for r in grid for f in grid),
            key=lambda rf: float(
                discriminator_loss(GanVariant.DCGAN, t64(rf[0]), t64(rf[1]))
            ),
        )
        assert best == (pytest.approx(0.99), pytest.approx(0.01))

    def test_ebgan_hinge(self):
        aux = LossAux(recon_real=t64(1.0), recon_fake=t64(3.0), margin=10.0)
        loss = discriminator_loss(GanVariant.EBGAN, None, None, aux)
        assert abs(float(loss) - (1.0 + 7.0)) <= 1e-9
        aux = LossAux(recon_real=t64(1.0), recon_fake=t64(12.0), margin=10.0)
        loss = discriminator_loss(GanVariant.EBGAN, None, None, aux)
        assert abs(float(loss) - 1.0) <= 1e-9

    def test_began_balance(self):
        aux = LossAux(recon_real=t64(1.0), recon_fake=t64(0.5), k=0.4)
        loss = discriminator_loss(GanVariant.BEGAN, None, None, aux)
        assert abs(float(loss) - (1.0 - 0.4 * 0.5)) <= 1e-9

    def test_empty_batch_rejected(self):
        with pytest.raises(ValueError):
            discriminator_loss(GanVariant.DCGAN, torch.empty(0), t64(0.5))


class TestGeneratorLoss:
    def test_dcgan_non_saturating(self):
        loss = generator_loss(GanVariant.DCGAN, t64(0.5))
        assert abs(float(loss) - math.log(2)) <= 1e-9

    def test_lsgan_fooled_critic(self):
        assert abs(float(generator_loss(GanVariant.LSGAN, t64(1.0)))) <= 1e-9

    def test_wgan(self):
        assert abs(float(generator_loss(GanVariant.WGAN, t64(1.0))) - (-1.0)) <= 1e-9

    @given(
        st.sampled_from([GanVariant.DCGAN, GanVariant.LSGAN, GanVariant.WGAN]),
        st.lists(st.floats(0.01, 0.99), min_size=1, max_size=8),
    )
    @settings(max_examples=50, deadline=None)
    def test_losses_finite_in_domain(self, variant, vals):
        d = t64(*vals)
        assert math.isfinite(float(generator_loss(variant, d)))
        assert math.isfinite(float(discriminator_loss(variant, d, d)))


class TestBeganUpdate:
    def test_balanced_point(self):
        k, m = began_update_k(0.0, 0.5, 0.001, 1.0, 0.5)
        assert k == 0.0
        assert abs(m - 1.0) <= 1e-9

    def test_hand_arithmetic(self):
        k, m = began_update_k(0.0, 0.5, 0.001, 1.0, 0.2)
        assert abs(k - 0.0003) <= 1e-9
        assert abs(m - 1.3) <= 1e-9

    def test_lower_clamp(self):
        k, m = began_update_k(0.0, 0.5, 0.001, 0.1, 0.9)
        assert k == 0.0
        assert abs(m - 0.95) <= 1e-9

    @given(
        st.floats(0, 1),
        st.floats(0, 1),
        st.floats(0, 0.1),
        st.lists(st.tuples(st.floats(0, 100), st.floats(0, 100)), min_size=1, max_size=50),
    )
    @settings(max_examples=100, deadline=None)
    def test_k_stays_in_unit_interval(self, k0, gamma, lambda_k, losses):
        k = k0
        for lr, lf in losses:
            k, _ = began_update_k(k, gamma, lambda_k, lr, lf)
            assert 0.0 <= k <= 1.0


class TestGradientPenalty:
    def test_unit_slope_critic_zero_penalty(self):
        critic = lambda x: x.sum(dim=1)
        x = torch.rand(6, 1, dtype=torch.float64)
        y = torch.rand(6, 1, dtype=torch.float64)
        for lam in (1.0, 10.0, 123.0):
            p = gradient_penalty(critic, x, y, PenaltyMode.INTERPOLATE, lam)
            assert abs(float(p)) <= 1e-9

    def test_double_slope_critic(self):
        critic = lambda x: (2.0 * x).sum(dim=1)
        x = torch.rand(5, 1, dtype=torch.float64)
        y = torch.rand(5, 1, dtype=torch.float64)
        p = gradient_penalty(critic, x, y, PenaltyMode.INTERPOLATE, 10.0)
        assert abs(float(p) - 10.0) <= 1e-9

    def test_perturb_real_linear_fixtures(self):
        critic = lambda x: (2.0 * x).sum(dim=1)
        x = torch.rand(5, 1, dtype=torch.float64)
        p = gradient_penalty(critic, x, None, PenaltyMode.PERTURB_REAL, 10.0)
        assert abs(float(p) - 10.0) <= 1e-9

    @pytest.mark.parametrize("mode", [PenaltyMode.INTERPOLATE, PenaltyMode.PERTURB_REAL])
    def test_autograd_matches_central_differences(self, mode):
        torch.manual_seed(0)
        net = torch.nn.Sequential(
            torch.nn.Linear(4, 16), torch.nn.Tanh(), torch.nn.Linear(16, 1)
        ).double()
        critic = lambda x: net(x).squeeze(-1)
        for probe in range(10):
            x = torch.randn(1, 4, dtype=torch.float64)
            xh = x.clone().requires_grad_(True)
            analytic = torch.autograd.grad(critic(xh).sum(), xh)[0].squeeze(0)
            h = 1e-6
            fd = torch.zeros(4, dtype=torch.float64)
            for j in range(4):
                e = torch.zeros_like(x)
                e[0, j] = h
                fd[j] = (critic(x + e) - critic(x - e)) / (2 * h)
            rel = float((analytic - fd).norm() / fd.norm())
            assert rel <= 1e-4, f"probe {probe} ({mode}): rel err {rel}"

    def test_nonfinite_gradient_raises(self):
        critic = lambda x: torch.log(x).sum(dim=1)  # grad -> inf at 0
        x = torch.zeros(3, 1, dtype=torch.float64)
        with pytest.raises(NumericalError):
            gradient_penalty(critic, x, x, PenaltyMode.INTERPOLATE, 10.0)

    def test_seeded_rng_reproducible(self):
        critic = lambda x: (x ** 2).sum(dim=1)
        x = torch.rand(8, 3, dtype=torch.float64)
        y = torch.rand(8, 3, dtype=torch.float64)
        a = gradient_penalty(critic, x, y, PenaltyMode.INTERPOLATE, 10.0,
                             rng=torch.Generator().manual_seed(7))
        b = gradient_penalty(critic, x, y, PenaltyMode.INTERPOLATE, 10.0,
                             rng=torch.Generator().manual_seed(7))
        assert float(a) == float(b)
