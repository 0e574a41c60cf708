"""Mean-field saddle, r-bit propagator and LG coefficient contracts."""

import math

import numpy as np
import pytest

from miptlab import couplings as cp
from miptlab import meanfield as mf
from miptlab.errors import DomainError

GAMMA_C = 1.0 / 9.0


def params_at(Gamma, spec=None):
    spec = spec or cp.CouplingSpec(J=1.0, g=1.0, alpha=1.0, L=256)
    return mf.MeanFieldParams(spec=spec, gamma=Gamma * spec.j_hat_zero)


class TestGammaC:
    def test_onsite_only(self):
        spec = cp.CouplingSpec(J=2.0, g=0.0, alpha=1.0, L=64)
        assert abs(mf.gamma_c(spec) - 2.0 / 9.0) < 1e-15

    def test_large_alpha(self):
        spec = cp.CouplingSpec(J=1.0, g=1.0, alpha=40.0, L=64)
        assert abs(mf.gamma_c(spec) - 1.0 / 3.0) < 1e-9

    def test_zeta_value(self):
        spec = cp.CouplingSpec(J=1.0, g=1.0, alpha=1.0, L=64)
        assert abs(mf.gamma_c(spec) - (1 + math.pi**2 / 3) / 9.0) < 1e-13

    def test_formula_identity_machine_precision(self):
        from miptlab.specfun import riemann_zeta
        for g in (0.0, 0.3, 1.0, 2.5):
            for alpha in (0.6, 1.0, 1.7, 3.0):
                spec = cp.CouplingSpec(J=1.3, g=g, alpha=alpha, L=64)
                lhs = mf.gamma_c(spec) * 9.0 / spec.J
                rhs = 1.0 + 2.0 * g * riemann_zeta(2 * alpha)
                assert abs(lhs - rhs) < 1e-13


class TestBulkAction:
    def test_origin(self):
        assert mf.bulk_action(0.0, 0.0, params_at(0.2)) == 0.0

    def test_phi_parity_exact(self):
        p = params_at(0.07)
        for phi, theta in ((0.3, -0.5), (1.1, 0.2), (0.01, -2.0)):
            assert mf.bulk_action(phi, theta, p) == mf.bulk_action(-phi, theta, p)

    def test_gradient_finite_difference(self):
        p = params_at(0.13)
        phi0, th0 = 0.37, -0.81
        gp, gt = mf.bulk_action_gradient(phi0, th0, p)
        h = 1e-5
        fd_p = (mf.bulk_action(phi0 + h, th0, p)
                - mf.bulk_action(phi0 - h, th0, p)) / (2 * h)
        fd_t = (mf.bulk_action(phi0, th0 + h, p)
                - mf.bulk_action(phi0, th0 - h, p)) / (2 * h)
        assert abs(gp - fd_p) < 1e-6
        assert abs(gt - fd_t) < 1e-6


class TestSolveSaddle:
    def test_symmetric_closed_form(self):
        p = params_at(0.2)
        pt = mf.solve_saddle(p)
        assert pt.phase is mf.Phase.SYMMETRIC
        assert pt.phi == 0.0
        want = -3.0 * (GAMMA_C + 0.4) / (4.0 * p.jcal)
        assert abs(pt.theta - want) < 1e-12
        assert pt.residual < 1e-10

    def test_critical_branch_continuity(self):
        p = params_at(GAMMA_C)
        pt = mf.solve_saddle(p)
        assert pt.phase is mf.Phase.CRITICAL
        sym = -3.0 * (GAMMA_C + 2 * GAMMA_C) / (4.0 * p.jcal)
        brk = -9.0 * (GAMMA_C + GAMMA_C) / (8.0 * p.jcal)
        assert abs(sym - brk) < 1e-15
        assert abs(pt.theta - sym) < 1e-12

    def test_broken_branch(self):
        p = params_at(0.05)
        pt = mf.solve_saddle(p)
        assert pt.phase is mf.Phase.BROKEN
        assert pt.phi > 0.0
        assert abs(pt.theta - (-9.0 * (0.05 + GAMMA_C) / (8.0 * p.jcal))) < 1e-10
        assert pt.residual < 1e-10
        # the pair: -phi satisfies the equations too
        gp, gt = mf.bulk_action_gradient(-pt.phi, pt.theta, p)
        assert math.hypot(gp, gt) < 1e-10

    def test_order_parameter_exponent_spec_window(self):
        gammas = np.linspace(0.06, 0.11, 40)
        phis = [mf.solve_saddle(params_at(g)).phi for g in gammas]
        slope = np.polyfit(np.log(GAMMA_C - gammas), np.log(phis), 1)[0]
        assert abs(slope - 0.5) < 0.02

    def test_broken_below_symmetric_on_grid(self):
        for g in np.linspace(0.005, GAMMA_C * 0.999, 50):
            p = params_at(g)
            assert mf.solve_saddle(p).action < mf.symmetric_saddle(p).action


class TestRbitPropagator:
    def test_diagonal_trace(self):
        lnk = mf.rbit_log_propagator(np.zeros(64), np.full(64, 0.7), 12.0)
        assert abs(lnk - math.log(2 * math.cosh(0.7 * 12 / 2))) < 1e-12

    def test_ground_state_dominance_phi_only(self):
        # trace is 2 cosh(phi T / 2) -> (T/2) phi up to e^{-phi T} corrections
        phi = 0.8
        T = 60.0 / phi
        lnk = mf.rbit_log_propagator(np.full(1, phi), np.zeros(1), T)
        assert abs(lnk - T / 2 * phi) < 1e-6 * (T / 2 * phi)

    def test_ground_state_rate_generic(self):
        phi, theta = 0.5, -0.4
        e = math.hypot(phi, theta)
        T = 50.0 / e
        lnk = mf.rbit_log_propagator(np.full(1, phi), np.full(1, theta), T)
        assert abs(lnk / (T / 2 * e) - 1.0) < 1e-6

    def test_gap_convergence_rate(self):
        # trace-closure error ln(1 + e^{-T e}) decays as e^{-T * gap}
        phi, theta = 0.9, 0.3
        e = math.hypot(phi, theta)
        errs = []
        for T in (8.0 / e, 16.0 / e):
            lnk = mf.rbit_log_propagator(np.full(1, phi), np.full(1, theta), T)
            errs.append(abs(lnk - T / 2 * e))
        assert errs[1] < errs[0] * 1e-3
        assert abs(errs[0] / math.exp(-8.0) - 1.0) < 0.01

    def test_fixed_states(self):
        theta = 1.1
        up = np.array([1.0, 0.0])
        lnk = mf.rbit_log_propagator(np.zeros(32), np.full(32, theta), 4.0,
                                     boundary=(up, up))
        assert abs(lnk - theta * 4.0 / 2) < 1e-12

    def test_coarse_sampling_rejected(self):
        with pytest.raises(DomainError):
            mf.rbit_log_propagator(np.linspace(0, 5.0, 10), np.zeros(10), 10.0)


class TestLgCoefficients:
    def setup_method(self):
        self.spec = cp.CouplingSpec(J=1.0, g=0.5, alpha=0.75, L=256)
        self.mu = cp.effective_interaction(self.spec).mu_fit
        self.gc = mf.gamma_c(self.spec)

    def test_delta_zero_at_critical(self):
        co = mf.lg_coefficients(
            mf.MeanFieldParams(spec=self.spec, gamma=self.gc), self.mu)
        assert abs(co.delta) < 1e-12

    def test_delta_sign_tracks_gamma(self):
        above = mf.lg_coefficients(
            mf.MeanFieldParams(spec=self.spec, gamma=1.1 * self.gc), self.mu)
        below = mf.lg_coefficients(
            mf.MeanFieldParams(spec=self.spec, gamma=0.9 * self.gc), self.mu)
        assert above.delta < 0.0
        assert below.delta > 0.0

    def test_beta_vanishes_large_mu(self):
        p = mf.MeanFieldParams(spec=self.spec, gamma=0.5 * self.gc)
        assert mf.lg_coefficients(p, 40.0).beta < 1e-15
        assert mf.lg_coefficients(p, self.mu).beta > 0.0

    def test_b_positive_and_quartic_fixed(self):
        p = mf.MeanFieldParams(spec=self.spec, gamma=0.5 * self.gc)
        co = mf.lg_coefficients(p, self.mu)
        assert co.b > 0.0
        assert co.quartic == 0.25
