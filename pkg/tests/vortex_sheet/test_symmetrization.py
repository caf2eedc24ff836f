import numpy as np
import pytest

from vortex_sheet.eos_state import (
    Eos,
    FluidParams,
    PrimState,
    Side,
    UState,
    prim_to_u,
    random_prim_states,
    state_from_prim,
    u_to_prim,
)
from vortex_sheet.exceptions import VerificationError
from vortex_sheet.symmetrization import (
    a_matrices,
    a_matrices_entries,
    b_matrices,
    background_diagonalization,
    characteristic_degeneracy,
    check_symmetrizable,
    coefficient_matrices,
    printed_cal_matrices,
    s1,
    s2,
    s2a0_eigenvalues,
    velocity_jacobian,
)

from tests.vortex_sheet.helpers import newtonian_sheet, rng, stable_sheet


def _velocity(eos, params, values):
    s = u_to_prim(eos, params, UState.from_array(values))
    return np.array([s.v1, s.v2])


class TestCoefficientMatrices(object):
    def setup_method(self):
        self.eos = Eos.linear(0.36)
        self.params = FluidParams(1.0)

    def test_background_normal_matrix(self):
        cfg = stable_sheet()
        for side in Side:
            _, _, a2 = a_matrices(cfg.eos, cfg.params, cfg.u_bar(side))
            expected = np.array([[0.0, 0.0, 0.36], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
            assert np.allclose(a2, expected, atol=1e-14)

    def test_rest_state(self):
        u = prim_to_u(self.eos, self.params, PrimState(1.0, 0.0, 0.0))
        a0, _, _ = a_matrices(self.eos, self.params, u)
        assert np.allclose(a0, np.eye(3), atol=1e-15)
        assert np.allclose(s1(self.eos, self.params, u), np.eye(3), atol=1e-15)

    def test_two_transcriptions_agree(self):
        for s in random_prim_states(self.eos, self.params, rng(), 50):
            st = state_from_prim(self.eos, self.params, s)
            for built, written in zip(coefficient_matrices(st), a_matrices_entries(st)):
                assert np.max(np.abs(built - written)) <= 1e-12 * (1.0 + np.max(np.abs(written)))

    def test_s1_bridge(self):
        for s in random_prim_states(self.eos, self.params, rng(11), 50):
            u = prim_to_u(self.eos, self.params, s)
            bridge = s1(self.eos, self.params, u)
            for b_j, a_j in zip(b_matrices(self.eos, self.params, u), a_matrices(self.eos, self.params, u)):
                assert np.max(np.abs(bridge @ b_j - a_j)) < 1e-12 * (1.0 + np.max(np.abs(a_j)))

    def test_s2_symmetrizes(self):
        for s in random_prim_states(self.eos, self.params, rng(12), 50):
            u = prim_to_u(self.eos, self.params, s)
            sym = s2(self.eos, self.params, u)
            for a_j in a_matrices(self.eos, self.params, u):
                product = sym @ a_j
                assert np.max(np.abs(product - product.T)) < 1e-12 * (1.0 + np.max(np.abs(product)))


class TestCheckSymmetrizable(object):
    def setup_method(self):
        self.eos = Eos.linear(0.36)
        self.params = FluidParams(1.0)

    def test_random_states_pass(self):
        for s in random_prim_states(self.eos, self.params, rng(), 100):
            report = check_symmetrizable(self.eos, self.params, prim_to_u(self.eos, self.params, s))
            assert report.passed, report.failures

    def test_closed_form_eigenvalues(self):
        s = PrimState(1.5, 0.3, -0.4)
        st = state_from_prim(self.eos, self.params, s)
        n2c2 = st.particle_density**2 * 0.36
        expected = sorted(
            [st.lorentz * (1.0 - 0.36 * 0.25), st.lorentz * n2c2, st.lorentz * n2c2 * (1.0 - 0.25)]
        )
        assert np.allclose(s2a0_eigenvalues(st), expected, rtol=1e-14)

    def test_near_light_speed(self):
        u = prim_to_u(self.eos, self.params, PrimState(1.0, 1.0 - 1e-12, 0.0))
        report = check_symmetrizable(self.eos, self.params, u)
        assert report.passed, report.failures
        assert np.min(report.eigenvalues) > 0.0

    def test_corrupted_matrix(self):
        u = prim_to_u(self.eos, self.params, PrimState(1.2, 0.3, 0.2))
        a0, a1, a2 = (m.copy() for m in a_matrices(self.eos, self.params, u))
        a1[1, 2] += 1e-6
        report = check_symmetrizable(self.eos, self.params, u, matrices=(a0, a1, a2))
        assert not report.passed
        assert any("A1" in failure for failure in report.failures)
        with pytest.raises(VerificationError):
            report.raise_for_failure()

    def test_newtonian(self):
        cfg = newtonian_sheet()
        report = check_symmetrizable(cfg.eos, cfg.params, cfg.u_bar(Side.PLUS))
        assert report.passed


class TestVelocityJacobian(object):
    def test_matches_finite_differences(self):
        eos, params = Eos.linear(0.36), FluidParams(1.0)
        u = prim_to_u(eos, params, PrimState(0.8, 0.4, -0.3))
        jac = velocity_jacobian(eos, params, u)
        base = u.as_array()
        for index in range(3):
            step = 1e-6 * max(1.0, abs(base[index]))
            shift = np.zeros(3)
            shift[index] = step
            plus = _velocity(eos, params, base + shift)
            minus = _velocity(eos, params, base - shift)
            assert np.allclose((plus - minus) / (2.0 * step), jac[:, index], rtol=1e-6, atol=1e-8)

    def test_degeneracy(self):
        eos, params = Eos.linear(0.36), FluidParams(1.0)
        u = prim_to_u(eos, params, PrimState(1.3, 0.5, 0.2))
        for xi in (-2.0, 0.0, 0.7):
            report = characteristic_degeneracy(eos, params, u, xi)
            assert abs(report.finite_difference) < 1e-6
            assert abs(report.closed_form) < 1e-12 * (1.0 + abs(xi))


class TestBackgroundDiagonalization(object):
    def test_normal_matrix_is_diagonal(self):
        cfg = stable_sheet()
        diag = background_diagonalization(cfg)
        r_inv = np.linalg.inv(diag.r_bar)
        for side in Side:
            _, _, a2 = coefficient_matrices(cfg.state(side))
            assert np.allclose(r_inv @ a2 @ diag.r_bar, np.diag([0.0, -0.6, 0.6]), atol=1e-12)
        assert np.allclose(diag.s_bar, np.diag([1.0, 2.0 / 0.36, 2.0 / 0.36]))

    def test_cal_normal_matrix(self):
        cfg = stable_sheet()
        diag = background_diagonalization(cfg)
        assert np.allclose(diag.cal(Side.PLUS)[2], np.diag([0.0, -2.0 / 0.6, 2.0 / 0.6]), atol=1e-12)
        assert np.allclose(diag.cal(Side.MINUS)[2], -np.diag([0.0, -2.0 / 0.6, 2.0 / 0.6]), atol=1e-12)

    def test_matches_printed_entries(self):
        for cfg in (stable_sheet(), newtonian_sheet()):
            diag = background_diagonalization(cfg)
            for side in Side:
                for computed, printed in zip(diag.cal(side), printed_cal_matrices(cfg, side)):
                    assert np.max(np.abs(computed - printed)) <= 1e-12 * (1.0 + np.max(np.abs(printed)))

    def test_newtonian_top_left(self):
        diag = background_diagonalization(newtonian_sheet())
        assert diag.cal(Side.PLUS)[0][0, 0] == pytest.approx(1.0, abs=1e-15)
