import math

import numpy as np
import pytest

from vortex_sheet.constsym import Frequency, interior_symbol
from vortex_sheet.eos_state import Side
from vortex_sheet.exceptions import (
    DefectiveMatrixWarning,
    DegeneracyError,
    IntegrationError,
    InvalidParameterError,
    NearImaginarySpectrumError,
)
from vortex_sheet.oracles import (
    eig4,
    fit_exponential_rate,
    ode_decay_check,
    poly_roots,
    principal_angles,
    rk4_integrate,
    stable_subspace,
)

from tests.vortex_sheet.helpers import rng, stable_sheet


class TestPolyRoots(object):
    def test_newtonian_quartic(self):
        z1, z2 = math.sqrt(5.0 - math.sqrt(17.0)), math.sqrt(5.0 + math.sqrt(17.0))
        roots = poly_roots([-1.0, 0.0, 10.0, 0.0, -8.0])
        assert [r.real for r in roots] == pytest.approx([-z2, -z1, z1, z2])
        assert max(abs(r.imag) for r in roots) < 1e-12

    def test_linear(self):
        assert poly_roots([2.0, -4.0]) == [2.0]

    def test_quadratic_without_cancellation(self):
        small, large = poly_roots([1.0, -1e8, 1.0])
        assert small.real == pytest.approx(1e-8, rel=1e-12)
        assert large.real == pytest.approx(1e8, rel=1e-12)

    def test_leading_coefficient_trimmed(self):
        roots = poly_roots([1e-20, 1.0, -3.0, 2.0])
        assert [r.real for r in roots] == pytest.approx([1.0, 2.0])

    def test_complex_roots_sorted(self):
        roots = poly_roots([1.0, 0.0, 1.0])
        assert roots == [pytest.approx(-1j), pytest.approx(1j)]

    def test_degenerate(self):
        with pytest.raises(DegeneracyError):
            poly_roots([0.0, 0.0])
        with pytest.raises(DegeneracyError):
            poly_roots([3.0])
        with pytest.raises(DegeneracyError):
            poly_roots([])


class TestEig4(object):
    def test_block_symbol(self):
        A = interior_symbol(stable_sheet(), Frequency(0.3, 0.2, 0.9)).A
        pairs = eig4(A)
        assert pairs.block
        assert not pairs.defective
        assert sorted(pairs.values, key=lambda z: (z.real, z.imag)) == pytest.approx(
            sorted(np.linalg.eigvals(A), key=lambda z: (z.real, z.imag))
        )

    def test_full_matrix(self):
        A = rng().normal(size=(4, 4)) + 1j * rng(8).normal(size=(4, 4))
        pairs = eig4(A)
        assert not pairs.block
        for index, lam in enumerate(pairs.values):
            vector = pairs.vectors[:, index]
            assert np.linalg.norm(A @ vector - lam * vector) < 1e-9 * np.linalg.norm(A)

    def test_defective(self):
        jordan = np.diag([1.0, 1.0, 2.0, 3.0])
        jordan[0, 1] = 1.0
        with pytest.warns(DefectiveMatrixWarning):
            pairs = eig4(jordan)
        assert pairs.defective

    def test_bad_input(self):
        with pytest.raises(InvalidParameterError):
            eig4(np.eye(3))
        with pytest.raises(InvalidParameterError):
            eig4(np.full((4, 4), np.nan))


class TestStableSubspace(object):
    def test_dimension_and_span(self):
        dimension, basis = stable_subspace(np.diag([-1.0, -2.0, 3.0, 4.0]))
        assert dimension == 2
        assert np.max(principal_angles(basis, np.eye(4)[:, :2])) < 1e-12

    def test_symbol_has_two_stable_directions(self):
        A = interior_symbol(stable_sheet(), Frequency(0.5, -0.3, 0.4)).A
        assert stable_subspace(A)[0] == 2

    def test_imaginary_spectrum(self):
        with pytest.raises(NearImaginarySpectrumError):
            stable_subspace(np.diag([0.0, -1.0, 1.0, 2.0]))


class TestIntegration(object):
    def test_rk4_matches_exponential(self):
        matrix = np.diag([-1.0, 0.5])
        xs, ws = rk4_integrate(matrix, [1.0, 2.0], 0.0, 1.0, 200)
        assert xs[-1] == pytest.approx(1.0)
        assert ws[-1] == pytest.approx([math.exp(-1.0), 2.0 * math.exp(0.5)], rel=1e-9)

    def test_fit_rate(self):
        xs = np.linspace(0.0, 3.0, 31)
        ws = np.exp(-0.7 * xs)[:, None] * np.array([1.0, 1j])
        slope, r2 = fit_exponential_rate(xs, ws)
        assert slope == pytest.approx(-0.7)
        assert r2 == pytest.approx(1.0)

    def test_overflow(self):
        with pytest.raises(IntegrationError):
            rk4_integrate(np.array([[1000.0]]), [1.0], 0.0, 5.0, 50)

    def test_decay_matches_omega(self):
        f = Frequency(0.3, 0.2, 0.9).normalize()
        report = ode_decay_check(stable_sheet(), f)
        assert report.passed
        for side in Side:
            assert report.rate_error(side) <= 0.02
            assert report.decay_rates[side] < 0.0

    def test_decay_needs_positive_gamma(self):
        with pytest.raises(InvalidParameterError):
            ode_decay_check(stable_sheet(), Frequency(0.0, 0.2, 0.9))
