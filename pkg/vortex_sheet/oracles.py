"""Independent numerical oracles for the closed-form symbol algebra.

Nothing in here knows the closed forms: roots come from companion matrices,
eigenpairs from 2x2 formulas or the characteristic polynomial, decay rates
from integrating the ODE W' = A W.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import linalg, stats

from vortex_sheet.constsym import boundary_symbols, interior_symbol
from vortex_sheet.eos_state import Side
from vortex_sheet.exceptions import (
    DefectiveMatrixWarning,
    DegeneracyError,
    IntegrationError,
    InvalidParameterError,
    NearImaginarySpectrumError,
)
from vortex_sheet.logger import logger

ROOT_RESIDUAL_TOLERANCE = 1e-9
EIGEN_RESIDUAL_TOLERANCE = 1e-9
DEFECTIVE_CONDITION = 1e10


def _trim(coeffs, trim):
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.ndim != 1 or coeffs.size == 0:
        raise DegeneracyError("polynomial coefficients must be a non-empty 1-d sequence")
    scale = np.abs(coeffs).max()
    if scale == 0.0:
        raise DegeneracyError("the zero polynomial has no roots")
    start = 0
    while start < coeffs.size and abs(coeffs[start]) <= trim * scale:
        start += 1
    return coeffs[start:]


def _residual_scale(coeffs, root):
    powers = np.abs(root) ** np.arange(coeffs.size - 1, -1, -1)
    return float(np.abs(coeffs) @ powers)


def poly_roots(coeffs, trim=1e-14):
    """All roots of sum coeffs[i] z^(n-i), highest degree first.

    Leading coefficients below ``trim`` times the largest one are dropped.
    Roots are polished by Newton steps and sorted by (Re, Im).
    """
    c = _trim(coeffs, trim)
    degree = c.size - 1
    if degree < 1:
        raise DegeneracyError("polynomial of degree {0} after trimming has no roots".format(degree))

    if degree == 1:
        roots = np.array([-c[1] / c[0]])
    elif degree == 2:
        a, b, cc = c
        disc = np.sqrt(b * b - 4.0 * a * cc + 0j)
        # pick the sign that avoids cancellation
        if (np.conj(b) * disc).real < 0.0:
            disc = -disc
        q = -0.5 * (b + disc)
        if q == 0.0:
            roots = np.array([0.0, 0.0], dtype=complex)
        else:
            roots = np.array([q / a, cc / q])
    else:
        companion = np.zeros((degree, degree), dtype=complex)
        companion[1:, :-1] = np.eye(degree - 1)
        companion[:, -1] = -c[:0:-1] / c[0]
        roots = linalg.eigvals(companion)

    derivative = np.polyder(c)
    polished = []
    for root in roots:
        for _ in range(2):
            slope = np.polyval(derivative, root)
            if slope == 0.0:
                break
            step = np.polyval(c, root) / slope
            if not np.isfinite(step):
                break
            root = root - step
        residual = abs(np.polyval(c, root))
        if residual > ROOT_RESIDUAL_TOLERANCE * _residual_scale(c, root):
            logger.warning("root {0} of a degree {1} polynomial has residual {2:.3e}".format(root, degree, residual))
        polished.append(complex(root))
    return sorted(polished, key=lambda z: (z.real, z.imag))


@dataclass(frozen=True)
class Eigenpairs:
    values: np.ndarray
    vectors: np.ndarray
    condition: float
    defective: bool
    block: bool


def _eig2(block):
    a, b = block[0]
    c, d = block[1]
    half_trace = 0.5 * (a + d)
    root = np.sqrt((0.5 * (a - d)) ** 2 + b * c + 0j)
    values = np.array([half_trace + root, half_trace - root])
    vectors = np.zeros((2, 2), dtype=complex)
    for index, lam in enumerate(values):
        if b == 0.0 and c == 0.0:
            vec = np.eye(2, dtype=complex)[index]
        elif abs(b) >= abs(c):
            vec = np.array([b, lam - a])
        else:
            vec = np.array([lam - d, c])
        vectors[:, index] = vec / np.linalg.norm(vec)
    return values, vectors


def _null_vector(matrix):
    _, _, vh = linalg.svd(matrix)
    return vh[-1].conj()


def eig4(A):
    """Eigenpairs of a 4x4 complex matrix.

    Block-diagonal inputs are solved as two 2x2 problems; otherwise the
    characteristic quartic is solved with poly_roots and each eigenvector
    taken from the null space of A - lambda I.
    """
    A = np.asarray(A, dtype=complex)
    if A.shape != (4, 4) or not np.all(np.isfinite(A)):
        raise InvalidParameterError("eig4 needs a finite 4x4 matrix")
    block = not (np.any(A[:2, 2:]) or np.any(A[2:, :2]))
    if block:
        upper_values, upper_vectors = _eig2(A[:2, :2])
        lower_values, lower_vectors = _eig2(A[2:, 2:])
        values = np.concatenate([upper_values, lower_values])
        vectors = np.zeros((4, 4), dtype=complex)
        vectors[:2, :2] = upper_vectors
        vectors[2:, 2:] = lower_vectors
    else:
        values = np.array(poly_roots(np.poly(A)))
        vectors = np.column_stack([_null_vector(A - lam * np.eye(4)) for lam in values])

    norm = max(np.linalg.norm(A), 1e-300)
    for index, lam in enumerate(values):
        residual = np.linalg.norm(A @ vectors[:, index] - lam * vectors[:, index])
        if residual >= EIGEN_RESIDUAL_TOLERANCE * norm:
            logger.warning("eigenpair {0} has residual {1:.3e}".format(index, residual))

    condition = float(np.linalg.cond(vectors))
    defective = not math.isfinite(condition) or condition > DEFECTIVE_CONDITION
    if defective:
        warnings.warn(
            "eigenvector basis is ill-conditioned (condition {0:.3e})".format(condition), DefectiveMatrixWarning
        )
    return Eigenpairs(values=values, vectors=vectors, condition=condition, defective=defective, block=block)


def stable_subspace(A):
    """(dimension, basis) of the span of eigenvectors with Re lambda < 0."""
    pairs = eig4(A)
    norm = np.linalg.norm(np.asarray(A, dtype=complex))
    if np.any(np.abs(pairs.values.real) <= 1e-12 * norm):
        raise NearImaginarySpectrumError(
            "spectrum touches the imaginary axis; evaluate the boundary extension of omega instead"
        )
    stable = pairs.values.real < 0.0
    return int(stable.sum()), pairs.vectors[:, stable]


def principal_angles(a, b):
    """Largest-first principal angles between the column spans of a and b."""
    return linalg.subspace_angles(np.atleast_2d(np.asarray(a)), np.atleast_2d(np.asarray(b)))


def rk4_integrate(matrix, w0, x_start, x_end, steps):
    """Classical fixed-step RK4 for W' = matrix W; returns (xs, ws)."""
    matrix = np.asarray(matrix, dtype=complex)
    h = (x_end - x_start) / steps
    xs = x_start + h * np.arange(steps + 1)
    ws = np.zeros((steps + 1, matrix.shape[0]), dtype=complex)
    w = np.asarray(w0, dtype=complex)
    ws[0] = w
    for step in range(1, steps + 1):
        k1 = matrix @ w
        k2 = matrix @ (w + 0.5 * h * k1)
        k3 = matrix @ (w + 0.5 * h * k2)
        k4 = matrix @ (w + h * k3)
        w = w + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        if not np.all(np.isfinite(w)) or np.linalg.norm(w) > 1e300:
            raise IntegrationError("solution overflowed at x = {0}; use a smaller x2_max".format(xs[step]))
        ws[step] = w
    return xs, ws


def fit_exponential_rate(xs, ws):
    """Slope and r^2 of log|W(x)| against x."""
    norms = np.linalg.norm(np.atleast_2d(ws), axis=-1)
    fit = stats.linregress(xs, np.log(norms))
    return float(fit.slope), float(fit.rvalue**2)


@dataclass(frozen=True)
class OdeDecayReport:
    omega: dict
    decay_rates: dict
    decay_fit_r2: dict
    growth_rates: dict
    direction_angles: dict
    boundary_determinant: complex
    steps: int
    rate_tolerance: float

    def rate_error(self, side):
        expected = self.omega[side].real
        return abs(self.decay_rates[side] - expected) / abs(expected)

    @property
    def passed(self):
        return all(
            self.rate_error(side) <= self.rate_tolerance
            and self.growth_rates[side] > 0.0
            and self.direction_angles[side] < 1e-6
            for side in Side
        )


def ode_decay_check(cfg, f, x2_max=5.0, steps=2000, rate_tolerance=0.02):
    """Integrate W' = A(tau, eta) W and compare growth and decay with omega±.

    Pure stable modes start at E± and are integrated forward; the unstable
    eigenvectors (eigenvalues -omega±) are integrated backward from x2_max.
    """
    if not f.gamma > 0.0:
        raise InvalidParameterError("the decay check needs gamma > 0")
    bundle = interior_symbol(cfg, f)
    A = bundle.A
    steps = max(steps, int(math.ceil(10.0 * np.linalg.norm(A, 2) * x2_max)))

    omegas = {Side.PLUS: bundle.omega_plus, Side.MINUS: bundle.omega_minus}
    modes = {Side.PLUS: bundle.E_plus, Side.MINUS: bundle.E_minus}
    pairs = eig4(A)

    decay, r2, growth, angles = {}, {}, {}, {}
    for side in Side:
        start = modes[side] / np.linalg.norm(modes[side])
        xs, ws = rk4_integrate(A, start, 0.0, x2_max, steps)
        decay[side], r2[side] = fit_exponential_rate(xs, ws)
        angles[side] = float(principal_angles(ws[-1][:, None], start[:, None]).max())

        target = -omegas[side]
        index = int(np.argmin(np.abs(pairs.values - target)))
        unstable = pairs.vectors[:, index]
        xs_back, ws_back = rk4_integrate(A, unstable / np.linalg.norm(unstable), x2_max, 0.0, steps)
        growth[side], _ = fit_exponential_rate(xs_back, ws_back)

    symbols = boundary_symbols(cfg, f)
    determinant = complex(f.k * np.linalg.det(symbols.beta @ np.column_stack([bundle.E_plus, bundle.E_minus])))
    logger.debug("ode decay check at {0}: rates {1}".format(f, decay))
    return OdeDecayReport(
        omega=omegas,
        decay_rates=decay,
        decay_fit_r2=r2,
        growth_rates=growth,
        direction_angles=angles,
        boundary_determinant=determinant,
        steps=steps,
        rate_tolerance=rate_tolerance,
    )
