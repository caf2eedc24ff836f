"""Coefficient matrices of the quasilinear relativistic Euler system in U = (p, h w1, h w2).

``a_matrices`` assembles A0, A1, A2 from their block structure, while
``a_matrices_entries`` writes out every entry; the two are kept independent
so that each can serve as the other's transcription oracle.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from vortex_sheet.eos_state import Side, local_state, u_to_prim
from vortex_sheet.exceptions import VerificationError
from vortex_sheet.logger import logger

SYMMETRY_TOLERANCE = 1e-12
EIGEN_TOLERANCE = 1e-10


def coefficient_matrices(st):
    """(A0, A1, A2) at a LocalState."""
    eps2, lorentz, n, c2 = st.eps2, st.lorentz, st.particle_density, st.sound_speed**2
    v = st.velocity
    kappa = 1.0 - eps2 * eps2 * c2 * st.speed_sq
    transverse = np.eye(2) - eps2 * np.outer(v, v)

    a0 = np.zeros((3, 3))
    a0[0, 0] = lorentz * kappa
    a0[0, 1:] = 2.0 * eps2 * n * c2 * v
    a0[1:, 1:] = lorentz * transverse

    matrices = [a0]
    for j in range(2):
        e_j = np.eye(2)[j]
        a_j = np.zeros((3, 3))
        a_j[0, 0] = lorentz * v[j] * kappa
        a_j[0, 1:] = n * c2 * (e_j + eps2 * v[j] * v)
        a_j[1:, 0] = (e_j - eps2 * v[j] * v) / n
        a_j[1:, 1:] = lorentz * v[j] * transverse
        matrices.append(a_j)
    return tuple(matrices)


def a_matrices(eos, params, u):
    return coefficient_matrices(local_state(eos, params, u))


def a_matrices_entries(st):
    """Entry-by-entry transcription of (A0, A1, A2)."""
    e2, g, n, c2 = st.eps2, st.lorentz, st.particle_density, st.sound_speed**2
    v1, v2 = st.v1, st.v2
    vv = v1 * v1 + v2 * v2
    k = 1.0 - e2 * e2 * c2 * vv
    a0 = np.array(
        [
            [g * k, 2.0 * e2 * n * c2 * v1, 2.0 * e2 * n * c2 * v2],
            [0.0, g * (1.0 - e2 * v1 * v1), -e2 * g * v1 * v2],
            [0.0, -e2 * g * v1 * v2, g * (1.0 - e2 * v2 * v2)],
        ]
    )
    a1 = np.array(
        [
            [g * v1 * k, n * c2 * (1.0 + e2 * v1 * v1), e2 * v1 * v2 * n * c2],
            [(1.0 - e2 * v1 * v1) / n, g * v1 * (1.0 - e2 * v1 * v1), -e2 * g * v1 * v1 * v2],
            [-e2 * v1 * v2 / n, -e2 * g * v1 * v1 * v2, g * v1 * (1.0 - e2 * v2 * v2)],
        ]
    )
    a2 = np.array(
        [
            [g * v2 * k, e2 * v1 * v2 * n * c2, n * c2 * (1.0 + e2 * v2 * v2)],
            [-e2 * v1 * v2 / n, g * v2 * (1.0 - e2 * v1 * v1), -e2 * g * v1 * v2 * v2],
            [(1.0 - e2 * v2 * v2) / n, -e2 * g * v1 * v2 * v2, g * v2 * (1.0 - e2 * v2 * v2)],
        ]
    )
    return a0, a1, a2


def b_matrices(eos, params, u):
    """(B0, B1, B2) of the system written in (p, v)."""
    st = local_state(eos, params, u)
    eps2, lorentz, n, c2 = st.eps2, st.lorentz, st.particle_density, st.sound_speed**2
    v = st.velocity

    b0 = np.zeros((3, 3))
    b0[0, 0] = lorentz * (1.0 - eps2 * eps2 * c2 * st.speed_sq)
    b0[0, 1:] = eps2 * c2 * n * v
    b0[1:, 1:] = lorentz * np.eye(2)

    matrices = [b0]
    for j in range(2):
        e_j = np.eye(2)[j]
        b_j = np.zeros((3, 3))
        b_j[0, 0] = lorentz * v[j] * (1.0 - eps2 * c2)
        b_j[0, 1:] = n * c2 * e_j
        b_j[1:, 0] = e_j / n
        b_j[1:, 1:] = lorentz * v[j] * np.eye(2)
        matrices.append(b_j)
    return tuple(matrices)


def s1(eos, params, u):
    st = local_state(eos, params, u)
    v = st.velocity
    out = np.eye(3)
    out[0, 1:] = st.eps2 * st.particle_density * st.sound_speed**2 * v / st.lorentz
    out[1:, 1:] = np.eye(2) - st.eps2 * np.outer(v, v)
    return out


def s2(eos, params, u):
    st = local_state(eos, params, u)
    n, c2 = st.particle_density, st.sound_speed**2
    out = np.zeros((3, 3))
    out[0, 0] = 1.0
    out[0, 1:] = -2.0 * st.eps2 * n * c2 * st.lorentz * st.velocity
    out[1:, 1:] = n * n * c2 * np.eye(2)
    return out


def s2a0_eigenvalues(st):
    """Closed-form eigenvalues of S2 A0, ascending."""
    n2c2 = st.particle_density**2 * st.sound_speed**2
    lam1 = st.lorentz * (1.0 - st.eps2 * st.eps2 * st.sound_speed**2 * st.speed_sq)
    lam2 = st.lorentz * n2c2
    lam3 = st.lorentz * n2c2 * (1.0 - st.eps2 * st.speed_sq)
    return np.sort(np.array([lam1, lam2, lam3]))


@dataclass
class SymmetrizationReport:
    asymmetry: list = field(default_factory=list)
    bridge_residual: list = field(default_factory=list)
    eigenvalues: np.ndarray = None
    numeric_eigenvalues: np.ndarray = None
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def raise_for_failure(self):
        if self.failures:
            raise VerificationError("; ".join(self.failures), property_name="symmetrizable_hyperbolicity")


def check_symmetrizable(eos, params, u, matrices=None):
    """Check that S2 symmetrizes every A_j and that S2 A0 is positive definite.

    ``matrices`` replaces the assembled (A0, A1, A2); used to feed corrupted
    coefficients in negative controls.
    """
    st = local_state(eos, params, u)
    a_mats = coefficient_matrices(st) if matrices is None else tuple(np.asarray(m, dtype=float) for m in matrices)
    sym = s2(eos, params, u)
    report = SymmetrizationReport()

    for j, a_j in enumerate(a_mats):
        product = sym @ a_j
        skew = np.abs(product - product.T)
        worst = float(skew.max())
        report.asymmetry.append(worst)
        if worst >= SYMMETRY_TOLERANCE * (1.0 + np.abs(product).max()):
            row, col = np.unravel_index(int(np.argmax(skew)), skew.shape)
            report.failures.append(
                "S2 A{0} is not symmetric at entry ({1}, {2}): asymmetry {3:.3e}".format(j, row, col, worst)
            )

    for j, (b_j, a_j) in enumerate(zip(b_matrices(eos, params, u), a_mats)):
        diff = np.abs(s1(eos, params, u) @ b_j - a_j)
        worst = float(diff.max())
        report.bridge_residual.append(worst)
        if worst >= SYMMETRY_TOLERANCE * (1.0 + np.abs(a_j).max()):
            row, col = np.unravel_index(int(np.argmax(diff)), diff.shape)
            report.failures.append("S1 B{0} differs from A{0} at entry ({1}, {2}): {3:.3e}".format(j, row, col, worst))

    closed = s2a0_eigenvalues(st)
    report.eigenvalues = closed
    for index, value in enumerate(closed):
        if not value > 0.0:
            report.failures.append("eigenvalue lambda{0} of S2 A0 is not positive: {1}".format(index + 1, value))

    product = sym @ a_mats[0]
    numeric = linalg.eigh(0.5 * (product + product.T), eigvals_only=True)
    report.numeric_eigenvalues = numeric
    scale = np.abs(closed).max()
    mismatch = np.abs(np.sort(numeric) - closed)
    if mismatch.max() > EIGEN_TOLERANCE * scale:
        index = int(np.argmax(mismatch))
        report.failures.append(
            "numeric eigenvalue {0} of S2 A0 disagrees with the closed form by {1:.3e}".format(
                index + 1, mismatch[index]
            )
        )
    if report.failures:
        logger.debug("symmetrization check failed: {0}".format(report.failures))
    return report


def velocity_jacobian(eos, params, u):
    """dv/dU as a 2x3 matrix."""
    st = local_state(eos, params, u)
    eps2, lorentz, h, n = st.eps2, st.lorentz, st.enthalpy, st.particle_density
    v1, v2 = st.v1, st.v2
    hg = h * lorentz
    return np.array(
        [
            [-eps2 * v1 / (n * hg * lorentz), (1.0 - eps2 * v1 * v1) / hg, -eps2 * v1 * v2 / hg],
            [-eps2 * v2 / (n * hg * lorentz), -eps2 * v1 * v2 / hg, (1.0 - eps2 * v2 * v2) / hg],
        ]
    )


@dataclass(frozen=True)
class DegeneracyReport:
    finite_difference: float
    closed_form: float
    eigenvector: np.ndarray


def characteristic_degeneracy(eos, params, u, xi, step=1e-6):
    """grad_U lambda2 . r2 for lambda2(U, xi) = v1 xi - v2, two ways.

    The second characteristic field is linearly degenerate, so both values
    vanish.
    """
    st = local_state(eos, params, u)
    eps2, v1, v2 = st.eps2, st.v1, st.v2
    r2 = np.array([0.0, 1.0 - eps2 * v2 * v2 + eps2 * v1 * v2 * xi, (1.0 - eps2 * v1 * v1) * xi + eps2 * v1 * v2])

    base = u.as_array()
    gradient = np.zeros(3)
    for index in range(3):
        shift = np.zeros(3)
        shift[index] = step
        plus = u_to_prim(eos, params, type(u).from_array(base + shift))
        minus = u_to_prim(eos, params, type(u).from_array(base - shift))
        gradient[index] = ((plus.v1 - minus.v1) * xi - (plus.v2 - minus.v2)) / (2.0 * step)

    jac = velocity_jacobian(eos, params, u)
    closed = xi * jac[0] - jac[1]
    return DegeneracyReport(float(gradient @ r2), float(closed @ r2), r2)


def background_eigenvectors(c_bar):
    """R_bar with columns (0,1,0), (1,0,-1/c), (1,0,1/c) and S_bar = diag(1, 2/c^2, 2/c^2)."""
    r_bar = np.array([[0.0, 1.0, 1.0], [1.0, 0.0, 0.0], [0.0, -1.0 / c_bar, 1.0 / c_bar]])
    s_bar = np.diag([1.0, 2.0 / c_bar**2, 2.0 / c_bar**2])
    return r_bar, s_bar


@dataclass(frozen=True)
class BackgroundDiagonalization:
    r_bar: np.ndarray
    s_bar: np.ndarray
    plus: tuple
    minus: tuple

    def cal(self, side):
        return self.plus if Side(side) is Side.PLUS else self.minus


def background_diagonalization(cfg):
    """S_bar R_bar^-1 A_j(U_bar±) R_bar for j = 0, 1, 2.

    The normal coefficient carries the factor 1/d2 Phi_bar± = ±1, so the
    third matrix is ±diag(0, -2/c, 2/c).
    """
    r_bar, s_bar = background_eigenvectors(cfg.c_bar)
    r_inv = np.linalg.inv(r_bar)
    sides = {}
    for side in Side:
        a0, a1, a2 = coefficient_matrices(cfg.state(side))
        cal = [s_bar @ r_inv @ a @ r_bar for a in (a0, a1)]
        cal.append(int(side) * (s_bar @ r_inv @ a2 @ r_bar))
        sides[side] = tuple(cal)
    return BackgroundDiagonalization(r_bar, s_bar, sides[Side.PLUS], sides[Side.MINUS])


def printed_cal_matrices(cfg, side):
    """Entry-level (calA0, calA1, calA2) on ``side``."""
    sign = float(int(side))
    e2, g, c, v = cfg.eps2, cfg.lorentz_bar, cfg.c_bar, cfg.v_bar
    diag = g * (2.0 - e2 * e2 * c * c * v * v) / c**2
    off = -e2 * e2 * g * v * v
    cal0 = np.array(
        [
            [g * (1.0 - e2 * v * v), 0.0, 0.0],
            [sign * 2.0 * e2 * v, diag, off],
            [sign * 2.0 * e2 * v, off, diag],
        ]
    )
    cal1 = np.array(
        [
            [sign * g * (1.0 - e2 * v * v) * v, 1.0 - e2 * v * v, 1.0 - e2 * v * v],
            [1.0 + e2 * v * v, sign * v * diag, sign * v * off],
            [1.0 + e2 * v * v, sign * v * off, sign * v * diag],
        ]
    )
    cal2 = sign * np.diag([0.0, -2.0 / c, 2.0 / c])
    return cal0, cal1, cal2
