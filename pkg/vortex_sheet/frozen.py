"""Symbols of the linearized problem frozen at a perturbed basic state.

A FrozenPoint is one side's state U and front gradient (phi_t, phi_1, phi_2)
at a single point; a FrozenPair joins the two sides on the boundary. With the
eikonal constraint phi_t + v1 phi_1 - v2 = 0 in force the normal coefficient
reduces to a constant-rank matrix, and everything below is built on that
reduction.
"""

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from vortex_sheet.config import config
from vortex_sheet.constsym import Frequency
from vortex_sheet.eos_state import (
    Eos,
    FluidParams,
    PrimState,
    Regime,
    SheetConfig,
    Side,
    UState,
    invert_pressure,
    local_state,
    prim_to_u,
    u_to_prim,
)
from vortex_sheet.exceptions import DegeneracyError, DegenerateFrontError, InvalidParameterError, PoleError
from vortex_sheet.logger import logger
from vortex_sheet.lopatinskii import root_polynomial
from vortex_sheet.oracles import poly_roots
from vortex_sheet.symmetrization import coefficient_matrices

FIT_NODES = 13
FIT_DEGREE = 6
LEADING_TRIM = 1e-10

SIDE_LABELS = {"+": Side.PLUS, "plus": Side.PLUS, "-": Side.MINUS, "minus": Side.MINUS}


def side_from_label(label):
    """Side named by a file label: '+', '-', 'plus', 'minus' or +-1."""
    side = None
    if isinstance(label, str):
        side = SIDE_LABELS.get(label.strip().lower())
    elif isinstance(label, (int, np.integer)) and not isinstance(label, bool) and label in (1, -1):
        side = Side(int(label))
    if side is None:
        raise InvalidParameterError(
            "unknown side label {0!r}, expected one of '+', '-', 'plus', 'minus', 1, -1".format(label)
        )
    return side


@dataclass(frozen=True)
class FrozenPoint:
    side: Side
    u: UState
    phi_t: float
    phi_1: float
    phi_2: float
    eos: Eos
    params: FluidParams

    def __post_init__(self):
        if not int(self.side) * self.phi_2 > 0.0:
            raise InvalidParameterError(
                "need {0}d2 Phi > 0 on the {0} side, got d2 Phi = {1}".format(Side(self.side).label, self.phi_2)
            )
        if self.front_norm == 0.0:
            raise DegenerateFrontError("varrho^2 + varsigma^2 vanishes at this frozen point")

    @classmethod
    def from_prim(cls, eos, params, side, prim, phi_t, phi_1, phi_2):
        """Build a point whose v2 is reprojected onto the eikonal constraint."""
        v2 = phi_t + prim.v1 * phi_1
        u = prim_to_u(eos, params, PrimState(prim.rho, prim.v1, v2))
        return cls(Side(side), u, float(phi_t), float(phi_1), float(phi_2), eos, params)

    @classmethod
    def from_fields(cls, eos, params, side, p, hw1, hw2, phi_t, phi_1, phi_2, tolerance=None):
        """Build a point from file fields; v2 is recomputed and a mismatch above ``tolerance`` rejected."""
        side = side_from_label(side)
        tolerance = config.eikonal_tolerance if tolerance is None else tolerance
        prim = u_to_prim(eos, params, UState(float(p), float(hw1), float(hw2)))
        mismatch = abs(phi_t + prim.v1 * phi_1 - prim.v2)
        if mismatch > tolerance:
            raise InvalidParameterError(
                "frozen point misses the eikonal constraint by {0:.3e} (tolerance {1:.1e})".format(mismatch, tolerance)
            )
        return cls.from_prim(eos, params, side, prim, phi_t, phi_1, phi_2)

    @cached_property
    def state(self):
        return local_state(self.eos, self.params, self.u)

    @property
    def varrho(self):
        return self.phi_1 + self.params.eps2 * self.state.v1 * self.phi_t

    @property
    def varsigma(self):
        return 1.0 - self.params.eps2 * self.state.v2 * self.phi_t

    @property
    def front_norm(self):
        return math.hypot(self.varrho, self.varsigma)

    @property
    def eikonal_residual(self):
        st = self.state
        return self.phi_t + st.v1 * self.phi_1 - st.v2

    @cached_property
    def matrices(self):
        return frozen_matrices(self)


@dataclass(frozen=True)
class FrozenPair:
    plus: FrozenPoint
    minus: FrozenPoint
    sheet: SheetConfig

    @property
    def boundary(self):
        """Pressure traces match and both sides share the front derivatives."""
        p_plus, p_minus = self.plus.u.p, self.minus.u.p
        return (
            math.isclose(p_plus, p_minus, rel_tol=1e-12)
            and self.plus.phi_t == self.minus.phi_t
            and self.plus.phi_1 == self.minus.phi_1
        )

    def point(self, side):
        return self.plus if Side(side) is Side.PLUS else self.minus

    def a_ring(self, f, side):
        return f.tau + 1j * self.point(side).state.v1 * f.eta


def zero_perturbation_pair(cfg):
    plus = FrozenPoint(Side.PLUS, cfg.u_bar(Side.PLUS), 0.0, 0.0, 1.0, cfg.eos, cfg.params)
    minus = FrozenPoint(Side.MINUS, cfg.u_bar(Side.MINUS), 0.0, 0.0, -1.0, cfg.eos, cfg.params)
    return FrozenPair(plus, minus, cfg)


def perturbed_pair(cfg, amplitude, rng):
    """Background pair with every frozen field moved by a uniform draw from [-amplitude, amplitude].

    The shared pressure moves relative to p_bar, the tangential velocities
    and front slopes in absolute terms; v2 on each side then follows from the
    eikonal constraint.
    """

    def draw():
        return float(rng.uniform(-amplitude, amplitude))

    rho = invert_pressure(cfg.eos, cfg.p_bar * (1.0 + draw()))
    phi_t, phi_1 = draw(), draw()
    points = {}
    for side in Side:
        v1 = int(side) * cfg.v_bar + draw()
        phi_2 = int(side) * (1.0 + draw())
        points[side] = FrozenPoint.from_prim(cfg.eos, cfg.params, side, PrimState(rho, v1, 0.0), phi_t, phi_1, phi_2)
    return FrozenPair(points[Side.PLUS], points[Side.MINUS], cfg)


@dataclass(frozen=True)
class FrozenMatrices:
    a2_tilde: np.ndarray
    R: np.ndarray
    a0_tilde: np.ndarray
    bold_a0: np.ndarray
    bold_a1: np.ndarray
    eigenvalues: tuple
    identity_residual: float


def a2_tilde_general(fp):
    """(A2 - phi_t A0 - phi_1 A1) / phi_2, valid without the eikonal constraint."""
    a0, a1, a2 = coefficient_matrices(fp.state)
    return (a2 - fp.phi_t * a0 - fp.phi_1 * a1) / fp.phi_2


def frozen_matrices(fp):
    st = fp.state
    n, c = st.particle_density, st.sound_speed
    rho_, sig, s = fp.varrho, fp.varsigma, fp.front_norm
    a2_tilde = (
        np.array(
            [
                [0.0, -n * c * c * rho_, n * c * c * sig],
                [-rho_ / n, 0.0, 0.0],
                [sig / n, 0.0, 0.0],
            ]
        )
        / fp.phi_2
    )
    R = np.array(
        [
            [0.0, s, s],
            [sig, rho_ / (n * c), -rho_ / (n * c)],
            [rho_, -sig / (n * c), sig / (n * c)],
        ]
    )
    lam2 = -c * s / fp.phi_2
    lam3 = c * s / fp.phi_2
    # leading 1 so that the first rows of the bold matrices survive
    a0_tilde = np.diag([1.0, 1.0 / lam2, 1.0 / lam3])
    r_inv = np.linalg.inv(R)
    identity = a0_tilde @ r_inv @ a2_tilde @ R
    a0, a1, _ = coefficient_matrices(st)
    return FrozenMatrices(
        a2_tilde=a2_tilde,
        R=R,
        a0_tilde=a0_tilde,
        bold_a0=a0_tilde @ r_inv @ a0 @ R,
        bold_a1=a0_tilde @ r_inv @ a1 @ R,
        eigenvalues=(0.0, lam2, lam3),
        identity_residual=float(np.max(np.abs(identity - np.diag([0.0, 1.0, 1.0])))),
    )


def maxima_identity_residuals(fp):
    """Residuals of the relations between the entries of the bold A0 and A1, relative to their size."""
    m = fp.matrices
    A0, A1 = m.bold_a0, m.bold_a1
    v1 = fp.state.v1

    def e(mat, i, j):
        return mat[i - 1, j - 1]

    scale = max(np.max(np.abs(A0)), np.max(np.abs(A1)))
    d12 = e(A0, 1, 2) - e(A0, 1, 3)
    s21 = e(A0, 2, 1) + e(A0, 3, 1)
    residuals = {
        "A1_23": e(A1, 2, 3) - v1 * e(A0, 2, 3),
        "A1_32": e(A1, 3, 2) - v1 * e(A0, 3, 2),
        "A1_22_33": (e(A1, 2, 2) - e(A1, 3, 3)) - v1 * (e(A0, 2, 2) - e(A0, 3, 3)),
        "A1_12_13": (e(A1, 1, 2) - e(A1, 1, 3)) - v1 * d12,
        "A1_21_31": (e(A1, 2, 1) + e(A1, 3, 1)) - v1 * s21,
        "cross_21_13": (e(A1, 2, 1) * d12 - e(A1, 1, 3) * s21) - v1 * (e(A0, 2, 1) * d12 - e(A0, 1, 3) * s21),
        "cross_13_31": (e(A1, 1, 3) * s21 + e(A1, 3, 1) * d12) - v1 * (e(A0, 1, 3) * s21 + e(A0, 3, 1) * d12),
    }
    # the two cross relations are quadratic in the entries
    return {
        name: float(abs(value) / (scale * scale if name.startswith("cross") else scale))
        for name, value in residuals.items()
    }


@dataclass(frozen=True)
class FrozenSymbol:
    b: np.ndarray
    a: np.ndarray
    a_ring: complex
    F1: float
    F2: float
    F3: float
    b11_residual: float
    eff_i1_residual: float
    eff_i2_residual: float


def _f_closed_forms(fp):
    st = fp.state
    e2, g, c = st.eps2, st.lorentz, st.sound_speed
    v1, v2 = st.v1, st.v2
    rho_, sig = fp.varrho, fp.varsigma
    s2 = rho_ * rho_ + sig * sig
    mixed = sig * v1 + rho_ * v2
    denominator = e2 * mixed * mixed - s2
    F1 = g * (1.0 - e2 * mixed * mixed / s2)
    F2 = (
        2.0
        * fp.phi_2
        * (g * math.sqrt(s2) * (e2 * st.speed_sq - 1.0) + e2 * c * (sig * v2 - rho_ * v1))
        / (c * denominator)
    )
    F3 = -2.0 * fp.phi_2 * e2 * (sig * v2 - rho_ * v1) / denominator
    return F1, F2, F3


def _reduced_symbol(fp, tau, eta):
    m = fp.matrices
    b = tau * m.bold_a0 + 1j * eta * m.bold_a1
    a = -b[1:, 1:] + np.outer(b[1:, 0], b[0, 1:]) / b[0, 0]
    return b, a


def _omega_tilde_sq(fp, tau, eta):
    _, a = _reduced_symbol(fp, tau, eta)
    return ((a[0, 0] - a[1, 1]) / 2.0) ** 2 + a[0, 1] * a[1, 0]


def _check_pole(fp, f):
    a_ring = f.tau + 1j * fp.state.v1 * f.eta
    if abs(a_ring) < config.pole_guard * f.k:
        raise PoleError(
            "tau + i v1 eta vanishes on the {0} side of the frozen pair".format(Side(fp.side).label), side=fp.side
        )
    return a_ring


def frozen_interior_symbol(fp, f):
    a_ring = _check_pole(fp, f)
    b, a = _reduced_symbol(fp, f.tau, f.eta)
    F1, F2, F3 = _f_closed_forms(fp)
    k = f.k
    return FrozenSymbol(
        b=b,
        a=a,
        a_ring=a_ring,
        F1=F1,
        F2=F2,
        F3=F3,
        b11_residual=float(abs(b[0, 0] - F1 * a_ring) / (abs(F1) * k)),
        eff_i1_residual=float(abs(a[0, 0] - a[1, 1] - 2.0 * a[0, 1] - F2 * a_ring) / (abs(F2) * k)),
        eff_i2_residual=float(abs(a[0, 1] + a[1, 0] - F3 * a_ring) / (max(abs(F2), abs(F3)) * k)),
    )


@dataclass(frozen=True)
class FrozenEigen:
    omega_tilde_sq: complex
    omega_tilde: complex
    omega: complex
    omega_prime: complex
    trace: complex


def frozen_eigen(fp, f):
    """Stable eigenvalue omega = trace/2 + omega_tilde of the reduced 2x2 symbol.

    For gamma > 0 the root with Re omega < 0 is taken. On gamma = 0 the same
    rule applies unless omega_tilde is purely imaginary, where the sign is
    fixed by requiring omega to move into Re < 0 as gamma grows.
    """
    symbol = frozen_interior_symbol(fp, f)
    a = symbol.a
    trace = a[0, 0] + a[1, 1]
    sq = ((a[0, 0] - a[1, 1]) / 2.0) ** 2 + a[0, 1] * a[1, 0]
    root = complex(np.sqrt(complex(sq)))
    scale = max(abs(root), 1e-300)

    if f.gamma > 0.0 or abs(root.real) > 1e-12 * scale:
        if (trace / 2.0 + root).real > 0.0:
            root = -root
    else:
        h = 1e-6 * f.k
        slope = (_omega_tilde_sq(fp, f.tau + h, f.eta) - _omega_tilde_sq(fp, f.tau - h, f.eta)) / (2.0 * h)
        if root != 0.0 and (slope / (2.0 * root)).real > 0.0:
            root = -root
    return FrozenEigen(complex(sq), root, complex(trace / 2.0 + root), complex(trace / 2.0 - root), complex(trace))


def trace_projection(fp, w):
    """P(phi) V for V = R W, computed from V directly and from the W components."""
    w = np.asarray(w, dtype=complex)
    v = fp.matrices.R @ w
    st = fp.state
    s = fp.front_norm
    direct = np.array([v[0], fp.varsigma * v[2] - fp.varrho * v[1]])
    via_w = np.array([s * (w[1] + w[2]), -(s * s) / (st.particle_density * st.sound_speed) * (w[1] - w[2])])
    return direct, via_w


def _m_coefficients(fp):
    st = fp.state
    s = fp.front_norm
    denominator = st.enthalpy * st.particle_density
    m1 = st.eps2 * fp.phi_t * s / (st.lorentz**2 * denominator)
    m2 = s * s / (st.lorentz * st.sound_speed * denominator)
    return m1, m2


@dataclass(frozen=True)
class FrozenBoundarySymbols:
    b: np.ndarray
    B: np.ndarray
    bold_B: np.ndarray
    bold_B_printed: np.ndarray
    m1: dict
    m2: dict
    beta: np.ndarray
    beta_full: np.ndarray


def _require_boundary(pair):
    if not pair.boundary:
        raise InvalidParameterError("the frozen pair does not sit on the boundary (pressure or front traces differ)")


def frozen_boundary_symbols(pair, f):
    _require_boundary(pair)
    plus, minus = pair.plus, pair.minus
    sp, sm = plus.state, minus.state
    phi_t = plus.phi_t
    b = np.array([[0.0, sp.v1 - sm.v1], [1.0, sp.v1], [0.0, 0.0]])

    def block(fp, sign):
        st = fp.state
        hg = st.enthalpy * st.lorentz
        return sign * np.array(
            [st.eps2 * phi_t / (st.particle_density * hg * st.lorentz), fp.varrho / hg, -fp.varsigma / hg]
        )

    row_plus, row_minus = block(plus, 1.0), block(minus, -1.0)
    B = np.zeros((3, 6))
    B[0, :3], B[0, 3:] = row_plus, row_minus
    B[1, :3] = row_plus
    B[2, 0], B[2, 3] = 1.0, -1.0

    R = np.zeros((6, 6))
    R[:3, :3] = plus.matrices.R
    R[3:, 3:] = minus.matrices.R
    bold_B = B @ R

    m1 = {side: _m_coefficients(pair.point(side))[0] for side in Side}
    m2 = {side: _m_coefficients(pair.point(side))[1] for side in Side}
    s_plus, s_minus = plus.front_norm, minus.front_norm
    mp_sum, mp_diff = m1[Side.PLUS] + m2[Side.PLUS], m1[Side.PLUS] - m2[Side.PLUS]
    mm_sum, mm_diff = m1[Side.MINUS] + m2[Side.MINUS], m1[Side.MINUS] - m2[Side.MINUS]
    printed = np.array(
        [
            [0.0, mp_sum, mp_diff, 0.0, -mm_sum, -mm_diff],
            [0.0, mp_sum, mp_diff, 0.0, 0.0, 0.0],
            [0.0, s_plus, s_plus, 0.0, -s_minus, -s_minus],
        ]
    )

    k = f.k
    a_plus, a_minus = pair.a_ring(f, Side.PLUS), pair.a_ring(f, Side.MINUS)
    Q = np.array([[0.0, 0.0, k], [a_plus, -1j * f.eta * (sp.v1 - sm.v1), 0.0]], dtype=complex) / k
    beta_full = Q @ bold_B
    return FrozenBoundarySymbols(
        b=b,
        B=B,
        bold_B=bold_B,
        bold_B_printed=printed,
        m1=m1,
        m2=m2,
        beta=beta_full[:, [1, 2, 4, 5]],
        beta_full=beta_full,
    )


def frozen_stable_vectors(pair, f):
    """E± of the reduced symbol, each multiplied through by its a_ring."""
    vectors = []
    for side in Side:
        fp = pair.point(side)
        symbol = frozen_interior_symbol(fp, f)
        eigen = frozen_eigen(fp, f)
        a, ar = symbol.a, symbol.a_ring
        if side is Side.PLUS:
            vectors.append(np.array([-ar * a[0, 1], ar * (a[0, 0] - eigen.omega), 0.0, 0.0], dtype=complex))
        else:
            vectors.append(np.array([0.0, 0.0, ar * (a[1, 1] - eigen.omega), -ar * a[1, 0]], dtype=complex))
    return tuple(vectors)


@dataclass(frozen=True)
class FrozenDelta:
    delta: complex
    delta_det: complex
    delta1: complex
    delta2: complex
    delta3: complex
    p_coefficients: Optional[np.ndarray] = None
    p_degree: Optional[int] = None
    fit_residual: Optional[float] = None
    roots: Optional[dict] = None
    all_roots: Optional[list] = None


def _delta_factors(pair, f):
    factors = {}
    for side in Side:
        fp = pair.point(side)
        symbol = frozen_interior_symbol(fp, f)
        factors[side] = (symbol, frozen_eigen(fp, f), _m_coefficients(fp), fp.front_norm)
    (sym_p, eig_p, (m1p, m2p), s_p) = factors[Side.PLUS]
    (sym_m, eig_m, (m1m, m2m), s_m) = factors[Side.MINUS]
    a_p, a_m = sym_p.a_ring, sym_m.a_ring
    minus_coefficient = sym_m.F2 + 2.0 * sym_m.F3
    d1 = sym_p.F2 * a_p / 2.0 - eig_p.omega_tilde
    d2 = minus_coefficient * a_m / 2.0 + eig_m.omega_tilde
    d3 = a_p * s_p * (2.0 * (m2m + m1m) / minus_coefficient) * a_p * eig_m.omega_tilde - a_m * s_m * (
        2.0 * (m2p - m1p) / sym_p.F2
    ) * a_m * eig_p.omega_tilde
    return complex(d1), complex(d2), complex(d3)


def _q_ring(pair, z):
    """(Q1, Q2) of the frozen pair at tau = i z, eta = 1."""
    f = Frequency(0.0, float(z), 1.0)
    values = {}
    for side in Side:
        fp = pair.point(side)
        symbol = frozen_interior_symbol(fp, f)
        values[side] = (symbol, frozen_eigen(fp, f), _m_coefficients(fp), fp.front_norm)
    (sym_p, eig_p, (m1p, m2p), s_p) = values[Side.PLUS]
    (sym_m, eig_m, (m1m, m2m), s_m) = values[Side.MINUS]
    cube = (1j) ** 3
    q1 = 2.0 * (m2m + m1m) / (sym_m.F2 + 2.0 * sym_m.F3) * s_p * sym_p.a_ring**2 * eig_m.omega_tilde / cube
    q2 = 2.0 * (m1p - m2p) / sym_p.F2 * s_m * sym_m.a_ring**2 * eig_p.omega_tilde / cube
    return q1, q2


def _p_ring(pair, z):
    """c^2 h^2 Gamma^2 (Q1^2 - Q2^2); only omega_tilde^2 enters, so no branch choice matters."""
    cfg = pair.sheet
    q1, q2 = _q_ring(pair, z)
    return (cfg.c_bar * cfg.h_bar * cfg.lorentz_bar) ** 2 * (q1 * q1 - q2 * q2)


def _fit_nodes(pair):
    cfg = pair.sheet
    _, c1, c2 = cfg.cbar_constants
    roots = root_polynomial(cfg)
    radius = 1.5 * max(cfg.v_bar, roots.z2 or 0.0, c2 + 1.0 / c1)
    nodes = radius * np.cos(np.pi * (2.0 * np.arange(FIT_NODES) + 1.0) / (2.0 * FIT_NODES))
    poles = [-pair.plus.state.v1, -pair.minus.state.v1]
    for i, z in enumerate(nodes):
        if min(abs(z - p) for p in poles) < 1e-3 * radius:
            nodes[i] = z + 1e-2 * radius
    return nodes, radius


def fit_p_ring(pair):
    """Coefficients of P_ring, lowest degree first, with the relative fit residual."""
    nodes, radius = _fit_nodes(pair)
    values = np.array([_p_ring(pair, z) for z in nodes])
    if np.max(np.abs(values.imag)) > 1e-8 * np.max(np.abs(values)):
        logger.warning("P_ring is not real on the real axis (max imag {0:.3e})".format(np.max(np.abs(values.imag))))
    scaled = np.polynomial.polynomial.polyfit(nodes / radius, values.real, FIT_DEGREE)
    coefficients = scaled / radius ** np.arange(FIT_DEGREE + 1)
    fitted = np.polynomial.polynomial.polyval(nodes, coefficients)
    residual = float(np.max(np.abs(fitted - values.real)) / np.max(np.abs(values.real)))
    if residual > config.fit_residual_tolerance:
        raise DegeneracyError(
            "P_ring polynomial fit residual {0:.3e} exceeds {1:.1e}".format(residual, config.fit_residual_tolerance)
        )
    return coefficients, residual


def _p_degree(coefficients):
    scale = np.max(np.abs(coefficients))
    degree = coefficients.size - 1
    while degree > 0 and abs(coefficients[degree]) <= LEADING_TRIM * scale:
        degree -= 1
    return degree


def frozen_delta(pair, f, with_roots=True):
    _require_boundary(pair)
    d1, d2, d3 = _delta_factors(pair, f)
    beta = frozen_boundary_symbols(pair, f).beta
    e_plus, e_minus = frozen_stable_vectors(pair, f)
    columns = np.column_stack([e_plus, e_minus])
    delta_det = complex(f.k * np.linalg.det(beta @ columns))
    report = dict(delta=d1 * d2 * d3, delta_det=delta_det, delta1=d1, delta2=d2, delta3=d3)
    if not with_roots:
        return FrozenDelta(**report)

    coefficients, residual = fit_p_ring(pair)
    degree = _p_degree(coefficients)
    all_roots = poly_roots(coefficients[: degree + 1][::-1])
    report.update(p_coefficients=coefficients, p_degree=degree, fit_residual=residual, all_roots=all_roots)

    roots = root_polynomial(pair.sheet)
    if roots.regime is Regime.WEAKLY_STABLE:
        real_roots = [z.real for z in all_roots if abs(z.imag) <= 1e-6 * max(1.0, abs(z))]
        matched = {}
        for label, target in (("-1", -roots.z1), ("0", 0.0), ("1", roots.z1)):
            if not real_roots:
                raise DegeneracyError("P_ring has no real roots to match")
            matched[label] = min(real_roots, key=lambda z: abs(z - target))
        report["roots"] = matched
    return FrozenDelta(**report)


@dataclass(frozen=True)
class CConstants:
    c0: float
    c1: float
    c2: float
    c2_fits: dict
    residual: float


def recover_c_constants(fp, eta=1.0, nodes=None):
    """Fit omega_tilde^2 = alpha tau^2 + beta tau + gamma0 and read off (C0, C1, C2).

    alpha = C0^2 C1^2, beta = ±2i C2 alpha and gamma0 = C0^2 - alpha C2^2;
    both signs of the C2 fit are reported.
    """
    nodes = np.array([0.3, 0.5 + 0.4j, 0.7 - 0.3j, 0.9 + 0.8j, 1.1 - 0.9j, 0.4 + 1.5j]) if nodes is None else nodes
    nodes = np.asarray(nodes, dtype=complex)
    values = np.array([_omega_tilde_sq(fp, tau, eta) for tau in nodes])
    design = np.column_stack([nodes**2, nodes * eta, np.full(nodes.size, eta * eta)])
    (alpha, beta, gamma0), *_ = np.linalg.lstsq(design, values, rcond=None)
    residual = float(np.max(np.abs(design @ np.array([alpha, beta, gamma0]) - values)) / np.max(np.abs(values)))

    fits = {sign: float((sign * beta / (2j * alpha)).real) for sign in (1, -1)}
    c2 = fits[int(fp.side)]
    c0_sq = (gamma0 + alpha * c2 * c2).real
    if not c0_sq > 0.0 or not alpha.real > 0.0:
        raise DegeneracyError("omega_tilde^2 does not have the expected quadratic form at this frozen point")
    c0 = math.sqrt(c0_sq)
    return CConstants(c0, math.sqrt(alpha.real / c0_sq), c2, fits, residual)


@dataclass(frozen=True)
class SeparationReport:
    critical: dict
    glancing: dict
    poles: dict
    min_distance: float


def critical_set_separation(pair, roots=None):
    """Distance in z = tau / (i eta) from the critical roots to the glancing and pole sets."""
    if roots is None:
        roots = frozen_delta(pair, Frequency(1.0, 0.0, 1.0)).roots
    if roots is None:
        raise InvalidParameterError("critical roots exist only for a weakly stable sheet")
    glancing, poles = {}, {}
    for side in Side:
        fp = pair.point(side)
        c = recover_c_constants(fp)
        alpha = c.c0**2 * c.c1**2
        beta = 2j * int(side) * c.c2 * alpha
        gamma0 = c.c0**2 - alpha * c.c2**2
        glancing[side] = [z.real for z in poly_roots([-alpha, 1j * beta, gamma0])]
        poles[side] = -fp.state.v1
    others = [z for side in Side for z in glancing[side]] + list(poles.values())
    distance = min(abs(q - z) for q in roots.values() for z in others)
    return SeparationReport(dict(roots), glancing, poles, float(distance))
