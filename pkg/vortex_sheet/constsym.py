"""Frequency-space symbols of the problem linearized about the background sheet.

All symbols are homogeneous in (tau, eta): b, theta and the interior symbol
have degree 1, Q and beta degree 0. Every function accepts unnormalized
frequencies.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from vortex_sheet.config import config
from vortex_sheet.eos_state import Side
from vortex_sheet.exceptions import DomainError, InvalidParameterError, PoleError
from vortex_sheet.symmetrization import printed_cal_matrices


@dataclass(frozen=True)
class Frequency:
    """Boundary frequency (gamma, delta, eta) with tau = gamma + i delta."""

    gamma: float
    delta: float
    eta: float
    normalized: bool = False

    def __post_init__(self):
        if not self.gamma >= 0.0:
            raise InvalidParameterError("gamma must be non-negative, got {0}".format(self.gamma))
        if self.gamma == 0.0 and self.delta == 0.0 and self.eta == 0.0:
            raise DomainError("the zero frequency has no symbol")
        if self.normalized and not math.isclose(self.k, 1.0, rel_tol=1e-12):
            raise InvalidParameterError("frequency flagged normalized but |tau|^2 + eta^2 = {0}".format(self.k**2))

    @classmethod
    def from_tau(cls, tau, eta):
        tau = complex(tau)
        return cls(tau.real, tau.imag, float(eta))

    @property
    def tau(self):
        return complex(self.gamma, self.delta)

    @property
    def k(self):
        return math.sqrt(self.gamma**2 + self.delta**2 + self.eta**2)

    def normalize(self):
        k = self.k
        return Frequency(self.gamma / k, self.delta / k, self.eta / k, normalized=True)

    def scaled(self, s):
        return Frequency(s * self.gamma, s * self.delta, s * self.eta)


def random_frequencies(rng, count, gamma_min=0.0, gamma_max=1.0):
    """Points of the hemisphere with gamma uniform on [gamma_min, gamma_max]."""
    if not 0.0 <= gamma_min <= gamma_max <= 1.0:
        raise InvalidParameterError("need 0 <= gamma_min <= gamma_max <= 1")
    points = []
    for _ in range(count):
        gamma = float(rng.uniform(gamma_min, gamma_max))
        radius = math.sqrt(max(1.0 - gamma * gamma, 0.0))
        angle = float(rng.uniform(0.0, 2.0 * math.pi))
        points.append(Frequency(gamma, radius * math.cos(angle), radius * math.sin(angle)))
    return points


def _signs(side):
    return 1.0 if Side(side) is Side.PLUS else -1.0


def _a(cfg, tau, eta, side):
    """a± = tau ± i v_bar eta."""
    return tau + 1j * _signs(side) * cfg.v_bar * eta


@dataclass(frozen=True)
class BoundarySymbols:
    b: np.ndarray
    Q: np.ndarray
    theta: float
    beta: np.ndarray
    ell: np.ndarray
    m_ubar: np.ndarray


def boundary_matrix(cfg):
    """B_bar acting on (W2+, W3+, W2-, W3-)."""
    g = 1.0 / (cfg.lorentz_bar * cfg.c_bar * cfg.h_bar)
    return np.array(
        [
            [g, -g, -g, g],
            [g, -g, 0.0, 0.0],
            [1.0, 1.0, -1.0, -1.0],
        ],
        dtype=complex,
    )


def boundary_symbols(cfg, f):
    tau, eta, k = f.tau, f.eta, f.k
    v = cfg.v_bar
    a_plus = tau + 1j * v * eta
    b = np.array([2j * v * eta, a_plus, 0.0], dtype=complex)
    Q = (
        np.array(
            [
                [0.0, 0.0, k],
                [a_plus, -2j * v * eta, 0.0],
                [-2j * v * eta, tau.conjugate() - 1j * v * eta, 0.0],
            ],
            dtype=complex,
        )
        / k
    )
    theta = float(np.vdot(b, b).real) / k
    m_ubar = boundary_matrix(cfg)
    qb = Q @ m_ubar
    return BoundarySymbols(b=b, Q=Q, theta=theta, beta=qb[:2], ell=qb[2], m_ubar=m_ubar)


@dataclass(frozen=True)
class SymbolBundle:
    A: np.ndarray
    mu_plus: complex
    mu_minus: complex
    m_plus: complex
    m_minus: complex
    omega_plus: complex
    omega_minus: complex
    E_plus: np.ndarray
    E_minus: np.ndarray
    beta: np.ndarray
    cbar: tuple


def _check_pole(cfg, f, tau, eta):
    guard = config.pole_guard * f.k
    for side in Side:
        if abs(_a(cfg, tau, eta, side)) < guard:
            raise PoleError("tau {0} i v_bar eta is a pole of the interior symbol".format(side.label), side=side)


def _mu_m(cfg, tau, eta, side):
    sign = _signs(side)
    a = _a(cfg, tau, eta, side)
    am = cfg.c_bar * cfg.lorentz_bar * (1j * eta + sign * cfg.eps2 * cfg.v_bar * tau) ** 2 / 2.0
    m = am / a
    mu = cfg.lorentz_bar * a / cfg.c_bar - m
    return mu, m


def interior_symbol(cfg, f):
    tau, eta = f.tau, f.eta
    _check_pole(cfg, f, tau, eta)
    mu_p, m_p = _mu_m(cfg, tau, eta, Side.PLUS)
    mu_m, m_m = _mu_m(cfg, tau, eta, Side.MINUS)
    A = np.array(
        [
            [mu_p, -m_p, 0.0, 0.0],
            [m_p, -mu_p, 0.0, 0.0],
            [0.0, 0.0, -mu_m, m_m],
            [0.0, 0.0, -m_m, mu_m],
        ],
        dtype=complex,
    )
    e_plus, e_minus = stable_vectors(cfg, f)
    return SymbolBundle(
        A=A,
        mu_plus=mu_p,
        mu_minus=mu_m,
        m_plus=m_p,
        m_minus=m_m,
        omega_plus=omega(cfg, f, Side.PLUS),
        omega_minus=omega(cfg, f, Side.MINUS),
        E_plus=e_plus,
        E_minus=e_minus,
        beta=boundary_symbols(cfg, f).beta,
        cbar=cfg.cbar_constants,
    )


def omega_values(cfg, tau, eta, side):
    """Vectorized omega±(tau, eta); entries with Re tau == 0 use the boundary extension."""
    c0, c1, c2 = cfg.cbar_constants
    sign = _signs(side)
    tau = np.asarray(tau, dtype=complex)
    eta = np.asarray(eta, dtype=float)

    s = np.sqrt(c1**2 * (tau + 1j * sign * c2 * eta) ** 2 + eta**2)
    interior = np.where(s.real > 0.0, -c0 * s, c0 * s)

    x = tau.imag + sign * c2 * eta
    gap = eta**2 - c1**2 * x**2
    real_branch = -c0 * np.sqrt(np.maximum(gap, 0.0))
    imag_branch = -1j * np.sign(x) * c0 * np.sqrt(np.maximum(-gap, 0.0))
    boundary = np.where(gap >= 0.0, real_branch, imag_branch)

    return np.where(tau.real > 0.0, interior, boundary)


def omega(cfg, f, side):
    return complex(omega_values(cfg, f.tau, f.eta, side))


def glancing_points(cfg, eta):
    """Values of tau where omega± vanishes, keyed by side."""
    _, c1, c2 = cfg.cbar_constants
    return {
        Side.PLUS: (1j * (-c2 - 1.0 / c1) * eta, 1j * (-c2 + 1.0 / c1) * eta),
        Side.MINUS: (1j * (c2 - 1.0 / c1) * eta, 1j * (c2 + 1.0 / c1) * eta),
    }


def glancing_flags(cfg, tau, eta, side, tolerance=1e-8):
    """True where |eta^2 - C1^2 (delta ± C2 eta)^2| is within tolerance * k^2 on Re tau = 0."""
    _, c1, c2 = cfg.cbar_constants
    tau = np.asarray(tau, dtype=complex)
    eta = np.asarray(eta, dtype=float)
    x = tau.imag + _signs(side) * c2 * eta
    k2 = np.abs(tau) ** 2 + eta**2
    return (tau.real == 0.0) & (np.abs(eta**2 - c1**2 * x**2) <= tolerance * k2)


def pole_limit_first_component(cfg, eta):
    """(tau + i v eta) m+ at tau = -i v eta."""
    return -cfg.c_bar * eta**2 * (1.0 - cfg.eps2 * cfg.v_bar**2) / (2.0 * cfg.lorentz_bar)


def _stable_products(cfg, tau, eta, side, om):
    """(a m, a (mu - omega)) written without the 1/a pole."""
    sign = _signs(side)
    a = _a(cfg, tau, eta, side)
    am = cfg.c_bar * cfg.lorentz_bar * (1j * eta + sign * cfg.eps2 * cfg.v_bar * tau) ** 2 / 2.0
    a_mu_omega = cfg.lorentz_bar * a * a / cfg.c_bar - a * om - am
    return am, a_mu_omega


def stable_vectors(cfg, f):
    tau, eta = f.tau, f.eta
    am_p, amo_p = _stable_products(cfg, tau, eta, Side.PLUS, omega(cfg, f, Side.PLUS))
    am_m, amo_m = _stable_products(cfg, tau, eta, Side.MINUS, omega(cfg, f, Side.MINUS))
    e_plus = np.array([am_p, amo_p, 0.0, 0.0], dtype=complex)
    e_minus = np.array([0.0, 0.0, amo_m, am_m], dtype=complex)
    return e_plus, e_minus


@dataclass(frozen=True)
class Triangularization:
    T: np.ndarray
    diagonal: tuple
    z_plus: complex
    z_minus: complex
    completion_plus: str
    completion_minus: str
    ambiguous: bool = False
    note: Optional[str] = None


def triangularize(cfg, f):
    """T = (E+, Y+, E-, Y-) with T^-1 A T block upper triangular.

    Y is e2 (e3) when |a m| >= |a (mu - omega)|, otherwise e1 (e4); the
    off-diagonal entry is -1/a for the former and m / (a (mu - omega)) for
    the latter.
    """
    tau, eta = f.tau, f.eta
    _check_pole(cfg, f, tau, eta)
    e_plus, e_minus = stable_vectors(cfg, f)
    om_p, om_m = omega(cfg, f, Side.PLUS), omega(cfg, f, Side.MINUS)
    T = np.zeros((4, 4), dtype=complex)
    T[:, 0] = e_plus
    T[:, 2] = e_minus

    z = {}
    choices = {}
    ambiguous = False
    for side, (col, first, second) in ((Side.PLUS, (1, 1, 0)), (Side.MINUS, (3, 2, 3))):
        a = _a(cfg, tau, eta, side)
        am, amo = _stable_products(cfg, tau, eta, side, om_p if side is Side.PLUS else om_m)
        if max(abs(am), abs(amo)) <= 1e-12 * max(1.0, f.k) ** 2:
            ambiguous = True
        if abs(am) >= abs(amo):
            T[first, col] = 1.0
            z[side] = -1.0 / a
            choices[side] = "e{0}".format(first + 1)
        else:
            T[second, col] = 1.0
            z[side] = am / (a * amo)
            choices[side] = "e{0}".format(second + 1)

    note = None
    if ambiguous:
        note = "both completion criteria are near zero; picked the larger magnitude"
    return Triangularization(
        T=T,
        diagonal=(om_p, -om_p, om_m, -om_m),
        z_plus=z[Side.PLUS],
        z_minus=z[Side.MINUS],
        completion_plus=choices[Side.PLUS],
        completion_minus=choices[Side.MINUS],
        ambiguous=ambiguous,
        note=note,
    )


def cal_symbol(cfg, f, side):
    """tau calA0± + i eta calA1± with the closed-form background matrices."""
    cal0, cal1, _ = printed_cal_matrices(cfg, side)
    return f.tau * cal0 + 1j * f.eta * cal1
