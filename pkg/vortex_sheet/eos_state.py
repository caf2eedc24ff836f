"""Barotropic closures, fluid states and the background vortex sheet.

The primary unknowns are U = (p, h w1, h w2) with w = Gamma v. Densities are
restricted to the open validity interval (rho_min, rho_max) of the pressure
law, velocities to eps |v| < 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Callable, Optional

import numpy as np
from scipy import integrate, optimize

from vortex_sheet.config import config
from vortex_sheet.exceptions import DomainError, EosViolationError, InvalidParameterError
from vortex_sheet.logger import logger

EOS_SAMPLE_POINTS = 64


class EosKind(str, enum.Enum):
    LINEAR = "linear"
    GAMMA_LAW = "gamma_law"
    CALLABLE = "callable"


class Regime(str, enum.Enum):
    WEAKLY_STABLE = "weakly_stable"
    TRANSITION = "transition"
    VIOLENTLY_UNSTABLE = "violently_unstable"


class Side(enum.IntEnum):
    PLUS = 1
    MINUS = -1

    @property
    def label(self):
        return "+" if self is Side.PLUS else "-"


@dataclass(frozen=True)
class FluidParams:
    epsilon: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.epsilon) or self.epsilon < 0.0:
            raise InvalidParameterError("epsilon must be finite and non-negative, got {0}".format(self.epsilon))

    @property
    def eps2(self):
        return self.epsilon * self.epsilon


@dataclass(frozen=True)
class Eos:
    """Barotropic pressure law p(rho) on (rho_min, rho_max).

    ``reference_density`` is the lower limit of the particle-density
    integral, so that N(reference_density) = 1.
    """

    kind: EosKind
    rho_min: float
    rho_max: float
    reference_density: float
    sigma: Optional[float] = None
    K: Optional[float] = None
    gamma: Optional[float] = None
    pressure_fn: Optional[Callable[[float], float]] = None
    dpressure_fn: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        if not (0.0 < self.rho_min < self.reference_density < self.rho_max):
            raise InvalidParameterError(
                "need 0 < rho_min < reference_density < rho_max, got ({0}, {1}, {2})".format(
                    self.rho_min, self.reference_density, self.rho_max
                )
            )
        if self.kind is EosKind.LINEAR and not (self.sigma is not None and self.sigma > 0.0):
            raise EosViolationError("linear eos needs sigma > 0")
        if self.kind is EosKind.GAMMA_LAW and not (
            self.K is not None and self.K > 0.0 and self.gamma is not None and self.gamma > 1.0
        ):
            raise EosViolationError("gamma-law eos needs K > 0 and gamma > 1")
        if self.kind is EosKind.CALLABLE and (self.pressure_fn is None or self.dpressure_fn is None):
            raise EosViolationError("callable eos needs both pressure_fn and dpressure_fn")

    @classmethod
    def linear(cls, sigma, reference_density=1.0, rho_min=1e-3, rho_max=1e3):
        return cls(EosKind.LINEAR, rho_min, rho_max, reference_density, sigma=sigma)

    @classmethod
    def gamma_law(cls, K, gamma, reference_density=1.0, rho_min=1e-3, rho_max=1e3):
        return cls(EosKind.GAMMA_LAW, rho_min, rho_max, reference_density, K=K, gamma=gamma)

    @classmethod
    def from_callable(cls, pressure_fn, dpressure_fn, reference_density=1.0, rho_min=1e-3, rho_max=1e3):
        return cls(
            EosKind.CALLABLE,
            rho_min,
            rho_max,
            reference_density,
            pressure_fn=pressure_fn,
            dpressure_fn=dpressure_fn,
        )

    def pressure(self, rho):
        if self.kind is EosKind.LINEAR:
            return self.sigma * rho
        if self.kind is EosKind.GAMMA_LAW:
            return self.K * np.power(rho, self.gamma)
        return self.pressure_fn(rho)

    def dpressure(self, rho):
        if self.kind is EosKind.LINEAR:
            return self.sigma * np.ones_like(rho) if isinstance(rho, np.ndarray) else self.sigma
        if self.kind is EosKind.GAMMA_LAW:
            return self.K * self.gamma * np.power(rho, self.gamma - 1.0)
        return self.dpressure_fn(rho)

    def contains(self, rho):
        return self.rho_min < rho < self.rho_max

    def with_sound_speed(self, c_bar):
        """Return a copy whose sound speed at the reference density is ``c_bar``."""
        if c_bar <= 0.0:
            raise InvalidParameterError("sound speed must be positive, got {0}".format(c_bar))
        if self.kind is EosKind.LINEAR:
            return replace(self, sigma=c_bar * c_bar)
        if self.kind is EosKind.GAMMA_LAW:
            return replace(self, K=c_bar * c_bar / (self.gamma * self.reference_density ** (self.gamma - 1.0)))
        raise InvalidParameterError("cannot rescale the sound speed of a callable eos")

    def validate(self, params):
        """Check p > 0 and 0 < p' < eps^-2 on a log-spaced sample of the interval."""
        rho = np.geomspace(self.rho_min, self.rho_max, EOS_SAMPLE_POINTS + 2)[1:-1]
        p = np.asarray([self.pressure(r) for r in rho], dtype=float)
        dp = np.asarray([self.dpressure(r) for r in rho], dtype=float)
        bad = np.flatnonzero(~(p > 0.0))
        if bad.size:
            raise EosViolationError("pressure must be positive, fails at rho={0}".format(rho[bad[0]]))
        bad = np.flatnonzero(~(dp > 0.0) | ~(params.eps2 * dp < 1.0))
        if bad.size:
            raise EosViolationError(
                "need 0 < p'(rho) < eps^-2, fails at rho={0} with p'={1}".format(rho[bad[0]], dp[bad[0]])
            )


@dataclass(frozen=True)
class PrimState:
    rho: float
    v1: float
    v2: float

    @property
    def speed_sq(self):
        return self.v1 * self.v1 + self.v2 * self.v2


@dataclass(frozen=True)
class UState:
    p: float
    hw1: float
    hw2: float

    def as_array(self):
        return np.array([self.p, self.hw1, self.hw2], dtype=float)

    @classmethod
    def from_array(cls, values):
        return cls(float(values[0]), float(values[1]), float(values[2]))


@dataclass(frozen=True)
class LocalState:
    """Every pointwise quantity the coefficient matrices are assembled from."""

    rho: float
    p: float
    v1: float
    v2: float
    lorentz: float
    particle_density: float
    sound_speed: float
    enthalpy: float
    epsilon: float

    @property
    def speed_sq(self):
        return self.v1 * self.v1 + self.v2 * self.v2

    @property
    def eps2(self):
        return self.epsilon * self.epsilon

    @property
    def velocity(self):
        return np.array([self.v1, self.v2])


def _check_density(eos, rho):
    if not eos.contains(rho):
        raise DomainError("density {0} outside the validity interval ({1}, {2})".format(rho, eos.rho_min, eos.rho_max))


def particle_density(eos, params, rho):
    """N(rho) = exp(int_{rho_bar}^{rho} ds / (s + eps^2 p(s)))."""
    _check_density(eos, rho)
    rho_bar = eos.reference_density
    eps2 = params.eps2
    if eps2 == 0.0:
        return rho / rho_bar
    if eos.kind is EosKind.LINEAR:
        return (rho / rho_bar) ** (1.0 / (1.0 + eps2 * eos.sigma))
    if eos.kind is EosKind.GAMMA_LAW:
        g1 = eos.gamma - 1.0
        ratio = (1.0 + eps2 * eos.K * rho**g1) / (1.0 + eps2 * eos.K * rho_bar**g1)
        return (rho / rho_bar) * ratio ** (-1.0 / g1)
    value, abserr = integrate.quad(
        lambda s: 1.0 / (s + eps2 * eos.pressure(s)),
        rho_bar,
        rho,
        epsabs=config.quad_abs_tolerance,
        epsrel=1e-12,
        limit=200,
    )
    logger.debug("particle density quadrature at rho={0}: {1} (err {2})".format(rho, value, abserr))
    return math.exp(value)


def sound_speed(eos, rho, params=None):
    """c(rho) = sqrt(p'(rho)).

    Without ``params`` only 0 < p' is enforced, which is the Newtonian bound.
    The relativistic bound p' < eps^-2 then holds only once a SheetConfig
    built on the result validates the equation of state against its params.
    """
    _check_density(eos, rho)
    dp = float(eos.dpressure(rho))
    eps2 = params.eps2 if params is not None else 0.0
    if not dp > 0.0 or not eps2 * dp < 1.0:
        raise EosViolationError("p'({0}) = {1} violates 0 < p' < eps^-2".format(rho, dp))
    return math.sqrt(dp)


def enthalpy_ratio(eos, params, rho):
    """h = (rho + eps^2 p) / N."""
    return (rho + params.eps2 * float(eos.pressure(rho))) / particle_density(eos, params, rho)


def invert_pressure(eos, p):
    p_low = float(eos.pressure(eos.rho_min))
    p_high = float(eos.pressure(eos.rho_max))
    if not p_low < p < p_high:
        raise DomainError("pressure {0} is not invertible on ({1}, {2})".format(p, p_low, p_high))
    if eos.kind is EosKind.LINEAR:
        return p / eos.sigma
    if eos.kind is EosKind.GAMMA_LAW:
        return (p / eos.K) ** (1.0 / eos.gamma)
    return optimize.bisect(
        lambda rho: float(eos.pressure(rho)) - p,
        eos.rho_min,
        eos.rho_max,
        rtol=config.inversion_rel_tolerance,
        maxiter=400,
    )


def lorentz_factor(params, v1, v2):
    speed2 = params.eps2 * (v1 * v1 + v2 * v2)
    if not speed2 < 1.0:
        raise InvalidParameterError("velocity exceeds light speed (eps|v| = {0})".format(math.sqrt(speed2)))
    return 1.0 / math.sqrt(1.0 - speed2)


def prim_to_u(eos, params, s):
    _check_density(eos, s.rho)
    lorentz = lorentz_factor(params, s.v1, s.v2)
    h = enthalpy_ratio(eos, params, s.rho)
    return UState(float(eos.pressure(s.rho)), h * lorentz * s.v1, h * lorentz * s.v2)


def u_to_prim(eos, params, u):
    rho = invert_pressure(eos, u.p)
    h = enthalpy_ratio(eos, params, rho)
    lorentz = math.sqrt(h * h + params.eps2 * (u.hw1 * u.hw1 + u.hw2 * u.hw2)) / h
    return PrimState(rho, u.hw1 / (lorentz * h), u.hw2 / (lorentz * h))


def local_state(eos, params, u):
    s = u_to_prim(eos, params, u)
    return state_from_prim(eos, params, s)


def state_from_prim(eos, params, s):
    _check_density(eos, s.rho)
    return LocalState(
        rho=s.rho,
        p=float(eos.pressure(s.rho)),
        v1=s.v1,
        v2=s.v2,
        lorentz=lorentz_factor(params, s.v1, s.v2),
        particle_density=particle_density(eos, params, s.rho),
        sound_speed=sound_speed(eos, s.rho, params),
        enthalpy=enthalpy_ratio(eos, params, s.rho),
        epsilon=params.epsilon,
    )


def critical_mach(epsilon, c_bar):
    return math.sqrt(2.0) / math.sqrt(1.0 + (epsilon * c_bar) ** 2)


def random_prim_states(eos, params, rng, count, speed_scale=1.0):
    """Admissible states for property sampling.

    Densities are log-uniform on [rho_ref/4, 4 rho_ref] clipped to the
    validity interval; speeds are uniform below 0.95/eps, or below
    3 speed_scale in the Newtonian limit.
    """
    rho_ref = eos.reference_density
    low = max(rho_ref / 4.0, eos.rho_min * 1.01)
    high = min(rho_ref * 4.0, eos.rho_max * 0.99)
    top_speed = 0.95 / params.epsilon if params.epsilon > 0.0 else 3.0 * speed_scale
    states = []
    for _ in range(count):
        rho = float(np.exp(rng.uniform(math.log(low), math.log(high))))
        speed = float(rng.uniform(0.0, top_speed))
        angle = float(rng.uniform(0.0, 2.0 * math.pi))
        states.append(PrimState(rho, speed * math.cos(angle), speed * math.sin(angle)))
    return states


@dataclass(frozen=True)
class SheetConfig:
    """Background vortex sheet U = (p_bar, +-h_bar w_bar, 0) on either side of x2 = 0."""

    eos: Eos
    params: FluidParams
    rho_bar: float
    v_bar: float

    def __post_init__(self):
        if not math.isclose(self.rho_bar, self.eos.reference_density, rel_tol=1e-14):
            raise InvalidParameterError(
                "rho_bar={0} must equal the eos reference density {1} so that N(rho_bar) = 1".format(
                    self.rho_bar, self.eos.reference_density
                )
            )
        _check_density(self.eos, self.rho_bar)
        if not (math.isfinite(self.v_bar) and self.v_bar > 0.0):
            raise InvalidParameterError("v_bar must be positive, got {0}".format(self.v_bar))
        if not self.params.epsilon * self.v_bar < 1.0:
            raise InvalidParameterError(
                "velocity exceeds light speed (eps*v_bar = {0})".format(self.params.epsilon * self.v_bar)
            )
        self.eos.validate(self.params)

    @classmethod
    def from_mach(cls, eos, params, rho_bar, mach):
        c_bar = sound_speed(eos, rho_bar, params)
        return cls(eos, params, rho_bar, mach * c_bar)

    @property
    def epsilon(self):
        return self.params.epsilon

    @property
    def eps2(self):
        return self.params.eps2

    @cached_property
    def c_bar(self):
        return sound_speed(self.eos, self.rho_bar, self.params)

    @cached_property
    def lorentz_bar(self):
        return 1.0 / math.sqrt(1.0 - self.eps2 * self.v_bar**2)

    @property
    def w_bar(self):
        return self.lorentz_bar * self.v_bar

    @cached_property
    def h_bar(self):
        return enthalpy_ratio(self.eos, self.params, self.rho_bar)

    @cached_property
    def p_bar(self):
        return float(self.eos.pressure(self.rho_bar))

    @property
    def mach(self):
        return self.v_bar / self.c_bar

    @property
    def critical_mach(self):
        return critical_mach(self.epsilon, self.c_bar)

    def u_bar(self, side):
        return UState(self.p_bar, int(side) * self.h_bar * self.w_bar, 0.0)

    def state(self, side):
        """LocalState of the background on ``side``."""
        return state_from_prim(self.eos, self.params, PrimState(self.rho_bar, int(side) * self.v_bar, 0.0))

    @cached_property
    def cbar_constants(self):
        """(C0, C1, C2) of the constant-coefficient eigenvalue formula."""
        eps2, c, v = self.eps2, self.c_bar, self.v_bar
        k2 = 1.0 - eps2 * eps2 * c * c * v * v
        c0 = self.lorentz_bar * (1.0 - eps2 * v * v) / math.sqrt(k2)
        c1 = k2 / ((1.0 - eps2 * v * v) * c)
        c2 = (1.0 - eps2 * c * c) * v / k2
        return c0, c1, c2


@dataclass(frozen=True)
class ThresholdReport:
    regime: Regime
    mach: float
    critical_mach: float


def classify_threshold(cfg, tie_tolerance=None):
    tol = config.tie_tolerance if tie_tolerance is None else tie_tolerance
    mach, mach_c = cfg.mach, cfg.critical_mach
    if abs(mach - mach_c) <= tol * mach_c:
        regime = Regime.TRANSITION
    elif mach > mach_c:
        regime = Regime.WEAKLY_STABLE
    else:
        regime = Regime.VIOLENTLY_UNSTABLE
    return ThresholdReport(regime, mach, mach_c)
