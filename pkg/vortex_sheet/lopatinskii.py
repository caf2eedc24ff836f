"""Lopatinskii determinant of the constant-coefficient problem and its roots.

Delta is the product

    (1/(c^2 h)) (a+ - c omega+/Gamma) (a- - c omega-/Gamma) (omega- a+^2 + omega+ a-^2)

with a± = tau ± i v eta, homogeneous of degree 5 in (tau, eta). On the
imaginary axis tau = i z eta its zeros are those of Q1 + Q2, and
Q1^2 - Q2^2 is a multiple of the polynomial P(z) = -4 v z P0(z).
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial
from scipy import optimize, stats

from vortex_sheet.config import config
from vortex_sheet.constsym import Frequency, boundary_symbols, omega_values, stable_vectors
from vortex_sheet.engine.engine import run_jobs
from vortex_sheet.engine.job import Job
from vortex_sheet.eos_state import FluidParams, Regime, SheetConfig, Side, classify_threshold
from vortex_sheet.exceptions import ConvergenceError, InvalidParameterError, VerificationError
from vortex_sheet.logger import logger

RICHARDSON_STEPS = (1e-3, 5e-4, 2.5e-4)
IMAGINARY_TOLERANCE = 1e-9


def delta_factor_values(cfg, tau, eta):
    """The three factors of Delta, vectorized over tau and eta."""
    tau = np.asarray(tau, dtype=complex)
    eta = np.asarray(eta, dtype=float)
    a_plus = tau + 1j * cfg.v_bar * eta
    a_minus = tau - 1j * cfg.v_bar * eta
    w_plus = omega_values(cfg, tau, eta, Side.PLUS)
    w_minus = omega_values(cfg, tau, eta, Side.MINUS)
    ratio = cfg.c_bar / cfg.lorentz_bar
    return (
        a_plus - ratio * w_plus,
        a_minus - ratio * w_minus,
        w_minus * a_plus**2 + w_plus * a_minus**2,
    )


def delta_values(cfg, tau, eta):
    f1, f2, f3 = delta_factor_values(cfg, tau, eta)
    return f1 * f2 * f3 / (cfg.c_bar**2 * cfg.h_bar)


def delta(cfg, f):
    return complex(delta_values(cfg, f.tau, f.eta))


def delta_factors(cfg, f):
    return tuple(complex(x) for x in delta_factor_values(cfg, f.tau, f.eta))


def delta_via_det(cfg, f):
    """k det[beta (E+ E-)]; beta is degree 0 and E± degree 2, so this equals Delta."""
    beta = boundary_symbols(cfg, f).beta
    e_plus, e_minus = stable_vectors(cfg, f)
    return complex(f.k * np.linalg.det(beta @ np.column_stack([e_plus, e_minus])))


@dataclass(frozen=True)
class RootPoly:
    E1: float
    E2: float
    E3: float
    D: float
    D_closed: float
    z1sq: float
    z2sq: float
    z1: Optional[float]
    z2: Optional[float]
    z1_continued: complex
    regime: Regime

    @property
    def p0(self):
        return Polynomial([self.E3, 0.0, self.E2, 0.0, self.E1])

    @property
    def discriminant_mismatch(self):
        return abs(self.D - self.D_closed) / max(abs(self.D_closed), 1e-300)


def root_polynomial(cfg):
    e2, c2, v = cfg.eps2, cfg.c_bar**2, cfg.v_bar
    v2 = v * v
    E1 = 2.0 * e2 * e2 * c2 * v2 - e2 * c2 - 1.0
    E2 = 2.0 * e2 * e2 * c2 * v2 * v2 - 6.0 * e2 * c2 * v2 + 2.0 * v2 + 2.0 * c2
    E3 = 2.0 * c2 * v2 - e2 * c2 * v2 * v2 - v2 * v2
    D = E2 * E2 - 4.0 * E1 * E3
    ev = cfg.epsilon * v
    quartic = e2 * e2 * c2 * c2 * v2 * v2 - 2.0 * e2 * c2 * v2 + 4.0 * v2 + c2
    D_closed = 4.0 * c2 * (ev - 1.0) ** 2 * (ev + 1.0) ** 2 * quartic

    root_d = math.sqrt(max(D, 0.0))
    z1sq = (E2 - root_d) / (-2.0 * E1)
    z2sq = (E2 + root_d) / (-2.0 * E1)
    regime = classify_threshold(cfg).regime
    z2 = math.sqrt(z2sq) if z2sq > 0.0 else None
    if regime is Regime.WEAKLY_STABLE:
        z1 = math.sqrt(max(z1sq, 0.0))
    elif regime is Regime.TRANSITION:
        z1 = 0.0
    else:
        z1 = None
    return RootPoly(E1, E2, E3, D, D_closed, z1sq, z2sq, z1, z2, complex(np.sqrt(complex(z1sq))), regime)


def p_polynomials(cfg):
    """P1, P2, P = P1 - P2 and P0 as numpy Polynomials in z."""
    e2, c2, v = cfg.eps2, cfg.c_bar**2, cfg.v_bar
    z_plus = Polynomial([v, 1.0])
    z_minus = Polynomial([-v, 1.0])
    p1 = z_plus**4 * (z_minus**2 - c2 * Polynomial([1.0, -e2 * v]) ** 2)
    p2 = z_minus**4 * (z_plus**2 - c2 * Polynomial([1.0, e2 * v]) ** 2)
    return {"P1": p1, "P2": p2, "P": p1 - p2, "P0": root_polynomial(cfg).p0}


def q_functions(cfg, z, eta=1.0):
    """Q1 = Omega-(z + v)^2 and Q2 = Omega+(z - v)^2 with Omega = omega / (i eta) at tau = i z eta."""
    z = np.asarray(z, dtype=float)
    tau = 1j * z * eta
    big_plus = omega_values(cfg, tau, eta, Side.PLUS) / (1j * eta)
    big_minus = omega_values(cfg, tau, eta, Side.MINUS) / (1j * eta)
    return big_minus * (z + cfg.v_bar) ** 2, big_plus * (z - cfg.v_bar) ** 2


@dataclass
class OrderingReport:
    links: list = field(default_factory=list)

    @property
    def failures(self):
        return [name for name, slack, holds in self.links if not holds]

    @property
    def passed(self):
        return not self.failures

    @property
    def min_slack(self):
        return min(slack for _, slack, _ in self.links)

    def raise_for_failure(self):
        if self.failures:
            raise VerificationError("ordering link(s) violated: {0}".format(", ".join(self.failures)), "orderings")


def verify_orderings(cfg):
    """0 < z1 < C2 - 1/C1 < C2 < v < C2 + 1/C1 < z2, z1 + C2 > 1/C1, z1 - C2 < -1/C1."""
    roots = root_polynomial(cfg)
    if roots.regime is not Regime.WEAKLY_STABLE:
        raise InvalidParameterError("root orderings need a weakly stable sheet (M > M_c)")
    _, c1, c2 = cfg.cbar_constants
    inv = 1.0 / c1
    z1, z2, v = roots.z1, roots.z2, cfg.v_bar

    report = OrderingReport()

    def link(name, slack, strict=True):
        report.links.append((name, slack, slack > 0.0 if strict else slack >= -1e-15 * v))

    link("0 < z1", z1)
    link("z1 < C2 - 1/C1", c2 - inv - z1)
    link("C2 - 1/C1 < C2", inv)
    # C2 == v exactly in the Newtonian limit
    link("C2 < v_bar", v - c2, strict=cfg.epsilon > 0.0)
    link("v_bar < C2 + 1/C1", c2 + inv - v)
    link("z2 > C2 + 1/C1", z2 - c2 - inv)
    link("z1 + C2 > 1/C1", z1 + c2 - inv)
    link("z1 - C2 < -1/C1", c2 - inv - z1)
    return report


def _richardson(g, steps):
    first = [2.0 * g(steps[i + 1]) - g(steps[i]) for i in range(len(steps) - 1)]
    return (4.0 * first[1] - first[0]) / 3.0, first[1]


@dataclass(frozen=True)
class SimplicityReport:
    q: float
    h_q: complex
    h_imag_ratio: float
    derivative_formula: complex
    derivative_fd: complex
    scale: float

    @property
    def derivative_agreement(self):
        return abs(self.derivative_formula - self.derivative_fd) / abs(self.derivative_formula)

    @property
    def passed(self):
        return abs(self.h_q) > 1e-8 * self.scale and self.derivative_agreement < 1e-6 and self.h_imag_ratio < 1e-8


def root_simplicity(cfg, q, eta=1.0):
    """h_q = lim Delta(tau, eta) / (tau - i q eta), taken along tau = i q eta + t, t > 0."""
    roots = root_polynomial(cfg)
    if roots.regime is not Regime.WEAKLY_STABLE:
        raise InvalidParameterError("root simplicity needs a weakly stable sheet (M > M_c)")
    k = math.hypot(q * eta, eta)
    steps = [s * k for s in RICHARDSON_STEPS]

    def quotient(t):
        return delta(cfg, Frequency(t, q * eta, eta)) / t

    h_q, previous = _richardson(quotient, steps)
    if abs(h_q - previous) > 1e-4 * abs(h_q):
        raise ConvergenceError(
            "Richardson extrapolation of h_q did not settle at q={0}".format(q),
            data={"estimates": [h_q, previous], "steps": steps},
        )

    offset = 1e-3 * k
    on_axis = delta(cfg, Frequency(0.0, q * eta + offset, eta)) / (1j * offset)
    imag_ratio = abs(on_axis.imag) / abs(on_axis)

    poly = roots.p0
    lorentz2, c2, v = cfg.lorentz_bar**2, cfg.c_bar**2, cfg.v_bar
    q1, _ = q_functions(cfg, q)
    formula = (lorentz2 / (c2 * complex(q1))) * (
        -2.0 * v * poly(q) - 4.0 * v * q * q * (2.0 * roots.E1 * q * q + roots.E2)
    )
    h = 1e-6
    ahead = sum(q_functions(cfg, q + h))
    behind = sum(q_functions(cfg, q - h))
    fd = complex((ahead - behind) / (2.0 * h))

    scale = k**4 / (cfg.c_bar**2 * cfg.h_bar)
    return SimplicityReport(q, complex(h_q), imag_ratio, complex(formula), fd, scale)


def imaginary_axis_residual(cfg, q, eta=1.0, width=0.05, samples=20):
    """max |Re Delta| / |Delta| on tau = i delta near the ray delta = q eta."""
    _, c1, c2 = cfg.cbar_constants
    k = math.hypot(q * eta, eta)
    offsets = np.linspace(-width, width, samples + 1) * k
    offsets = offsets[offsets != 0.0]
    deltas = q * eta + offsets
    mask = (np.abs(deltas + c2 * eta) > abs(eta) / c1) & (np.abs(deltas - c2 * eta) > abs(eta) / c1)
    if not mask.any():
        raise InvalidParameterError("no sample near q={0} has both omega purely imaginary".format(q))
    values = delta_values(cfg, 1j * deltas[mask], eta)
    return float(np.max(np.abs(values.real) / np.abs(values)))


@dataclass(frozen=True)
class GrowthReport:
    q: float
    slope: float
    intercept: float
    r2: float

    @property
    def passed(self):
        return self.slope > 0.0 and self.r2 > 0.999


def gamma_growth(cfg, q, eta=1.0, gammas=None):
    """Fit |Delta(gamma + i q eta, eta)| against gamma; it grows linearly off a simple root."""
    gammas = np.logspace(-6, -3, 16) if gammas is None else np.asarray(gammas, dtype=float)
    values = np.abs(delta_values(cfg, gammas + 1j * q * eta, eta))
    fit = stats.linregress(gammas, values)
    return GrowthReport(q, float(fit.slope), float(fit.intercept), float(fit.rvalue**2))


@dataclass
class ScanResult:
    gamma: float
    deltas: np.ndarray
    etas: np.ndarray
    values: np.ndarray
    min_factor: float

    @property
    def resolution(self):
        return self.deltas.size

    def rows(self):
        """(gamma, delta, eta, re, im, abs) in row-major order, eta outer."""
        for j, eta in enumerate(self.etas):
            for i, d in enumerate(self.deltas):
                value = self.values[j, i]
                yield (self.gamma, float(d), float(eta), float(value.real), float(value.imag), float(abs(value)))


def cell_centres(resolution):
    return -1.0 + (2.0 * np.arange(resolution) + 1.0) / resolution


def _scan_row(job):
    cfg, gamma, deltas, eta = job["sheet"], job["gamma"], job["deltas"], job["eta"]
    tau = gamma + 1j * deltas
    f1, f2, f3 = delta_factor_values(cfg, tau, eta)
    k = np.sqrt(np.abs(tau) ** 2 + eta**2)
    return {
        "values": f1 * f2 * f3 / (cfg.c_bar**2 * cfg.h_bar),
        "min_factor": float(min(np.min(np.abs(f1) / k), np.min(np.abs(f2) / k))),
    }


def scan_delta(cfg, resolution=None, gamma=0.0, workers=None):
    """Delta on a cell-centred resolution x resolution grid over (delta, eta) in [-1, 1]^2."""
    resolution = config.scan_resolution if resolution is None else int(resolution)
    if resolution < 2:
        raise InvalidParameterError("scan resolution must be at least 2")
    if gamma < 0.0:
        raise InvalidParameterError("scan gamma must be non-negative")
    grid = cell_centres(resolution)
    jobs = [Job(index=j, sheet=cfg, gamma=gamma, deltas=grid, eta=float(eta)) for j, eta in enumerate(grid)]
    logger.debug("scanning Delta on a {0}x{0} grid at gamma={1}".format(resolution, gamma))
    results = run_jobs(jobs, _scan_row, workers)
    values = np.vstack([r["values"] for r in results])
    return ScanResult(gamma, grid, grid.copy(), values, min(r["min_factor"] for r in results))


@dataclass
class RayReport:
    rays: tuple
    hits: dict
    crossings: list
    unmatched: list
    min_factor: float

    @property
    def passed(self):
        return not self.unmatched and all(self.hits[q] > 0 for q in self.rays) and self.min_factor > 0.0


def scan_root_rays(cfg, scan, match_cells=None):
    """Locate sign changes of Im Delta where Delta is purely imaginary and match them to root rays."""
    match_cells = config.ray_match_cells if match_cells is None else match_cells
    roots = root_polynomial(cfg)
    if roots.regime is Regime.WEAKLY_STABLE:
        rays = (-roots.z1, 0.0, roots.z1)
    elif roots.regime is Regime.TRANSITION:
        rays = (0.0,)
    else:
        raise InvalidParameterError("root rays exist only for M >= M_c")

    cell = 2.0 / scan.resolution
    hits = {q: 0 for q in rays}
    crossings, unmatched = [], []
    for j, eta in enumerate(scan.etas):
        row = scan.values[j]
        magnitude = np.abs(row)
        imaginary = (magnitude > 0.0) & (np.abs(row.real) <= IMAGINARY_TOLERANCE * magnitude)
        im = row.imag
        candidates = np.flatnonzero(imaginary[:-1] & imaginary[1:] & (im[:-1] * im[1:] < 0.0))
        for i in candidates:
            d0, d1 = scan.deltas[i], scan.deltas[i + 1]
            crossing = d0 - im[i] * (d1 - d0) / (im[i + 1] - im[i])
            distances = [abs(crossing - q * eta) for q in rays]
            nearest = int(np.argmin(distances))
            if distances[nearest] <= match_cells * cell:
                hits[rays[nearest]] += 1
                crossings.append((float(eta), float(crossing), rays[nearest]))
            else:
                unmatched.append((float(eta), float(crossing)))
    if unmatched:
        logger.warning("{0} sign change(s) of Delta off the root rays".format(len(unmatched)))
    return RayReport(rays, hits, crossings, unmatched, scan.min_factor)


@dataclass(frozen=True)
class InteriorRoot:
    frequency: Frequency
    residual: float
    method: str
    seed: complex


def _normalized_delta(cfg, tau, eta=1.0):
    k = math.sqrt(abs(tau) ** 2 + eta**2)
    return delta(cfg, Frequency.from_tau(tau, eta)) / k**5


def find_interior_root(cfg, tolerance=1e-10):
    """Zero of Delta with Re tau > 0 for a violently unstable sheet, normalized to the hemisphere."""
    roots = root_polynomial(cfg)
    if roots.regime is not Regime.VIOLENTLY_UNSTABLE:
        raise InvalidParameterError("interior roots exist only for M < M_c")
    seed = abs(roots.z1_continued)

    def residual(x):
        if x[0] < 0.0:
            x = (0.0, x[1])
        value = _normalized_delta(cfg, complex(x[0], x[1]))
        return [value.real, value.imag]

    solution = optimize.root(residual, [seed, 0.0], method="hybr", tol=1e-14)
    tau = complex(solution.x[0], solution.x[1])
    if solution.success and tau.real > 1e-8 and abs(_normalized_delta(cfg, tau)) < tolerance:
        method = "root"
    else:
        logger.warning("root solver from seed {0} failed, scanning the real tau axis".format(seed))
        tau, method = _real_axis_root(cfg, tolerance), "brentq"

    f = Frequency.from_tau(tau, 1.0).normalize()
    value = abs(delta(cfg, f))
    if not value < tolerance:
        raise ConvergenceError("interior root residual {0:.3e} above tolerance".format(value), data={"tau": tau})
    logger.debug("interior root at tau={0} ({1})".format(tau, method))
    return InteriorRoot(f, value, method, complex(seed))


def _real_axis_root(cfg, tolerance):
    grid = np.geomspace(1e-4, 1e2, 4001)

    def real_delta(t):
        return _normalized_delta(cfg, complex(t, 0.0)).real

    values = np.array([real_delta(t) for t in grid])
    for i in np.flatnonzero(values[:-1] * values[1:] < 0.0):
        t = optimize.brentq(real_delta, grid[i], grid[i + 1], xtol=1e-15, rtol=4e-16)
        if abs(_normalized_delta(cfg, complex(t, 0.0))) < tolerance:
            return complex(t, 0.0)
    raise ConvergenceError(
        "no interior root of Delta found on the real tau axis",
        data={"grid": (grid[0], grid[-1]), "min_abs": float(np.min(np.abs(values)))},
    )


@dataclass(frozen=True)
class TripleRootReport:
    order: float
    limits: tuple
    converged: bool

    @property
    def passed(self):
        return abs(self.order - 3.0) < 0.1 and self.converged and 0.0 < abs(self.limits[2]) < math.inf


def certify_triple_root(cfg, eta=1.0):
    """Delta/tau and Delta/tau^2 vanish while Delta/tau^3 has a finite nonzero limit at tau = 0."""
    ts = 1e-2 * 0.5 ** np.arange(6)
    values = np.array([delta(cfg, Frequency(t, 0.0, eta)) for t in ts])
    fit = stats.linregress(np.log(ts), np.log(np.abs(values)))
    cubic = values / ts**3
    converged = abs(cubic[-1] - cubic[-2]) <= 0.05 * abs(cubic[-1])
    t = ts[-1]
    limits = (complex(values[-1] / t), complex(values[-1] / t**2), complex(cubic[-1]))
    return TripleRootReport(float(fit.slope), limits, bool(converged))


@dataclass
class LopReport:
    regime: Regime
    mach: float
    critical_mach: float
    root_poly: RootPoly
    boundary_roots: list = field(default_factory=list)
    interior_roots: list = field(default_factory=list)
    orderings: Optional[OrderingReport] = None
    simplicity: dict = field(default_factory=dict)
    triple_root: Optional[TripleRootReport] = None
    rays: Optional[RayReport] = None


def classify_roots(cfg, scan_resolution=None):
    threshold = classify_threshold(cfg)
    roots = root_polynomial(cfg)
    report = LopReport(threshold.regime, threshold.mach, threshold.critical_mach, roots)
    if threshold.regime is Regime.WEAKLY_STABLE:
        report.boundary_roots = [-roots.z1, 0.0, roots.z1]
        report.orderings = verify_orderings(cfg)
        report.simplicity = {q: root_simplicity(cfg, q) for q in report.boundary_roots}
    elif threshold.regime is Regime.TRANSITION:
        report.boundary_roots = [0.0]
        report.triple_root = certify_triple_root(cfg)
    else:
        report.interior_roots = [find_interior_root(cfg)]
    if scan_resolution and threshold.regime is not Regime.VIOLENTLY_UNSTABLE:
        report.rays = scan_root_rays(cfg, scan_delta(cfg, scan_resolution))
    return report


@dataclass(frozen=True)
class LimitReport:
    epsilons: tuple
    z1: tuple
    z1_newtonian: float

    @property
    def errors(self):
        return tuple(abs(z - self.z1_newtonian) for z in self.z1)

    @property
    def monotone(self):
        errs = self.errors
        return all(later <= earlier for earlier, later in zip(errs, errs[1:]))


def nonrelativistic_limit(cfg, epsilons=None):
    """z1 on a decreasing log grid of epsilon with c_bar and v_bar held fixed."""
    epsilons = tuple(10.0 ** -np.arange(1, 7)) if epsilons is None else tuple(epsilons)

    def z1_at(eps):
        sheet = SheetConfig(cfg.eos, FluidParams(eps), cfg.rho_bar, cfg.v_bar)
        roots = root_polynomial(sheet)
        if roots.regime is not Regime.WEAKLY_STABLE:
            raise InvalidParameterError("sheet is not weakly stable at epsilon={0}".format(eps))
        return roots.z1

    return LimitReport(epsilons, tuple(z1_at(eps) for eps in epsilons), z1_at(0.0))
