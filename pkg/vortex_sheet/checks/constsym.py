import numpy as np

from vortex_sheet.constsym import (
    Frequency,
    boundary_symbols,
    glancing_flags,
    interior_symbol,
    omega,
    pole_limit_first_component,
    random_frequencies,
    stable_vectors,
    triangularize,
)
from vortex_sheet.engine.basic_check import BasicCheck
from vortex_sheet.eos_state import Side
from vortex_sheet.oracles import poly_roots

SIGN_DICHOTOMY_TOLERANCE = 1e-8


class BoundarySymbolCheck(BasicCheck):
    MODULE = "constsym"
    required_properties = ["sheet", "samples"]

    def check(self):
        for f in random_frequencies(self.rng, self.properties["samples"]):
            symbols = boundary_symbols(self.sheet, f)
            qb = symbols.Q @ symbols.b
            if np.max(np.abs(qb - np.array([0.0, 0.0, symbols.theta]))) > 1e-12 * (1.0 + symbols.theta):
                return "Q b != (0, 0, theta) at {0}".format(f)
            if np.max(np.abs(symbols.beta[0] - np.array([1.0, 1.0, -1.0, -1.0]))) > 1e-14:
                return "first row of beta is not (1, 1, -1, -1) at {0}".format(f)
        thetas = [boundary_symbols(self.sheet, f).theta for f in random_frequencies(self.rng, 500)]
        if not min(thetas) > 0.0:
            return "theta vanishes on the hemisphere sample"
        return None


class HomogeneityCheck(BasicCheck):
    MODULE = "constsym"
    required_properties = ["sheet"]

    def check(self):
        for f in random_frequencies(self.rng, 20, gamma_min=0.05):
            base = interior_symbol(self.sheet, f)
            for s in (0.5, 2.0, 10.0):
                scaled = interior_symbol(self.sheet, f.scaled(s))
                if np.max(np.abs(scaled.A - s * base.A)) > 1e-12 * s * np.max(np.abs(base.A)):
                    return "A is not degree-1 homogeneous at {0}, s={1}".format(f, s)
                if np.max(np.abs(scaled.beta - base.beta)) > 1e-12 * np.max(np.abs(base.beta)):
                    return "beta is not degree-0 homogeneous at {0}, s={1}".format(f, s)
        return None


class OmegaEigenvalueCheck(BasicCheck):
    MODULE = "constsym"
    required_properties = ["sheet", "samples"]

    def check(self):
        for f in random_frequencies(self.rng, self.properties["samples"], gamma_min=1e-3):
            bundle = interior_symbol(self.sheet, f)
            for w, mu, m in (
                (bundle.omega_plus, bundle.mu_plus, bundle.m_plus),
                (bundle.omega_minus, bundle.mu_minus, bundle.m_minus),
            ):
                if abs(w * w - (mu * mu - m * m)) > 1e-12 * (1.0 + abs(mu) ** 2 + abs(m) ** 2):
                    return "omega^2 != mu^2 - m^2 at {0}".format(f)
                if not w.real < 0.0:
                    return "Re omega >= 0 at {0}".format(f)
        return None


class SignDichotomyCheck(BasicCheck):
    MODULE = "constsym"
    required_properties = ["sheet"]

    def check(self):
        for gamma in (1e-3, 1e-2, 0.1, 0.5):
            for f in random_frequencies(self.rng, 50, gamma_min=gamma, gamma_max=gamma):
                bundle = interior_symbol(self.sheet, f)
                sides = (
                    (Side.PLUS, bundle.omega_plus, bundle.mu_plus, bundle.m_plus),
                    (Side.MINUS, bundle.omega_minus, bundle.mu_minus, bundle.m_minus),
                )
                for side, w, mu, m in sides:
                    roots = poly_roots([1.0, 0.0, -(mu * mu - m * m)])
                    stable = [z for z in roots if z.real < 0.0]
                    if len(stable) != 1:
                        return "omega{0} quadratic at {1} has {2} roots with Re < 0".format(
                            side.label, f, len(stable)
                        )
                    if abs(w - stable[0]) > SIGN_DICHOTOMY_TOLERANCE * (1.0 + abs(mu) + abs(m)):
                        return "omega{0} = {1} at {2} is not the stable root {3}".format(side.label, w, f, stable[0])
        return None


class BoundaryContinuityCheck(BasicCheck):
    MODULE = "constsym"
    required_properties = ["sheet"]

    def check(self):
        for f in random_frequencies(self.rng, 100, gamma_min=0.0, gamma_max=0.0):
            for side in Side:
                if glancing_flags(self.sheet, f.tau, f.eta, side, tolerance=1e-2):
                    continue
                near = omega(self.sheet, Frequency(1e-6, f.delta, f.eta), side)
                if abs(near - omega(self.sheet, f, side)) > 1e-4:
                    return "omega{0} jumps between gamma = 1e-6 and gamma = 0 at {1}".format(side.label, f)
        return None


class StableVectorCheck(BasicCheck):
    MODULE = "constsym"
    required_properties = ["sheet", "samples"]

    def check(self):
        for f in random_frequencies(self.rng, self.properties["samples"], gamma_min=1e-3):
            bundle = interior_symbol(self.sheet, f)
            for w, e in ((bundle.omega_plus, bundle.E_plus), (bundle.omega_minus, bundle.E_minus)):
                if np.linalg.norm(bundle.A @ e - w * e) > 1e-10 * f.k * np.linalg.norm(e):
                    return "E is not an eigenvector of A at {0}".format(f)
        grid = np.linspace(-1.0, 1.0, 60)
        for delta in grid:
            for eta in grid:
                if delta == 0.0 and eta == 0.0:
                    continue
                e_plus, e_minus = stable_vectors(self.sheet, Frequency(0.0, delta, eta).normalize())
                if not (np.linalg.norm(e_plus) > 0.0 and np.linalg.norm(e_minus) > 0.0):
                    return "a stable vector vanishes at delta={0}, eta={1}".format(delta, eta)
        eta = 0.7
        e_plus, _ = stable_vectors(self.sheet, Frequency(0.0, -self.sheet.v_bar * eta, eta))
        if abs(e_plus[0] - pole_limit_first_component(self.sheet, eta)) > 1e-12:
            return "first component of E+ at the pole does not match its limit"
        return None


class TriangularizationCheck(BasicCheck):
    MODULE = "constsym"
    required_properties = ["sheet", "samples"]

    def check(self):
        for f in random_frequencies(self.rng, self.properties["samples"], gamma_min=0.01):
            tri = triangularize(self.sheet, f)
            A = interior_symbol(self.sheet, f).A
            if not abs(np.linalg.det(tri.T)) > 0.0:
                return "T is singular at {0}".format(f)
            reduced = np.linalg.solve(tri.T, A @ tri.T)
            expected = np.diag(tri.diagonal).astype(complex)
            expected[0, 1] = tri.z_plus
            expected[2, 3] = tri.z_minus
            if np.max(np.abs(reduced - expected)) > 1e-10 * f.k * max(1.0, np.linalg.cond(tri.T)):
                return "T^-1 A T is not the expected triangular form at {0}".format(f)
        return None


class NewtonianConstantsCheck(BasicCheck):
    MODULE = "constsym"
    required_properties = ["sheet"]

    def applies(self):
        return self.sheet.epsilon == 0.0

    def check(self):
        c0, c1, c2 = self.sheet.cbar_constants
        if (c0, c1, c2) != (1.0, 1.0 / self.sheet.c_bar, self.sheet.v_bar):
            return "Newtonian constants are ({0}, {1}, {2})".format(c0, c1, c2)
        return None
