import numpy as np

from vortex_sheet.constsym import interior_symbol, random_frequencies
from vortex_sheet.engine.basic_check import BasicCheck
from vortex_sheet.oracles import eig4, ode_decay_check, poly_roots, principal_angles, stable_subspace


class PlantedRootsCheck(BasicCheck):
    MODULE = "oracles"
    required_properties = ["samples"]

    def check(self):
        for _ in range(self.properties["samples"]):
            planted = self.rng.uniform(-2.0, 2.0, size=6) + 1j * self.rng.uniform(-2.0, 2.0, size=6)
            found = np.array(poly_roots(np.poly(planted)))
            for root in planted:
                if np.min(np.abs(found - root)) > 1e-9 * max(1.0, abs(root)):
                    return "planted root {0} not recovered from {1}".format(root, found)
        return None


class OmegaOracleCheck(BasicCheck):
    MODULE = "oracles"
    required_properties = ["sheet", "samples"]

    def check(self):
        for f in random_frequencies(self.rng, self.properties["samples"], gamma_min=1e-3):
            bundle = interior_symbol(self.sheet, f)
            values = eig4(bundle.A).values
            for w in (bundle.omega_plus, -bundle.omega_plus, bundle.omega_minus, -bundle.omega_minus):
                if np.min(np.abs(values - w)) > 1e-10 * f.k:
                    return "closed-form eigenvalue {0} has no generic twin at {1}".format(w, f)
        return None


class StableSubspaceCheck(BasicCheck):
    MODULE = "oracles"
    required_properties = ["sheet", "samples"]

    def check(self):
        for f in random_frequencies(self.rng, self.properties["samples"], gamma_min=0.05):
            bundle = interior_symbol(self.sheet, f)
            dimension, basis = stable_subspace(bundle.A)
            if dimension != 2:
                return "stable subspace has dimension {0} at {1}".format(dimension, f)
            angles = principal_angles(basis, np.column_stack([bundle.E_plus, bundle.E_minus]))
            if np.max(angles) > 1e-8:
                return "stable span differs from span(E+, E-) by {0:.3e} at {1}".format(np.max(angles), f)
        return None


class OdeDecayCheck(BasicCheck):
    MODULE = "oracles"
    required_properties = ["sheet"]

    def check(self):
        for f in random_frequencies(self.rng, 5, gamma_min=0.2, gamma_max=0.6):
            report = ode_decay_check(self.sheet, f, x2_max=2.0)
            if not report.passed:
                errors = {side.label: report.rate_error(side) for side in report.omega}
                return "ODE rates disagree with omega at {0}: {1}".format(f, errors)
        return None
