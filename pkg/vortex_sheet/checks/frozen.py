import numpy as np

from vortex_sheet.constsym import Frequency, omega, random_frequencies
from vortex_sheet.engine.basic_check import BasicCheck
from vortex_sheet.eos_state import Regime, Side
from vortex_sheet.frozen import (
    a2_tilde_general,
    critical_set_separation,
    frozen_boundary_symbols,
    frozen_delta,
    frozen_eigen,
    frozen_interior_symbol,
    maxima_identity_residuals,
    perturbed_pair,
    trace_projection,
    zero_perturbation_pair,
)
from vortex_sheet.lopatinskii import delta, root_polynomial

FACTOR_FLOOR = 1e-6


def _pairs(check, count):
    amplitude = check.properties["frozen_amplitude"]
    return [perturbed_pair(check.sheet, amplitude, check.rng) for _ in range(count)]


class FrozenMatrixCheck(BasicCheck):
    MODULE = "frozen"
    required_properties = ["sheet", "samples", "frozen_amplitude"]

    def check(self):
        for pair in _pairs(self, self.properties["samples"]):
            for side in Side:
                fp = pair.point(side)
                m = fp.matrices
                if m.identity_residual > 1e-12 * max(1.0, np.max(np.abs(m.a2_tilde))):
                    return "A0~ R^-1 A2~ R != diag(0, 1, 1) on the {0} side".format(side.label)
                general = a2_tilde_general(fp)
                if np.max(np.abs(general - m.a2_tilde)) > 1e-10 * np.max(np.abs(m.a2_tilde)):
                    return "reduced normal matrix disagrees with (A2 - phi_t A0 - phi_1 A1)/phi_2"
                if np.linalg.matrix_rank(m.a2_tilde) != 2:
                    return "reduced normal matrix does not have rank 2"
        return None


class MaximaIdentityCheck(BasicCheck):
    MODULE = "frozen"
    required_properties = ["sheet", "samples", "frozen_amplitude"]

    def check(self):
        for pair in _pairs(self, self.properties["samples"]):
            for side in Side:
                residuals = maxima_identity_residuals(pair.point(side))
                worst = max(residuals, key=residuals.get)
                if residuals[worst] > 1e-10:
                    return "identity {0} fails with residual {1:.3e}".format(worst, residuals[worst])
        return None


class FrozenClosedFormCheck(BasicCheck):
    MODULE = "frozen"
    required_properties = ["sheet", "samples", "frozen_amplitude"]

    def check(self):
        pairs = _pairs(self, self.properties["samples"])
        frequencies = random_frequencies(self.rng, len(pairs), gamma_min=0.05)
        for pair, f in zip(pairs, frequencies):
            for side in Side:
                symbol = frozen_interior_symbol(pair.point(side), f)
                worst = max(symbol.b11_residual, symbol.eff_i1_residual, symbol.eff_i2_residual)
                if worst > 1e-10:
                    return "closed forms of the reduced symbol fail on the {0} side at {1}".format(side.label, f)
            eigen = frozen_eigen(pair.plus, f)
            if not ((eigen.omega.real < 0.0) and (eigen.omega_prime.real > 0.0)):
                return "eigenvalues of the reduced symbol do not split at {0}".format(f)
        return None


class ZeroPerturbationCheck(BasicCheck):
    MODULE = "frozen"
    required_properties = ["sheet"]

    def check(self):
        cfg = self.sheet
        pair = zero_perturbation_pair(cfg)
        f = Frequency(0.4, 0.3, 0.8)
        symbols = frozen_boundary_symbols(pair, f)
        for side in Side:
            if abs(symbols.m1[side]) > 0.0:
                return "m1 does not vanish on the {0} side".format(side.label)
            expected = 1.0 / (cfg.lorentz_bar * cfg.c_bar * cfg.h_bar)
            if abs(symbols.m2[side] - expected) > 1e-12 * expected:
                return "m2 != 1/(Gamma c h) on the {0} side".format(side.label)
            F2 = frozen_interior_symbol(pair.point(side), f).F2
            if abs(F2 - int(side) * 2.0 * cfg.lorentz_bar / cfg.c_bar) > 1e-12 * abs(F2):
                return "F2 != {0}2 Gamma / c".format(side.label)
            for g in (f, Frequency(0.0, 0.3, 0.8)):
                if abs(frozen_eigen(pair.point(side), g).omega - omega(cfg, g, side)) > 1e-12 * g.k:
                    return "frozen omega{0} differs from the constant-coefficient one at {1}".format(side.label, g)

        report = frozen_delta(pair, f)
        reference = delta(cfg, f)
        if abs(report.delta - reference) > 1e-10 * abs(reference):
            return "Delta1 Delta2 Delta3 = {0} but Delta = {1}".format(report.delta, reference)
        if report.p_degree != 5:
            return "P_ring has degree {0} at zero perturbation".format(report.p_degree)
        if report.roots is not None:
            z1 = root_polynomial(cfg).z1
            for label, target in (("-1", -z1), ("0", 0.0), ("1", z1)):
                if abs(report.roots[label] - target) > 1e-10 * max(1.0, z1):
                    return "root {0} of P_ring is {1}, expected {2}".format(label, report.roots[label], target)
        return None


class FrozenFactorizationCheck(BasicCheck):
    MODULE = "frozen"
    required_properties = ["sheet", "samples", "frozen_amplitude"]

    def check(self):
        pairs = _pairs(self, self.properties["samples"])
        frequencies = random_frequencies(self.rng, len(pairs), gamma_min=0.05)
        for pair, f in zip(pairs, frequencies):
            report = frozen_delta(pair, f, with_roots=False)
            if abs(report.delta - report.delta_det) > 1e-10 * max(abs(report.delta), 1e-300):
                return "Delta1 Delta2 Delta3 != det[beta E] at {0}".format(f)
        return None


class RootContinuityCheck(BasicCheck):
    MODULE = "frozen"
    applies_to = (Regime.WEAKLY_STABLE,)
    required_properties = ["sheet", "frozen_amplitude"]

    def check(self):
        z1 = root_polynomial(self.sheet).z1
        targets = {"-1": -z1, "0": 0.0, "1": z1}
        f = Frequency(1.0, 0.0, 1.0)
        scan = [Frequency(0.0, d, e).normalize() for d in np.linspace(-1.0, 1.0, 9) for e in (-0.7, 0.35, 1.0)]
        background = zero_perturbation_pair(self.sheet)
        scales = []
        for g in scan:
            reference = frozen_delta(background, g, with_roots=False)
            scales.append(max(abs(reference.delta1), abs(reference.delta2)))
        for pair in _pairs(self, 20):
            report = frozen_delta(pair, f)
            if report.p_degree > 6:
                return "P_ring degree {0} above 6".format(report.p_degree)
            for label, target in targets.items():
                if abs(report.roots[label] - target) > 1e-2:
                    return "root {0} moved to {1} from {2}".format(label, report.roots[label], target)
            if not critical_set_separation(pair, report.roots).min_distance > 0.0:
                return "critical roots touch the glancing or pole set"
            for g, scale in zip(scan, scales):
                factors = frozen_delta(pair, g, with_roots=False)
                smallest = min(abs(factors.delta1), abs(factors.delta2))
                if not smallest > FACTOR_FLOOR * scale:
                    return "Delta1 or Delta2 vanishes at {0} ({1:.3e} against scale {2:.3e})".format(g, smallest, scale)
        return None


class TraceProjectionCheck(BasicCheck):
    MODULE = "frozen"
    required_properties = ["sheet", "frozen_amplitude"]

    def check(self):
        for pair in _pairs(self, 20):
            for side in Side:
                w = self.rng.normal(size=3) + 1j * self.rng.normal(size=3)
                direct, via_w = trace_projection(pair.point(side), w)
                if np.max(np.abs(direct - via_w)) > 1e-12 * max(1.0, np.max(np.abs(direct))):
                    return "trace projections disagree on the {0} side".format(side.label)
        return None
