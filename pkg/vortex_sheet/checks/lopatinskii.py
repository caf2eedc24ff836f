import math

import numpy as np

from vortex_sheet.constsym import Frequency, random_frequencies
from vortex_sheet.engine.basic_check import BasicCheck
from vortex_sheet.eos_state import Regime
from vortex_sheet.lopatinskii import (
    certify_triple_root,
    delta,
    delta_factors,
    delta_via_det,
    find_interior_root,
    gamma_growth,
    imaginary_axis_residual,
    nonrelativistic_limit,
    p_polynomials,
    q_functions,
    root_polynomial,
    root_simplicity,
    scan_delta,
    scan_root_rays,
    verify_orderings,
)
from vortex_sheet.oracles import poly_roots


class DeltaConstructionCheck(BasicCheck):
    MODULE = "lopatinskii"
    required_properties = ["sheet", "samples"]

    def check(self):
        for f in random_frequencies(self.rng, self.properties["samples"], gamma_min=1e-3):
            closed, via_det = delta(self.sheet, f), delta_via_det(self.sheet, f)
            if abs(closed - via_det) > 1e-10 * max(abs(closed), 1.0 / (self.sheet.c_bar**2 * self.sheet.h_bar)):
                return "product form {0} and det[beta E] {1} disagree at {2}".format(closed, via_det, f)
        return None


class DeltaOnTauAxisCheck(BasicCheck):
    MODULE = "lopatinskii"
    required_properties = ["sheet"]

    def check(self):
        cfg = self.sheet
        root = math.sqrt(1.0 - cfg.eps2**2 * cfg.c_bar**2 * cfg.v_bar**2)
        for tau in (0.25, 1.0, 3.0):
            f = Frequency(tau, 0.0, 0.0)
            third = delta_factors(cfg, f)[2] / (cfg.c_bar**2 * cfg.h_bar)
            expected_third = -2.0 * tau**3 * cfg.lorentz_bar * root / (cfg.c_bar**3 * cfg.h_bar)
            if abs(third - expected_third) > 1e-12 * abs(expected_third):
                return "third factor at eta = 0, tau = {0}: {1} vs {2}".format(tau, third, expected_third)
            expected = tau**2 * (1.0 + root) ** 2 * expected_third
            if abs(delta(cfg, f) - expected) > 1e-12 * abs(expected):
                return "Delta(tau, 0) at tau = {0} does not match its closed form".format(tau)
        return None


class RootPolynomialCheck(BasicCheck):
    MODULE = "lopatinskii"
    required_properties = ["sheet"]

    def check(self):
        roots = root_polynomial(self.sheet)
        if roots.discriminant_mismatch > 1e-12:
            return "discriminant differs from its factorization by {0:.3e}".format(roots.discriminant_mismatch)
        if not roots.D > 0.0:
            return "discriminant is not positive"
        if roots.regime is Regime.WEAKLY_STABLE:
            if not (roots.E1 < 0.0 and roots.E2 > 0.0 and roots.E3 < 0.0):
                return "E1 < 0 < E2, E3 < 0 fails"
            oracle = sorted(z.real for z in poly_roots(roots.p0.coef[::-1]) if z.real > 0.0)
            if len(oracle) != 2 or max(abs(oracle[0] - roots.z1), abs(oracle[1] - roots.z2)) > 1e-10:
                return "companion roots {0} disagree with z1={1}, z2={2}".format(oracle, roots.z1, roots.z2)
        polys = p_polynomials(self.sheet)
        z = np.linspace(-3.0, 3.0, 13) * self.sheet.v_bar
        bridge = polys["P"](z) + 4.0 * self.sheet.v_bar * z * polys["P0"](z)
        if np.max(np.abs(bridge)) > 1e-10 * np.max(np.abs(polys["P"](z))):
            return "P != -4 v z P0"
        return None


class PBridgeCheck(BasicCheck):
    MODULE = "lopatinskii"
    required_properties = ["sheet"]

    def check(self):
        cfg = self.sheet
        p = p_polynomials(cfg)["P"]
        for z in np.linspace(-2.5, 2.5, 41) * cfg.v_bar:
            q1, q2 = q_functions(cfg, z)
            lhs = complex(q1 * q1 - q2 * q2)
            rhs = cfg.lorentz_bar**2 * p(z) / cfg.c_bar**2
            if abs(lhs - rhs) > 1e-10 * max(abs(rhs), abs(q1) ** 2, abs(q2) ** 2, 1.0):
                return "Q1^2 - Q2^2 != Gamma^2 P / c^2 at z = {0}".format(z)
        return None


class OrderingCheck(BasicCheck):
    MODULE = "lopatinskii"
    applies_to = (Regime.WEAKLY_STABLE,)
    required_properties = ["sheet"]

    def check(self):
        report = verify_orderings(self.sheet)
        if not report.passed:
            return "violated: {0}".format(", ".join(report.failures))
        return None


class ZeroAtOriginCheck(BasicCheck):
    MODULE = "lopatinskii"
    applies_to = (Regime.WEAKLY_STABLE,)
    required_properties = ["sheet"]

    def check(self):
        for eta in (0.5, 1.0, -1.0):
            value = delta(self.sheet, Frequency(0.0, 0.0, eta))
            if abs(value) > 1e-12 * abs(eta) ** 5:
                return "Delta(0, {0}) = {1}".format(eta, value)
        return None


class RootSimplicityCheck(BasicCheck):
    MODULE = "lopatinskii"
    applies_to = (Regime.WEAKLY_STABLE,)
    required_properties = ["sheet"]

    def check(self):
        z1 = root_polynomial(self.sheet).z1
        for q in (-z1, 0.0, z1):
            report = root_simplicity(self.sheet, q)
            if not report.passed:
                return "root q={0} is not simple: {1}".format(q, report)
        return None


class ImaginaryAxisCheck(BasicCheck):
    MODULE = "lopatinskii"
    applies_to = (Regime.WEAKLY_STABLE,)
    required_properties = ["sheet"]

    def check(self):
        z1 = root_polynomial(self.sheet).z1
        for q in (-z1, 0.0, z1):
            residual = imaginary_axis_residual(self.sheet, q)
            if residual > 1e-12:
                return "Re Delta / |Delta| = {0:.3e} near q={1}".format(residual, q)
        return None


class GammaGrowthCheck(BasicCheck):
    MODULE = "lopatinskii"
    applies_to = (Regime.WEAKLY_STABLE,)
    required_properties = ["sheet"]

    def check(self):
        z1 = root_polynomial(self.sheet).z1
        for q in (-z1, 0.0, z1):
            report = gamma_growth(self.sheet, q)
            if not report.passed:
                return "|Delta| does not grow linearly off q={0}: slope {1}, r2 {2}".format(q, report.slope, report.r2)
        return None


class HemisphereScanCheck(BasicCheck):
    MODULE = "lopatinskii"
    applies_to = (Regime.WEAKLY_STABLE, Regime.TRANSITION)
    required_properties = ["sheet", "scan_resolution"]

    def check(self):
        scan = scan_delta(self.sheet, self.properties["scan_resolution"])
        report = scan_root_rays(self.sheet, scan)
        if report.unmatched:
            first = report.unmatched[0]
            return "{0} sign change(s) off the root rays, first at {1}".format(len(report.unmatched), first)
        if not all(report.hits[q] > 0 for q in report.rays):
            return "root ray(s) never crossed: {0}".format([q for q in report.rays if report.hits[q] == 0])
        if not report.min_factor > 0.0:
            return "a non-degenerate factor of Delta vanishes on the scan"
        return None


class InteriorRootCheck(BasicCheck):
    MODULE = "lopatinskii"
    applies_to = (Regime.VIOLENTLY_UNSTABLE,)
    required_properties = ["sheet"]

    def check(self):
        root = find_interior_root(self.sheet)
        if not root.frequency.gamma > 0.0:
            return "the root found is not in the interior: {0}".format(root.frequency)
        if not root.residual < 1e-10:
            return "interior root residual {0:.3e}".format(root.residual)
        return None


class TripleRootCheck(BasicCheck):
    MODULE = "lopatinskii"
    applies_to = (Regime.TRANSITION,)
    required_properties = ["sheet"]

    def check(self):
        roots = root_polynomial(self.sheet)
        if abs(roots.E3) > 1e-10 * abs(roots.E2):
            return "E3 = {0} does not vanish at the transition".format(roots.E3)
        report = certify_triple_root(self.sheet)
        if not report.passed:
            return "tau = 0 is not a triple root: order {0}, limits {1}".format(report.order, report.limits)
        return None


class NonrelativisticLimitCheck(BasicCheck):
    MODULE = "lopatinskii"
    applies_to = (Regime.WEAKLY_STABLE,)
    required_properties = ["sheet"]

    def applies(self):
        return super().applies() and self.sheet.mach > math.sqrt(2.0)

    def check(self):
        report = nonrelativistic_limit(self.sheet)
        if not report.monotone:
            return "z1(eps) does not approach its Newtonian value monotonically: {0}".format(report.errors)
        if report.errors[-1] > 1e-4:
            eps, error = report.epsilons[-1], report.errors[-1]
            return "z1 at eps = {0} is {1:.3e} away from the Newtonian value".format(eps, error)
        return None
