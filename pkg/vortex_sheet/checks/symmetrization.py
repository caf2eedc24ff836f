import numpy as np

from vortex_sheet.engine.basic_check import BasicCheck
from vortex_sheet.eos_state import Side, prim_to_u, random_prim_states, state_from_prim, u_to_prim
from vortex_sheet.symmetrization import (
    a_matrices,
    a_matrices_entries,
    background_diagonalization,
    characteristic_degeneracy,
    check_symmetrizable,
    printed_cal_matrices,
    velocity_jacobian,
)


def _sample_states(check, count):
    sheet = check.sheet
    return [
        prim_to_u(sheet.eos, sheet.params, s)
        for s in random_prim_states(sheet.eos, sheet.params, check.rng, count, speed_scale=sheet.v_bar)
    ]


class SymmetrizableHyperbolicCheck(BasicCheck):
    MODULE = "symmetrization"
    required_properties = ["sheet", "samples"]

    def check(self):
        eos, params = self.sheet.eos, self.sheet.params
        for u in _sample_states(self, self.properties["samples"]):
            report = check_symmetrizable(eos, params, u)
            if not report.passed:
                return "at {0}: {1}".format(u, "; ".join(report.failures))
        return None


class CorruptedMatrixCheck(BasicCheck):
    MODULE = "symmetrization"
    required_properties = ["sheet"]

    def check(self):
        eos, params = self.sheet.eos, self.sheet.params
        u = _sample_states(self, 1)[0]
        a0, a1, a2 = a_matrices(eos, params, u)
        corrupted = a1.copy()
        corrupted[1, 2] += 1e-6
        report = check_symmetrizable(eos, params, u, matrices=(a0, corrupted, a2))
        if report.passed:
            return "a perturbed A1 went undetected"
        if not any("A1" in failure for failure in report.failures):
            return "the perturbed A1 entry was not located: {0}".format(report.failures)
        return None


class TranscriptionCheck(BasicCheck):
    MODULE = "symmetrization"
    required_properties = ["sheet", "samples"]

    def check(self):
        eos, params = self.sheet.eos, self.sheet.params
        states = random_prim_states(eos, params, self.rng, self.properties["samples"], speed_scale=self.sheet.v_bar)
        for prim in states:
            u = prim_to_u(eos, params, prim)
            blocks = a_matrices(eos, params, u)
            entries = a_matrices_entries(state_from_prim(eos, params, prim))
            for j, (x, y) in enumerate(zip(blocks, entries)):
                if np.max(np.abs(x - y)) > 1e-12 * (1.0 + np.max(np.abs(x))):
                    return "A{0} transcriptions disagree at {1}".format(j, prim)
        return None


class VelocityJacobianCheck(BasicCheck):
    MODULE = "symmetrization"
    required_properties = ["sheet"]

    def check(self):
        eos, params = self.sheet.eos, self.sheet.params
        for u in _sample_states(self, 20):
            jac = velocity_jacobian(eos, params, u)
            base = u.as_array()
            for index in range(3):
                step = np.zeros(3)
                step[index] = 1e-6 * max(1.0, abs(base[index]))
                ahead = u_to_prim(eos, params, type(u).from_array(base + step))
                behind = u_to_prim(eos, params, type(u).from_array(base - step))
                fd = np.array([ahead.v1 - behind.v1, ahead.v2 - behind.v2]) / (2.0 * step[index])
                if np.max(np.abs(fd - jac[:, index])) > 1e-6 * (1.0 + np.max(np.abs(jac))):
                    return "dv/dU column {0} at {1}: {2} vs {3}".format(index, u, fd, jac[:, index])
        return None


class CharacteristicDegeneracyCheck(BasicCheck):
    MODULE = "symmetrization"
    required_properties = ["sheet"]

    def check(self):
        eos, params = self.sheet.eos, self.sheet.params
        for u in _sample_states(self, 20):
            xi = float(self.rng.uniform(-2.0, 2.0))
            report = characteristic_degeneracy(eos, params, u, xi)
            if abs(report.finite_difference) > 1e-6 or abs(report.closed_form) > 1e-12 * (1.0 + abs(xi)):
                return "lambda2 is not linearly degenerate at {0}, xi={1}: {2}".format(u, xi, report)
        return None


class BackgroundDiagonalizationCheck(BasicCheck):
    MODULE = "symmetrization"
    required_properties = ["sheet"]

    def check(self):
        cfg = self.sheet
        diag = background_diagonalization(cfg)
        c = cfg.c_bar
        r_inv = np.linalg.inv(diag.r_bar)
        for side in Side:
            _, _, a2 = a_matrices(cfg.eos, cfg.params, cfg.u_bar(side))
            if np.max(np.abs(r_inv @ a2 @ diag.r_bar - np.diag([0.0, -c, c]))) > 1e-12 * (1.0 + c):
                return "R_bar does not diagonalize A2 on the {0} side".format(side.label)
            for j, (computed, printed) in enumerate(zip(diag.cal(side), printed_cal_matrices(cfg, side))):
                if np.max(np.abs(computed - printed)) > 1e-12 * (1.0 + np.max(np.abs(printed))):
                    return "calA{0} on the {1} side differs from its closed form".format(j, side.label)
        return None
