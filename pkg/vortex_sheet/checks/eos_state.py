import math

import numpy as np

from vortex_sheet.engine.basic_check import BasicCheck
from vortex_sheet.eos_state import (
    critical_mach,
    enthalpy_ratio,
    invert_pressure,
    particle_density,
    prim_to_u,
    random_prim_states,
    u_to_prim,
)


class ParticleDensityCheck(BasicCheck):
    MODULE = "eos_state"
    required_properties = ["sheet"]

    def check(self):
        eos, params = self.sheet.eos, self.sheet.params
        if not math.isclose(particle_density(eos, params, self.sheet.rho_bar), 1.0, rel_tol=1e-14):
            return "N(rho_bar) != 1"
        rho_bar = self.sheet.rho_bar
        grid = np.geomspace(max(eos.rho_min * 1.01, rho_bar / 4.0), min(eos.rho_max * 0.99, 4.0 * rho_bar), 41)
        values = np.array([particle_density(eos, params, rho) for rho in grid])
        if not np.all(values > 0.0) or not np.all(np.diff(values) > 0.0):
            return "N is not positive and strictly increasing"
        h = 1e-6
        for rho in grid[1:-1]:
            ahead, behind = particle_density(eos, params, rho + h), particle_density(eos, params, rho - h)
            fd = (math.log(ahead) - math.log(behind)) / (2.0 * h)
            exact = 1.0 / (rho + params.eps2 * float(eos.pressure(rho)))
            if abs(fd - exact) > 1e-6 * exact:
                return "d(ln N)/drho at rho={0}: {1} vs {2}".format(rho, fd, exact)
        return None


class EnthalpyDerivativeCheck(BasicCheck):
    MODULE = "eos_state"
    required_properties = ["sheet"]

    def check(self):
        eos, params = self.sheet.eos, self.sheet.params
        for state in random_prim_states(eos, params, self.rng, 20, speed_scale=self.sheet.v_bar):
            p = float(eos.pressure(state.rho))
            h = 1e-6 * p
            ahead = enthalpy_ratio(eos, params, invert_pressure(eos, p + h))
            behind = enthalpy_ratio(eos, params, invert_pressure(eos, p - h))
            fd = (ahead - behind) / (2.0 * h)
            exact = params.eps2 / particle_density(eos, params, state.rho)
            if abs(fd - exact) > 1e-6 * max(exact, 1.0):
                return "dh/dp at p={0}: {1} vs eps^2/N = {2}".format(p, fd, exact)
        return None


class CriticalMachCheck(BasicCheck):
    MODULE = "eos_state"
    required_properties = ["sheet"]

    def check(self):
        if abs(critical_mach(0.0, self.sheet.c_bar) - math.sqrt(2.0)) > 1e-12:
            return "M_c at eps = 0 is not sqrt(2)"
        if self.sheet.epsilon > 0.0 and not self.sheet.critical_mach < math.sqrt(2.0):
            return "M_c = {0} is not below sqrt(2)".format(self.sheet.critical_mach)
        if abs(critical_mach(1.0 - 1e-6, 1.0) - 1.0) > 1e-3:
            return "M_c does not approach 1 as eps c_bar -> 1"
        products = np.linspace(0.0, 1.0 - 1e-6, 50)
        if not np.all(np.diff([critical_mach(x, 1.0) for x in products]) < 0.0):
            return "M_c is not decreasing in eps c_bar"
        return None


class PrimRoundTripCheck(BasicCheck):
    MODULE = "eos_state"
    required_properties = ["sheet", "samples"]

    def check(self):
        eos, params = self.sheet.eos, self.sheet.params
        states = random_prim_states(eos, params, self.rng, self.properties["samples"], speed_scale=self.sheet.v_bar)
        for state in states:
            back = u_to_prim(eos, params, prim_to_u(eos, params, state))
            scale = max(1.0, math.hypot(state.v1, state.v2))
            velocity_error = max(abs(back.v1 - state.v1), abs(back.v2 - state.v2))
            if abs(back.rho - state.rho) > 1e-10 * state.rho or velocity_error > 1e-10 * scale:
                return "round trip of {0} gave {1}".format(state, back)
        return None
