import math

import numpy as np
import pytest

from vortex_sheet.eos_state import (
    Eos,
    EosKind,
    FluidParams,
    PrimState,
    Regime,
    SheetConfig,
    Side,
    UState,
    classify_threshold,
    critical_mach,
    enthalpy_ratio,
    invert_pressure,
    local_state,
    lorentz_factor,
    particle_density,
    prim_to_u,
    random_prim_states,
    sound_speed,
    u_to_prim,
)
from vortex_sheet.exceptions import DomainError, EosViolationError, InvalidParameterError

from tests.vortex_sheet.helpers import newtonian_sheet, rng, stable_sheet, transition_sheet, unstable_sheet


class TestEos(object):
    def test_linear(self):
        eos = Eos.linear(0.36)
        assert eos.kind is EosKind.LINEAR
        assert eos.pressure(2.0) == pytest.approx(0.72)
        assert eos.dpressure(5.0) == 0.36

    def test_gamma_law(self):
        eos = Eos.gamma_law(0.5, 2.0)
        assert eos.pressure(3.0) == pytest.approx(4.5)
        assert eos.dpressure(3.0) == pytest.approx(3.0)

    def test_callable(self):
        eos = Eos.from_callable(lambda rho: 0.25 * rho, lambda rho: 0.25)
        assert eos.pressure(2.0) == 0.5
        assert eos.dpressure(2.0) == 0.25

    def test_bad_interval(self):
        with pytest.raises(InvalidParameterError):
            Eos.linear(0.36, reference_density=2.0, rho_min=1.0, rho_max=1.5)

    def test_linear_needs_sigma(self):
        with pytest.raises(EosViolationError):
            Eos.linear(-1.0)

    def test_gamma_law_needs_exponent_above_one(self):
        with pytest.raises(EosViolationError):
            Eos.gamma_law(1.0, 1.0)

    def test_validate_superluminal_sound(self):
        with pytest.raises(EosViolationError):
            Eos.linear(1.5).validate(FluidParams(1.0))

    def test_validate_newtonian_admits_any_sound_speed(self):
        Eos.linear(100.0).validate(FluidParams(0.0))

    def test_with_sound_speed(self):
        assert Eos.linear(0.36).with_sound_speed(0.5).sigma == pytest.approx(0.25)
        eos = Eos.gamma_law(1.0, 2.0).with_sound_speed(0.3)
        assert sound_speed(eos, 1.0) == pytest.approx(0.3)

    def test_with_sound_speed_rejects_callable(self):
        eos = Eos.from_callable(lambda rho: rho, lambda rho: 1.0)
        with pytest.raises(InvalidParameterError):
            eos.with_sound_speed(0.5)


class TestFluidParams(object):
    def test_negative_epsilon(self):
        with pytest.raises(InvalidParameterError):
            FluidParams(-0.1)

    def test_infinite_epsilon(self):
        with pytest.raises(InvalidParameterError):
            FluidParams(math.inf)

    def test_eps2(self):
        assert FluidParams(0.5).eps2 == 0.25


class TestParticleDensity(object):
    def setup_method(self):
        self.eos = Eos.linear(0.36)
        self.params = FluidParams(1.0)

    def test_reference_density(self):
        assert particle_density(self.eos, self.params, 1.0) == 1.0
        gamma_law = Eos.gamma_law(0.2, 4.0 / 3.0)
        assert particle_density(gamma_law, self.params, 1.0) == pytest.approx(1.0, abs=1e-15)

    def test_linear_closed_form(self):
        assert particle_density(self.eos, self.params, 2.0) == pytest.approx(2.0 ** (1.0 / 1.36), rel=1e-14)
        assert particle_density(self.eos, self.params, 2.0) == pytest.approx(1.664, abs=1e-3)

    def test_newtonian(self):
        assert particle_density(self.eos, FluidParams(0.0), 3.5) == 3.5

    def test_quadrature_matches_closed_form(self):
        """A callable linear law goes through quadrature and must agree with the closed form."""
        callable_eos = Eos.from_callable(lambda rho: 0.36 * rho, lambda rho: 0.36)
        for rho in (0.3, 1.7, 9.0):
            exact = particle_density(self.eos, self.params, rho)
            assert particle_density(callable_eos, self.params, rho) == pytest.approx(exact, rel=1e-11)

    def test_gamma_law_matches_quadrature(self):
        gamma_law = Eos.gamma_law(0.2, 4.0 / 3.0)
        callable_eos = Eos.from_callable(gamma_law.pressure, gamma_law.dpressure)
        for rho in (0.5, 2.0, 7.0):
            assert particle_density(callable_eos, self.params, rho) == pytest.approx(
                particle_density(gamma_law, self.params, rho), rel=1e-11
            )

    def test_outside_interval(self):
        with pytest.raises(DomainError):
            particle_density(self.eos, self.params, 2e3)


class TestSoundSpeedAndEnthalpy(object):
    def setup_method(self):
        self.eos = Eos.linear(0.36)

    def test_linear_sound_speed_is_constant(self):
        for rho in (0.1, 1.0, 50.0):
            assert sound_speed(self.eos, rho) == pytest.approx(0.6)

    def test_enthalpy_at_reference(self):
        assert enthalpy_ratio(self.eos, FluidParams(1.0), 1.0) == pytest.approx(1.36)

    def test_newtonian_enthalpy(self):
        assert enthalpy_ratio(self.eos, FluidParams(0.0), 1.0) == 1.0

    def test_superluminal_sound_speed(self):
        with pytest.raises(EosViolationError):
            sound_speed(Eos.linear(2.0), 1.0, FluidParams(1.0))

    def test_sound_speed_without_params_checks_positivity_only(self):
        assert sound_speed(Eos.linear(2.0), 1.0) == pytest.approx(math.sqrt(2.0))
        with pytest.raises(EosViolationError):
            sound_speed(Eos.linear(2.0), 1.0, FluidParams(1.0))
        assert sound_speed(Eos.linear(2.0), 1.0, FluidParams(0.5)) == pytest.approx(math.sqrt(2.0))


class TestStates(object):
    def setup_method(self):
        self.eos = Eos.linear(0.36)
        self.params = FluidParams(1.0)

    def test_rest_state(self):
        u = prim_to_u(self.eos, self.params, PrimState(1.0, 0.0, 0.0))
        assert u == UState(pytest.approx(0.36), 0.0, 0.0)
        assert lorentz_factor(self.params, 0.0, 0.0) == 1.0

    def test_background_state(self):
        cfg = stable_sheet()
        assert cfg.lorentz_bar == pytest.approx(5.0 / 3.0)
        assert cfg.w_bar == pytest.approx(4.0 / 3.0)
        u = cfg.u_bar(Side.PLUS)
        assert u.p == pytest.approx(0.36)
        assert u.hw1 == pytest.approx(1.36 * 4.0 / 3.0)
        assert u.hw2 == 0.0
        assert cfg.u_bar(Side.MINUS).hw1 == pytest.approx(-1.36 * 4.0 / 3.0)

    def test_round_trip(self):
        for s in random_prim_states(self.eos, self.params, rng(), 200):
            back = u_to_prim(self.eos, self.params, prim_to_u(self.eos, self.params, s))
            assert back.rho == pytest.approx(s.rho, rel=1e-10)
            assert back.v1 == pytest.approx(s.v1, rel=1e-10, abs=1e-12)
            assert back.v2 == pytest.approx(s.v2, rel=1e-10, abs=1e-12)

    def test_round_trip_callable(self):
        eos = Eos.from_callable(lambda rho: 0.2 * rho**1.5, lambda rho: 0.3 * rho**0.5)
        for s in random_prim_states(eos, self.params, rng(3), 20):
            back = u_to_prim(eos, self.params, prim_to_u(eos, self.params, s))
            assert back.rho == pytest.approx(s.rho, rel=1e-10)

    def test_local_state_of_background(self):
        cfg = stable_sheet()
        st = local_state(cfg.eos, cfg.params, cfg.u_bar(Side.PLUS))
        assert st.rho == pytest.approx(1.0, rel=1e-10)
        assert st.v1 == pytest.approx(0.8, rel=1e-10)
        assert st.v2 == 0.0
        assert st.lorentz == pytest.approx(cfg.lorentz_bar, rel=1e-10)
        assert st.sound_speed == pytest.approx(cfg.c_bar, rel=1e-10)
        assert st.enthalpy == pytest.approx(cfg.h_bar, rel=1e-10)

    def test_superluminal_velocity(self):
        with pytest.raises(InvalidParameterError):
            prim_to_u(self.eos, self.params, PrimState(1.0, 0.8, 0.7))

    def test_pressure_not_invertible(self):
        with pytest.raises(DomainError):
            invert_pressure(self.eos, 1e6)

    def test_random_states_are_admissible(self):
        for s in random_prim_states(self.eos, self.params, rng(), 100):
            assert self.eos.contains(s.rho)
            assert s.speed_sq < 1.0


class TestSheetConfig(object):
    def test_derived_quantities(self):
        cfg = stable_sheet()
        assert cfg.c_bar == pytest.approx(0.6)
        assert cfg.h_bar == pytest.approx(1.36)
        assert cfg.p_bar == pytest.approx(0.36)
        assert cfg.mach == pytest.approx(0.8 / 0.6)

    def test_from_mach(self):
        cfg = SheetConfig.from_mach(Eos.linear(0.36), FluidParams(1.0), 1.0, 1.25)
        assert cfg.v_bar == pytest.approx(0.75)

    def test_light_speed(self):
        with pytest.raises(InvalidParameterError, match="velocity exceeds light speed"):
            SheetConfig(Eos.linear(0.36), FluidParams(1.0), 1.0, 1.0)

    def test_nonpositive_velocity(self):
        with pytest.raises(InvalidParameterError):
            SheetConfig(Eos.linear(0.36), FluidParams(1.0), 1.0, 0.0)

    def test_reference_density_mismatch(self):
        with pytest.raises(InvalidParameterError):
            SheetConfig(Eos.linear(0.36), FluidParams(1.0), 2.0, 0.5)

    def test_cbar_constants_newtonian(self):
        c0, c1, c2 = newtonian_sheet().cbar_constants
        assert (c0, c1, c2) == (1.0, 1.0, 2.0)


class TestClassifyThreshold(object):
    def test_newtonian_weakly_stable(self):
        report = classify_threshold(newtonian_sheet())
        assert report.regime is Regime.WEAKLY_STABLE
        assert report.mach == 2.0
        assert report.critical_mach == pytest.approx(math.sqrt(2.0), abs=1e-12)

    def test_violently_unstable(self):
        report = classify_threshold(unstable_sheet())
        assert report.regime is Regime.VIOLENTLY_UNSTABLE
        assert report.mach == pytest.approx(0.8333, abs=1e-4)
        assert report.critical_mach == pytest.approx(1.2127, abs=1e-4)

    def test_transition(self):
        assert classify_threshold(transition_sheet()).regime is Regime.TRANSITION

    def test_tie_tolerance_is_relative(self):
        cfg = transition_sheet()
        nudged = SheetConfig(cfg.eos, cfg.params, 1.0, cfg.v_bar * (1.0 + 1e-9))
        assert classify_threshold(nudged).regime is Regime.WEAKLY_STABLE
        assert classify_threshold(nudged, tie_tolerance=1e-8).regime is Regime.TRANSITION


class TestCriticalMach(object):
    def test_newtonian(self):
        assert critical_mach(0.0, 3.0) == pytest.approx(math.sqrt(2.0), abs=1e-12)

    def test_below_sqrt2(self):
        for eps, c in ((1.0, 0.1), (0.5, 1.0), (2.0, 0.45)):
            assert critical_mach(eps, c) < math.sqrt(2.0)

    def test_approaches_one(self):
        assert abs(critical_mach(1.0, 1.0 - 1e-6) - 1.0) < 1e-3

    def test_monotone_in_eps_c(self):
        values = [critical_mach(1.0, x) for x in np.linspace(0.0, 0.999, 50)]
        assert all(b < a for a, b in zip(values, values[1:]))
