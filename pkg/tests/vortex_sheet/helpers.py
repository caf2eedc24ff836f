import math

import numpy as np

from vortex_sheet.eos_state import Eos, FluidParams, SheetConfig

TRANSITION_V_BAR = math.sqrt(0.72 / 1.36)


def newtonian_sheet():
    """Config A: eps = 0, c_bar = 1, v_bar = 2 (M = 2 > sqrt 2)."""
    return SheetConfig(Eos.linear(1.0), FluidParams(0.0), 1.0, 2.0)


def stable_sheet():
    """Config B: eps = 1, c_bar = 0.6, v_bar = 0.8."""
    return SheetConfig(Eos.linear(0.36), FluidParams(1.0), 1.0, 0.8)


def unstable_sheet():
    """Config C: eps = 1, c_bar = 0.6, v_bar = 0.5 (M < M_c)."""
    return SheetConfig(Eos.linear(0.36), FluidParams(1.0), 1.0, 0.5)


def transition_sheet():
    """Config D: M = M_c exactly."""
    return SheetConfig(Eos.linear(0.36), FluidParams(1.0), 1.0, TRANSITION_V_BAR)


def gamma_law_sheet():
    # rho_max keeps p' below 1 for eps = 1
    return SheetConfig(Eos.gamma_law(0.2, 4.0 / 3.0, rho_max=20.0), FluidParams(1.0), 1.0, 0.7)


def all_sheets():
    return [newtonian_sheet(), stable_sheet(), unstable_sheet(), transition_sheet()]


def rng(seed=7):
    return np.random.default_rng(seed)


def sheet_config_data(**overrides):
    data = {
        "eos": {"kind": "linear", "sigma": 0.36},
        "epsilon": 1.0,
        "rho_bar": 1.0,
        "v_bar": 0.8,
    }
    data.update(overrides)
    return data
