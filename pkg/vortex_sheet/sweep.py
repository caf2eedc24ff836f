"""Parameter sweeps over the background sheet.

Nodes are generated in row-major order (first axis outer) and evaluated on
the engine thread pool; the index carried by every job fixes the output
order whatever order the workers finish in.
"""

import itertools

import numpy as np

from vortex_sheet.engine.engine import run_jobs
from vortex_sheet.engine.job import Job
from vortex_sheet.eos_state import Regime, critical_mach, sound_speed
from vortex_sheet.exceptions import InvalidParameterError
from vortex_sheet.logger import logger
from vortex_sheet.lopatinskii import root_polynomial, verify_orderings

SWEEP_HEADER = ["param1", "param2", "M", "Mc", "regime", "z1", "z2", "slack_min"]
INVALID_REGIME = "invalid"


def axis_values(axis):
    low, high, count = float(axis["min"]), float(axis["max"]), int(axis["count"])
    if axis.get("scale", "linear") == "log":
        return np.geomspace(low, high, count)
    return np.linspace(low, high, count)


def sweep_grid(run_config):
    """Yield Job nodes with ``index`` and ``values`` ({param: value}) in row-major order."""
    axes = run_config.sweep_axes
    if not axes:
        yield Job(index=0, run_config=run_config, values={})
        return
    names = [axis["param"] for axis in axes]
    grids = [axis_values(axis) for axis in axes]
    for index, point in enumerate(itertools.product(*grids)):
        yield Job(index=index, run_config=run_config, values=dict(zip(names, (float(x) for x in point))))


def _node_critical_mach(run_config, values):
    """M_c depends on eps c_bar only, so it survives a superluminal v_bar."""
    if "eps_c" in values:
        return critical_mach(1.0, values["eps_c"])
    try:
        c_bar = sound_speed(run_config.build_eos(values.get("c_bar")), run_config.rho_bar)
        return critical_mach(values.get("epsilon", float(run_config["epsilon"])), c_bar)
    except InvalidParameterError:
        return None


def evaluate_node(job):
    values = job["values"]
    run_config = job["run_config"]
    params = list(values.values()) + [None, None]
    row = {"param1": params[0], "param2": params[1]}
    logger.debug("sweep node {0}: {1}".format(job["index"], values))
    try:
        sheet = run_config.build_sheet(values)
    except InvalidParameterError as e:
        logger.debug("sweep node {0} is invalid: {1}".format(job["index"], e))
        row.update(M=None, Mc=_node_critical_mach(run_config, values), regime=INVALID_REGIME)
        row.update(z1=None, z2=None, slack_min=None)
        return row

    roots = root_polynomial(sheet)
    row.update(M=sheet.mach, Mc=sheet.critical_mach, regime=roots.regime.value, z1=roots.z1, z2=roots.z2)
    row["slack_min"] = verify_orderings(sheet).min_slack if roots.regime is Regime.WEAKLY_STABLE else None
    return row


def run_sweep(run_config, workers=None):
    jobs = list(sweep_grid(run_config))
    logger.info("Sweeping {0} node(s)".format(len(jobs)))
    rows = run_jobs(jobs, evaluate_node, workers)
    invalid = len([row for row in rows if row["regime"] == INVALID_REGIME])
    if invalid:
        logger.info("{0} of {1} node(s) violate a physical constraint".format(invalid, len(rows)))
    return rows
