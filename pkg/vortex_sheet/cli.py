import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

import numpy as np
import yaml

from vortex_sheet.config import config
from vortex_sheet.constsym import Frequency
from vortex_sheet.engine.basic_check import CHECK_FAILURE_TEXT, CHECK_SKIPPED_TEXT, CheckContext
from vortex_sheet.engine.engine import Engine
from vortex_sheet.eos_state import Regime, Side
from vortex_sheet.exceptions import InvalidParameterError, VortexSheetError
from vortex_sheet.frozen import FrozenPair, FrozenPoint, frozen_delta, perturbed_pair, zero_perturbation_pair
from vortex_sheet.logger import logger
from vortex_sheet.lopatinskii import classify_roots, scan_delta
from vortex_sheet.output import write_csv, write_json
from vortex_sheet.run_config import RunConfig, is_number
from vortex_sheet.sweep import SWEEP_HEADER, run_sweep
from vortex_sheet.version import version

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_IO = 3

SCAN_HEADER = ["gamma", "delta", "eta", "re_delta", "im_delta", "abs_delta"]
FROZEN_FIELDS = ("side", "p", "hw1", "hw2", "phi_t", "phi_1", "phi_2")
FREQUENCY_FIELDS = ("gamma", "delta", "eta")
DEFAULT_FROZEN_FREQUENCY = (1.0, 0.0, 1.0)


def parse_args(argv=None):
    parser = argparse.ArgumentParser(
        prog="vortex-sheet", description="Normal-mode stability of relativistic vortex sheets."
    )
    parser.add_argument("--version", action="version", version="%(prog)s " + version)
    subparsers = parser.add_subparsers(dest="command", required=True)

    commands = {
        "classify": "Report the stability regime and the boundary roots of a sheet (JSON).",
        "sweep": "Classify every node of a parameter grid (CSV).",
        "scan-delta": "Sample the Lopatinskii determinant on the frequency hemisphere (CSV).",
        "frozen": "Report the frozen-coefficient determinant of a perturbed state (JSON).",
        "verify": "Run the property suite and print a per-property table.",
    }
    for name, help_text in commands.items():
        sub = subparsers.add_parser(name, help=help_text, description=help_text)
        sub.add_argument("--config", type=Path, required=True, help="Run configuration (YAML, or JSON by suffix)")
        sub.add_argument("--out", type=Path, default=None, help="Output file (default: output.path, else stdout)")
        sub.add_argument("--seed", type=int, default=None, help="Seed for the randomized parts of the run")
        if name == "frozen":
            sub.add_argument("--frozen-file", type=Path, default=None, help="Frozen-point JSON (overrides frozen.file)")
    return parser.parse_args(argv)


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)


def _error(message, code):
    sys.stderr.write(json.dumps({"error": str(message), "code": code}) + "\n")
    return code


def cmd_classify(run_config, args):
    sheet = run_config.build_sheet()
    report = classify_roots(sheet)
    roots = report.root_poly
    ordering_chain = None
    if report.orderings is not None:
        ordering_chain = {
            "links": {name: slack for name, slack, _ in report.orderings.links},
            "min_slack": report.orderings.min_slack,
            "passed": report.orderings.passed,
        }
    interior_root = None
    if report.interior_roots:
        root = report.interior_roots[0]
        interior_root = {
            "gamma": root.frequency.gamma,
            "delta": root.frequency.delta,
            "eta": root.frequency.eta,
            "residual": root.residual,
            "method": root.method,
        }
    triple_root = None
    if report.triple_root is not None:
        triple_root = {"order": report.triple_root.order, "passed": report.triple_root.passed}
    payload = {
        "M": report.mach,
        "M_c": report.critical_mach,
        "regime": report.regime.value,
        "z1": roots.z1 if report.regime is not Regime.VIOLENTLY_UNSTABLE else None,
        "z2": roots.z2,
        "Cbar": list(sheet.cbar_constants),
        "ordering_chain": ordering_chain,
        "interior_root": interior_root,
        "triple_root": triple_root,
    }
    logger.info("Sheet at M={0:.6g} is {1}".format(report.mach, report.regime.value))
    _emit(write_json(payload, args.out), args.out)
    return EXIT_OK


def cmd_sweep(run_config, args):
    rows = run_sweep(run_config)
    _emit(write_csv(SWEEP_HEADER, rows, args.out), args.out)
    return EXIT_OK


def cmd_scan_delta(run_config, args):
    sheet = run_config.build_sheet()
    scan = scan_delta(sheet, run_config.scan_resolution, run_config.scan_gamma)
    logger.info("Scanned Delta on a {0}x{0} grid".format(scan.resolution))
    _emit(write_csv(SCAN_HEADER, scan.rows(), args.out), args.out)
    return EXIT_OK


def load_frozen_file(path, sheet):
    """Frozen pair and frequency from a JSON file of two points (one per side)."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    assert isinstance(data, dict) and "points" in data, "frozen file must have a 'points' array"
    assert type(data["points"]) is list and len(data["points"]) == 2, "frozen file needs exactly two points"
    points = {}
    for entry in data["points"]:
        for field_name in FROZEN_FIELDS:
            assert field_name in entry, "frozen point must have a '{0}' field".format(field_name)
        values = {name: entry[name] for name in FROZEN_FIELDS if name != "side"}
        point = FrozenPoint.from_fields(sheet.eos, sheet.params, entry["side"], **values)
        points[point.side] = point
    assert len(points) == 2, "frozen file needs one point on each side"
    frequency = data.get("frequency", dict(zip(FREQUENCY_FIELDS, DEFAULT_FROZEN_FREQUENCY)))
    assert isinstance(frequency, dict), "frozen file frequency must be a mapping"
    for field_name in FREQUENCY_FIELDS:
        assert field_name in frequency, "frozen file frequency must have a '{0}' field".format(field_name)
        assert is_number(frequency[field_name]), "frozen file frequency '{0}' must be a number".format(field_name)
    f = Frequency(*(float(frequency[name]) for name in FREQUENCY_FIELDS))
    return [FrozenPair(points[Side.PLUS], points[Side.MINUS], sheet)], f


def _point_fields(fp):
    return {
        "side": fp.side.label,
        "p": fp.u.p,
        "hw1": fp.u.hw1,
        "hw2": fp.u.hw2,
        "phi_t": fp.phi_t,
        "phi_1": fp.phi_1,
        "phi_2": fp.phi_2,
        "eikonal_residual": fp.eikonal_residual,
    }


def cmd_frozen(run_config, args):
    sheet = run_config.build_sheet()
    frozen_file = args.frozen_file or run_config.frozen_file
    if frozen_file is not None:
        pairs, f = load_frozen_file(frozen_file, sheet)
    elif run_config.frozen_amplitude == 0.0:
        pairs, f = [zero_perturbation_pair(sheet)], Frequency(*DEFAULT_FROZEN_FREQUENCY)
    else:
        rng = np.random.default_rng(args.seed if args.seed is not None else run_config.seed)
        amplitude = run_config.frozen_amplitude
        pairs = [perturbed_pair(sheet, amplitude, rng) for _ in range(run_config.frozen_samples)]
        f = Frequency(*DEFAULT_FROZEN_FREQUENCY)

    reports = []
    for pair in pairs:
        report = dataclasses.asdict(frozen_delta(pair, f))
        reports.append({"points": [_point_fields(pair.plus), _point_fields(pair.minus)], **report})
    payload = {
        "frequency": {"gamma": f.gamma, "delta": f.delta, "eta": f.eta},
        "amplitude": None if frozen_file is not None else run_config.frozen_amplitude,
        "reports": reports,
    }
    logger.info("Evaluated the frozen determinant for {0} pair(s)".format(len(reports)))
    _emit(write_json(payload, args.out), args.out)
    return EXIT_OK


def _status_label(status):
    if status == CHECK_FAILURE_TEXT:
        return "FAIL"
    if status == CHECK_SKIPPED_TEXT:
        return "SKIP"
    return "PASS"


def verify_table(results):
    width = max([len("property")] + [len(r.name) for r in results])
    lines = ["{0:<{w}}  {1:<15}  {2:<6}  {3}".format("property", "module", "status", "detail", w=width)]
    for r in results:
        row = (r.name, r.module, _status_label(r.status), r.detail)
        lines.append("{0:<{w}}  {1:<15}  {2:<6}  {3}".format(*row, w=width))
    return "\n".join(lines) + "\n"


def cmd_verify(run_config, args):
    sheet = run_config.build_sheet()
    context = CheckContext(
        sheet=sheet,
        seed=args.seed if args.seed is not None else run_config.seed,
        samples=run_config.verify_samples,
        scan_resolution=run_config.scan_resolution,
        frozen_amplitude=run_config.frozen_amplitude,
    )
    results = Engine(context).run_checks()
    sys.stdout.write(verify_table(results))
    if args.out is not None or run_config.output_path is not None:
        payload = [
            {"property": r.name, "module": r.module, "status": _status_label(r.status), "detail": r.detail}
            for r in results
        ]
        write_json(payload, args.out or run_config.output_path)
    failed = [r for r in results if r.status == CHECK_FAILURE_TEXT]
    if failed:
        logger.error("Property {0} failed: {1}".format(failed[0].name, failed[0].detail))
        return _error("property {0} failed: {1}".format(failed[0].name, failed[0].detail), EXIT_VERIFY_FAILED)
    return EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "sweep": cmd_sweep,
    "scan-delta": cmd_scan_delta,
    "frozen": cmd_frozen,
    "verify": cmd_verify,
}


def main(argv=None):
    args = parse_args(argv)
    if config.debug:
        logger.setLevel(logging.DEBUG)

    try:
        run_config = RunConfig.load(args.config)
        run_config.apply_tolerances()
        if args.out is None and args.command != "verify" and run_config.output_path is not None:
            args.out = Path(run_config.output_path)
        logger.info("Running {0} with {1}".format(args.command, args.config))
        code = COMMANDS[args.command](run_config, args)
    except (InvalidParameterError, AssertionError, yaml.YAMLError, json.JSONDecodeError) as e:
        logger.debug("invalid input: {0!r}".format(e))
        return _error(e, EXIT_INVALID)
    except OSError as e:
        return _error(e, EXIT_IO)
    except VortexSheetError as e:
        logger.error("{0}: {1}".format(type(e).__name__, e))
        return _error(e, EXIT_VERIFY_FAILED)
    logger.info("Finished {0}".format(args.command))
    return code


if __name__ == "__main__":
    sys.exit(main())
