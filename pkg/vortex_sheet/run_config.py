import json
from pathlib import Path

import yaml

from vortex_sheet.config import config
from vortex_sheet.eos_state import Eos, FluidParams, SheetConfig, sound_speed

SWEEP_PARAMS = ("v_bar", "c_bar", "epsilon", "mach", "eps_c")
SWEEP_SCALES = ("linear", "log")
EOS_KINDS = ("linear", "gamma_law")


def is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool)


class RunConfig(dict):
    @staticmethod
    def parse_yaml_str(input_str):
        data = yaml.safe_load(input_str)
        return RunConfig(data)

    @staticmethod
    def parse_json_str(input_str):
        return RunConfig(json.loads(input_str))

    @staticmethod
    def load(path):
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        if path.suffix.lower() == ".json":
            run_config = RunConfig.parse_json_str(text)
        else:
            run_config = RunConfig.parse_yaml_str(text)
        run_config.source_dir = path.parent
        return run_config

    def __init__(self, data):
        # relative paths inside the file resolve against its directory
        self.source_dir = Path(".")
        self.verify_data(data)
        super(RunConfig, self).__init__(data)

    def verify_data(self, data):
        assert isinstance(data, dict), "run config must be a mapping"

        assert "eos" in data, "eos must be defined on the root"
        self.verify_eos_data(data["eos"])

        assert "epsilon" in data, "epsilon must be defined on the root"
        assert is_number(data["epsilon"]), "epsilon must be a number"
        assert data["epsilon"] >= 0, "epsilon must be non-negative"

        rho_bar = data.get("rho_bar", 1.0)
        assert is_number(rho_bar), "rho_bar must be a number"
        assert rho_bar > 0, "rho_bar must be positive"

        has_speed = "v_bar" in data
        has_mach = "mach" in data
        assert has_speed != has_mach, "exactly one of 'v_bar' and 'mach' must be defined"
        key = "v_bar" if has_speed else "mach"
        assert is_number(data[key]), "'{0}' must be a number".format(key)

        if "sweep" in data:
            assert type(data["sweep"]) is list, "sweep must be an array"
            assert 1 <= len(data["sweep"]) <= 2, "sweep must have one or two axes"
            for axis in data["sweep"]:
                self.verify_axis_data(axis)
            params = [axis["param"] for axis in data["sweep"]]
            assert len(set(params)) == len(params), "sweep axes must name different parameters"

        for section in ("scan", "frozen", "verify", "tolerances", "output"):
            if section in data:
                assert isinstance(data[section], dict), "'{0}' must be a mapping".format(section)

        scan = data.get("scan", {})
        if "resolution" in scan:
            assert type(scan["resolution"]) is int, "scan resolution must be an integer"
            assert scan["resolution"] >= 2, "scan resolution must be at least 2"
        if "gamma" in scan:
            assert is_number(scan["gamma"]) and scan["gamma"] >= 0, "scan gamma must be a non-negative number"

        frozen = data.get("frozen", {})
        if "amplitude" in frozen:
            assert is_number(frozen["amplitude"]), "frozen amplitude must be a number"
            assert frozen["amplitude"] >= 0, "frozen amplitude must be non-negative"
        if "samples" in frozen:
            assert type(frozen["samples"]) is int and frozen["samples"] > 0, "frozen samples must be a positive integer"
        if "file" in frozen:
            assert type(frozen["file"]) is str, "frozen file must be a path string"

        verify = data.get("verify", {})
        if "samples" in verify:
            assert type(verify["samples"]) is int and verify["samples"] > 0, "verify samples must be a positive integer"

        for name, value in data.get("tolerances", {}).items():
            assert hasattr(config, name) and name != "parser", "unknown tolerance '{0}'".format(name)
            assert is_number(value), "tolerance '{0}' must be a number".format(name)

        output = data.get("output", {})
        if "path" in output:
            assert type(output["path"]) is str, "output path must be a string"

        if "seed" in data:
            assert type(data["seed"]) is int and data["seed"] >= 0, "seed must be a non-negative integer"

    def verify_eos_data(self, eos):
        assert isinstance(eos, dict), "eos must be a mapping"
        assert "kind" in eos, "eos must have a 'kind' field"
        assert eos["kind"] in EOS_KINDS, "eos kind must be one of {0}".format(", ".join(EOS_KINDS))
        if eos["kind"] == "linear":
            has_sigma, has_c = "sigma" in eos, "c_bar" in eos
            assert has_sigma != has_c, "linear eos needs exactly one of 'sigma' and 'c_bar'"
            key = "sigma" if has_sigma else "c_bar"
            assert is_number(eos[key]), "eos '{0}' must be a number".format(key)
        else:
            for key in ("K", "gamma"):
                assert key in eos, "gamma_law eos must have a '{0}' field".format(key)
                assert is_number(eos[key]), "eos '{0}' must be a number".format(key)
        for key in ("rho_min", "rho_max"):
            if key in eos:
                assert is_number(eos[key]), "eos '{0}' must be a number".format(key)

    def verify_axis_data(self, axis):
        assert isinstance(axis, dict), "sweep axis must be a mapping"
        for key in ("param", "min", "max", "count"):
            assert key in axis, "sweep axis must have a '{0}' field".format(key)
        assert axis["param"] in SWEEP_PARAMS, "sweep param must be one of {0}".format(", ".join(SWEEP_PARAMS))
        name = axis["param"]
        assert is_number(axis["min"]) and is_number(axis["max"]), "'{0}' sweep bounds must be numbers".format(name)
        assert axis["min"] <= axis["max"], "'{0}' sweep needs min <= max".format(name)
        assert type(axis["count"]) is int, "'{0}' sweep count must be an integer".format(name)
        if axis["min"] == axis["max"]:
            assert axis["count"] >= 1, "'{0}' sweep count must be positive".format(name)
        else:
            assert axis["count"] >= 2, "'{0}' sweep count must be at least 2".format(name)
        scale = axis.get("scale", "linear")
        assert scale in SWEEP_SCALES, "'{0}' sweep scale must be linear or log".format(name)
        if scale == "log":
            assert axis["min"] > 0, "'{0}' log sweep needs a positive min".format(name)

    @property
    def rho_bar(self):
        return float(self.get("rho_bar", 1.0))

    @property
    def seed(self):
        return int(self.get("seed", config.random_seed))

    @property
    def scan_resolution(self):
        return int(self.get("scan", {}).get("resolution", config.scan_resolution))

    @property
    def scan_gamma(self):
        return float(self.get("scan", {}).get("gamma", 0.0))

    @property
    def frozen_amplitude(self):
        return float(self.get("frozen", {}).get("amplitude", 1e-3))

    @property
    def frozen_samples(self):
        return int(self.get("frozen", {}).get("samples", 20))

    @property
    def frozen_file(self):
        location = self.get("frozen", {}).get("file")
        return None if location is None else self.source_dir / location

    @property
    def verify_samples(self):
        return int(self.get("verify", {}).get("samples", config.property_samples))

    @property
    def output_path(self):
        return self.get("output", {}).get("path")

    @property
    def sweep_axes(self):
        return list(self.get("sweep", []))

    def apply_tolerances(self):
        """Push the ``tolerances`` block into the engine options for this run."""
        config.override(self.get("tolerances", {}))

    def build_eos(self, c_bar=None):
        spec = self["eos"]
        bounds = {key: float(spec[key]) for key in ("rho_min", "rho_max") if key in spec}
        if spec["kind"] == "linear":
            sigma = float(spec["sigma"]) if "sigma" in spec else float(spec["c_bar"]) ** 2
            eos = Eos.linear(sigma, reference_density=self.rho_bar, **bounds)
        else:
            eos = Eos.gamma_law(float(spec["K"]), float(spec["gamma"]), reference_density=self.rho_bar, **bounds)
        if c_bar is not None:
            eos = eos.with_sound_speed(c_bar)
        return eos

    def build_sheet(self, overrides=None):
        """SheetConfig at the base parameters, with optional sweep-axis overrides applied."""
        values = {"epsilon": float(self["epsilon"])}
        if "mach" in self:
            values["mach"] = float(self["mach"])
        else:
            values["v_bar"] = float(self["v_bar"])
        values.update(overrides or {})

        eos = self.build_eos(values.get("c_bar"))
        if "eps_c" in values:
            values["epsilon"] = values["eps_c"] / sound_speed(eos, self.rho_bar)
        params = FluidParams(values["epsilon"])
        if "mach" in values and not (overrides and "v_bar" in overrides):
            return SheetConfig.from_mach(eos, params, self.rho_bar, values["mach"])
        return SheetConfig(eos, params, self.rho_bar, values["v_bar"])
