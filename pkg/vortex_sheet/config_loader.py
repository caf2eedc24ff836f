"""Helpers for loading engine options from files and the environment.

This module reads a ``vortex_sheet.conf`` style configuration file and allows
settings to be overridden via environment variables. Each option is loaded
from the file unless a corresponding ``VORTEXSHEET_<OPTION>`` variable is
present in the environment, in which case the environment value wins.
"""

import configparser
import os


class ConfigLoader(object):
    """Load numerical options from a file with optional environment overrides."""

    def __init__(self, location="../vortex_sheet.conf"):
        """Initialize the loader and parse the configuration file.

        Parameters
        ----------
        location : str, optional
            Path to the configuration file relative to this module. Defaults to
            ``"../vortex_sheet.conf"``.
        """
        config_location = os.path.join(os.path.dirname(os.path.abspath(__file__)), location)

        self.parser = configparser.ConfigParser()
        # The shipped ``<location>.inc`` provides defaults; a local file
        # without the suffix only needs to list the options it changes.
        files_to_read = []
        if not location.endswith(".inc"):
            fallback = f"{config_location}.inc"
            if os.path.exists(fallback):
                files_to_read.append(fallback)
        files_to_read.append(config_location)
        self.parser.read(files_to_read)

        if not self.parser.has_section("OPTIONS"):
            self.parser.add_section("OPTIONS")
        options = self.parser["OPTIONS"]

        self.debug = self.parse_sources("debug", options.get("debug", "false").lower() == "true", "bool")

        self.checks_location = self.parse_sources(
            "checks_location",
            options.get("checks_location", "vortex_sheet/checks"),
        )

        self.tie_tolerance = self.parse_sources(
            "tie_tolerance", float(options.get("tie_tolerance", "1e-12")), "float"
        )

        self.pole_guard = self.parse_sources("pole_guard", float(options.get("pole_guard", "1e-14")), "float")

        self.quad_abs_tolerance = self.parse_sources(
            "quad_abs_tolerance", float(options.get("quad_abs_tolerance", "1e-12")), "float"
        )

        self.inversion_rel_tolerance = self.parse_sources(
            "inversion_rel_tolerance", float(options.get("inversion_rel_tolerance", "1e-13")), "float"
        )

        self.eikonal_tolerance = self.parse_sources(
            "eikonal_tolerance", float(options.get("eikonal_tolerance", "1e-8")), "float"
        )

        self.fit_residual_tolerance = self.parse_sources(
            "fit_residual_tolerance", float(options.get("fit_residual_tolerance", "1e-8")), "float"
        )

        self.scan_resolution = self.parse_sources(
            "scan_resolution", int(options.get("scan_resolution", "200")), "int"
        )

        self.ray_match_cells = self.parse_sources("ray_match_cells", int(options.get("ray_match_cells", "2")), "int")

        self.property_samples = self.parse_sources(
            "property_samples", int(options.get("property_samples", "200")), "int"
        )

        self.random_seed = self.parse_sources("random_seed", int(options.get("random_seed", "20240601")), "int")

        self.num_workers = self.parse_sources("num_workers", int(options.get("num_workers", "4")), "int")

    def override(self, values):
        """Apply run-level overrides (the ``tolerances`` block of a run config)."""
        for key, value in values.items():
            if not hasattr(self, key) or key == "parser":
                raise KeyError("unknown option '{0}'".format(key))
            current = getattr(self, key)
            setattr(self, key, type(current)(value))

    def parse_sources(self, key_name, default_value, obj_type="str"):
        """Return a configuration value using environment overrides when present.

        Parameters
        ----------
        key_name : str
            The name of the option as defined in the configuration file.
        default_value : Any
            The value parsed from the configuration file.
        obj_type : str, optional
            Expected type of the value. Supported values are ``"str"``, ``"int"``,
            ``"float"`` and ``"bool"``. Defaults to ``"str"``.

        Returns
        -------
        Any
            Either ``default_value`` or the value of the environment variable
            ``VORTEXSHEET_<KEY_NAME>`` converted to the requested type.
        """
        environment_key = "VORTEXSHEET_{}".format(key_name.upper())
        if environment_key in os.environ:
            env_val = os.environ[environment_key]
            if obj_type.lower() == "int":
                return int(env_val)
            elif obj_type.lower() == "float":
                return float(env_val)
            elif obj_type.lower() == "bool":
                return env_val.lower() in ("true", "1", "yes")
            else:
                return env_val
        else:
            return default_value
