import re
import sys

import pytest

from vortex_sheet.config import config


def load_version():
    if "vortex_sheet.version" in sys.modules:
        del sys.modules["vortex_sheet.version"]
    from vortex_sheet.version import BASE_VERSION, version

    return BASE_VERSION, version


class TestVersion(object):
    @pytest.fixture(autouse=True)
    def clean_environment(self, monkeypatch):
        monkeypatch.delenv("VORTEXSHEET_VERSION", raising=False)
        monkeypatch.setattr(config, "debug", False)
        yield
        if "vortex_sheet.version" in sys.modules:
            del sys.modules["vortex_sheet.version"]

    def test_normal_version(self):
        base, version = load_version()
        assert re.search(r"^\d+\.\d+\.\d+$", version) is not None
        assert version == base

    def test_environment_var_build_version(self, monkeypatch):
        monkeypatch.setenv("VORTEXSHEET_VERSION", "abc1234")
        base, version = load_version()
        assert version == "{0}+abc1234".format(base)

    def test_environment_var_tag_version(self, monkeypatch):
        monkeypatch.setenv("VORTEXSHEET_VERSION", "v1.2.0")
        base, version = load_version()
        assert version == base

    def test_debug_version(self, monkeypatch):
        monkeypatch.setattr(config, "debug", True)
        _, version = load_version()
        assert version.endswith("-dev")

    def test_debug_env_version(self, monkeypatch):
        monkeypatch.setattr(config, "debug", True)
        monkeypatch.setenv("VORTEXSHEET_VERSION", "abcdefg")
        base, version = load_version()
        assert version == "{0}+abcdefg-dev".format(base)
