from os import path
from sys import modules

from tests.mock_config import MockConfig


def pytest_configure(config):
    # This is so that we can override (mock) the config
    # variable, so that we can tell it to load our custom
    # unit test based config file
    config_location = path.join(path.dirname(path.abspath(__file__)), "vortex_sheet/vortex_sheet.conf.inc")
    modules["vortex_sheet.config"] = MockConfig(config_location)
