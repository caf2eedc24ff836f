import os

from vortex_sheet.config import config

# Base version - updated by bump-my-version
BASE_VERSION = "0.3.0"


def get_version():
    """Return the display version string.

    ``VORTEXSHEET_VERSION`` (set by packaging scripts) replaces the local
    build tag; debug configurations get a ``-dev`` suffix.
    """
    display = BASE_VERSION
    build = os.environ.get("VORTEXSHEET_VERSION")
    if build and not build.startswith("v"):
        display = "{0}+{1}".format(BASE_VERSION, build)
    if config.debug:
        display += "-dev"
    return display


version = get_version()
