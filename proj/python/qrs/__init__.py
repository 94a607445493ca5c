"""Python bindings for the qrs C++ core."""

import json

from . import _core
from ._core import *  # noqa: F401,F403
from ._core import CapExceeded, ConfigError, NumericalError  # noqa: F401


def run(subcommand, **config):
    """Run a CLI subcommand in-process. Returns (tables, summary) with tables keyed by name."""
    result = _core.run(subcommand, {k: str(v) for k, v in config.items()})
    return result["tables"], json.loads(result["summary"])
