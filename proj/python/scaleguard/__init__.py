"""Deterministic three-tier ingress defense and autoscaling simulator."""

import json

from . import _core
from ._core import ValidationError, __version__


def run_scenario(name, variant):
    """Run a canned scenario variant and return the metrics report dict."""
    return json.loads(_core.run_scenario(name, variant))


def scenario_config(name, variant):
    """Return the canned config for a scenario variant as a dict."""
    return json.loads(_core.scenario_config(name, variant))


def run_config(config):
    """Run a simulation config (dict or JSON text); returns the report dict."""
    text = config if isinstance(config, str) else json.dumps(config)
    return json.loads(_core.run_config(text))


def compare(report_a, report_b):
    """Compare two reports (dicts or JSON text) of the same workload seed."""
    a = report_a if isinstance(report_a, str) else json.dumps(report_a)
    b = report_b if isinstance(report_b, str) else json.dumps(report_b)
    return json.loads(_core.compare(a, b))


__all__ = [
    "ValidationError",
    "__version__",
    "compare",
    "run_config",
    "run_scenario",
    "scenario_config",
]
