"""Python access to the ar_core verification library.

Reports come back as plain dicts with the same shape as ``archeck --format json``.
"""

import json

from ._core import FORMAT_VERSION, ArError, Scenario, builtin_names
from ._core import render_report as _render_report

__all__ = [
    "FORMAT_VERSION",
    "ArError",
    "Scenario",
    "builtin_names",
    "load",
    "run_checks",
    "validate_theory",
    "compute",
    "check_stack",
    "classify",
    "render_report",
]


def load(source):
    """A Scenario from a built-in name, a path to a scenario file, or JSON text."""
    if source in builtin_names():
        return Scenario.builtin(source)
    if source.lstrip().startswith("{"):
        return Scenario.parse(source)
    with open(source, encoding="utf-8") as f:
        return Scenario.parse(f.read())


def run_checks(scenario, seed=0, filter=None, epsilon=None, trials=None):
    return json.loads(scenario.run_checks_json(seed, filter, epsilon, trials))


def validate_theory(scenario, theory, seed=0, epsilon=None, trials=None):
    return json.loads(scenario.validate_theory_json(theory, seed, epsilon, trials))


def compute(scenario, theory, input, program="", embedding="", seed=0):
    return json.loads(scenario.compute_json(theory, input, program, embedding, seed))


def check_stack(scenario, stack, seed=0):
    return json.loads(scenario.check_stack_json(stack, seed))


def classify(scenario, joint, oracle=False, seed=0):
    return json.loads(scenario.classify_json(joint, oracle, seed))


def render_report(report, format="text"):
    return _render_report(json.dumps(report), format)
