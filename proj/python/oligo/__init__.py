"""Finite-scale workbench for homogeneous structures, finite-language encodings,
group splittings and clone gadgets.

Every function takes and returns plain Python data (dicts, lists, ints); the
JSON formats are the same as the command-line tool's.
"""

import json as _json

from ._oligo import OligoError, battery_checks, command_names
from . import _oligo

__all__ = [
    "OligoError",
    "battery_checks",
    "command_names",
    "run",
    "check",
    "certificate",
    "replay",
    "suite",
    "digest",
]


def run(command, **params):
    """Run one command; returns its result dict (always with a "verdict")."""
    return _json.loads(_oligo.run_command(command, _json.dumps(params)))


def check(name, config=None):
    """Run one battery check with a suite config (defaults for missing keys)."""
    return _json.loads(_oligo.run_check(name, _json.dumps(config or {})))


def certificate(command, params, result):
    """Certificate for a result produced by run(command, **params)."""
    return _json.loads(_oligo.make_certificate(command, _json.dumps(params), _json.dumps(result)))


def replay(cert):
    """Re-run a certificate; returns {"ok": bool, "detail": str}."""
    return _json.loads(_oligo.replay(_json.dumps(cert)))


def suite(module, out, config=None, jobs=1):
    """Run a module's battery, writing certificates under out; returns the summary."""
    return _json.loads(_oligo.run_suite(module, _json.dumps(config or {}), str(out), jobs))


def digest(value):
    """FNV-1a 64 digest of the compact JSON dump, as used by certificates."""
    return _oligo.digest(_json.dumps(value))
