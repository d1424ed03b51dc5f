"""JSON certificates: a command, its inputs, named checks and witnesses."""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction

SCHEMA = 1
PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


def jsonable(x):
    """Plain JSON data from nested tuples, fractions and library objects."""
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return float(f"{x:.12g}")
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        seq = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [jsonable(v) for v in seq]
    if hasattr(x, "value") and isinstance(x.value, Fraction):  # Torsion
        return str(x.value)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def tuplify(x):
    if isinstance(x, list):
        return tuple(tuplify(v) for v in x)
    return x


class Certificate:
    def __init__(self, command, inputs, seed=0, version=None):
        from . import __version__
        self.command = command
        self.inputs = inputs
        self.seed = seed
        self.version = version or __version__
        self.checks = []
        self.artifacts = {}

    def check(self, name, status, details=None):
        if isinstance(status, bool):
            status = PASS if status else FAIL
        if status not in (PASS, FAIL, INCONCLUSIVE):
            raise ValueError(f"bad status {status!r}")
        self.checks.append({"name": name, "status": status, "details": jsonable(details or {})})
        return status

    def add_verdict(self, prefix, verdict, details=None):
        for name, ok in verdict.checks.items():
            self.check(f"{prefix}: {name}" if prefix else name, bool(ok), details)

    def exit_code(self):
        st = [c["status"] for c in self.checks]
        if FAIL in st:
            return 1
        if not st or all(s == INCONCLUSIVE for s in st):
            return 2
        return 0

    def to_json(self):
        return {
            "schema": SCHEMA,
            "command": self.command,
            "inputs": jsonable(self.inputs),
            "checks": self.checks,
            "artifacts": jsonable(self.artifacts),
            "seed": self.seed,
            "version": self.version,
            "status": {0: PASS, 1: FAIL, 2: INCONCLUSIVE}[self.exit_code()],
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=1, ensure_ascii=True) + "\n"

    def write(self, path):
        write_atomic(path, self.dumps())


def error_certificate(command, inputs, message, seed=0):
    cert = Certificate(command, inputs, seed)
    cert.artifacts["error"] = message
    return cert


def write_atomic(path, text):
    path = os.path.abspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), prefix=".cert-")
    try:
        with os.fdopen(fd, "w", encoding="ascii") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
