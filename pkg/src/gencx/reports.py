"""Deterministic report assembly and JSON-safe serialization.

Reports carry a schema tag, the digests of their input files, a verdict,
and command-specific tables.  JSON output is canonical (sorted keys, fixed
separators) and never includes wall-clock timing, so identical inputs give
byte-identical documents; the text renderer adds timing at the end.
"""

import hashlib
import json
from fractions import Fraction

from .scalars import GaussRational, format_gauss

SCHEMA = 1


def digest(text):
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def jsonable(value):
    """Recursively convert engine values to JSON-ready primitives."""
    if isinstance(value, GaussRational):
        return format_gauss(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {_key_text(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    return str(value)


def _key_text(key):
    if isinstance(key, tuple):
        return ",".join(str(k) for k in key)
    return str(key)


def dumps(payload):
    return json.dumps(jsonable(payload), sort_keys=True, separators=(",", ": "), indent=2) + "\n"


def dim_table_text(dims, label="level"):
    """Aligned two-column table for {degree: dimension} maps."""
    levels = sorted(dims, reverse=True)
    if not levels:
        return "(empty)"
    width = max(len(str(i)) for i in levels)
    lines = ["%*s  dim" % (width + 2, label)]
    for i in levels:
        lines.append("%*d  %3d" % (width + 2, i, dims[i]))
    return "\n".join(lines)


class Report:
    """One command's outcome over one input file."""

    __slots__ = ("command", "inputs", "verdict", "data", "lines", "timing")

    def __init__(self, command, inputs, verdict, data, lines=(), timing=None):
        self.command = command
        self.inputs = inputs
        self.verdict = verdict
        self.data = data
        self.lines = list(lines)
        self.timing = timing

    def json_dict(self):
        return {
            "schema": SCHEMA,
            "command": self.command,
            "inputs": self.inputs,
            "verdict": self.verdict,
            "data": self.data,
        }

    def text(self):
        out = ["%s: %s" % (self.command, _verdict_text(self.verdict))]
        for item in self.inputs:
            out.append("input %s  sha256 %s" % (item["path"], item["sha256"][:16]))
        out.extend(self.lines)
        if self.timing is not None:
            out.append("elapsed: %.3fs" % self.timing)
        return "\n".join(out)


def _verdict_text(verdict):
    if verdict is True:
        return "verified"
    if verdict is False:
        return "falsified"
    return "done"
