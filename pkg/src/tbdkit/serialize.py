"""Deterministic serialization for reports.

Floating output is byte-stable by construction: every float is
formatted with '%.17g' (round-trip exact for doubles), keys are sorted,
and complex values become {"im": ..., "re": ...} records. The stdlib
json encoder is deliberately not used for numbers so that byte identity
does not hinge on repr() behavior across interpreter versions.
Non-finite numbers are rejected: a report containing NaN is a bug, not
something to serialize quietly.
"""

from __future__ import annotations

import dataclasses
import json
import math

import numpy as np


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite number in report: {x}")
    return "%.17g" % x


def _encode(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        c = complex(obj)
        return '{"im":%s,"re":%s}' % (_format_float(c.imag), _format_float(c.real))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=True)
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist())
    if isinstance(obj, dict):
        for k in obj:
            if not isinstance(k, str):
                raise TypeError(f"report keys must be strings, got {k!r}")
        items = (f"{json.dumps(k, ensure_ascii=True)}:{_encode(v)}" for k, v in sorted(obj.items()))
        return "{" + ",".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_encode(v) for v in obj) + "]"
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _encode({f.name: getattr(obj, f.name) for f in dataclasses.fields(obj)})
    raise TypeError(f"cannot serialize {type(obj).__name__} deterministically")


def canonical_json(obj) -> str:
    """Canonical JSON text of a report object (no trailing newline)."""
    return _encode(obj)


def write_json(path, obj):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(canonical_json(obj))
        fh.write("\n")


def _format_cell(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, bool) or isinstance(v, np.bool_):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return _format_float(float(v))
    raise TypeError(f"CSV cells must be scalars, got {type(v).__name__}")


def write_csv(path, header, rows):
    """Comma-separated table, header row first, '%.17g' floats, no
    locale dependence. Complex columns must be split into re/im pairs
    by the caller (that is the file format)."""
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            if len(row) != len(header):
                raise ValueError("row width does not match header")
            fh.write(",".join(_format_cell(v) for v in row) + "\n")
