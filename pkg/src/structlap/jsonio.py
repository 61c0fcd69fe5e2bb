"""Canonical JSON: sorted keys, 2-space indent, floats with 17 significant digits."""

from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np


def _float(x):
    x = float(x)
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    if "e" not in s and "." not in s and "inf" not in s:
        s += ".0"
    return s


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float(obj)
    if isinstance(obj, Fraction):
        return json.dumps(str(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = sorted((str(k), v) for k, v in obj.items())
        body = (",\n").join(f"{pad}{json.dumps(k)}: {_encode(v, indent, level + 1)}" for k, v in items)
        return "{\n" + body + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        body = (",\n").join(f"{pad}{_encode(v, indent, level + 1)}" for v in obj)
        return "[\n" + body + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def canonical_dumps(obj, indent: int = 2) -> str:
    return _encode(obj, indent, 0) + "\n"
