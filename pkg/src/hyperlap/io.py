"""JSON and CSV emitters with deterministic formatting."""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction

import numpy as np


def render_exact(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def jsonable(obj, exact: bool = False):
    """Convert numpy/Fraction containers into plain JSON values.

    Fractions become ``"p/q"`` strings when ``exact`` is set and floats
    otherwise.  Non-finite floats become ``null``.
    """
    if isinstance(obj, dict):
        return {str(k): jsonable(v, exact) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v, exact) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v, exact) for v in obj.tolist()] if obj.ndim else jsonable(obj.item(), exact)
    if isinstance(obj, Fraction):
        return render_exact(obj) if exact else float(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": jsonable(obj.real), "im": jsonable(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return 0.0 if x == 0 else x
    return obj


def dumps(obj, exact: bool = False) -> str:
    return json.dumps(jsonable(obj, exact), indent=2, allow_nan=False) + "\n"


def csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in r])
    return buf.getvalue()
