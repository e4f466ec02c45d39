"""Byte-stable artifact serialization.

JSON output sorts object keys and renders every float with %.17g (enough
digits to round-trip any double), so identical inputs produce identical
bytes whatever dict construction order or worker count produced them.
CSV profile output uses the fixed header t,rank,sigma_k; skipped grid
points keep their row with rank -1 and an empty sigma_k field.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import ValidationError


def format_float(value: float) -> str:
    """%.17g rendering; rejects NaN and infinities."""
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"non-finite float {value!r} in artifact")
    return f"{value:.17g}"


def _write(obj, out: list[str]) -> None:
    if isinstance(obj, dict):
        out.append("{")
        for pos, key in enumerate(sorted(obj)):
            if not isinstance(key, str):
                raise ValidationError(f"JSON object keys must be strings, got {key!r}")
            if pos:
                out.append(",")
            out.append(json.dumps(key))
            out.append(":")
            _write(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for pos, item in enumerate(obj):
            if pos:
                out.append(",")
            _write(item, out)
        out.append("]")
    elif isinstance(obj, bool) or isinstance(obj, np.bool_):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif obj is None:
        out.append("null")
    elif isinstance(obj, np.ndarray):
        _write(obj.tolist(), out)
    else:
        raise ValidationError(f"cannot serialize {type(obj).__name__} deterministically")


def dumps_stable(obj) -> str:
    """Deterministic JSON text for an artifact (no trailing newline)."""
    out: list[str] = []
    _write(obj, out)
    return "".join(out)


def profile_csv(ts, ranks, sigma_k) -> str:
    """CSV for a sampled rank profile: header t,rank,sigma_k, one row per point.

    Skipped points (rank < 0 or sigma None/NaN) keep their row with an
    empty sigma_k field.
    """
    lines = ["t,rank,sigma_k"]
    for t, rank, sigma in zip(ts, ranks, sigma_k):
        skipped = sigma is None or not math.isfinite(float(sigma))
        sigma_text = "" if skipped else format_float(float(sigma))
        lines.append(f"{format_float(float(t))},{int(rank)},{sigma_text}")
    return "\n".join(lines) + "\n"
