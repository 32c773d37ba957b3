"""Deterministic report serialization: fixed field order, JSON or flattened CSV.

Complex numbers travel as "re+imi" strings with 17 significant digits (enough
to round-trip doubles); infinities become the string "infinity" because strict
JSON has no token for them.  Identical payloads serialize to identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any

from .seqspace import SeqVector

__all__ = [
    "complex_str",
    "parse_complex",
    "finite_or_string",
    "vector_payload",
    "json_bytes",
    "csv_bytes",
]


def complex_str(z: complex) -> str:
    z = complex(z)
    re, im = z.real, z.imag
    if im == 0:
        im = 0.0  # normalize -0.0 so the sign byte is stable
    if re == 0:
        re = 0.0
    sign = "+" if im >= 0 else "-"
    return f"{re:.17g}{sign}{abs(im):.17g}i"


def parse_complex(text: str) -> complex:
    """Inverse of complex_str; also accepts plain reals and 'i' shorthands."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty complex literal")
    if s.endswith(("i", "I", "j", "J")):
        s = s[:-1] + "j"
        if s in ("j", "+j"):
            return 1j
        if s == "-j":
            return -1j
        try:
            return complex(s)
        except ValueError as err:
            raise ValueError(f"cannot parse complex number {text!r}") from err
    try:
        return complex(float(s))
    except ValueError as err:
        raise ValueError(f"cannot parse complex number {text!r}") from err


def finite_or_string(x: float) -> float | str:
    """Map +/-inf to a JSON-safe string; finite floats pass through."""
    if math.isinf(x):
        return "infinity" if x > 0 else "-infinity"
    return x


def vector_payload(v: SeqVector) -> dict[str, Any]:
    return {
        "space": str(v.space),
        "coords": [[i, complex_str(val)] for i, val in v.coords],
    }


def json_bytes(payload: dict[str, Any]) -> bytes:
    text = json.dumps(payload, indent=2, ensure_ascii=False, allow_nan=False)
    return (text + "\n").encode("utf-8")


def _flatten(prefix: str, value: Any, rows: list[tuple[str, Any]]) -> None:
    if isinstance(value, dict):
        for key, sub in value.items():
            _flatten(f"{prefix}.{key}" if prefix else str(key), sub, rows)
    elif isinstance(value, (list, tuple)):
        for k, sub in enumerate(value):
            _flatten(f"{prefix}[{k}]", sub, rows)
    else:
        rows.append((prefix, value))


def csv_bytes(payload: dict[str, Any]) -> bytes:
    """Flatten the payload to field,value rows (lists get indexed field names)."""
    rows: list[tuple[str, Any]] = []
    _flatten("", payload, rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["field", "value"])
    for name, value in rows:
        writer.writerow([name, "" if value is None else value])
    return buf.getvalue().encode("utf-8")
