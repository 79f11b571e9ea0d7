"""Deterministic serialization helpers.

Every JSON artifact the package emits goes through :func:`canonical_json`:
keys sorted, floats printed with 12 significant digits, no whitespace
variation. Identical inputs therefore produce byte-identical output, and
re-parsing an emitted file and emitting it again is a fixed point (a
12-digit decimal survives a parse/format round trip exactly).
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from typing import Any

from .errors import InvalidInput


def format_float(x: float) -> str:
    """Render a float with 12 significant digits as a valid JSON number."""
    if not math.isfinite(x):
        raise InvalidInput(f"non-finite value {x!r} cannot be serialized")
    if x == 0.0:  # normalize -0.0
        return "0"
    return format(x, ".12g")


def canonical_json(obj: Any) -> str:
    """Serialize to compact JSON with sorted keys and fixed float format."""
    return _serialize(obj) + "\n"


def _serialize(obj: Any) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = []
        for key in sorted(obj):
            if not isinstance(key, str):
                raise InvalidInput(f"JSON object keys must be strings, got {key!r}")
            items.append(f"{json.dumps(key)}:{_serialize(obj[key])}")
        return "{" + ",".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_serialize(v) for v in obj) + "]"
    # numpy scalars and arrays reduce to the branches above
    if hasattr(obj, "tolist"):
        return _serialize(obj.tolist())
    raise InvalidInput(f"cannot serialize object of type {type(obj).__name__}")


def _reject_constant(name: str) -> float:
    raise InvalidInput(f"non-finite number {name!r} is not allowed")


def loads_json(text: str) -> Any:
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"malformed JSON: {exc}") from exc


def load_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return loads_json(fh.read())
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc


def write_text_atomic(path: str, text: str) -> None:
    """Write via a temp file + rename so readers never see partial output."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".entcomb-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def mask_to_str(mask: int, m: int) -> str:
    """Bob-subset bitmask as a zero-padded binary literal, e.g. ``0b011``.

    Bit k-1 (counted from the right) is party B_k.
    """
    return "0b" + format(mask, f"0{m}b")


def mask_from_str(text: str, m: int) -> int:
    try:
        mask = int(text, 2)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"bad subset bitmask {text!r}") from exc
    if not 0 < mask < (1 << m):
        raise InvalidInput(f"subset bitmask {text!r} out of range for m={m}")
    return mask
