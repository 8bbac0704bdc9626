"""Canonical JSON output: sorted keys, UTF-8, floats at 12 significant
digits.  Identical data always serializes to identical bytes, which makes
solution files diffable and lets tests compare runs byte for byte."""

from __future__ import annotations

import json
import math


def _quantize(value):
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"cannot serialize non-finite number {value}")
        return float(f"{value:.12g}") + 0.0  # also folds -0.0 into 0.0
    if isinstance(value, dict):
        return {k: _quantize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_quantize(v) for v in value]
    return value


def canonical_dumps(doc) -> str:
    return json.dumps(_quantize(doc), sort_keys=True, indent=1) + "\n"


def write_json(path: str, doc) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_dumps(doc))
