"""JSON report envelope, serialization and schema.

Every command prints ``{"command", "domain", "params", "result"}`` with
sorted keys and no timestamps, so identical invocations give identical
bytes.  Non-finite floats become ``null``; results that can diverge carry
an explicit ``divergent`` flag next to the value.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, is_dataclass
from typing import Any, Iterable, Sequence

import numpy as np

CSV_HEADERS: dict[str, tuple[str, ...]] = {
    "norm": ("beta", "norm_sq"),
    "monomial-norms": ("multi_index", "total_degree", "norm_sq"),
    "dilation-sweep": ("beta", "r", "cap", "Q", "excess", "tail_fraction", "converged"),
    "energy": ("beta", "energy", "divergent"),
    "capacity-bound": ("beta", "energy", "capacity_lower_bound"),
    "pointeval-bound": ("beta", "bound", "divergent"),
    "s-bound": ("j", "S"),
    "laplace-verify": ("lambda", "integral", "asymptote", "ratio", "abserr"),
    "pse-check": ("kind", "max_rel_error", "min_ratio", "max_ratio", "constant"),
    "oracle": ("label", "estimate", "std_error", "exact", "z_score"),
    "approx-reinhardt": ("face", "lambda", "exponents"),
    "verdict": ("verdict", "kind", "reason"),
}

REPORT_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["command", "domain", "params", "result"],
    "additionalProperties": False,
    "properties": {
        "command": {"enum": sorted(CSV_HEADERS)},
        "domain": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["kind"],
                    "properties": {"kind": {"enum": ["ellipsoid", "polydisk", "polyhedral"]}},
                },
            ]
        },
        "params": {"type": "object"},
        "result": {"type": "object"},
    },
}


def clean(obj):
    """Recursively convert to plain JSON types; non-finite floats become ``None``."""
    if is_dataclass(obj) and not isinstance(obj, type):
        obj = obj.to_json() if hasattr(obj, "to_json") else asdict(obj)
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [clean(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, complex):
        return [clean(obj.real), clean(obj.imag)]
    return obj


def dumps(command: str, domain, params: dict, result: dict) -> str:
    doc = {
        "command": command,
        "domain": None if domain is None else domain.to_json(),
        "params": params,
        "result": result,
    }
    return json.dumps(clean(doc), sort_keys=True, indent=2, allow_nan=False)


def write_csv(path: str, command: str, rows: Iterable[Sequence]) -> None:
    header = CSV_HEADERS[command]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            if len(row) != len(header):
                raise ValueError("row length does not match the CSV header")
            w.writerow(["" if isinstance(x, float) and not math.isfinite(x) else _fmt(x) for x in row])


def _fmt(x):
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return x
