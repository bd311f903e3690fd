"""Plain-text result files.

Every CSV starts with ``#``-prefixed header lines carrying a JSON provenance
record, so ``numpy.loadtxt(path, delimiter=",", skiprows=...)`` or
``pandas.read_csv(path, comment="#")`` read the data directly.  Floats are
written with ``repr`` for exact round trips.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Mapping

import numpy as np


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_columns(path, columns: Mapping[str, object], provenance: Mapping | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = list(columns)
    arrays = [np.asarray(columns[k]) for k in names]
    lengths = {len(a) for a in arrays}
    if len(lengths) > 1:
        raise ValueError(f"column lengths differ: {dict(zip(names, map(len, arrays)))}")
    with path.open("w", newline="") as fh:
        if provenance is not None:
            fh.write("# provenance: " + json.dumps(provenance, sort_keys=True, default=_json_default) + "\n")
        writer = csv.writer(fh)
        writer.writerow(names)
        for row in zip(*arrays):
            writer.writerow([_fmt(v) for v in row])
    return path


def read_columns(path) -> tuple[dict[str, np.ndarray], dict | None]:
    """Inverse of :func:`write_columns`; returns ``(columns, provenance)``."""
    provenance = None
    rows = []
    with Path(path).open(newline="") as fh:
        lines = []
        for line in fh:
            if line.startswith("# provenance: "):
                provenance = json.loads(line[len("# provenance: "):])
            elif not line.startswith("#"):
                lines.append(line)
        reader = csv.reader(lines)
        header = next(reader)
        rows = list(reader)
    cols = {}
    for j, name in enumerate(header):
        values = [r[j] for r in rows]
        try:
            cols[name] = np.array([float(v) for v in values])
        except ValueError:
            cols[name] = np.array(values)
    return cols, provenance


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _clean(obj):
    # JSON has no NaN/inf; encode them as null so any reader accepts the file
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def write_json(path, payload) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(_clean(json.loads(json.dumps(payload, default=_json_default))), indent=2, sort_keys=True)
    path.write_text(text + "\n")
    return path
