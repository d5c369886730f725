"""Self-describing CSV/JSON tables.

CSV dialect: comment lines ``# key: <json>`` carrying metadata, then a header
row, comma separated, LF line endings, floats with 17 significant digits so
that every value round-trips exactly.
"""

import io
import json
import math

import numpy as np

from . import __version__


def fmt_float(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def with_version(metadata: dict | None) -> dict:
    meta = {"tool": "fnig", "version": __version__}
    meta.update(metadata or {})
    return meta


def csv_text(columns: dict, metadata: dict | None = None) -> str:
    """Render equal-length columns as CSV text with a metadata preamble."""
    names = list(columns)
    arrays = [np.asarray(columns[n]) for n in names]
    lengths = {len(a) for a in arrays}
    if len(lengths) > 1:
        raise ValueError(f"columns have unequal lengths: {sorted(lengths)}")
    out = io.StringIO()
    for key, value in with_version(metadata).items():
        out.write(f"# {key}: {json.dumps(_jsonable(value), sort_keys=True)}\n")
    out.write(",".join(names) + "\n")
    for row in zip(*arrays):
        out.write(",".join(fmt_float(v) for v in row) + "\n")
    return out.getvalue()


def parse_csv(text: str) -> tuple[dict, dict]:
    """Inverse of :func:`csv_text`: returns (columns, metadata)."""
    metadata = {}
    lines = text.splitlines()
    i = 0
    while i < len(lines) and lines[i].startswith("#"):
        key, _, value = lines[i][2:].partition(": ")
        metadata[key] = json.loads(value)
        i += 1
    names = lines[i].split(",")
    rows = [[float(v) for v in line.split(",")] for line in lines[i + 1:] if line]
    data = np.array(rows, dtype=float).reshape(-1, len(names))
    return {n: data[:, j] for j, n in enumerate(names)}, metadata


def json_text(payload: dict, metadata: dict | None = None) -> str:
    doc = {"metadata": with_version(metadata), **payload}
    return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"
