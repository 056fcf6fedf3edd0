"""Self-describing CSV/JSON writers with atomic replacement."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__

TOOL = "betaensemble"


def _plain(obj):
    """Convert numpy scalars/arrays and complex numbers into JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, complex):
        return {"re": _plain(obj.real), "im": _plain(obj.imag)}
    return obj


def header(config: dict, status: str = "ok") -> dict:
    return {"tool": TOOL, "version": __version__, "status": status,
            "seed": config.get("seed"), "config": _plain(config)}


def render_json(config: dict, payload: dict, status: str = "ok") -> str:
    doc = header(config, status)
    doc["result"] = _plain(payload)
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def render_csv(config: dict, rows: list, status: str = "ok", columns=None) -> str:
    buf = io.StringIO()
    buf.write(f"# {TOOL} {__version__}\n")
    buf.write(f"# status: {status}\n")
    buf.write(f"# seed: {config.get('seed')}\n")
    buf.write(f"# config: {json.dumps(_plain(config), sort_keys=True)}\n")
    if rows:
        columns = columns or list(rows[0].keys())
        w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _cell(r.get(k)) for k in columns})
    elif columns:
        buf.write(",".join(columns) + "\n")
    return buf.getvalue()


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def atomic_write(path: str, text: str) -> None:
    """Write to a temporary sibling, then rename over ``path``."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    tmp = os.path.join(directory, f".{os.path.basename(path)}.tmp{os.getpid()}")
    with open(tmp, "w") as fh:
        fh.write(text)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def emit(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        atomic_write(path, text)


def summary_path(path: str) -> str:
    root, _ = os.path.splitext(path)
    return root + ".summary.json"
