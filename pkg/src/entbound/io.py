"""State files, LOO dumps and sweep CSVs.

State file layout (JSON)::

    {"dims": [m, n], "matrix": [[re, im], ...]}

with ``(m*n)**2`` entries in row-major order. Floats are written with
``repr`` so a write/read cycle is exact.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .loo import LOOPair
from .qstate import BipartiteDims, DensityMatrix, validate_density


class StateFileError(ValueError):
    """Malformed state or LOO file (syntax or structure)."""


def _pairs(mat: np.ndarray) -> list[list[float]]:
    flat = np.asarray(mat, dtype=np.complex128).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def _complex(entries, count: int, what: str) -> np.ndarray:
    if not isinstance(entries, list) or len(entries) != count:
        got = len(entries) if isinstance(entries, list) else type(entries).__name__
        raise StateFileError(f"{what}: expected {count} [re, im] entries, got {got}")
    try:
        arr = np.array(entries, dtype=float)
    except (TypeError, ValueError) as err:
        raise StateFileError(f"{what}: entries must be numeric [re, im] pairs") from err
    if arr.shape != (count, 2):
        raise StateFileError(f"{what}: entries must be [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def _load_json(text: str, source: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise StateFileError(f"{source}: parse error at line {err.lineno}, column {err.colno} (offset {err.pos}): {err.msg}") from err


def state_to_json(mat, dims: BipartiteDims | tuple[int, int]) -> str:
    m, n = (dims.m, dims.n) if isinstance(dims, BipartiteDims) else dims
    return json.dumps({"dims": [int(m), int(n)], "matrix": _pairs(mat)})


def parse_state(text: str, source: str = "<string>") -> tuple[np.ndarray, BipartiteDims]:
    """Decode a state file without validating the physics."""
    doc = _load_json(text, source)
    if not isinstance(doc, dict) or "dims" not in doc or "matrix" not in doc:
        raise StateFileError(f"{source}: expected an object with 'dims' and 'matrix'")
    dims = doc["dims"]
    if not (isinstance(dims, list) and len(dims) == 2 and all(isinstance(d, int) for d in dims)):
        raise StateFileError(f"{source}: 'dims' must be [m, n] integers")
    m, n = dims
    if m < 2 or n < 2:
        raise StateFileError(f"{source}: subsystem dimensions must be >= 2")
    d = m * n
    mat = _complex(doc["matrix"], d * d, source).reshape(d, d)
    return mat, BipartiteDims(m, n)


def read_state(path) -> DensityMatrix:
    path = Path(path)
    mat, dims = parse_state(path.read_text(), str(path))
    return validate_density(mat, dims)


def write_state(path, rho: DensityMatrix) -> None:
    Path(path).write_text(state_to_json(rho.mat, rho.dims) + "\n")


def pair_to_json(pair: LOOPair) -> str:
    m, n = pair.dims.m, pair.dims.n
    return json.dumps(
        {
            "dims": [m, n],
            "name": pair.name,
            "active": [bool(x) for x in pair.active],
            "a": [_pairs(g) for g in pair.a],
            "b": [_pairs(g) for g in pair.b],
        }
    )


def parse_pair(text: str, source: str = "<string>") -> LOOPair:
    doc = _load_json(text, source)
    try:
        m, n = doc["dims"]
        count = n * n
        a = np.array([_complex(g, m * m, f"{source}: a[{i}]").reshape(m, m) for i, g in enumerate(doc["a"])])
        b = np.array([_complex(g, n * n, f"{source}: b[{i}]").reshape(n, n) for i, g in enumerate(doc["b"])])
        active = np.array(doc.get("active", [i < m * m for i in range(count)]), dtype=bool)
    except (KeyError, TypeError, ValueError) as err:
        if isinstance(err, StateFileError):
            raise
        raise StateFileError(f"{source}: malformed LOO file ({err})") from err
    if len(a) != count or len(b) != count:
        raise StateFileError(f"{source}: expected {count} paired observables")
    return LOOPair(BipartiteDims(m, n), a, b, active, doc.get("name", "file"))


def read_pair(path) -> LOOPair:
    path = Path(path)
    return parse_pair(path.read_text(), str(path))


def write_pair(path, pair: LOOPair) -> None:
    Path(path).write_text(pair_to_json(pair) + "\n")


CSV_HEADER = "param,ccnr_bound,ppt_bound,lurs_bound,cm_bound,best"


def fmt(x: float) -> str:
    s = f"{x:.9g}"
    return "0" if s == "-0" else s


def rows_to_csv(rows) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(",".join(fmt(v) for v in (r.param, r.ccnr_bound, r.ppt_bound, r.lurs_bound, r.cm_bound, r.best)))
    return "\n".join(lines) + "\n"


def write_csv(path, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(rows_to_csv(rows))
