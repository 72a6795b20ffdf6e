"""JSON file formats for instances, matrices and recovery traces.

All scalars are written in canonical ``"p/q"`` text, never as JSON numbers,
so a round trip is bit-exact.  Every document carries a ``format`` tag and a
``version``.

Instance::

    {"format": "sigrecover/instance", "version": 1, "dim": d,
     "tensor": [d**3 scalars, (i, j, k) lexicographic],
     "matrix": [[...], ...] | null, "seed": int | null, "bound": int | null}

Matrix::

    {"format": "sigrecover/matrix", "version": 1, "rows": r, "cols": c,
     "entries": [r*c scalars, row-major]}

Trace::

    {"format": "sigrecover/trace", "version": 1, "dim": d, "seed": n,
     "retries": {"s": count}, "mul_count": n, "final_matrix": <matrix>,
     "steps": [{"s": s, "role": role, "op": <op>}, ...]}

with ops ``{"kind": "upper" | "lower", "s": s, "coeffs": [...]}``,
``{"kind": "diag", "s": s, "root": r}``, ``{"kind": "perm", "s": s, "t": t}``
and ``{"kind": "general", "s": s, "matrix": [[...], ...]}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .exact import format_scalar, parse_scalar
from .gauss import Diag, GaussOp, General, Lower, Perm, Upper
from .matrix import Matrix
from .recovery import ROLES, RecoveryTrace, TraceStep
from .tensor import Tensor3

VERSION = 1
INSTANCE = "sigrecover/instance"
MATRIX = "sigrecover/matrix"
TRACE = "sigrecover/trace"


class FormatError(ValueError):
    """A file does not follow one of the documented formats."""


@dataclass(frozen=True)
class InstanceFile:
    tensor: Tensor3
    matrix: Matrix | None = None
    seed: int | None = None
    bound: int | None = None

    @property
    def dim(self) -> int:
        return self.tensor.dim


def _scalars(values) -> list:
    try:
        return [parse_scalar(v) for v in values]
    except (TypeError, AttributeError, ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad scalar list: {exc}") from None


def _rows_to_json(m: Matrix) -> list[list[str]]:
    return [[format_scalar(v) for v in row] for row in m.tolist()]


def _rows_from_json(rows) -> Matrix:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise FormatError("matrix rows must be a non-empty list of lists")
    try:
        return Matrix([_scalars(r) for r in rows])
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def _header(doc: Any, fmt: str) -> dict:
    if not isinstance(doc, dict):
        raise FormatError("expected a JSON object")
    if doc.get("format") != fmt:
        raise FormatError(f"expected format {fmt!r}, got {doc.get('format')!r}")
    if doc.get("version") != VERSION:
        raise FormatError(f"unsupported version {doc.get('version')!r}")
    return doc


def _int(doc: dict, key: str, optional: bool = False) -> int | None:
    v = doc.get(key)
    if v is None and optional:
        return None
    if not isinstance(v, int) or isinstance(v, bool):
        raise FormatError(f"{key!r} must be an integer")
    return v


# -- matrices ---------------------------------------------------------------------


def matrix_to_dict(m: Matrix) -> dict:
    return {
        "format": MATRIX,
        "version": VERSION,
        "rows": m.nrows,
        "cols": m.ncols,
        "entries": [format_scalar(v) for row in m.tolist() for v in row],
    }


def matrix_from_dict(doc: Any) -> Matrix:
    doc = _header(doc, MATRIX)
    r, c = _int(doc, "rows"), _int(doc, "cols")
    entries = doc.get("entries")
    if r < 1 or c < 1 or not isinstance(entries, list) or len(entries) != r * c:
        raise FormatError("matrix needs rows, cols >= 1 and rows*cols entries")
    vals = _scalars(entries)
    return Matrix([vals[i * c:(i + 1) * c] for i in range(r)])


# -- instances ----------------------------------------------------------------------


def instance_to_dict(inst: InstanceFile) -> dict:
    return {
        "format": INSTANCE,
        "version": VERSION,
        "dim": inst.dim,
        "tensor": [format_scalar(v) for v in inst.tensor.flat()],
        "matrix": None if inst.matrix is None else _rows_to_json(inst.matrix),
        "seed": inst.seed,
        "bound": inst.bound,
    }


def instance_from_dict(doc: Any) -> InstanceFile:
    doc = _header(doc, INSTANCE)
    d = _int(doc, "dim")
    if d < 1:
        raise FormatError("dim must be positive")
    entries = doc.get("tensor")
    if not isinstance(entries, list) or len(entries) != d**3:
        raise FormatError(f"tensor must list {d**3} entries for dim {d}")
    tensor = Tensor3.from_flat(d, _scalars(entries))
    matrix = None
    if doc.get("matrix") is not None:
        matrix = _rows_from_json(doc["matrix"])
        if matrix.shape != (d, d):
            raise FormatError(f"ground-truth matrix must be {d}x{d}")
    return InstanceFile(tensor, matrix, _int(doc, "seed", True), _int(doc, "bound", True))


# -- traces ------------------------------------------------------------------------


def op_to_dict(op: GaussOp) -> dict:
    if isinstance(op, (Lower, Upper)):
        coeffs = op.y if isinstance(op, Lower) else op.x
        return {"kind": type(op).__name__.lower(), "s": op.s, "coeffs": [format_scalar(v) for v in coeffs]}
    if isinstance(op, Diag):
        return {"kind": "diag", "s": op.s, "root": format_scalar(op.root)}
    if isinstance(op, Perm):
        return {"kind": "perm", "s": op.s, "t": op.t}
    return {"kind": "general", "s": op.s, "matrix": _rows_to_json(op.w)}


def op_from_dict(doc: Any) -> GaussOp:
    if not isinstance(doc, dict):
        raise FormatError("op must be an object")
    kind = doc.get("kind")
    s = _int(doc, "s")
    try:
        if kind == "upper":
            return Upper(s, _scalars(doc.get("coeffs", [])))
        if kind == "lower":
            return Lower(s, _scalars(doc.get("coeffs", [])))
        if kind == "diag":
            return Diag(s, _scalars([doc.get("root")])[0])
        if kind == "perm":
            return Perm(s, _int(doc, "t"))
        if kind == "general":
            return General(s, _rows_from_json(doc.get("matrix")))
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    raise FormatError(f"unknown op kind {kind!r}")


def trace_to_dict(trace: RecoveryTrace) -> dict:
    return {
        "format": TRACE,
        "version": VERSION,
        "dim": trace.dim,
        "seed": trace.random_seed,
        "retries": {str(s): n for s, n in sorted(trace.retries.items())},
        "mul_count": trace.mul_count,
        "final_matrix": None if trace.final_matrix is None else matrix_to_dict(trace.final_matrix),
        "steps": [{"s": st.s, "role": st.role, "op": op_to_dict(st.op)} for st in trace.steps],
    }


def trace_from_dict(doc: Any) -> RecoveryTrace:
    doc = _header(doc, TRACE)
    steps = []
    for raw in doc.get("steps", []):
        if not isinstance(raw, dict) or raw.get("role") not in ROLES:
            raise FormatError(f"bad trace step {raw!r}")
        steps.append(TraceStep(_int(raw, "s"), op_from_dict(raw.get("op")), raw["role"]))
    retries = doc.get("retries", {})
    if not isinstance(retries, dict):
        raise FormatError("retries must be an object")
    fm = doc.get("final_matrix")
    return RecoveryTrace(
        dim=_int(doc, "dim"),
        random_seed=_int(doc, "seed"),
        steps=steps,
        retries={int(k): int(v) for k, v in retries.items()},
        final_matrix=None if fm is None else matrix_from_dict(fm),
        mul_count=_int(doc, "mul_count", True) or 0,
    )


# -- files -------------------------------------------------------------------------


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1) + "\n"


def read_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None


def write_json(path: str | Path, doc: dict) -> None:
    Path(path).write_text(dumps(doc))


def load_instance(path: str | Path) -> InstanceFile:
    return instance_from_dict(read_json(path))


def load_matrix(path: str | Path) -> Matrix:
    """Read a matrix file, or the ground-truth matrix of an instance file."""
    doc = read_json(path)
    if isinstance(doc, dict) and doc.get("format") == INSTANCE:
        inst = instance_from_dict(doc)
        if inst.matrix is None:
            raise FormatError(f"{path}: instance has no matrix")
        return inst.matrix
    return matrix_from_dict(doc)


def load_trace(path: str | Path) -> RecoveryTrace:
    return trace_from_dict(read_json(path))
