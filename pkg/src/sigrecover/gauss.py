"""Elementary congruence transformations and their structured application.

Five kinds of operation act on tensors by congruence:

* ``Lower(s, y)``  = I + sum_{g>s} y[g-s] E_{g,s}
* ``Upper(s, x)``  = I + sum_{g>s} x[g-s] E_{s,g}
* ``Diag(s, root)`` = I with ``root`` at (s, s); ``root**3`` is the scaling ``h``
* ``Perm(s, t)``   = the transposition of coordinates s and t (identity if s == t)
* ``General(s, w)`` = a full matrix of the shape ``I_{s-1} ⊕ GL_{d-s+1}``

Pivots are 1-based.  :func:`apply` touches only the slabs an operation
changes, so the first four kinds cost O(d^3) instead of the O(d^4) of a dense
congruence action.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np
from gmpy2 import mpq

from .exact import ONE, format_scalar, scalar, tally
from .matrix import Matrix, identity, inverse
from .tensor import Tensor3


def _coeffs(values: Iterable) -> tuple[mpq, ...]:
    return tuple(scalar(v) for v in values)


@dataclass(frozen=True)
class Lower:
    s: int
    y: tuple[mpq, ...]

    def __post_init__(self):
        object.__setattr__(self, "y", _coeffs(self.y))

    @property
    def dim(self) -> int:
        return self.s + len(self.y)


@dataclass(frozen=True)
class Upper:
    s: int
    x: tuple[mpq, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", _coeffs(self.x))

    @property
    def dim(self) -> int:
        return self.s + len(self.x)


@dataclass(frozen=True)
class Diag:
    s: int
    root: mpq

    def __post_init__(self):
        object.__setattr__(self, "root", scalar(self.root))
        if self.root == 0:
            raise ValueError("diagonal root must be nonzero")

    @property
    def h(self) -> mpq:
        return self.root**3


@dataclass(frozen=True)
class Perm:
    s: int
    t: int

    def __post_init__(self):
        if self.t < self.s:
            raise ValueError(f"Perm needs s <= t, got s={self.s}, t={self.t}")


@dataclass(frozen=True)
class General:
    s: int
    w: Matrix

    @property
    def dim(self) -> int:
        return self.w.nrows


GaussOp = Union[Lower, Upper, Diag, Perm, General]


def _validate(op: GaussOp, d: int) -> None:
    if not 1 <= op.s <= d:
        raise IndexError(f"pivot {op.s} out of range for d={d}")
    if isinstance(op, (Lower, Upper)) and op.dim != d:
        raise ValueError(f"{type(op).__name__}({op.s}) has {op.dim - op.s} coefficients, expected {d - op.s}")
    if isinstance(op, Perm) and op.t > d:
        raise IndexError(f"Perm target {op.t} out of range for d={d}")
    if isinstance(op, General):
        if op.w.shape != (d, d):
            raise ValueError(f"General matrix is {op.w.shape}, expected {(d, d)}")
        a = op.w._a
        p = op.s - 1
        if not ((a[:p, :] == identity(d)._a[:p, :]).all() and (a[:, :p] == identity(d)._a[:, :p]).all()):
            raise ValueError(f"General matrix is not of the form I_{op.s - 1} ⊕ W")


def to_matrix(op: GaussOp, d: int) -> Matrix:
    _validate(op, d)
    m = identity(d)._a
    p = op.s - 1
    if isinstance(op, Lower):
        m[p + 1:, p] = op.y
    elif isinstance(op, Upper):
        m[p, p + 1:] = op.x
    elif isinstance(op, Diag):
        m[p, p] = op.root
    elif isinstance(op, Perm):
        m[[p, op.t - 1]] = m[[op.t - 1, p]]
    else:
        return op.w
    return Matrix._wrap(m)


def inverse_op(op: GaussOp) -> GaussOp:
    if isinstance(op, Lower):
        return Lower(op.s, [-v for v in op.y])
    if isinstance(op, Upper):
        return Upper(op.s, [-v for v in op.x])
    if isinstance(op, Diag):
        return Diag(op.s, ONE / op.root)
    if isinstance(op, Perm):
        return op
    return General(op.s, inverse(op.w))


def is_identity(op: GaussOp) -> bool:
    if isinstance(op, Lower):
        return not any(op.y)
    if isinstance(op, Upper):
        return not any(op.x)
    if isinstance(op, Diag):
        return op.root == 1
    if isinstance(op, Perm):
        return op.s == op.t
    return op.w == identity(op.w.nrows)


def _act_first_axis(op: GaussOp, v: np.ndarray) -> None:
    """Left-multiply ``v`` (a view whose axis 0 is acted on) by ``op`` in place."""
    p = op.s - 1
    slab = v[0].size
    if isinstance(op, Upper):
        acc = v[p]
        for g, c in enumerate(op.x, start=p + 1):
            if c:
                acc = acc + c * v[g]
                tally(slab)
        v[p] = acc
    elif isinstance(op, Lower):
        base = v[p].copy()
        for g, c in enumerate(op.y, start=p + 1):
            if c:
                v[g] = v[g] + c * base
                tally(slab)
    elif isinstance(op, Diag):
        if op.root != 1:
            v[p] = v[p] * op.root
            tally(slab)
    elif isinstance(op, Perm):
        q = op.t - 1
        if q != p:
            v[[p, q]] = v[[q, p]]
    else:
        w = op.w._a[p:, p:]
        n = w.shape[0]
        tally(n * n * slab)
        v[p:] = np.tensordot(w, v[p:], axes=([1], [0]))


def apply(op: GaussOp, t: Tensor3) -> Tensor3:
    """``to_matrix(op) * t`` computed slab-wise."""
    d = t.dim
    _validate(op, d)
    a = t.array
    for axis in range(3):
        _act_first_axis(op, np.moveaxis(a, axis, 0))
    return Tensor3._wrap(a)


def apply_all(ops: Iterable[GaussOp], t: Tensor3) -> Tensor3:
    """Apply ``ops`` in sequence (the first element acts first)."""
    for op in ops:
        t = apply(op, t)
    return t


def accumulate(q: Matrix, op: GaussOp) -> Matrix:
    """``to_matrix(op) @ q`` computed with row operations."""
    if not q.is_square:
        raise ValueError("accumulator must be square")
    _validate(op, q.nrows)
    a = q.array
    _act_first_axis(op, a)
    return Matrix._wrap(a)


def compose(ops: Sequence[GaussOp], d: int) -> Matrix:
    """Matrix of applying ``ops`` in order, i.e. ``M_n ... M_2 M_1``."""
    q = identity(d)
    for op in ops:
        q = accumulate(q, op)
    return q


def describe(op: GaussOp) -> str:
    if isinstance(op, Lower):
        return f"Lower(s={op.s}, y=[{', '.join(map(format_scalar, op.y))}])"
    if isinstance(op, Upper):
        return f"Upper(s={op.s}, x=[{', '.join(map(format_scalar, op.x))}])"
    if isinstance(op, Diag):
        return f"Diag(s={op.s}, root={format_scalar(op.root)})"
    if isinstance(op, Perm):
        return f"Perm(s={op.s}, t={op.t})"
    return f"General(s={op.s}, w={op.w!r})"
