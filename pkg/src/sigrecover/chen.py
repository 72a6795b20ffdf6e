"""Level-3 truncated signatures of piecewise-linear paths via Chen's identity.

This is an independent route to the core tensor and to the equivariance of the
signature: a linear segment with displacement ``v`` has signature
``(v, v⊗v/2, v⊗v⊗v/6)`` and concatenation multiplies in the truncated tensor
algebra.  Nothing here uses the congruence action.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from gmpy2 import mpq

from .exact import scalar
from .matrix import Matrix
from .tensor import Tensor3


@dataclass(frozen=True)
class TruncatedSignature:
    level1: tuple[mpq, ...]
    level2: Matrix
    level3: Tensor3

    @property
    def dim(self) -> int:
        return len(self.level1)


@dataclass(frozen=True)
class PiecewiseLinearPath:
    increments: tuple[tuple[mpq, ...], ...]

    def __post_init__(self):
        incs = tuple(tuple(scalar(v) for v in inc) for inc in self.increments)
        if not incs:
            raise ValueError("a path needs at least one segment")
        if len({len(v) for v in incs}) != 1:
            raise ValueError("all increments must have the same dimension")
        object.__setattr__(self, "increments", incs)

    @property
    def dim(self) -> int:
        return len(self.increments[0])

    @classmethod
    def axis(cls, d: int) -> "PiecewiseLinearPath":
        """Unit axis path: increments e_1, ..., e_d."""
        return cls(tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))

    def transformed(self, a: Matrix) -> "PiecewiseLinearPath":
        """The path ``t -> A X(t)``; its increments are ``A v``."""
        return PiecewiseLinearPath(tuple(tuple(a.apply(v)) for v in self.increments))


def _vec(v: Sequence) -> np.ndarray:
    out = np.empty(len(v), dtype=object)
    out[:] = [scalar(x) for x in v]
    return out


def segment_signature(v: Sequence) -> TruncatedSignature:
    v = _vec(v)
    v2 = np.multiply.outer(v, v)
    v3 = np.multiply.outer(v2, v)
    return TruncatedSignature(
        tuple(v.tolist()),
        Matrix._wrap(v2 / 2),
        Tensor3._wrap(v3 / 6),
    )


def chen_concat(s: TruncatedSignature, t: TruncatedSignature) -> TruncatedSignature:
    """Signature of the concatenated path (``s`` first, then ``t``)."""
    if s.dim != t.dim:
        raise ValueError(f"dimension mismatch: {s.dim} vs {t.dim}")
    s1, t1 = _vec(s.level1), _vec(t.level1)
    s2, t2 = s.level2.array, t.level2.array
    level1 = s1 + t1
    level2 = s2 + t2 + np.multiply.outer(s1, t1)
    level3 = (
        s.level3.array
        + t.level3.array
        + np.multiply.outer(s1, t2)
        + np.multiply.outer(s2, t1)
    )
    return TruncatedSignature(tuple(level1.tolist()), Matrix._wrap(level2), Tensor3._wrap(level3))


def pl_signature(path: PiecewiseLinearPath) -> TruncatedSignature:
    sig = segment_signature(path.increments[0])
    for inc in path.increments[1:]:
        sig = chen_concat(sig, segment_signature(inc))
    return sig


def normalized_level3(path: PiecewiseLinearPath) -> Tensor3:
    """``6 * sigma_3(path)``; equals the core tensor for the unit axis path."""
    return pl_signature(path).level3 * 6
