"""Order-3 tensors, the core tensor and the congruence action.

A :class:`Tensor3` of dimension ``d`` holds ``d**3`` exact rationals.  Entry
access ``T[i, j, k]`` is 1-based so formulas can be transcribed verbatim;
``T.array`` exposes the 0-based numpy object array underneath.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

import numpy as np
from gmpy2 import mpq

from .exact import ONE, ZERO, format_scalar, parse_scalar, scalar, tally
from .matrix import Matrix


class Tensor3:
    """An immutable ``d x d x d`` tensor over the rationals."""

    __slots__ = ("_a",)

    def __init__(self, entries: Iterable | np.ndarray):
        a = np.array(entries, dtype=object)
        if a.ndim != 3 or not (a.shape[0] == a.shape[1] == a.shape[2]) or a.shape[0] == 0:
            raise ValueError(f"expected a non-empty cubic array, got shape {a.shape}")
        flat = a.reshape(-1)
        for n, v in enumerate(flat):
            flat[n] = scalar(v)
        self._a = a

    @classmethod
    def _wrap(cls, a: np.ndarray) -> "Tensor3":
        t = cls.__new__(cls)
        t._a = a
        return t

    @classmethod
    def zeros(cls, d: int) -> "Tensor3":
        a = np.empty((d, d, d), dtype=object)
        a.fill(ZERO)
        return cls._wrap(a)

    @classmethod
    def from_flat(cls, d: int, values: Sequence) -> "Tensor3":
        """Build from ``d**3`` values in lexicographic ``(i, j, k)`` order."""
        if len(values) != d**3:
            raise ValueError(f"expected {d**3} entries for d={d}, got {len(values)}")
        a = np.empty(d**3, dtype=object)
        a[:] = [scalar(v) for v in values]
        return cls._wrap(a.reshape(d, d, d))

    @property
    def dim(self) -> int:
        return self._a.shape[0]

    @property
    def array(self) -> np.ndarray:
        return self._a.copy()

    def flat(self) -> list[mpq]:
        return self._a.reshape(-1).tolist()

    def __getitem__(self, idx: tuple[int, int, int]) -> mpq:
        i, j, k = idx
        d = self.dim
        if not (1 <= i <= d and 1 <= j <= d and 1 <= k <= d):
            raise IndexError(f"index ({i}, {j}, {k}) out of range for d={d}")
        return self._a[i - 1, j - 1, k - 1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tensor3):
            return NotImplemented
        return self.dim == other.dim and bool((self._a == other._a).all())

    def __hash__(self) -> int:
        return hash(tuple(self._a.flat))

    def __add__(self, other: "Tensor3") -> "Tensor3":
        _same_dim(self, other)
        return Tensor3._wrap(self._a + other._a)

    def __sub__(self, other: "Tensor3") -> "Tensor3":
        _same_dim(self, other)
        return Tensor3._wrap(self._a - other._a)

    def __mul__(self, c) -> "Tensor3":
        c = scalar(c)
        tally(self._a.size)
        return Tensor3._wrap(self._a * c)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"Tensor3(d={self.dim})"

    def __str__(self) -> str:
        return format_folding(self)

    def differences(self, other: "Tensor3") -> list[tuple[int, int, int]]:
        """1-based indices where the two tensors disagree."""
        _same_dim(self, other)
        return [tuple(int(x) + 1 for x in idx) for idx in zip(*np.nonzero(self._a != other._a))]


def _same_dim(a: Tensor3, b: Tensor3) -> None:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


def core_tensor(d: int) -> Tensor3:
    """The normalised signature tensor of the axis path.

    ``C[i,j,k]`` is 1 on the diagonal, 3 when ``i<j=k`` or ``i=j<k``, 6 when
    ``i<j<k`` and 0 otherwise.
    """
    if d < 1:
        raise ValueError("dimension must be positive")
    t = Tensor3.zeros(d)
    a = t._a
    three, six = mpq(3), mpq(6)
    for i, j, k in itertools.combinations_with_replacement(range(d), 3):
        if i == j == k:
            a[i, j, k] = ONE
        elif i < j < k:
            a[i, j, k] = six
        else:
            a[i, j, k] = three
    return t


def mode_product(t: Tensor3, m: Matrix, mode: int) -> Tensor3:
    """Contract ``m`` against axis ``mode`` (1, 2 or 3) of ``t``."""
    d = t.dim
    if m.shape != (d, d):
        raise ValueError(f"need a {d}x{d} matrix, got {m.shape}")
    if mode not in (1, 2, 3):
        raise ValueError("mode must be 1, 2 or 3")
    tally(d**4)
    out = np.tensordot(m._a, t._a, axes=([1], [mode - 1]))
    # tensordot puts the new axis first
    return Tensor3._wrap(np.moveaxis(out, 0, mode - 1).copy())


def congruence_act(a: Matrix, t: Tensor3) -> Tensor3:
    """``A * T``: apply ``a`` along all three modes.

    ``G[i,j,k] = sum T[α,β,γ] A[i,α] A[j,β] A[k,γ]``.  Costs O(d^4); the
    recovery loop uses the structured updates in :mod:`sigrecover.gauss`.
    """
    if a.shape != (t.dim, t.dim):
        raise ValueError(f"matrix shape {a.shape} does not match tensor dimension {t.dim}")
    for mode in (1, 2, 3):
        t = mode_product(t, a, mode)
    return t


# -- folding -------------------------------------------------------------------


def fold_mode1(t: Tensor3) -> Matrix:
    """The ``d x d^2`` mode-1 folding: column ``(k-1) d + j`` of row ``i`` is ``T[i,j,k]``."""
    d = t.dim
    return Matrix._wrap(np.transpose(t._a, (0, 2, 1)).reshape(d, d * d).copy())


def unfold_mode1(m: Matrix) -> Tensor3:
    d = m.nrows
    if m.ncols != d * d:
        raise ValueError(f"a mode-1 folding of dimension {d} has {d * d} columns, not {m.ncols}")
    return Tensor3._wrap(np.transpose(m._a.reshape(d, d, d), (0, 2, 1)).copy())


def format_folding(t: Tensor3) -> str:
    """Render the mode-1 folding with ``|`` between the ``k`` slices."""
    d = t.dim
    cells = [[format_scalar(v) for v in row] for row in fold_mode1(t).tolist()]
    width = max(len(c) for row in cells for c in row)
    lines = []
    for row in cells:
        blocks = [" ".join(c.rjust(width) for c in row[k * d:(k + 1) * d]) for k in range(d)]
        lines.append(" | ".join(blocks))
    return "\n".join(lines)


def parse_folding(text: str) -> Tensor3:
    """Inverse of :func:`format_folding`; ``|`` separators are optional."""
    rows = []
    for line in text.strip().splitlines():
        toks = line.replace("|", " ").split()
        if toks:
            rows.append([parse_scalar(tok) for tok in toks])
    if not rows:
        raise ValueError("empty folding")
    return unfold_mode1(Matrix(rows))


# -- orbit predicates ----------------------------------------------------------


def _check_pivot(t: Tensor3, s: int) -> None:
    if not 1 <= s <= t.dim:
        raise ValueError(f"pivot s={s} out of range for d={t.dim}")


def orbit_condition_mask(d: int, s: int) -> np.ndarray:
    """Boolean mask (0-based) of the entries pinned by the stabiliser criterion at ``s``.

    In 1-based terms: ``i=j=k<=s``, or ``k <= min(s, i-1, j)``, or
    ``j <= min(s, i-1, k)``.
    """
    i, j, k = np.indices((d, d, d)) + 1
    diag = (i == j) & (j == k) & (i <= s)
    by_k = (k <= s) & (k <= i - 1) & (k <= j)
    by_j = (j <= s) & (j <= i - 1) & (j <= k)
    return diag | by_k | by_j


def check_orbit_conditions(g: Tensor3, s: int) -> bool:
    """True iff ``g`` agrees with the core tensor on every entry pinned at pivot ``s``.

    For ``g`` in the full orbit this is equivalent to ``g`` lying in the orbit
    of ``I_s ⊕ GL_{d-s}``.
    """
    _check_pivot(g, s)
    d = g.dim
    mask = orbit_condition_mask(d, s)
    return bool((g._a[mask] == core_tensor(d)._a[mask]).all())


def check_lower_ready(h: Tensor3, s: int) -> bool:
    """Whether the lower/diagonal step can be applied at pivot ``s``.

    Checks, 1-based:

    * ``H[s,s,s] != 0``
    * ``H[i,s,s] == H[s,i,s]`` for ``s <= i <= d``
    * ``H[i,s,s] H[s,j,s] == H[i,j,s] H[s,s,s]`` for all ``i`` and ``s <= j <= d``
    * ``H[s,s,k] H[s,j,s] == H[j,s,k] H[s,s,s]`` for ``s < j, k <= d``
    """
    _check_pivot(h, s)
    a = h._a
    p = s - 1
    hsss = a[p, p, p]
    if hsss == 0:
        return False
    if not (a[p:, p, p] == a[p, p:, p]).all():
        return False
    col = a[:, p, p]            # H[i,s,s]
    row = a[p, p:, p]           # H[s,j,s], j >= s
    tally(2 * col.size * row.size)
    if not (np.multiply.outer(col, row) == a[:, p:, p] * hsss).all():
        return False
    tail = a[p, p + 1:, p]      # H[s,j,s], j > s
    fiber = a[p, p, p + 1:]     # H[s,s,k], k > s
    tally(2 * tail.size * fiber.size)
    return bool((np.multiply.outer(tail, fiber) == a[p + 1:, p, p + 1:] * hsss).all())


def diagonal_cubes(g: Tensor3) -> list[mpq]:
    """``[G[1,1,1], ..., G[d,d,d]]``; each is a rational cube for rational orbits."""
    return [g._a[i, i, i] for i in range(g.dim)]
