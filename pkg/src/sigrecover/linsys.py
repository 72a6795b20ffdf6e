"""The antisymmetry system whose solution gives the upper transformation.

For a tensor ``G`` and pivot ``s`` (with ``n = d - s``) the unknown ``x`` of
``Upper(s, x)`` must make the slice ``H[:, :, s]`` symmetric on the trailing
block.  Row ``(a, b)`` of the system, ``1 <= a, b <= n``, reads::

    sum_g (G[a+s, b+s, g+s] - G[b+s, a+s, g+s]) x[g] = G[b+s, a+s, s] - G[a+s, b+s, s]

The full system has ``n^2`` rows in the order ``(a-1) n + b``.  Row ``(b, a)``
is the negative of row ``(a, b)`` and the ``a == b`` rows vanish, so keeping
only ``a < b`` gives the same solution set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from gmpy2 import mpq

from .exact import ZERO, tally
from .matrix import InconsistentSystem, Matrix, UnderdeterminedSystem, rank
from .tensor import Tensor3


@dataclass(frozen=True)
class AntisymSystem:
    m: Matrix
    b: tuple[mpq, ...]
    s: int
    reduced: bool
    labels: tuple[tuple[int, int], ...]  # (a, b) for each row

    @property
    def augmented(self) -> Matrix:
        return Matrix([row + [v] for row, v in zip(self.m.tolist(), self.b)])

    def rank(self) -> int:
        return rank(self.m)


def _antisym_blocks(g: Tensor3, s: int) -> tuple[np.ndarray, np.ndarray]:
    d = g.dim
    if not 1 <= s < d:
        raise ValueError(f"pivot s={s} out of range for d={d}")
    a = g.array
    p = s - 1
    sub = a[p + 1:, p + 1:, p + 1:]
    lhs = sub - sub.transpose(1, 0, 2)
    rhs_block = a[p + 1:, p + 1:, p]
    rhs = rhs_block.T - rhs_block
    return lhs, rhs


def build_system(g: Tensor3, s: int, reduced: bool = False) -> AntisymSystem:
    """Assemble ``(M, B)`` at pivot ``s``; ``reduced`` keeps only rows with ``a < b``."""
    lhs, rhs = _antisym_blocks(g, s)
    n = lhs.shape[0]
    if reduced:
        ia, ib = np.triu_indices(n, 1)
    else:
        ia, ib = (x.reshape(-1) for x in np.indices((n, n)))
    if len(ia) == 0:
        # n == 1: a single vanishing row, kept so the matrix is not empty
        ia, ib = np.array([0]), np.array([0])
    m = Matrix._wrap(lhs[ia, ib, :].copy())
    labels = tuple((int(x) + 1, int(y) + 1) for x, y in zip(ia, ib))
    return AntisymSystem(m, tuple(rhs[ia, ib].tolist()), s, reduced, labels)


def reduce_system(system: AntisymSystem) -> AntisymSystem:
    if system.reduced:
        return system
    keep = [n for n, (a, b) in enumerate(system.labels) if a < b] or [0]
    rows = system.m.array[keep, :]
    return AntisymSystem(
        Matrix._wrap(rows),
        tuple(system.b[n] for n in keep),
        system.s,
        True,
        tuple(system.labels[n] for n in keep),
    )


def solve_system(system: AntisymSystem) -> list[mpq]:
    """Unique solution of ``M x = B``.

    Rows are fed one at a time into an exact echelon basis until it reaches
    full column rank; the remaining rows are then only checked against the
    solution.  Generic systems therefore cost O(n^3) rather than O(n^4).

    Raises :class:`~sigrecover.matrix.InconsistentSystem` or
    :class:`~sigrecover.matrix.UnderdeterminedSystem`.
    """
    rows = system.m.tolist()
    rhs = list(system.b)
    n = system.m.ncols
    basis: list[tuple[int, list[mpq]]] = []
    for row, b in zip(rows, rhs):
        r = row + [b]
        for pc, br in basis:
            f = r[pc]
            if f:
                r = [u - f * v for u, v in zip(r, br)]
                tally(n + 1)
        pc = next((c for c in range(n) if r[c]), None)
        if pc is None:
            if r[n]:
                raise InconsistentSystem(f"row reduces to 0 = {r[n]}")
            continue
        inv = 1 / r[pc]
        basis.append((pc, [v * inv for v in r]))
        tally(n + 1)
        if len(basis) == n:
            break
    if len(basis) < n:
        raise UnderdeterminedSystem(f"rank(M) = {len(basis)} < {n}")

    x = [ZERO] * n
    for pc, br in reversed(basis):
        acc = br[n]
        for c in range(n):
            if c != pc and br[c]:
                acc -= br[c] * x[c]
        x[pc] = acc
    tally(n * n)

    for row, b in zip(rows, rhs):
        if sum((u * v for u, v in zip(row, x)), ZERO) != b:
            raise InconsistentSystem("rank(M|B) > rank(M)")
    tally(len(rows) * n)
    return x
