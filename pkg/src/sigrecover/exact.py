"""Exact rational scalars.

Every numeric value in the package is a :class:`gmpy2.mpq`.  ``mpq`` is always
stored in lowest terms with a positive denominator, so equality of two scalars
is equality of their canonical forms.  This module adds the few operations
``gmpy2`` does not spell out for us: an exact cube root, the canonical text
form and a multiplication counter used by the benchmark harness.
"""

from __future__ import annotations

import contextlib
import contextvars
from typing import Iterator, Union

import gmpy2
from gmpy2 import mpq, mpz

ExactScalar = mpq

ScalarLike = Union[int, str, "mpq"]

ZERO = mpq(0)
ONE = mpq(1)


def scalar(value: ScalarLike) -> mpq:
    """Coerce ``value`` (int, mpq, Fraction or a ``"p/q"`` string) to mpq."""
    if isinstance(value, str):
        return parse_scalar(value)
    if isinstance(value, float):
        raise TypeError("floating point values are not exact scalars")
    return mpq(value)


def parse_scalar(text: str) -> mpq:
    """Parse the canonical ``"p/q"`` (or ``"p"``) text form."""
    text = text.strip()
    if not text:
        raise ValueError("empty scalar")
    num, sep, den = text.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational literal: {text!r}") from None
    if q == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return mpq(p, q)


def format_scalar(a: mpq) -> str:
    """Canonical text form: ``"p/q"``, or ``"p"`` when ``q == 1``."""
    a = mpq(a)
    if a.denominator == 1:
        return str(int(a.numerator))
    return f"{int(a.numerator)}/{int(a.denominator)}"


def _icbrt(n: mpz) -> mpz | None:
    root, exact = gmpy2.iroot(n, 3)
    return root if exact else None


def exact_cbrt(a: ScalarLike) -> mpq | None:
    """Return the rational cube root of ``a``, or ``None`` if there is none.

    The sign is preserved, so ``exact_cbrt(-8) == -2``.
    """
    a = scalar(a)
    num = a.numerator
    root_num = _icbrt(abs(num))
    if root_num is None:
        return None
    root_den = _icbrt(a.denominator)
    if root_den is None:
        return None
    r = mpq(root_num, root_den)
    return -r if num < 0 else r


# -- multiplication counting ------------------------------------------------

_MUL_COUNT: contextvars.ContextVar[list[int] | None] = contextvars.ContextVar(
    "sigrecover_mul_count", default=None
)


def tally(n: int) -> None:
    """Record ``n`` scalar multiplications if a counter is active."""
    box = _MUL_COUNT.get()
    if box is not None:
        box[0] += n


class MulCounter:
    __slots__ = ("_box",)

    def __init__(self) -> None:
        self._box = [0]

    @property
    def count(self) -> int:
        return self._box[0]


@contextlib.contextmanager
def count_multiplications() -> Iterator[MulCounter]:
    """Count scalar multiplications performed by the kernels in this block.

    Counters nest: an inner block also adds its total to the enclosing one.
    """
    counter = MulCounter()
    outer = _MUL_COUNT.get()
    token = _MUL_COUNT.set(counter._box)
    try:
        yield counter
    finally:
        _MUL_COUNT.reset(token)
        if outer is not None:
            outer[0] += counter.count
