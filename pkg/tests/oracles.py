"""Brute-force references that share no code path with the package kernels."""

from fractions import Fraction
from itertools import product


def closed_form_core(d):
    """Core tensor entries from the case distinction, as nested lists of Fractions."""
    def entry(i, j, k):
        if i == j == k:
            return 1
        if i < j == k or i == j < k:
            return 3
        if i < j < k:
            return 6
        return 0
    return [[[Fraction(entry(i, j, k)) for k in range(d)] for j in range(d)] for i in range(d)]


def naive_action(a, t):
    """Six nested loops over the defining sum; ``a`` and ``t`` are nested lists."""
    d = len(a)
    a = [[Fraction(int(v.numerator), int(v.denominator)) for v in row] for row in a]
    out = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
    for i, j, k in product(range(d), repeat=3):
        acc = Fraction(0)
        for al, be, ga in product(range(d), repeat=3):
            v = t[al][be][ga]
            if v:
                acc += v * a[i][al] * a[j][be] * a[k][ga]
        out[i][j][k] = acc
    return out


def as_nested(tensor):
    """Package tensor -> nested Fractions."""
    arr = tensor.array
    d = tensor.dim
    return [[[Fraction(int(arr[i, j, k].numerator), int(arr[i, j, k].denominator))
              for k in range(d)] for j in range(d)] for i in range(d)]
