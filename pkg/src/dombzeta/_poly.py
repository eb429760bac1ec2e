"""Dense univariate polynomials as coefficient tuples, lowest degree first."""
from __future__ import annotations

from fractions import Fraction
from itertools import zip_longest
from math import isqrt, lcm


def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def poly_eval(coeffs, x):
    """Horner evaluation."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_add(p, q):
    return trim(a + b for a, b in zip_longest(p, q, fillvalue=0))


def poly_scale(p, c):
    return trim(c * a for a in p)


def poly_mul(p, q):
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] += x * y
    return trim(out)


def poly_pow(p, k):
    out = (1,)
    for _ in range(k):
        out = poly_mul(out, p)
    return out


def poly_compose_linear(p, a, b):
    """p(a + b*x)."""
    out = ()
    for c in reversed(p):
        out = poly_add(poly_mul(out, (a, b)), (c,))
    return out


def falling_factorial(k):
    """r(r-1)...(r-k+1) as a polynomial in r."""
    out = (1,)
    for j in range(k):
        out = poly_mul(out, (-j, 1))
    return out


def _divisors(n):
    n = abs(n)
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _find_root(p):
    den = lcm(*(c.denominator for c in p))
    ints = [int(c * den) for c in p]
    for num in _divisors(ints[0]):
        for dd in _divisors(ints[-1]):
            for cand in (Fraction(num, dd), Fraction(-num, dd)):
                if poly_eval(p, cand) == 0:
                    return cand
    return None


def rational_roots(p):
    """All rational roots of p with multiplicity, plus the unsplit cofactor."""
    p = trim(Fraction(c) for c in p)
    if not p:
        raise ValueError("zero polynomial has every number as a root")
    roots = []
    while len(p) > 1 and p[0] == 0:
        roots.append(Fraction(0))
        p = p[1:]
    while len(p) > 1 and (root := _find_root(p)) is not None:
        roots.append(root)
        p = _deflate(p, root)
    return sorted(roots), p


def _deflate(p, root):
    """Quotient of p by (x - root), by synthetic division."""
    out = [Fraction(0)] * (len(p) - 1)
    carry = p[-1]
    out[-1] = carry
    for i in range(len(p) - 2, 0, -1):
        carry = p[i] + carry * root
        out[i - 1] = carry
    return trim(out)
