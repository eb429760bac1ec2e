"""Polynomial continued fractions a0 + b(1)/(a(1) + b(2)/(a(2) + ...)).

Continuants follow U_n = a(n) U_{n-1} + b(n) U_{n-2} with
P_{-1} = 1, P_0 = a0, Q_{-1} = 0, Q_0 = 1.  They are kept unreduced.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd

import mpmath

from ._poly import poly_eval, poly_mul
from .context import PrecisionContext
from .exact_sequences import SequenceTable


@dataclass(frozen=True)
class PCFSpec:
    a0: int
    a: tuple[int, ...]
    b: tuple[int, ...]

    def a_at(self, n: int) -> int:
        return self.a0 if n == 0 else poly_eval(self.a, n)

    def b_at(self, n: int) -> int:
        return poly_eval(self.b, n)


def domb_pcf_spec() -> PCFSpec:
    """a0 = 2, a(n) = (2n+1)(5n^2+5n+2), b(n) = -16 n^6."""
    return PCFSpec(
        a0=2,
        a=poly_mul((1, 2), (2, 5, 5)),
        b=(0, 0, 0, 0, 0, 0, -16),
    )


@dataclass(frozen=True)
class ConvergentPair:
    n: int
    p: int
    q: int

    def reduced(self) -> Fraction:
        return Fraction(self.p, self.q)

    def lowest_terms(self) -> tuple[int, int]:
        g = gcd(self.p, self.q)
        return self.p // g, self.q // g


def convergents(spec: PCFSpec, N: int, check: bool = True) -> list[ConvergentPair]:
    """Pairs (P_n, Q_n) for n = 0..N.

    With ``check`` set, a vanishing partial numerator b(n) raises ValueError;
    the continuant recurrence itself is fine with it.
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    p_prev, q_prev = 1, 0
    p, q = spec.a0, 1
    out = [ConvergentPair(0, p, q)]
    for n in range(1, N + 1):
        an, bn = spec.a_at(n), spec.b_at(n)
        if check and bn == 0:
            raise ValueError(f"partial numerator b({n}) vanishes")
        p, p_prev = an * p + bn * p_prev, p
        q, q_prev = an * q + bn * q_prev, q
        out.append(ConvergentPair(n, p, q))
    return out


def cross_differences(pairs: list[ConvergentPair]) -> list[int]:
    """P_n Q_{n-1} - P_{n-1} Q_n for n = 0..N, using P_{-1} = 1, Q_{-1} = 0."""
    prev = (1, 0)
    out = []
    for pair in pairs:
        out.append(pair.p * prev[1] - prev[0] * pair.q)
        prev = (pair.p, pair.q)
    return out


@dataclass(frozen=True)
class NormalizationReport:
    ok: bool
    checked: int
    first_failure: int | None = None
    component: str | None = None


def verify_normalization(table: SequenceTable, N: int) -> NormalizationReport:
    """Check P_n = (n+1)!^3 D_{n+1} / 2^{n+1} and Q_n = (n+1)!^3 B_{n+1} / 2^n."""
    if N + 1 > table.n_max:
        raise ValueError(f"table too short: need n_max >= {N + 1}, have {table.n_max}")
    for pair in convergents(domb_pcf_spec(), N):
        n = pair.n
        f3 = factorial(n + 1) ** 3
        if Fraction(f3 * table.d[n + 1], 2 ** (n + 1)) != pair.p:
            return NormalizationReport(False, n, n, "P")
        if f3 * table.b[n + 1] / 2**n != pair.q:
            return NormalizationReport(False, n, n, "Q")
    return NormalizationReport(True, N + 1)


def value_estimate(spec: PCFSpec, N: int,
                   ctx: PrecisionContext) -> tuple[mpmath.mpf, mpmath.mpf | None]:
    """P_N/Q_N at working precision and |P_N/Q_N - P_{N-1}/Q_{N-1}|.

    The error proxy is None when N = 0.
    """
    pairs = convergents(spec, N)
    for pair in pairs:
        if pair.q == 0:
            raise ZeroDivisionError(f"Q_{pair.n} = 0")
    with ctx.workprec():
        last = mpmath.mpf(pairs[-1].p) / pairs[-1].q
        if N == 0:
            return last, None
        # exact difference: cross / (Q_N Q_{N-1})
        cross = pairs[-1].p * pairs[-2].q - pairs[-2].p * pairs[-1].q
        err = abs(mpmath.mpf(cross) / (mpmath.mpf(pairs[-1].q) * pairs[-2].q))
    return last, err
