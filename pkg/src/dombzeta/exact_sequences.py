"""Domb numbers D_n and the rational companion B_n, computed exactly.

Both sequences solve

    (n+1)^3 u_{n+1} = 2(2n+1)(5n^2+5n+2) u_n - 64 n^3 u_{n-1},

with (D_0, D_1) = (1, 4) and (B_0, B_1) = (0, 1).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import mpmath

from .context import PrecisionContext


def recurrence_coefficients(n: int) -> tuple[int, int, int]:
    """(lead, mid, back) with lead*u_{n+1} = mid*u_n - back*u_{n-1}."""
    return (n + 1) ** 3, 2 * (2 * n + 1) * (5 * n * n + 5 * n + 2), 64 * n**3


def binomial_rows(n_max: int) -> list[list[int]]:
    """Pascal's triangle up to row n_max."""
    rows = [[1]]
    for n in range(1, n_max + 1):
        prev = rows[-1]
        rows.append([1] + [prev[k - 1] + prev[k] for k in range(1, n)] + [1])
    return rows


def domb_direct(n: int, _rows: list[list[int]] | None = None) -> int:
    """D_n = sum_k C(n,k)^2 C(2k,k) C(2(n-k),n-k), straight from the binomial sum."""
    if n < 0:
        raise ValueError("n must be non-negative")
    rows = _rows if _rows is not None and len(_rows) > 2 * n else binomial_rows(2 * n)
    return sum(
        rows[n][k] ** 2 * rows[2 * k][k] * rows[2 * (n - k)][n - k] for k in range(n + 1)
    )


@dataclass(frozen=True)
class SequenceTable:
    n_max: int
    d: tuple[int, ...]
    b: tuple[Fraction, ...]

    def _check_index(self, n: int, lo: int = 0) -> None:
        if not lo <= n <= self.n_max:
            raise IndexError(f"index {n} outside [{lo}, {self.n_max}]")

    def residual(self, which: Literal["D", "B"], n: int) -> Fraction:
        """Re-substitute entries n-1, n, n+1 into the recurrence."""
        self._check_index(n + 1, lo=2)
        u = self.d if which == "D" else self.b
        lead, mid, back = recurrence_coefficients(n)
        return Fraction(lead * u[n + 1] - mid * u[n] + back * u[n - 1])


def build_table(n_max: int) -> SequenceTable:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    d = [1, 4]
    b = [Fraction(0), Fraction(1)]
    for n in range(1, n_max):
        lead, mid, back = recurrence_coefficients(n)
        num = mid * d[n] - back * d[n - 1]
        q, r = divmod(num, lead)
        if r:
            raise ArithmeticError(f"D_{n + 1} is not an integer: {num}/{lead}")
        d.append(q)
        b.append((mid * b[n] - back * b[n - 1]) / lead)
    return SequenceTable(n_max, tuple(d), tuple(b))


@dataclass(frozen=True)
class WronskianRecord:
    n: int
    w: Fraction

    @property
    def closed_form(self) -> Fraction:
        return Fraction(-(64 ** (self.n - 1)), self.n**3)

    @property
    def holds(self) -> bool:
        return self.w == self.closed_form


def wronskian(table: SequenceTable, n: int) -> WronskianRecord:
    """W_n = D_n B_{n-1} - D_{n-1} B_n; expected to equal -64^{n-1}/n^3."""
    table._check_index(n, lo=1)
    d, b = table.d, table.b
    return WronskianRecord(n, d[n] * b[n - 1] - d[n - 1] * b[n])


def increment(table: SequenceTable, n: int) -> Fraction:
    """64^n / (n^3 D_n D_{n-1}), the n-th term of the Domb sum."""
    table._check_index(n, lo=1)
    return Fraction(64**n, n**3 * table.d[n] * table.d[n - 1])


def telescoped_sum(table: SequenceTable, N: int) -> tuple[Fraction, Fraction]:
    """(sum_{n<=N} 64^n/(n^3 D_n D_{n-1}), 64 B_N / D_N); the two must agree."""
    table._check_index(N, lo=1)
    direct = sum((increment(table, n) for n in range(1, N + 1)), Fraction(0))
    return direct, 64 * table.b[N] / table.d[N]


def telescoped_sums(table: SequenceTable, N: int) -> list[tuple[Fraction, Fraction]]:
    """telescoped_sum for every 1 <= M <= N in one running pass."""
    table._check_index(N, lo=1)
    out, acc = [], Fraction(0)
    for n in range(1, N + 1):
        acc += increment(table, n)
        out.append((acc, 64 * table.b[n] / table.d[n]))
    return out


def apery_ratio(table: SequenceTable, n: int) -> Fraction:
    table._check_index(n, lo=1)
    return table.b[n] / table.d[n]


@dataclass(frozen=True)
class AsymptoticEstimate:
    """c_n = x_n 16^{-n} n^{3/2}, with |c_n - c_{n/2}| as a convergence proxy."""

    which: str
    n: int
    c_n: mpmath.mpf
    tail_delta: mpmath.mpf


def _scaled(x: Fraction | int, n: int) -> mpmath.mpf:
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / (x.denominator * mpmath.mpf(16) ** n) * mpmath.mpf(n) ** 1.5


def asymptotic_constant(table: SequenceTable, which: Literal["D", "B"], n: int,
                        ctx: PrecisionContext) -> AsymptoticEstimate:
    if ctx.precision_bits < 64:
        raise ValueError("asymptotic estimates need at least 64 bits")
    if n < 4 or n % 2:
        raise ValueError("n must be even and at least 4")
    table._check_index(n)
    u = table.d if which == "D" else table.b
    with ctx.workprec():
        c_n = _scaled(u[n], n)
        half = _scaled(u[n // 2], n // 2)
        delta = abs(c_n - half)
    return AsymptoticEstimate(which, n, c_n, delta)
