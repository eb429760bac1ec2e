"""Truncated power series with exact rational coefficients.

A QSeries stores coefficients for exponents ``valuation..trunc`` and never
reports anything past ``trunc``.  Truncation orders propagate pessimistically:
a product f*g is known through min(t_f + v_g, t_g + v_f).

The same class serves for series in q = e^{2 pi i tau} and in the Domb
variable z; composition takes a z-series and a q-series.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Literal, Sequence

from ._poly import (
    falling_factorial,
    poly_add,
    poly_compose_linear,
    poly_eval,
    poly_mul,
    poly_pow,
    poly_scale,
    rational_roots,
    trim,
)
from .exact_sequences import SequenceTable, build_table


class SeriesError(ArithmeticError):
    pass


class IdentityError(AssertionError):
    """Two independent constructions of the same series disagree."""

    def __init__(self, what: str, exponent: int):
        super().__init__(f"{what}: first mismatch at exponent {exponent}")
        self.exponent = exponent


def _int_scaled(cs: Sequence[Fraction]) -> tuple[list[int], int]:
    den = lcm(*(c.denominator for c in cs)) if cs else 1
    return [c.numerator * (den // c.denominator) for c in cs], den


def _convolve(a: Sequence[int], b: Sequence[int], m: int) -> list[int]:
    """First m coefficients of the product of two integer sequences."""
    out = [0] * m
    for i, x in enumerate(a[:m]):
        if x:
            for j, y in enumerate(b[: m - i]):
                out[i + j] += x * y
    return out


@dataclass(frozen=True)
class QSeries:
    valuation: int
    coeffs: tuple[Fraction, ...]
    trunc: int

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, trunc: int, start: int = 0) -> "QSeries":
        """Series with ``coeffs[k]`` at exponent start+k, known through ``trunc``.

        Entries past ``trunc`` are dropped; missing ones are zero.
        """
        cs = [Fraction(c) for c in coeffs][: max(trunc - start + 1, 0)]
        k = 0
        while k < len(cs) and cs[k] == 0:
            k += 1
        if k == len(cs):
            return cls.zero(trunc)
        cs = cs[k:]
        start += k
        cs += [Fraction(0)] * (trunc - start + 1 - len(cs))
        return cls(start, tuple(cs), trunc)

    @classmethod
    def zero(cls, trunc: int) -> "QSeries":
        return cls(trunc + 1, (), trunc)

    @classmethod
    def constant(cls, c, trunc: int) -> "QSeries":
        return cls.from_coeffs([c], trunc)

    @classmethod
    def monomial(cls, c, k: int, trunc: int) -> "QSeries":
        return cls.from_coeffs([c], trunc, start=k)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, n: int) -> Fraction:
        if n > self.trunc:
            raise SeriesError(f"coefficient q^{n} is beyond the truncation order {self.trunc}")
        if n < self.valuation:
            return Fraction(0)
        return self.coeffs[n - self.valuation]

    def dense(self, lo: int = 0, hi: int | None = None) -> list[Fraction]:
        hi = self.trunc if hi is None else hi
        return [self[n] for n in range(lo, hi + 1)]

    def truncate(self, trunc: int) -> "QSeries":
        if trunc > self.trunc:
            raise SeriesError("cannot raise the truncation order")
        return QSeries.from_coeffs(self.coeffs, trunc, self.valuation) if self.coeffs else QSeries.zero(trunc)

    def __repr__(self) -> str:
        terms = [f"{c}*q^{self.valuation + k}" for k, c in enumerate(self.coeffs[:6]) if c]
        return f"QSeries({' + '.join(terms) or '0'} + O(q^{self.trunc + 1}))"

    # arithmetic ---------------------------------------------------------

    def __neg__(self) -> "QSeries":
        return QSeries(self.valuation, tuple(-c for c in self.coeffs), self.trunc)

    def __add__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            other = QSeries.constant(other, self.trunc)
        t = min(self.trunc, other.trunc)
        lo = min(self.valuation, other.valuation)
        return QSeries.from_coeffs((self[n] + other[n] for n in range(lo, t + 1)), t, lo)

    __radd__ = __add__

    def __sub__(self, other) -> "QSeries":
        return self + (-other)

    def __rsub__(self, other) -> "QSeries":
        return (-self) + other

    def __mul__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            c = Fraction(other)
            return QSeries.from_coeffs((c * x for x in self.coeffs), self.trunc, self.valuation)
        v = self.valuation + other.valuation
        t = min(self.trunc + other.valuation, other.trunc + self.valuation)
        if self.is_zero or other.is_zero:
            return QSeries.zero(t)
        a, da = _int_scaled(self.coeffs)
        b, db = _int_scaled(other.coeffs)
        den = da * db
        prod = _convolve(a, b, t - v + 1)
        return QSeries.from_coeffs((Fraction(c, den) for c in prod), t, v)

    __rmul__ = __mul__

    def inverse(self) -> "QSeries":
        if self.is_zero:
            raise SeriesError("division by a series that vanishes through its truncation order")
        v = self.valuation
        m = self.trunc - v + 1
        g = list(self.coeffs[:m])
        ints, den = _int_scaled(g)
        lead = ints[0]
        if abs(lead) == 1:
            h = [lead]
            for k in range(1, m):
                s = sum(ints[j] * h[k - j] for j in range(1, min(k, len(ints) - 1) + 1))
                h.append(-lead * s)
            cs = [Fraction(x * den) for x in h]
        else:
            inv0 = Fraction(1, lead)
            h = [inv0]
            for k in range(1, m):
                s = sum(ints[j] * h[k - j] for j in range(1, min(k, len(ints) - 1) + 1))
                h.append(-inv0 * s)
            cs = [x * den for x in h]
        return QSeries.from_coeffs(cs, self.trunc - 2 * v, -v)

    def __truediv__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            return self * (1 / Fraction(other))
        return self * other.inverse()

    def __rtruediv__(self, other) -> "QSeries":
        return self.inverse() * other

    def __pow__(self, k: int) -> "QSeries":
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return QSeries.constant(1, self.trunc - self.valuation)
        result, base = None, self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, k: int) -> "QSeries":
        """Multiply by q^k."""
        return QSeries(self.valuation + k, self.coeffs, self.trunc + k)

    def derivative(self, times: int = 1) -> "QSeries":
        """The operator D = q d/dq, applied termwise: q^n -> n q^n."""
        cs = self.coeffs
        for _ in range(times):
            cs = tuple((self.valuation + k) * c for k, c in enumerate(cs))
        return QSeries.from_coeffs(cs, self.trunc, self.valuation)

    def first_difference(self, other: "QSeries") -> int | None:
        """Lowest exponent (through the common truncation) where the two differ."""
        t = min(self.trunc, other.trunc)
        for n in range(min(self.valuation, other.valuation), t + 1):
            if self[n] != other[n]:
                return n
        return None

    # serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "valuation": self.valuation,
            "trunc": self.trunc,
            "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj: dict | str) -> "QSeries":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls.from_coeffs([Fraction(c) for c in obj["coeffs"]], obj["trunc"], obj["valuation"])


def series_arith(lhs: QSeries, rhs, kind: Literal["add", "mul", "div", "pow_int"]) -> QSeries:
    if kind == "add":
        return lhs + rhs
    if kind == "mul":
        return lhs * rhs
    if kind == "div":
        return lhs / rhs
    if kind == "pow_int":
        return lhs ** int(rhs)
    raise ValueError(f"unknown operation {kind!r}")


def series_compose(outer: QSeries, inner: QSeries) -> QSeries:
    """outer(inner) where outer is a power series in z and inner has valuation >= 1.

    Known through min(t_inner, v_inner * (t_outer + 1) - 1).
    """
    if outer.valuation < 0:
        raise SeriesError("outer series must be a power series")
    if inner.valuation < 1:
        raise ValueError("inner series must have valuation >= 1")
    t = min(inner.trunc, inner.valuation * (outer.trunc + 1) - 1)
    inner_t = inner.truncate(t)
    top = min(outer.trunc, t // inner.valuation)
    acc = QSeries.constant(outer[top], t)
    for k in range(top - 1, -1, -1):
        acc = (acc * inner_t).truncate(t) + outer[k]
    return acc.truncate(t)


# eta products -----------------------------------------------------------


def eta_series(m: int, trunc: int) -> tuple[QSeries, int]:
    """prod_{n>=1} (1 - q^{mn}) through q^trunc, and the prefactor exponent m/24 in 1/24 units."""
    if m < 1:
        raise ValueError("multiplier must be positive")
    c = [0] * (trunc + 1)
    c[0] = 1
    for step in range(m, trunc + 1, m):
        for k in range(trunc, step - 1, -1):
            c[k] -= c[k - step]
    return QSeries.from_coeffs(c, trunc), m


@dataclass(frozen=True)
class EtaQuotientSpec:
    """sign * prod eta(m tau)^e over ``factors`` = ((m, e), ...)."""

    factors: tuple[tuple[int, int], ...]
    sign: int = 1

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if any(m < 1 for m, _ in self.factors):
            raise ValueError("multipliers must be positive")
        if self.offset_24ths % 24:
            raise ValueError(
                f"q-exponent {self.offset_24ths}/24 is not an integer; fractional series unsupported"
            )

    @property
    def offset_24ths(self) -> int:
        return sum(m * e for m, e in self.factors)

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(e for _, e in self.factors), 2)


XI_SPEC = EtaQuotientSpec(((2, 6), (6, 6), (1, -6), (3, -6)), sign=-1)
A_SPEC = EtaQuotientSpec(((1, 4), (3, 4), (2, -2), (6, -2)), sign=1)


def eta_quotient(spec: EtaQuotientSpec, trunc: int) -> QSeries:
    v = spec.offset_24ths // 24
    base = trunc - v
    result = QSeries.constant(spec.sign, base)
    for m, e in spec.factors:
        series, _ = eta_series(m, base)
        result = result * series**e
    return result.shift(v)


def xi_series(trunc: int) -> QSeries:
    return eta_quotient(XI_SPEC, trunc)


def a_series(trunc: int) -> QSeries:
    return eta_quotient(A_SPEC, trunc)


# Eisenstein series and g -----------------------------------------------------


def divisor_power_sums(N: int, k: int) -> list[int]:
    """sigma_k(n) for 0 <= n <= N (entry 0 is 0)."""
    s = [0] * (N + 1)
    for d in range(1, N + 1):
        dk = d**k
        for n in range(d, N + 1, d):
            s[n] += dk
    return s


def eisenstein_e4(m: int, trunc: int, _sigma3: Sequence[int] | None = None) -> QSeries:
    """E_4(m tau) = 1 + 240 sum sigma_3(n) q^{mn}."""
    if m < 1:
        raise ValueError("multiplier must be positive")
    sig = _sigma3 if _sigma3 is not None and len(_sigma3) > trunc // m else divisor_power_sums(trunc // m, 3)
    c = [0] * (trunc + 1)
    c[0] = 1
    for n in range(1, trunc // m + 1):
        c[m * n] = 240 * sig[n]
    return QSeries.from_coeffs(c, trunc)


def g_coefficients(N: int, _sigma3: Sequence[int] | None = None) -> list[int]:
    """a_n = sigma_3(n) - sigma_3(n/2) - 9 sigma_3(n/3) + 9 sigma_3(n/6), with a_0 = 0."""
    sig = _sigma3 if _sigma3 is not None and len(_sigma3) > N else divisor_power_sums(N, 3)
    a = [0] * (N + 1)
    for n in range(1, N + 1):
        v = sig[n]
        if n % 2 == 0:
            v -= sig[n // 2]
        if n % 3 == 0:
            v -= 9 * sig[n // 3]
        if n % 6 == 0:
            v += 9 * sig[n // 6]
        a[n] = v
    return a


def g_series(trunc: int) -> QSeries:
    """(E_4(tau) - E_4(2tau) - 9E_4(3tau) + 9E_4(6tau)) / 240, checked against g_coefficients."""
    sig = divisor_power_sums(trunc, 3)
    e = {m: eisenstein_e4(m, trunc, sig) for m in (1, 2, 3, 6)}
    g = (e[1] - e[2] - 9 * e[3] + 9 * e[6]) * Fraction(1, 240)
    direct = QSeries.from_coeffs(g_coefficients(trunc, sig), trunc)
    bad = g.first_difference(direct)
    if bad is not None:
        raise IdentityError("Eisenstein combination vs sigma_3 formula", bad)
    return g


def phi_series(trunc: int) -> QSeries:
    """(D xi / xi)^3 * xi / (A (1 - 4 xi)(1 - 16 xi))."""
    if trunc < 5:
        raise ValueError("trunc must be at least 5")
    xi = xi_series(trunc)
    a = a_series(trunc)
    log_d = xi.derivative() / xi
    return log_d**3 * xi / (a * (1 - 4 * xi) * (1 - 16 * xi))


def z_series(values: Sequence, trunc: int | None = None) -> QSeries:
    """sum values[n] z^n, known through z^{len(values)-1} unless told otherwise."""
    t = len(values) - 1 if trunc is None else trunc
    return QSeries.from_coeffs(values, t)


def e_series(trunc: int, table: SequenceTable | None = None, verify: bool = True) -> QSeries:
    """E = -sum a_n/n^3 q^n.

    With ``verify``, also builds B(xi)/A from the companion sequence and
    raises IdentityError at the first differing exponent.
    """
    closed = QSeries.from_coeffs(
        [0] + [Fraction(-a, n**3) for n, a in enumerate(g_coefficients(trunc)) if n], trunc
    )
    if verify:
        table = table if table is not None and table.n_max >= trunc else build_table(max(trunc, 1))
        b_of_xi = series_compose(z_series(table.b[: trunc + 1]), xi_series(trunc))
        quotient = b_of_xi / a_series(trunc)
        bad = closed.first_difference(quotient)
        if bad is not None:
            raise IdentityError("E closed form vs B(xi)/A", bad)
    return closed


# the Domb differential operator ------------------------------------------------


@dataclass(frozen=True)
class ThetaOperator:
    """sum_s z^s P_s(theta), theta = z d/dz; ``terms`` holds (s, P_s coefficients)."""

    terms: tuple[tuple[int, tuple[int, ...]], ...]

    def apply(self, series: QSeries) -> QSeries:
        """Termwise action: z^n -> P_s(n) z^{n+s}.  Known through series.trunc."""
        if series.valuation < 0:
            raise SeriesError("theta operator acts on power series in z")
        t = series.trunc
        out = [Fraction(0)] * (t + 1)
        for n in range(series.valuation, t + 1):
            y = series[n]
            if y:
                for s, p in self.terms:
                    if n + s <= t:
                        out[n + s] += poly_eval(p, n) * y
        return QSeries.from_coeffs(out, t)

    def ordinary_form(self) -> tuple[tuple[int, ...], ...]:
        """Coefficients c_k(z) of the equivalent sum c_k(z) y^{(k)}, divided by z.

        theta^j = sum_k S(j, k) z^k (d/dz)^k with Stirling numbers of the second kind.
        """
        order = max(len(p) for _, p in self.terms) - 1
        stirling = [[0] * (order + 1) for _ in range(order + 1)]
        stirling[0][0] = 1
        for j in range(1, order + 1):
            for k in range(1, j + 1):
                stirling[j][k] = k * stirling[j - 1][k] + stirling[j - 1][k - 1]
        coeffs = [()] * (order + 1)
        for s, p in self.terms:
            for j, pj in enumerate(p):
                for k in range(j + 1):
                    if pj and stirling[j][k]:
                        mono = (0,) * (s + k) + (pj * stirling[j][k],)
                        coeffs[k] = poly_add(coeffs[k], mono)
        if any(c and c[0] for c in coeffs):
            raise SeriesError("operator is not divisible by z")
        return tuple(trim(c[1:]) for c in coeffs)


DOMB_OPERATOR = ThetaOperator((
    (0, (0, 0, 0, 1)),
    (1, poly_scale(poly_mul((1, 2), (2, 5, 5)), -2)),
    (2, poly_scale(poly_pow((1, 1), 3), 64)),
))


@dataclass(frozen=True)
class ODEReport:
    ok: bool
    window: int
    first_failure: int | None = None


def theta_ode_check(series: QSeries, rhs: QSeries, trunc: int | None = None,
                    operator: ThetaOperator = DOMB_OPERATOR) -> ODEReport:
    """Compare L(series) with rhs through z^{trunc-2}."""
    trunc = series.trunc if trunc is None else trunc
    if series.trunc < trunc:
        raise SeriesError(f"series known only through z^{series.trunc}")
    window = trunc - 2
    lhs = operator.apply(series.truncate(trunc))
    for n in range(0, window + 1):
        if lhs[n] != rhs[n]:
            return ODEReport(False, window, n)
    return ODEReport(True, window)


@dataclass(frozen=True)
class IndicialData:
    point: Fraction
    polynomial: tuple[Fraction, ...]
    roots: tuple[Fraction, ...]
    leading_order: int
    regular_singular: bool


def indicial_polynomial(operator: ThetaOperator = DOMB_OPERATOR,
                        point: Fraction = Fraction(1, 16)) -> IndicialData:
    """Frobenius data at z = point via z = point(1 - eps), y = eps^r.

    Returns the coefficient of the lowest power eps^{r+leading_order}.
    """
    coeffs = operator.ordinary_form()
    order = len(coeffs) - 1
    scale = -1 / point  # d/dz = scale * d/deps
    in_eps = [poly_compose_linear([Fraction(c) for c in ck], point, -point) for ck in coeffs]

    def ord_eps(p):
        return next(i for i, c in enumerate(p) if c)

    mu = min(ord_eps(p) - k for k, p in enumerate(in_eps) if p)
    poly: tuple = ()
    for k, p in enumerate(in_eps):
        idx = mu + k
        if p and 0 <= idx < len(p) and p[idx]:
            poly = poly_add(poly, poly_scale(falling_factorial(k), p[idx] * scale**k))
    roots, rest = rational_roots(poly)
    lead = in_eps[order]
    # Fuchs: ord(c_k) >= ord(c_order) - (order - k), with the point actually singular
    regular = bool(lead) and ord_eps(lead) >= 1 and all(
        not p or ord_eps(p) >= ord_eps(lead) - (order - k) for k, p in enumerate(in_eps)
    )
    return IndicialData(point, tuple(Fraction(c) for c in poly), tuple(roots), mu, regular)
