"""The default verification suites: exact identities and high-precision checks."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

import mpmath

from . import analytic, exact_sequences as seq, pcf, qseries
from .context import CheckResult, PrecisionContext, exact_check, to_mpf

FORMATS = ("json", "csv", "text")
SUITES = ("all", "exact", "analytic")
EXACT_TRUNC = 50
ANALYTIC_TRUNC = 400
L_COEFF_BOUND = 10**4


@dataclass(frozen=True)
class RunConfig:
    n_max: int = 500
    trunc: Optional[int] = None
    precision_bits: int = 256
    tol_digits: int = 25
    format: Optional[str] = None
    suite: str = "all"

    def __post_init__(self) -> None:
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1")
        if self.trunc is not None and self.trunc < 5:
            raise ValueError("trunc must be at least 5")
        if self.format is not None and self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if self.suite not in SUITES:
            raise ValueError(f"suite must be one of {SUITES}")
        self.precision()  # validates bits and digits

    @property
    def exact_trunc(self) -> int:
        return EXACT_TRUNC if self.trunc is None else self.trunc

    @property
    def analytic_trunc(self) -> int:
        return ANALYTIC_TRUNC if self.trunc is None else self.trunc

    def precision(self) -> PrecisionContext:
        return PrecisionContext(self.precision_bits, self.tol_digits, self.analytic_trunc)

    def to_json(self) -> dict:
        return asdict(self)


def _first(bad) -> str:
    return f"first failure at n={bad[0]}" if bad else ""


def sequence_checks(table: seq.SequenceTable) -> list[CheckResult]:
    n_max = table.n_max
    rows = seq.binomial_rows(2 * min(30, n_max))
    out = []
    bad = [n for n in range(min(30, n_max) + 1) if seq.domb_direct(n, rows) != table.d[n]]
    out.append(exact_check("sequences.recurrence_vs_binomial_sum", len(bad), {"n_max": min(30, n_max)}, _first(bad)))
    bad = [n for n in range(1, n_max) for which in "DB" if table.residual(which, n) != 0]
    out.append(exact_check("sequences.recurrence_resubstitution", len(bad), {"n_max": n_max}, _first(bad)))
    bad = [n for n in range(1, n_max + 1) if not seq.wronskian(table, n).holds]
    out.append(exact_check("sequences.wronskian", len(bad), {"n_max": n_max}, _first(bad)))
    sums = seq.telescoped_sums(table, n_max)
    bad = [N for N, (lhs, rhs) in enumerate(sums, start=1) if lhs != rhs]
    out.append(exact_check("sequences.telescoping", len(bad), {"n_max": n_max}, _first(bad)))
    bad = []
    for n in range(2, n_max + 1):
        step = seq.increment(table, n) / 64
        if not (seq.apery_ratio(table, n) - seq.apery_ratio(table, n - 1) == step > 0):
            bad.append(n)
    out.append(exact_check("sequences.ratio_increments", len(bad), {"n_max": n_max}, _first(bad)))
    return out


def pcf_checks(table: seq.SequenceTable) -> list[CheckResult]:
    out = []
    N = min(200, table.n_max - 1)
    if N < 0:
        return out
    report = pcf.verify_normalization(table, N)
    out.append(exact_check("pcf.normalization", 0 if report.ok else 1, {"N": N},
                           "" if report.ok else f"{report.component}_{report.first_failure} mismatch"))
    spec = pcf.domb_pcf_spec()
    pairs = pcf.convergents(spec, N)
    bad = [p.n for p in pairs if p.reduced() != table.d[p.n + 1] / (2 * table.b[p.n + 1])]
    out.append(exact_check("pcf.ratio_law", len(bad), {"N": N}, _first(bad)))
    M = min(100, N)
    cross = pcf.cross_differences(pairs[: M + 1])
    bad, prod = [], 1
    for n in range(1, M + 1):
        prod *= -spec.b_at(n)
        if cross[n] != prod * cross[0]:
            bad.append(n)
    out.append(exact_check("pcf.determinant", len(bad), {"N": M}, _first(bad)))
    return out


def series_checks(trunc: int, table: seq.SequenceTable | None = None) -> list[CheckResult]:
    """The series-level identities, exact in rationals through q^trunc."""
    if table is None or table.n_max < trunc:
        table = seq.build_table(trunc)
    params = {"trunc": trunc}
    out = []
    xi = qseries.xi_series(trunc)
    a = qseries.a_series(trunc)
    d_z = qseries.z_series(table.d[: trunc + 1])
    b_z = qseries.z_series(table.b[: trunc + 1])
    bad = a.first_difference(qseries.series_compose(d_z, xi))
    out.append(exact_check("qseries.A=sum_D_n_xi^n", int(bad is not None), params, "" if bad is None else f"q^{bad}"))
    g = qseries.g_series(trunc)
    phi = qseries.phi_series(trunc)
    s = phi + g
    ok = s.is_zero and s.trunc >= trunc
    out.append(exact_check("qseries.Phi=-g", 0 if ok else 1, params, "" if ok else f"q^{s.valuation}"))
    try:
        e = qseries.e_series(trunc, table)
        msg, fails = "", 0
    except qseries.IdentityError as exc:
        e, msg, fails = qseries.e_series(trunc, verify=False), str(exc), 1
    out.append(exact_check("qseries.B(xi)/A=-sum_a_n/n^3_q^n", fails, params, msg))
    bad = e.derivative(3).first_difference(-g)
    out.append(exact_check("qseries.D^3E=-g", int(bad is not None), params, "" if bad is None else f"q^{bad}"))
    zero = qseries.QSeries.zero(trunc)
    z = qseries.QSeries.monomial(1, 1, trunc)
    for name, series, rhs in (("qseries.ode_D_series", d_z, zero), ("qseries.ode_B_series", b_z, z)):
        rep = qseries.theta_ode_check(series, rhs, trunc)
        out.append(exact_check(name, 0 if rep.ok else 1, {"window": rep.window},
                               "" if rep.ok else f"z^{rep.first_failure}"))
    ind = qseries.indicial_polynomial()
    ok = ind.roots == (Fraction(0), Fraction(1, 2), Fraction(1)) and ind.regular_singular
    out.append(exact_check("qseries.indicial_roots", 0 if ok else 1,
                           {"roots": ",".join(map(str, ind.roots))}))
    return out


def exact_checks(config: RunConfig) -> list[CheckResult]:
    table = seq.build_table(max(config.n_max, config.exact_trunc))
    if table.n_max > config.n_max:
        small = seq.SequenceTable(config.n_max, table.d[: config.n_max + 1], table.b[: config.n_max + 1])
    else:
        small = table
    return (sequence_checks(small) + pcf_checks(small)
            + series_checks(config.exact_trunc, table)
            + [analytic.l_coefficient_check(L_COEFF_BOUND)])


def constant_estimates(table: seq.SequenceTable, ctx: PrecisionContext) -> dict[str, tuple]:
    """(estimate, closed form) for the three headline constants at n = n_max."""
    n = table.n_max
    z3 = analytic.zeta3(ctx)
    with ctx.workprec():
        ratio = to_mpf(seq.apery_ratio(table, n))
        direct_sum, _ = seq.telescoped_sum(table, n)
        pcf_value, _ = pcf.value_estimate(pcf.domb_pcf_spec(), n, ctx)
        return {
            "apery_limit": (ratio, mpmath.mpf(7) / 24 * z3),
            "domb_sum": (to_mpf(direct_sum), mpmath.mpf(56) / 3 * z3),
            "pcf_value": (pcf_value, 12 / (7 * z3)),
        }


def asymptotic_checks(table: seq.SequenceTable, ctx: PrecisionContext) -> list[CheckResult]:
    n = table.n_max - table.n_max % 2
    if n < 16:
        return []
    z3 = analytic.zeta3(ctx)
    est_d = seq.asymptotic_constant(table, "D", n, ctx)
    est_b = seq.asymptotic_constant(table, "B", n, ctx)
    half_d = seq.asymptotic_constant(table, "D", n // 2 - (n // 2) % 2, ctx)
    with ctx.workprec():
        ratio = est_b.c_n / est_d.c_n
        res = abs(ratio - mpmath.mpf(7) / 24 * z3)
        monotone = est_d.tail_delta < half_d.tail_delta and est_d.c_n > 0
    return [
        CheckResult("asymptotic.c_n(B)/c_n(D)", res, mpmath.mpf(10) ** -20, {"n": n}, value=ratio),
        CheckResult("asymptotic.tail_delta_decreasing", 0 if monotone else 1, 0, {"n": n},
                    value=est_d.c_n),
    ]


def analytic_checks(config: RunConfig) -> list[CheckResult]:
    ctx = config.precision()
    table = seq.build_table(config.n_max)
    out = []
    for name, (est, closed) in constant_estimates(table, ctx).items():
        with ctx.workprec():
            res = abs(est - closed)
        out.append(CheckResult(f"constant.{name}", res, ctx.tolerance, {"n": config.n_max}, value=est))
    out += asymptotic_checks(table, ctx)
    out += analytic.check_slash_identities(analytic.DEFAULT_TAU_SAMPLES, ctx)
    out += analytic.check_e_transform(
        analytic.DEFAULT_TAU_SAMPLES + (analytic.geodesic_sample(Fraction(2)),), ctx)
    out += analytic.check_line_functional(analytic.DEFAULT_Y_SAMPLES, ctx)
    fixed = analytic.check_fixed_point(ctx)
    out += fixed
    apery = fixed[-1]
    if apery.value is not None:
        with ctx.workprec():
            res = abs(apery.value - to_mpf(seq.apery_ratio(table, config.n_max)))
        out.append(CheckResult("consistency.fixed_point_vs_apery_ratio", res, mpmath.mpf(10) ** -20,
                               {"n": config.n_max}))
    out += analytic.l_special_values(ctx)
    out.append(analytic.l_numeric_check(6, 10**5, ctx))
    return out


def run_suite(config: RunConfig) -> list[CheckResult]:
    out = []
    if config.suite in ("all", "exact"):
        out += exact_checks(config)
    if config.suite in ("all", "analytic"):
        out += analytic_checks(config)
    return out


def digits_of_agreement(estimate, target, cap: int) -> int:
    diff = abs(estimate - target)
    if diff == 0:
        return cap
    return max(0, min(cap, int(math.floor(-mpmath.log10(diff / abs(target))))))
