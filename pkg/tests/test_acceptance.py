"""Acceptance criteria, one test and one PASS/FAIL line each.

Run alone with ``pytest tests/test_acceptance.py -s`` (or as a script) to see
the lines as they happen; a normal pytest run lists them in the summary.
"""
import time
from fractions import Fraction

import mpmath
import pytest

from dombzeta import analytic as an
from dombzeta import exact_sequences as seq
from dombzeta import pcf
from dombzeta import qseries as qs
from dombzeta.context import PrecisionContext, to_mpf
from dombzeta.suite import RunConfig, digits_of_agreement, run_suite

from _report import record

TEN = mpmath.mpf(10)
CTX256 = PrecisionContext(precision_bits=256, tol_digits=25, trunc=400)
CTX512 = PrecisionContext(precision_bits=512, tol_digits=100, trunc=400)


def _e(x) -> str:
    return "0" if x == 0 else mpmath.nstr(x, 3)


@pytest.fixture(scope="module")
def table():
    return seq.build_table(500)


def test_c01_apery_limit():
    start = time.perf_counter()
    t = seq.build_table(200)
    z3 = an.zeta3(CTX512)
    with CTX512.workprec():
        res = abs(to_mpf(seq.apery_ratio(t, 200)) - mpmath.mpf(7) / 24 * z3)
    elapsed = time.perf_counter() - start
    ok = res < TEN ** -100 and elapsed < 5
    assert record(1, "Apery limit B_200/D_200 = 7/24 zeta(3)", ok,
                  f"residual={_e(res)} (<1e-100), {elapsed:.2f}s (<5s)")


def test_c02_domb_sum(table):
    bad = [N for N, (l, r) in enumerate(seq.telescoped_sums(table, 500), 1) if l != r]
    direct, _ = seq.telescoped_sum(table, 200)
    with CTX512.workprec():
        digits = digits_of_agreement(to_mpf(direct), mpmath.mpf(56) / 3 * an.zeta3(CTX512), 150)
    ok = not bad and digits >= 100
    assert record(2, "Domb sum telescoping and 56/3 zeta(3)", ok,
                  f"exact mismatches N<=500: {len(bad)}, digits at N=200: {digits} (>=100)")


def test_c03_continued_fraction(table):
    spec = pcf.domb_pcf_spec()
    value, _ = pcf.value_estimate(spec, 100, CTX512)
    with CTX512.workprec():
        res = abs(value - 12 / (7 * an.zeta3(CTX512)))
    bad = [p.n for p in pcf.convergents(spec, 200)
           if p.reduced() != table.d[p.n + 1] / (2 * table.b[p.n + 1])]
    ok = res < TEN ** -50 and not bad
    assert record(3, "continued fraction value and ratio law", ok,
                  f"|P_100/Q_100 - 12/(7 zeta3)|={_e(res)} (<1e-50), ratio-law mismatches n<=200: {len(bad)}")


def test_c04_wronskian(table):
    bad = [n for n in range(1, 501)
           if seq.wronskian(table, n).w != Fraction(-(64 ** (n - 1)), n**3)]
    assert record(4, "Wronskian -64^(n-1)/n^3", not bad, f"mismatches 1<=n<=500: {len(bad)}")


def test_c05_continuant_normalization(table):
    rep = pcf.verify_normalization(table, 200)
    detail = f"checked n=0..{rep.checked - 1}" if rep.ok else f"{rep.component}_{rep.first_failure} differs"
    assert record(5, "continuant normalization", rep.ok, detail)


def test_c06_series_identities(table):
    T = 50
    xi, a, g = qs.xi_series(T), qs.a_series(T), qs.g_series(T)
    d_xi = qs.series_compose(qs.z_series(table.d[: T + 1]), xi)
    b_xi = qs.series_compose(qs.z_series(table.b[: T + 1]), xi)
    e = qs.e_series(T, verify=False)
    phi = qs.phi_series(T)
    checks = {
        "A=sum D_n xi^n": d_xi.trunc >= T and d_xi.first_difference(a) is None,
        "Phi=-g": phi.trunc >= T and phi.first_difference(-g) is None,
        "B(xi)/A=E": (b_xi / a).trunc >= T and (b_xi / a).first_difference(e) is None,
        "D^3E=-g": e.derivative(3).first_difference(-g) is None,
    }
    failed = [k for k, v in checks.items() if not v]
    assert record(6, "series identities through q^50", not failed,
                  "all exact" if not failed else f"failed: {', '.join(failed)}")


def test_c07_ode(table):
    T = 50
    d = qs.theta_ode_check(qs.z_series(table.d[: T + 1]), qs.QSeries.zero(T))
    b = qs.theta_ode_check(qs.z_series(table.b[: T + 1]), qs.QSeries.monomial(1, 1, T))
    assert record(7, "theta-operator: L D = 0, L B = z", d.ok and b.ok,
                  f"window z^0..z^{d.window}, D {'ok' if d.ok else d.first_failure}, "
                  f"B {'ok' if b.ok else b.first_failure}")


def test_c08_indicial():
    ind = qs.indicial_polynomial()
    ok = set(ind.roots) == {Fraction(0), Fraction(1, 2), Fraction(1)} and len(ind.roots) == 3
    assert record(8, "indicial roots at z=1/16", ok, f"roots {{{', '.join(map(str, ind.roots))}}}")


def _worst(results):
    if any(r.residual is None for r in results):
        return None
    return max(r.residual for r in results)


def test_c09_slash_identities():
    res = an.check_slash_identities(an.DEFAULT_TAU_SAMPLES, CTX256)
    worst = _worst(res)
    ok = worst is not None and worst < TEN ** -25 and len(res) == 28
    assert record(9, "slash identities (xi, A, 4x E4, g)", ok,
                  f"{len(res)} residuals, max={_e(worst) if worst is not None else 'n/a'} (<1e-25)")


def test_c10_transform_and_line():
    taus = an.DEFAULT_TAU_SAMPLES + (an.geodesic_sample(Fraction(2)),)
    tr = an.check_e_transform(taus, CTX256)
    ln = an.check_line_functional(an.DEFAULT_Y_SAMPLES, CTX256)
    wt, wl = _worst(tr), _worst(ln)
    ok = None not in (wt, wl) and max(wt, wl) < TEN ** -25
    assert record(10, "E transformation law and line identity", ok,
                  f"max transform={_e(wt)}, max line={_e(wl)} (<1e-25)")


def test_c11_fixed_point():
    r = {c.check_id.split(".", 1)[1]: c.residual for c in an.check_fixed_point(CTX256)}
    strict = [r["xi=1/16"], r["xi'=0"]]
    loose = [r["A'=2i*sqrt3*A"], r["E+E'/(2i*sqrt3)=7/24*zeta3"]]
    ok = (None not in strict + loose and max(strict) < TEN ** -30 and max(loose) < TEN ** -25)
    assert record(11, "fixed-point identities at tau_*", ok,
                  "xi-1/16={}, xi'={} (<1e-30); A'={}, E-constant={} (<1e-25)".format(*map(_e, strict + loose)))


def test_c12_l_function():
    coeff = an.l_coefficient_check(10**4)
    special = an.l_special_values(CTX256)
    worst = max(c.residual for c in special)
    numeric = an.l_numeric_check(6, 10**5, CTX256)
    ok = coeff.passed and coeff.residual == 0 and worst < TEN ** -25 and numeric.passed
    assert record(12, "L-function factorization, special values, s=6 sum", ok,
                  f"coefficient mismatches n<=1e4: {coeff.residual}, special max={_e(worst)} (<1e-25), "
                  f"s=6 residual={_e(numeric.residual)} <= bound {_e(numeric.tolerance)}")


def test_default_suite_runtime():
    start = time.perf_counter()
    checks = run_suite(RunConfig())
    elapsed = time.perf_counter() - start
    failed = [c.check_id for c in checks if not c.passed]
    ok = not failed and elapsed < 120
    assert record("runtime", "full default suite", ok,
                  f"{len(checks) - len(failed)}/{len(checks)} pass in {elapsed:.1f}s (<120s)")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
