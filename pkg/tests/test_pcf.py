from math import factorial

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from dombzeta import analytic, pcf
from dombzeta import exact_sequences as seq
from dombzeta.context import PrecisionContext

from oracles import continued_fraction_value

SPEC = pcf.domb_pcf_spec()

polys = st.lists(st.integers(-5, 5), min_size=1, max_size=4).map(tuple)


def test_partial_terms():
    assert SPEC.a_at(0) == 2
    assert SPEC.a_at(1) == 36
    assert SPEC.a_at(2) == 160
    assert SPEC.b_at(3) == -16 * 3**6 == -11664


def test_first_convergents():
    pairs = pcf.convergents(SPEC, 2)
    assert [(p.p, p.q) for p in pairs] == [(2, 1), (56, 36), (6912, 4736)]
    assert pairs[1].lowest_terms() == (14, 9)


@pytest.mark.parametrize("n", [1, 2, 5, 12])
def test_convergents_match_bottom_up_evaluation(n):
    pair = pcf.convergents(SPEC, n)[-1]
    assert pair.reduced() == continued_fraction_value(SPEC.a0, SPEC.a_at, SPEC.b_at, n)


def test_normalization(table500):
    report = pcf.verify_normalization(table500, 200)
    assert report.ok and report.checked == 201


def test_normalization_manual(table500):
    for pair in pcf.convergents(SPEC, 30):
        n = pair.n
        f3 = factorial(n + 1) ** 3
        assert pair.p * 2 ** (n + 1) == f3 * table500.d[n + 1]
        assert pair.q * 2**n == f3 * table500.b[n + 1]


def test_normalization_needs_table():
    with pytest.raises(ValueError):
        pcf.verify_normalization(seq.build_table(10), 10)


def test_ratio_law(table500):
    for pair in pcf.convergents(SPEC, 200):
        assert pair.reduced() == table500.d[pair.n + 1] / (2 * table500.b[pair.n + 1])


def test_determinant_closed_form():
    pairs = pcf.convergents(SPEC, 100)
    cross = pcf.cross_differences(pairs)
    assert cross[0] == -1
    prod = 1
    for n in range(1, 101):
        prod *= 16 * n**6
        assert cross[n] == -prod


@settings(max_examples=60, deadline=None)
@given(a0=st.integers(-5, 5), a=polys, b=polys, N=st.integers(1, 12))
def test_determinant_property(a0, a, b, N):
    spec = pcf.PCFSpec(a0, a, b)
    cross = pcf.cross_differences(pcf.convergents(spec, N, check=False))
    prod = -1
    for n in range(1, N + 1):
        prod *= -spec.b_at(n)
        assert cross[n] == prod


@settings(max_examples=40, deadline=None)
@given(a0=st.integers(-5, 5), a=st.lists(st.integers(1, 5), min_size=1, max_size=3).map(tuple),
       N=st.integers(1, 10))
def test_vanishing_numerator_is_product(a0, a, N):
    spec = pcf.PCFSpec(a0, a, (0,))
    pairs = pcf.convergents(spec, N, check=False)
    prod = 1
    for n in range(1, N + 1):
        prod *= spec.a_at(n)
    assert (pairs[-1].p, pairs[-1].q) == (a0 * prod, prod)
    with pytest.raises(ValueError):
        pcf.convergents(spec, N)


def test_convergence_rate():
    pairs = pcf.convergents(SPEC, 150)
    ctx = PrecisionContext(512)
    with ctx.workprec():
        target = 12 / (7 * analytic.zeta3(ctx))
        for pair in pairs[10::20]:
            err = abs(mpmath.mpf(pair.p) / pair.q - target)
            assert err < mpmath.mpf(4) ** -pair.n * 1000


def test_value_estimate():
    ctx = PrecisionContext(512)
    v, e = pcf.value_estimate(SPEC, 1, ctx)
    with ctx.workprec():
        assert v == mpmath.mpf(56) / 36
        assert abs(e - abs(mpmath.mpf(56) / 36 - 2)) < mpmath.mpf(10) ** -100
        v, e = pcf.value_estimate(SPEC, 100, ctx)
        target = 12 / (7 * analytic.zeta3(ctx))
        assert abs(v - target) < mpmath.mpf(10) ** -50
        assert abs(v - target) <= e
    assert pcf.value_estimate(SPEC, 0, ctx)[1] is None


def test_value_estimate_zero_denominator():
    spec = pcf.PCFSpec(1, (0,), (1,))  # Q_1 = 0
    with pytest.raises(ZeroDivisionError):
        pcf.value_estimate(spec, 3, PrecisionContext())


def test_negative_depth():
    with pytest.raises(ValueError):
        pcf.convergents(SPEC, -1)
