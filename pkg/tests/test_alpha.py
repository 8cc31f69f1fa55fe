import random
from math import ceil, floor, gcd
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from l2inv.alpha import (RationalInterval, agreeing_decimal, alpha_enclosure, alpha_enclosure_terms,
                         euler_phi, majorant, min_denominator_in_interval, partial_sum,
                         rationality_report, tail_bound, terms_for_width, truncate_decimal)


def test_euler_phi_examples():
    assert euler_phi(1) == 1
    assert euler_phi(6) == 2
    assert euler_phi(12) == 4
    with pytest.raises(ValueError):
        euler_phi(0)


@given(st.integers(1, 10 ** 6))
@settings(max_examples=200)
def test_euler_phi_against_sympy(n):
    assert euler_phi(n) == sympy.totient(n)


def test_euler_phi_enumeration():
    for n in range(1, 60):
        assert euler_phi(n) == sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def test_first_term():
    N, I = alpha_enclosure(2, 2, Fraction(1, 10))
    assert I.lo >= Fraction(1, 9)
    assert partial_sum(2, 2, 2) == Fraction(1, 9)


def test_coarse_enclosure_contains_reference():
    N, I = alpha_enclosure(2, 2, Fraction(1, 10))
    assert N < 10
    ref = alpha_enclosure_terms(2, 2, 200).lo
    assert ref in I


def test_majorant_inequality_numerically():
    for r, s in [(2, 2), (2, 3), (3, 5)]:
        for n in range(1, 51):
            term = Fraction(euler_phi(n), (r ** n - 1) * (s ** n - 1))
            assert term <= 4 * n * Fraction(1, (r * s) ** n)


@pytest.mark.parametrize("r,s", [(2, 2), (2, 3), (3, 3), (4, 7)])
def test_tail_bound_dominates_tail(r, s):
    for N in (1, 3, 10):
        tail = partial_sum(r, s, N + 80) - partial_sum(r, s, N)
        assert tail <= tail_bound(r, s, N)


@pytest.mark.parametrize("r,s", [(2, 2), (3, 4)])
def test_enclosures_nest(r, s):
    widths = [Fraction(1, 10 ** k) for k in (1, 3, 8, 20)]
    encs = [alpha_enclosure(r, s, w)[1] for w in widths]
    for tight, loose in zip(encs[1:], encs):
        assert tight.issubset(loose)
    for w, I in zip(widths, encs):
        assert I.width <= w
    # doubling N never widens
    for N in (1, 5, 17):
        assert alpha_enclosure_terms(r, s, 2 * N).issubset(alpha_enclosure_terms(r, s, N))


def test_terms_for_width_is_least():
    for w in (Fraction(1, 10), Fraction(1, 10 ** 30)):
        N = terms_for_width(2, 2, w)
        assert tail_bound(2, 2, N) <= w
        assert N == 1 or tail_bound(2, 2, N - 1) > w


def test_against_mpmath():
    # independent floating evaluation of the series
    mpmath.mp.dps = 60
    val = mpmath.fsum(mpmath.mpf(int(sympy.totient(n))) / ((2 ** n - 1) * (2 ** n - 1))
                      for n in range(2, 400))
    _, I = alpha_enclosure(2, 2, Fraction(1, 10 ** 40))
    lo = mpmath.mpf(I.lo.numerator) / I.lo.denominator
    hi = mpmath.mpf(I.hi.numerator) / I.hi.denominator
    assert lo - mpmath.mpf(10) ** -50 <= val <= hi + mpmath.mpf(10) ** -50


def test_domain_errors():
    with pytest.raises(ValueError):
        alpha_enclosure(1, 2, Fraction(1, 10))
    with pytest.raises(ValueError):
        alpha_enclosure(2, 2, 0)
    with pytest.raises(ValueError):
        RationalInterval(1, 0)
    with pytest.raises(ValueError):
        rationality_report(2, 2, 0)


# -- smallest denominators ----------------------------------------------------------


def test_min_denominator_examples():
    assert min_denominator_in_interval(RationalInterval(Fraction(30, 100), Fraction(34, 100))) \
        == Fraction(1, 3)
    assert min_denominator_in_interval(RationalInterval(1, 2)) == 1
    assert min_denominator_in_interval(RationalInterval(Fraction(5, 8), Fraction(5, 8))) \
        == Fraction(5, 8)
    assert min_denominator_in_interval(RationalInterval(-1, 1)) == 0
    assert min_denominator_in_interval(RationalInterval(Fraction(-34, 100), Fraction(-3, 10))) \
        == Fraction(-1, 3)


def _brute_min_den(lo, hi, limit=10 ** 4):
    for q in range(1, limit + 1):
        a, b = ceil(lo * q), floor(hi * q)
        if a <= b:
            # the numerator closest to zero
            p = 0 if a <= 0 <= b else (a if a > 0 else b)
            return Fraction(p, q)
    return None


@pytest.mark.parametrize("seed", range(200))
def test_min_denominator_brute_force(seed):
    rng = random.Random(seed)
    a = Fraction(rng.randint(-10 ** 6, 10 ** 6), rng.randint(1, 10 ** 5))
    b = a + Fraction(rng.randint(0, 10 ** 3), rng.randint(1, 10 ** 7))
    got = min_denominator_in_interval(RationalInterval(a, b))
    want = _brute_min_den(a, b)
    if want is not None:
        assert got == want
    else:
        assert got.denominator > 10 ** 4 and a <= got <= b


def test_witness_path():
    I = RationalInterval(Fraction(333, 1000), Fraction(334, 1000))
    w = min_denominator_in_interval(I)
    assert w == Fraction(1, 3) and w.denominator <= 3


# -- decimals -----------------------------------------------------------------------


def test_decimals():
    assert truncate_decimal(Fraction(2, 3), 4) == "0.6666"
    assert truncate_decimal(Fraction(-2, 3), 2) == "-0.66"
    assert truncate_decimal(Fraction(7, 2), 0) == "3"
    I = RationalInterval(Fraction(12341, 10 ** 5), Fraction(12349, 10 ** 5))
    assert agreeing_decimal(I, 5) == "0.1234"


def test_round_outward_contains():
    I = RationalInterval(Fraction(1, 7), Fraction(2, 7))
    J = I.round_outward(3)
    assert I.issubset(J)
    assert (J.lo * 1000).denominator == 1 and (J.hi * 1000).denominator == 1
    assert J.width <= I.width + Fraction(2, 1000)


# -- rationality reports ------------------------------------------------------------


def test_low_precision_certification():
    rep = rationality_report(2, 2, 100)
    assert rep.certified and rep.min_denominator > 100
    assert rep.enclosure.width < Fraction(1, 100 ** 2)
    assert rep.bounds_ok
    js = rep.to_json()
    assert js["min_denominator_found"] == "exceeds bound"
    assert "statement" in js
    assert rep.decimal.startswith("0.1659")


@pytest.mark.parametrize("r,s", [(2, 3), (3, 3), (5, 2)])
def test_other_parameters(r, s):
    rep = rationality_report(r, s, 10 ** 6)
    assert rep.certified
    assert 0 < rep.enclosure.lo < majorant(r, s)


def test_alpha_is_symmetric():
    assert alpha_enclosure_terms(2, 5, 30) == alpha_enclosure_terms(5, 2, 30)


def test_report_stable_digits():
    rep = rationality_report(2, 2, 10 ** 10, digits=40)
    assert rep.stable_digits >= 40
    assert len(rep.decimal.split(".")[1]) >= 40
