import random

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from l2inv.linalg import (cyclotomic_poly, cyclotomic_rank, integer_rank, is_prime,
                          laurent_generic_rank, lp_exact_div, lp_mul, prime_1_mod, prime_factors,
                          rank_mod_p, reduce_cyclotomic, root_of_unity_mod)


def _low_rank(rng, m, n, r, lo=-4, hi=4):
    A = [[rng.randint(lo, hi) for _ in range(r)] for _ in range(m)]
    B = [[rng.randint(lo, hi) for _ in range(n)] for _ in range(r)]
    return [[sum(A[i][k] * B[k][j] for k in range(r)) for j in range(n)] for i in range(m)]


@pytest.mark.parametrize("seed", range(40))
def test_integer_rank_against_sympy(seed):
    rng = random.Random(seed)
    m, n = rng.randint(1, 7), rng.randint(1, 7)
    rows = _low_rank(rng, m, n, rng.randint(0, min(m, n)))
    assert integer_rank(rows) == sympy.Matrix(rows).rank()


@given(st.lists(st.lists(st.fractions(min_value=-50, max_value=50, max_denominator=7),
                         min_size=3, max_size=3), min_size=1, max_size=4))
@settings(max_examples=60, deadline=None)
def test_integer_rank_rational_entries(rows):
    assert integer_rank(rows) == sympy.Matrix([[sympy.Rational(x.numerator, x.denominator)
                                                for x in r] for r in rows]).rank()


def test_integer_rank_empty():
    assert integer_rank([]) == 0
    assert integer_rank([[0, 0], [0, 0]]) == 0


def test_rank_mod_p_is_lower_bound():
    rng = random.Random(3)
    for _ in range(30):
        rows = _low_rank(rng, 5, 5, rng.randint(0, 5), -50, 50)
        assert rank_mod_p(rows, 7) <= integer_rank(rows)
        assert rank_mod_p(rows, (1 << 61) - 1) == integer_rank(rows)
    # 2 vanishes mod 2
    assert rank_mod_p([[2]], 2) == 0


def test_primes_and_roots():
    assert [n for n in range(30) if is_prime(n)] == list(sympy.primerange(0, 30))
    assert is_prime((1 << 61) - 1)
    assert prime_factors(360) == [2, 3, 5]
    p = prime_1_mod(48)
    assert sympy.isprime(p) and p % 48 == 1
    w = root_of_unity_mod(p, 48)
    assert pow(w, 48, p) == 1
    assert all(pow(w, 48 // f, p) != 1 for f in (2, 3))


@pytest.mark.parametrize("d", [1, 2, 3, 4, 6, 8, 9, 12, 15, 16])
def test_cyclotomic_poly_against_sympy(d):
    x = sympy.Symbol("x")
    expected = sympy.Poly(sympy.cyclotomic_poly(d, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_poly(d)) == [int(c) for c in expected]


@pytest.mark.parametrize("d", [3, 5, 8, 12])
def test_reduce_cyclotomic_against_sympy(d):
    x = sympy.Symbol("x")
    rng = random.Random(d)
    vec = [rng.randint(-5, 5) for _ in range(3 * d)]
    poly = sum(c * x ** i for i, c in enumerate(vec))
    rem = sympy.Poly(sympy.rem(poly, sympy.cyclotomic_poly(d, x), x), x)
    deg = sympy.totient(d)
    expected = [int(rem.coeff_monomial(x ** i)) for i in range(deg)]
    assert reduce_cyclotomic(vec, d) == expected


def test_cyclotomic_rank_examples():
    # over Q(i): [[1, i], [i, -1]] has rank 1, [[1, i], [i, 1]] has rank 2
    one, i, mi = [1, 0], [0, 1], [-1, 0]
    assert cyclotomic_rank([[one, i], [i, mi]], 4) == 1
    assert cyclotomic_rank([[one, i], [i, one]], 4) == 2
    # zeta_3 - 1 is invertible in Q(zeta_3)
    assert cyclotomic_rank([[[-1, 1]]], 3) == 1
    assert cyclotomic_rank([[[0, 0]]], 3) == 0


@pytest.mark.parametrize("seed", range(15))
def test_cyclotomic_rank_against_float(seed):
    rng = random.Random(seed)
    d = rng.choice([3, 4, 5, 8])
    deg = len(cyclotomic_poly(d)) - 1
    m, n, r = 3, 3, rng.randint(0, 3)
    A = [[[rng.randint(-2, 2) for _ in range(deg)] for _ in range(r)] for _ in range(m)]
    B = [[[rng.randint(-2, 2) for _ in range(deg)] for _ in range(n)] for _ in range(r)]

    def conv(a, b):
        out = [0] * (2 * deg)
        for s, x in enumerate(a):
            for t, y in enumerate(b):
                out[s + t] += x * y
        return out

    M = []
    for i in range(m):
        row = []
        for j in range(n):
            acc = [0] * (2 * deg)
            for k in range(r):
                acc = [u + v for u, v in zip(acc, conv(A[i][k], B[k][j]))]
            row.append(reduce_cyclotomic(acc, d))
        M.append(row)
    # floating-point oracle at the primitive root
    z = np.exp(2j * np.pi / d)
    num = np.array([[sum(c * z ** s for s, c in enumerate(e)) for e in row] for row in M])
    expected = int(np.linalg.matrix_rank(num, tol=1e-8))
    assert cyclotomic_rank(M, d) == expected


def test_lp_exact_div():
    a = {(1, 0): 1, (0, 0): -1}
    b = {(1, 0): 1, (0, 0): 1}
    prod = lp_mul(a, b)
    assert prod == {(2, 0): 1, (0, 0): -1}
    assert lp_exact_div(prod, a) == b


@pytest.mark.parametrize("seed", range(25))
def test_laurent_rank_routes_agree(seed):
    rng = random.Random(seed)
    nv = rng.randint(1, 2)
    m, n = rng.randint(1, 3), rng.randint(1, 3)
    r = rng.randint(0, min(m, n))

    def rand_lp():
        return {tuple(rng.randint(-1, 1) for _ in range(nv)): rng.randint(-2, 2) for _ in range(2)}

    def clean(p):
        return {k: v for k, v in p.items() if v}

    def add(p, q):
        out = dict(p)
        for k, v in q.items():
            out[k] = out.get(k, 0) + v
        return clean(out)

    A = [[clean(rand_lp()) for _ in range(r)] for _ in range(m)]
    B = [[clean(rand_lp()) for _ in range(n)] for _ in range(r)]
    M = []
    for i in range(m):
        row = []
        for j in range(n):
            acc = {}
            for k in range(r):
                acc = add(acc, lp_mul(A[i][k], B[k][j]))
            row.append(acc)
        M.append(row)
    fast = laurent_generic_rank(M, nv, seed=seed)
    slow = laurent_generic_rank(M, nv, fast_path=False)
    xs = sympy.symbols(f"x0:{nv}")
    sm = sympy.Matrix([[sum(c * sympy.Mul(*[x ** e for x, e in zip(xs, k)]) for k, c in p.items())
                        for p in row] for row in M])
    assert fast == slow == sm.rank(simplify=True)
