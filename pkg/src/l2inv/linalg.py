"""Exact rank computations.

* :func:`integer_rank` -- fraction-free (Bareiss) elimination over ``Z``.
* :func:`laurent_generic_rank` -- Bareiss over ``Z[x_1^±, ..., x_n^±]``, i.e. the
  rank over the fraction field.
* :func:`cyclotomic_rank` -- rank over ``Q(zeta_d)`` of a matrix with entries
  in ``Z[zeta_d]``.
* modular helpers: primes ``p = 1 mod K``, roots of unity mod ``p``, rank mod ``p``.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction
from functools import lru_cache, reduce

import numpy as np


def integerize_rows(rows):
    """Scale each row of a rational matrix to integers (rank is unchanged)."""
    out = []
    for r in rows:
        den = 1
        for x in r:
            if isinstance(x, Fraction) and x.denominator != 1:
                den = den * x.denominator // math.gcd(den, x.denominator)
        out.append([int(x * den) for x in r])
    return out


def integer_rank(rows, ncols=None):
    """Rank over ``Q`` of an integer (or rational) matrix by Bareiss elimination."""
    rows = integerize_rows(rows)
    m = len(rows)
    n = len(rows[0]) if rows else (ncols or 0)
    if m == 0 or n == 0:
        return 0
    M = np.empty((m, n), dtype=object)
    M[:, :] = rows
    r = 0
    prev = 1
    for c in range(n):
        if r == m:
            break
        nz = [i for i in range(r, m) if M[i, c] != 0]
        if not nz:
            continue
        p = min(nz, key=lambda i: abs(M[i, c]))
        if p != r:
            M[[r, p]] = M[[p, r]]
        piv = M[r, c]
        if r + 1 < m and c + 1 < n:
            lower = M[r + 1:, c:c + 1]
            M[r + 1:, c + 1:] = (M[r + 1:, c + 1:] * piv - lower * M[r:r + 1, c + 1:]) // prev
        M[r + 1:, c] = 0
        prev = piv
        r += 1
    return r


def rank_mod_p(rows, p):
    """Rank over ``F_p`` of a small matrix given as lists of ints."""
    M = [[x % p for x in r] for r in rows]
    m = len(M)
    n = len(M[0]) if M else 0
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        prow = M[r]
        for i in range(r + 1, m):
            f = M[i][c]
            if f:
                f = f * inv % p
                row = M[i]
                for j in range(c, n):
                    row[j] = (row[j] - f * prow[j]) % p
        r += 1
        if r == m:
            break
    return r


# -- primes -------------------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic Miller-Rabin, valid for n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n):
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=64)
def prime_1_mod(K, lo=1 << 30):
    """Smallest prime ``p >= lo`` with ``p = 1 (mod K)``."""
    m = max(1, -(-(lo - 1) // K))
    while True:
        p = m * K + 1
        if is_prime(p):
            return p
        m += 1


@lru_cache(maxsize=64)
def root_of_unity_mod(p, K):
    """An element of exact multiplicative order ``K`` in ``F_p`` (requires ``K | p-1``)."""
    if (p - 1) % K:
        raise ValueError("K must divide p - 1")
    qs = prime_factors(K)
    for x in range(2, p):
        w = pow(x, (p - 1) // K, p)
        if all(pow(w, K // q, p) != 1 for q in qs):
            return w
    raise ArithmeticError("no root of unity found")


# -- Laurent polynomials --------------------------------------------------------
# A Laurent polynomial is a dict {exponent tuple: nonzero int}.


def lp_mul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def lp_sub(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) - c
        if s:
            out[e] = s
        else:
            del out[e]
    return out


def lp_exact_div(a, b):
    """``a / b`` in ``Z[x^±]``; raises ArithmeticError if ``b`` does not divide ``a``.

    Uses the lex order on exponent vectors, which is a group order on ``Z^n`` and
    hence multiplicative on leading terms.
    """
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    lb = max(b)
    cb = b[lb]
    q = {}
    r = dict(a)
    guard = 0
    while r:
        la = max(r)
        ca = r[la]
        if ca % cb:
            raise ArithmeticError("inexact division")
        c = ca // cb
        e = tuple(x - y for x, y in zip(la, lb))
        q[e] = c
        for eb, vb in b.items():
            k = tuple(x + y for x, y in zip(e, eb))
            s = r.get(k, 0) - c * vb
            if s:
                r[k] = s
            else:
                del r[k]
        guard += 1
        if guard > 10 * (len(a) + 1) * (len(b) + 1) + 1000:
            raise ArithmeticError("inexact division")
    return q


def lp_span(a):
    """Total degree span: sum over variables of (max exponent - min exponent)."""
    if not a:
        return 0
    exps = list(a)
    return sum(max(e[i] for e in exps) - min(e[i] for e in exps) for i in range(len(exps[0])))


def lp_eval_mod(a, point, p):
    total = 0
    for e, c in a.items():
        v = c
        for x, k in zip(point, e):
            if k:
                v = v * pow(x, k, p) % p
        total += v
    return total % p


def laurent_generic_rank(rows, nvars, seed=0, fast_path=True):
    """Rank over ``Q(x_1..x_n)`` of a matrix of Laurent polynomials (dicts).

    A specialisation mod a large prime gives a certified lower bound; when it
    already equals ``min(rows, cols)`` that is the answer. Otherwise Bareiss
    elimination with pivots of lowest degree span, then fewest terms, decides.
    """
    m = len(rows)
    n = len(rows[0]) if rows else 0
    if m == 0 or n == 0:
        return 0
    full = min(m, n)
    if fast_path:
        p = (1 << 61) - 1
        rng = random.Random(seed)
        point = [rng.randrange(2, p - 1) for _ in range(nvars)]
        vals = [[lp_eval_mod(a, point, p) for a in r] for r in rows]
        if rank_mod_p(vals, p) == full:
            return full
    return _bareiss_laurent([[dict(a) for a in r] for r in rows])


def _bareiss_laurent(M):
    m, n = len(M), len(M[0])
    row_idx = list(range(m))
    col_idx = list(range(n))
    prev = None
    rank = 0
    for k in range(min(m, n)):
        best = None
        for i in range(k, m):
            for j in range(k, n):
                a = M[row_idx[i]][col_idx[j]]
                if a:
                    key = (lp_span(a), len(a))
                    if best is None or key < best[0]:
                        best = (key, i, j)
        if best is None:
            break
        _, i, j = best
        row_idx[k], row_idx[i] = row_idx[i], row_idx[k]
        col_idx[k], col_idx[j] = col_idx[j], col_idx[k]
        pr, pc = row_idx[k], col_idx[k]
        piv = M[pr][pc]
        for ii in range(k + 1, m):
            r = row_idx[ii]
            a_ik = M[r][pc]
            for jj in range(k + 1, n):
                c = col_idx[jj]
                val = lp_sub(lp_mul(M[r][c], piv), lp_mul(a_ik, M[pr][c]))
                if prev is not None and val:
                    val = lp_exact_div(val, prev)
                M[r][c] = val
            M[r][pc] = {}
        prev = piv
        rank += 1
    return rank


# -- cyclotomic integers --------------------------------------------------------


def _poly_divmod_monic(num, den):
    """Integer polynomial division by a monic polynomial; coefficient lists low->high."""
    num = list(num)
    dn = len(den) - 1
    if len(num) <= dn:
        return [0], num
    q = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            q[i - dn] = c
            for j in range(dn + 1):
                num[i - dn + j] -= c * den[j]
    return q, num[:dn]


@lru_cache(maxsize=None)
def cyclotomic_poly(d):
    """Coefficients (low->high) of the d-th cyclotomic polynomial."""
    num = [-1] + [0] * (d - 1) + [1]
    for e in range(1, d):
        if d % e == 0:
            num, rem = _poly_divmod_monic(num, cyclotomic_poly(e))
            assert not any(rem)
    return tuple(num)


def euler_phi_small(d):
    return len(cyclotomic_poly(d)) - 1


def reduce_cyclotomic(vec, d):
    """Reduce an integer coefficient vector modulo the d-th cyclotomic polynomial."""
    phi = cyclotomic_poly(d)
    deg = len(phi) - 1
    v = list(vec)
    if len(v) < deg:
        return v + [0] * (deg - len(v))
    if deg == len(phi) - 1 and d > 1 and (d & (d - 1)) == 0:
        # Phi_{2^j} = z^(d/2) + 1: fold with a sign flip
        out = [0] * deg
        for i, c in enumerate(v):
            q, r = divmod(i, deg)
            out[r] += -c if q % 2 else c
        return out
    _, rem = _poly_divmod_monic(v, phi)
    return rem + [0] * (deg - len(rem))


def _cyc_mul(a, b, d):
    prod = np.convolve(np.asarray(a, dtype=object), np.asarray(b, dtype=object))
    return reduce_cyclotomic([int(x) for x in prod], d)


def cyclotomic_rank(rows, d):
    """Rank over ``Q(zeta_d)`` of a matrix whose entries are coefficient vectors in
    ``Z[zeta_d]`` (already reduced, length ``phi(d)``).

    Fraction-free cross-multiplication, dividing each updated row by the integer
    content of its coefficients to limit growth.
    """
    M = [[list(x) for x in r] for r in rows]
    m = len(M)
    n = len(M[0]) if M else 0
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, m) if any(M[i][c])), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        prow = M[rank]
        p = prow[c]
        for i in range(rank + 1, m):
            a = M[i][c]
            if not any(a):
                continue
            row = M[i]
            new = [None] * n
            for j in range(n):
                if j <= c:
                    new[j] = [0] * len(p)
                    continue
                x = _cyc_mul(row[j], p, d) if any(row[j]) else [0] * len(p)
                y = _cyc_mul(a, prow[j], d) if any(prow[j]) else [0] * len(p)
                new[j] = [u - v for u, v in zip(x, y)]
            g = reduce(math.gcd, (abs(v) for e in new for v in e), 0)
            if g > 1:
                new = [[v // g for v in e] for e in new]
            M[i] = new
        rank += 1
        if rank == m:
            break
    return rank
