"""Seeded property suites behind ``l2inv verify``.

Each property runs a fixed number of cases; case ``i`` of property ``P`` under
seed ``s`` always sees the same random stream, so a failure prints a one-line
reproduction.
"""
from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import alpha as al
from .complexes import (finite_cover_complex, laplacian, push_complex, rational_betti,
                        rescale_basis, torus_complex, validate)
from .dimension import (cyclic_tower, dim_ker_abelian, dim_ker_approx, dim_ker_finite,
                        dim_ker_sampled, dim_scaling_check, doubling, finite_nullity,
                        trace_moment_check)
from .groups import FiniteGroup, FreeAbelianGroup
from .invariants import (FinSet, atiyah_check, euler_check, finite_level_betti, l2_betti,
                         zero_divisor_probe)
from .random_objects import (finite_groups, random_degenerate_matrix, random_element,
                             random_finite_group, random_interval, random_laurent_matrix,
                             random_matrix, random_quotient, random_source_complex, random_units,
                             random_valid_complex)
from .ring import (GroupRingElement, GroupRingMatrix, block_diag, cyclic_quotient, identity_matrix,
                   monomial, push_to_quotient, trace_gamma, zero_matrix)


@dataclass(frozen=True)
class Property:
    name: str
    count: int
    check: object


def _group_for_ring(rng):
    if rng.random() < 0.6:
        return random_finite_group(rng)
    return FreeAbelianGroup(rng.randint(1, 3))


# -- algebra ------------------------------------------------------------------------


def _ring_axioms(rng):
    G = _group_for_ring(rng)
    a, b, c = (random_element(rng, G) for _ in range(3))
    assert (a * b) * c == a * (b * c), "associativity"
    assert a * (b + c) == a * b + a * c, "left distributivity"
    assert (a + b) * c == a * c + b * c, "right distributivity"


def _star_anti(rng):
    G = _group_for_ring(rng)
    a, b = random_element(rng, G), random_element(rng, G)
    assert (a * b).star() == b.star() * a.star(), "(ab)* = b*a*"
    assert (a + b).star() == a.star() + b.star(), "(a+b)* = a*+b*"
    assert a.star().star() == a, "a** = a"


def _trace_props(rng):
    G = _group_for_ring(rng)
    n, m = rng.randint(1, 3), rng.randint(1, 3)
    A, B = random_matrix(rng, G, n, m), random_matrix(rng, G, m, n)
    assert trace_gamma(A @ B) == trace_gamma(B @ A), "trace(AB) = trace(BA)"
    t = trace_gamma(A.adjoint() @ A)
    assert t >= 0, "trace(A*A) >= 0"
    assert (t == 0) == A.is_zero(), "trace(A*A) = 0 iff A = 0"
    # trace(A*A) is the sum of squared coefficients
    assert t == sum((c * c for e in A.entries for c in e.terms.values()), Fraction(0))


def _push_hom(rng):
    n = rng.randint(1, 2)
    G = FreeAbelianGroup(n)
    q = random_quotient(rng, G)
    A, B = random_matrix(rng, G, 2, 2), random_matrix(rng, G, 2, 2)
    assert push_to_quotient(A @ B, q) == push_to_quotient(A, q) @ push_to_quotient(B, q)
    assert push_to_quotient(A.adjoint(), q) == push_to_quotient(A, q).adjoint()
    assert push_to_quotient(identity_matrix(G, 2), q) == identity_matrix(q.target, 2)


# -- dimension ----------------------------------------------------------------------


def _regular_rank_oracle(A):
    """Nullity of the regular representation from a float SVD (independent route)."""
    import numpy as np
    from .dimension import regular_matrix
    M = np.array([[float(x) for x in row] for row in regular_matrix(A)], dtype=float)
    if M.size == 0:
        return A.cols * A.group.order
    return M.shape[1] - np.linalg.matrix_rank(M)


def _dim_axioms(rng):
    G = random_finite_group(rng)
    r, c = rng.randint(1, 3), rng.randint(1, 3)
    A = random_degenerate_matrix(rng, G, r, c, max_support=3, coef=3)
    B = random_degenerate_matrix(rng, G, rng.randint(1, 2), rng.randint(1, 2))
    d = dim_ker_finite(A).value
    assert 0 <= d <= c, "0 <= dim <= cols"
    assert (d == 0) == (_regular_rank_oracle(A) == 0), "faithfulness"
    assert d * G.order == _regular_rank_oracle(A), "nullity oracle"
    assert dim_ker_finite(block_diag(A, B)).value == d + dim_ker_finite(B).value, "additivity"
    k = rng.randint(1, 3)
    assert dim_ker_finite(identity_matrix(G, k)).value == 0, "dim ker I = 0"
    assert dim_ker_finite(zero_matrix(G, k, k)).value == k, "dim ker 0 = d"
    assert dim_ker_finite(A.adjoint() @ A).value == d, "ker A = ker A*A"


def _scaling(rng):
    G = random_finite_group(rng)
    H = G.generated_subgroup([rng.randrange(G.order)])
    A = random_degenerate_matrix(rng, G, rng.randint(1, 2), rng.randint(1, 2), max_support=2)
    res = dim_scaling_check(A, H)
    assert res.ok, f"dim_H {res.dim_sub} != {res.index} * {res.dim_full}"


def _character_vs_regular(rng):
    G = rng.choice([H for H in finite_groups() if H.is_structured_abelian])
    A = random_degenerate_matrix(rng, G, rng.randint(1, 3), rng.randint(1, 3))
    assert finite_nullity(A, method="characters") == finite_nullity(A, method="regular")


def _sampled_vs_generic(rng):
    n = rng.randint(1, 2)
    A = random_laurent_matrix(rng, n, rng.randint(1, 3), rng.randint(1, 3))
    exact = dim_ker_abelian(A).value
    s = dim_ker_sampled(A, num_samples=512, seed=rng.randrange(1 << 30))
    lo, hi = s.interval
    assert lo - Fraction(1, 1000) <= exact <= hi + Fraction(1, 1000), \
        f"sampled {s.interval} vs generic {exact}"


# -- betti --------------------------------------------------------------------------


def _cover_identity(rng):
    C = random_source_complex(rng)
    q = random_quotient(rng, C.group)
    a, b = finite_level_betti(C, q)
    assert a == b, f"finite backend {a} vs cover {b}"


def _euler_random(rng):
    C = random_valid_complex(rng, random_finite_group(rng))
    assert validate(C).ok
    R = l2_betti(C)
    assert euler_check(C, R).ok, f"{R.euler_from_betti} vs {C.euler_characteristic()}"


def _basis_change(rng):
    if rng.random() < 0.5:
        C = torus_complex(rng.randint(1, 3))
    else:
        S = random_source_complex(rng)
        C = push_complex(S, random_quotient(rng, S.group))
    D = rescale_basis(C, random_units(rng, C))
    assert validate(D).ok
    assert l2_betti(C).values == l2_betti(D).values


def _laplacian_props(rng):
    G = random_finite_group(rng) if rng.random() < 0.5 else FreeAbelianGroup(rng.randint(1, 2))
    C = random_valid_complex(rng, G)
    for p in range(C.top + 1):
        L = laplacian(C, p)
        assert L.adjoint() == L, "self-adjoint"
        if p >= 1:
            assert C.boundary(p) @ L == laplacian(C, p - 1) @ C.boundary(p), "d L = L d"


def _cover_euler(rng):
    C = random_source_complex(rng)
    q = random_quotient(rng, C.group)
    IC = finite_cover_complex(C, q)
    assert IC.euler_characteristic() == q.target.order * C.euler_characteristic()
    assert sum((-1) ** p * b for p, b in enumerate(rational_betti(IC))) == IC.euler_characteristic()


# -- approximation ------------------------------------------------------------------


def _tower_vs_abelian(rng):
    n = rng.randint(1, 2)
    d = rng.randint(1, 2)
    A = random_laurent_matrix(rng, n, d, d, radius=1)
    exact = dim_ker_abelian(A).value
    kmax = 256 if n == 1 else 64
    rep = dim_ker_approx(A, cyclic_tower(A.group, doubling(2, kmax)))
    tol = Fraction(10 * d, kmax)
    assert abs(rep.last - exact) <= tol, f"tower {rep.last} vs exact {exact}"


def _moment(rng):
    G = FreeAbelianGroup(1)
    A = random_matrix(rng, G, 2, 2, radius=1)
    m = rng.randint(0, 3)
    k = rng.randint(2, 9)
    res = trace_moment_check(A, cyclic_quotient(G, k), m)
    if res.injective:
        assert res.equal, "injective quotient but traces differ"


# -- atiyah -------------------------------------------------------------------------


def _integrality(rng):
    n = rng.randint(1, 3)
    d = rng.randint(1, 3)
    A = random_laurent_matrix(rng, n, d, d)
    v = dim_ker_abelian(A)
    assert v.value.denominator == 1
    assert atiyah_check(v, FinSet(1)).ok


def _dichotomy(rng):
    G = FreeAbelianGroup(rng.randint(1, 2))
    a = random_element(rng, G, 4, 5, 2, allow_zero=False)
    r = zero_divisor_probe(a)
    assert r.dim_ker_a == 0 and r.dichotomy_ok


def _torsion_pair(rng):
    n = rng.randint(2, 12)
    G = FiniteGroup.cyclic(n)
    a = 1 - monomial(G, 1)
    b = GroupRingElement(G, {g: 1 for g in range(n)})
    r = zero_divisor_probe(a, b)
    assert r.product_zero and r.dim_ker_a == Fraction(1, n)
    assert atiyah_check(dim_ker_finite(GroupRingMatrix(G, 1, 1, [a])), FinSet(n)).ok


def _finite_lattice(rng):
    G = random_finite_group(rng)
    A = random_degenerate_matrix(rng, G, 2, 2)
    assert atiyah_check(dim_ker_finite(A), FinSet.for_group(G)).ok


# -- alpha --------------------------------------------------------------------------


def _brute_min_den(lo, hi):
    q = 1
    while True:
        k = math.ceil(lo * q)
        if Fraction(k, q) <= hi:
            cands = [Fraction(j, q) for j in range(k, math.floor(hi * q) + 1)]
            return min(cands, key=abs)
        q += 1


def _min_den(rng):
    lo, hi = random_interval(rng)
    got = al.min_denominator_in_interval(al.RationalInterval(lo, hi))
    want = _brute_min_den(lo, hi)
    assert got == want, f"[{lo}, {hi}]: {got} vs {want}"


def _nesting(rng):
    r, s = rng.randint(2, 4), rng.randint(2, 4)
    w1 = Fraction(1, 10 ** rng.randint(2, 30))
    w2 = w1 * rng.randint(1, 10 ** 5)
    _, I1 = al.alpha_enclosure(r, s, w1)
    _, I2 = al.alpha_enclosure(r, s, w2)
    assert I1.issubset(I2) and I1.width <= w1


def _majorant(rng):
    r, s = rng.randint(2, 6), rng.randint(2, 6)
    for n in range(1, 51):
        assert (r ** n - 1) * (s ** n - 1) * 4 >= (r * s) ** n
        assert al.euler_phi(n) <= n


def _small_cert(rng):
    rep = al.rationality_report(2, 2, 10 ** rng.randint(1, 6), stability_check=False)
    assert rep.certified and rep.bounds_ok


SUITES = {
    "algebra": [Property("ring_axioms", 60, _ring_axioms), Property("star_anti", 60, _star_anti),
                Property("trace", 40, _trace_props), Property("push_hom", 30, _push_hom)],
    "dimension": [Property("axioms", 40, _dim_axioms), Property("scaling", 30, _scaling),
                  Property("characters_vs_regular", 30, _character_vs_regular),
                  Property("sampled_vs_generic", 20, _sampled_vs_generic)],
    "betti": [Property("cover_identity", 25, _cover_identity),
              Property("euler_random", 50, _euler_random),
              Property("basis_change", 20, _basis_change),
              Property("laplacian", 20, _laplacian_props),
              Property("cover_euler", 20, _cover_euler)],
    "approximation": [Property("tower_vs_abelian", 12, _tower_vs_abelian),
                      Property("trace_moments", 30, _moment)],
    "atiyah": [Property("integrality", 40, _integrality), Property("dichotomy", 40, _dichotomy),
               Property("torsion_pair", 11, _torsion_pair),
               Property("finite_lattice", 30, _finite_lattice)],
    "alpha": [Property("min_denominator", 200, _min_den), Property("nesting", 20, _nesting),
              Property("majorant", 5, _majorant), Property("small_certificates", 6, _small_cert)],
}
SUITE_NAMES = tuple(SUITES) + ("all",)


@dataclass(frozen=True)
class PropertyResult:
    suite: str
    name: str
    passed: int
    total: int
    failure: str | None = None
    repro: str | None = None


def case_rng(seed, suite, name, case):
    return random.Random(f"{seed}:{suite}:{name}:{case}")


def run_property(suite, prop, seed=0, case=None):
    cases = [case] if case is not None else range(prop.count)
    passed = 0
    for i in cases:
        try:
            prop.check(case_rng(seed, suite, prop.name, i))
        except Exception as exc:  # report any failure, including crashes
            msg = f"{type(exc).__name__}: {exc}" if str(exc) else type(exc).__name__
            repro = (f"l2inv verify --suite {suite} --property {prop.name} "
                     f"--seed {seed} --case {i}")
            return PropertyResult(suite, prop.name, passed, len(cases), msg, repro)
        passed += 1
    return PropertyResult(suite, prop.name, passed, len(cases))


def run_suite(name, seed=0, jobs=1, only=None, case=None):
    """Run one suite (or ``all``); results come back in a fixed order."""
    names = list(SUITES) if name == "all" else [name]
    if any(n not in SUITES for n in names):
        raise ValueError(f"unknown suite {name!r}")
    work = [(n, p) for n in names for p in SUITES[n] if only is None or p.name == only]
    if only is not None and not work:
        raise ValueError(f"unknown property {only!r}")
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            return list(ex.map(lambda w: run_property(w[0], w[1], seed, case), work))
    return [run_property(n, p, seed, case) for n, p in work]
