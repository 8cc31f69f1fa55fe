"""L2-Betti numbers of complexes and the checks built on them."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .complexes import (as_free_abelian, finite_cover_complex, is_free_abelian_presentation,
                        laplacian, push_complex, rational_betti)
from .dimension import (DEFAULT_SAMPLES, DEFAULT_SVD_TOL, DEFAULT_WINDOW, ApproxReport, DimensionResult,
                        dim_ker_abelian, dim_ker_approx, dim_ker_finite, dim_ker_sampled, fmt_q,
                        generic_rank)
from .errors import UnsupportedGroupError
from .groups import FiniteGroup, FinitelyGeneratedGroup, FreeAbelianGroup, is_trivial
from .ring import GroupRingMatrix, gr_mul

BACKENDS = ("auto", "finite", "abelian", "sampled", "tower")


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one verifiable identity; ``details`` is JSON-ready."""

    name: str
    ok: bool
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"check": self.name, "ok": self.ok, **self.details}


@dataclass(frozen=True)
class BettiReport:
    betti: tuple
    euler_from_betti: Fraction
    euler_from_ranks: int
    backend: str
    flags: dict = field(default_factory=dict)
    checks: tuple = ()

    @property
    def values(self):
        return [b.value for b in self.betti]

    @property
    def exact(self):
        return all(b.exact for b in self.betti) and self.backend != "tower"

    def with_checks(self, *checks):
        return BettiReport(self.betti, self.euler_from_betti, self.euler_from_ranks,
                           self.backend, self.flags, self.checks + tuple(checks))

    def with_flags(self, **flags):
        return BettiReport(self.betti, self.euler_from_betti, self.euler_from_ranks,
                           self.backend, {**self.flags, **flags}, self.checks)

    def to_json(self):
        return {
            "backend": self.backend,
            "betti": [fmt_q(v) for v in self.values],
            "results": [b.to_json() for b in self.betti],
            "euler_from_betti": fmt_q(self.euler_from_betti),
            "euler_from_ranks": str(self.euler_from_ranks),
            "flags": self.flags,
            "checks": [c.to_json() for c in self.checks],
        }

    def same_values(self, other):
        return self.backend == other.backend and self.values == other.values


def _is_infinite(group):
    if isinstance(group, FreeAbelianGroup):
        return group.rank >= 1
    if isinstance(group, FinitelyGeneratedGroup):
        # free groups and recognised free abelian groups
        return not group.relators or is_free_abelian_presentation(group)
    return False


def _resolve_backend(C, backend, tower):
    G = C.group
    if backend == "auto":
        if tower is not None:
            return "tower"
        if isinstance(G, FiniteGroup) or is_trivial(G):
            return "finite"
        if isinstance(G, FreeAbelianGroup) or is_free_abelian_presentation(G):
            return "abelian"
        raise UnsupportedGroupError(f"no exact backend for {G!r}; supply a tower")
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "tower" and tower is None:
        raise UnsupportedGroupError("the tower backend needs a tower")
    if backend == "finite" and not (isinstance(G, FiniteGroup) or is_trivial(G)):
        raise UnsupportedGroupError(f"finite backend on {G!r}")
    if backend in ("abelian", "sampled") and not (
            isinstance(G, FreeAbelianGroup) or is_free_abelian_presentation(G)):
        raise UnsupportedGroupError(f"{backend} backend on {G!r}")
    return backend


def _tower_betti(C, tower, window, jobs):
    G = C.group
    if isinstance(G, FreeAbelianGroup):
        return [dim_ker_approx(laplacian(C, p), tower, window, jobs).as_result()
                for p in range(C.top + 1)]
    # no products over a word group: push the complex first, then form Laplacians
    caps = [None] * (C.top + 1)
    if is_free_abelian_presentation(G):
        A = as_free_abelian(C)
        caps = [generic_rank(laplacian(A, p)) if A.ranks[p] else None for p in range(A.top + 1)]
    levels = [[] for _ in range(C.top + 1)]
    for k, q in enumerate(tower.homs):
        D = push_complex(C, q)
        for p in range(C.top + 1):
            v = dim_ker_finite(laplacian(D, p), rank_cap=caps[p]).value
            levels[p].append((k, q.target.order, v))
    return [ApproxReport(tuple(lv), window).as_result() for lv in levels]


def l2_betti(C, backend="auto", tower=None, *, num_samples=DEFAULT_SAMPLES,
             svd_tol=DEFAULT_SVD_TOL, seed=0, window=DEFAULT_WINDOW, jobs=1):
    """``b_p = dim ker Delta_p`` for every degree, with the Euler fields filled in."""
    backend = _resolve_backend(C, backend, tower)
    if backend in ("abelian", "sampled") and isinstance(C.group, FinitelyGeneratedGroup):
        C = as_free_abelian(C)
    if backend == "tower":
        betti = _tower_betti(C, tower, window, jobs)
    else:
        fn = {"finite": dim_ker_finite, "abelian": dim_ker_abelian,
              "sampled": lambda A: dim_ker_sampled(A, num_samples, svd_tol, seed, jobs)}[backend]
        betti = [fn(laplacian(C, p)) for p in range(C.top + 1)]
    chi_b = sum(((-1) ** p * b.value for p, b in enumerate(betti)), Fraction(0))
    flags = {"b0_expected_zero": _is_infinite(C.group), "duality_dim": None}
    return BettiReport(tuple(betti), chi_b, C.euler_characteristic(), backend, flags)


def euler_check(C, report):
    ok = report.exact and report.euler_from_betti == C.euler_characteristic()
    details = {"sum_betti": fmt_q(report.euler_from_betti),
               "sum_ranks": str(C.euler_characteristic())}
    if not report.exact:
        details["reason"] = "needs an exact backend"
    return CheckResult("euler", ok, details)


def cover_components(C):
    """Number of connected components of the cover ``X-bar`` for a finite group."""
    return rational_betti(finite_cover_complex(C))[0]


def b0_check(C, report=None):
    """``b_0 = 0`` for infinite groups, ``b_0 = #components / |G|`` for finite ones.

    The infinite case assumes the cover is connected (a universal cover, say);
    a free complex whose cover splits into finite pieces legitimately fails it.
    """
    if report is None:
        report = l2_betti(C)
    b0 = report.values[0]
    G = C.group
    if report.backend == "tower" or not report.exact:
        return CheckResult("b0", True, {"b0": fmt_q(b0), "skipped": "needs an exact backend"})
    if _is_infinite(G):
        return CheckResult("b0", b0 == 0, {"b0": fmt_q(b0), "expected": "0"})
    order = 1 if is_trivial(G) else G.order
    expected = Fraction(cover_components(C), order)
    return CheckResult("b0", b0 == expected, {"b0": fmt_q(b0), "expected": fmt_q(expected)})


def poincare_check(report, n):
    """``b_p = b_{n-p}``; the caller asserts the complex models a closed oriented n-manifold."""
    vals = report.values
    if len(vals) != n + 1:
        return CheckResult("poincare", False,
                           {"reason": f"expected degrees 0..{n}, got 0..{len(vals) - 1}"})
    bad = [p for p in range(n + 1) if vals[p] != vals[n - p]]
    details = {"n": n, "betti": [fmt_q(v) for v in vals]}
    if bad:
        details["first_mismatch"] = bad[0]
    return CheckResult("poincare", not bad, details)


@dataclass(frozen=True)
class FinSet:
    """The additive subgroup ``(1/L) Z`` of ``Q``."""

    L: int = 1

    def __post_init__(self):
        if self.L < 1:
            raise ValueError("lattice denominator must be positive")

    def __contains__(self, q):
        return (Fraction(q) * self.L).denominator == 1

    @classmethod
    def from_orders(cls, orders):
        return cls(math.lcm(*orders) if orders else 1)

    @classmethod
    def for_group(cls, group, L=None):
        if L is not None:
            return cls(int(L))
        if isinstance(group, FiniteGroup):
            return cls(group.order)
        if isinstance(group, FreeAbelianGroup):
            return cls(1)
        raise ValueError("the lattice denominator of a finitely generated group must be supplied")


def atiyah_check(d, fin):
    if not isinstance(d, DimensionResult) or not d.exact:
        return CheckResult("atiyah", False, {"reason": "needs an exact result"})
    ok = d.value in fin
    details = {"value": fmt_q(d.value), "L": fin.L}
    if not ok:
        details["offending"] = fmt_q(d.value)
    return CheckResult("atiyah", ok, details)


@dataclass(frozen=True)
class ZeroDivisorReport:
    product_zero: bool
    dim_ker_a: Fraction
    torsion_free: bool
    dichotomy_ok: bool | None

    def to_json(self):
        return {"product_zero": self.product_zero, "dim_ker_a": fmt_q(self.dim_ker_a),
                "torsion_free": self.torsion_free, "dichotomy_ok": self.dichotomy_ok}


def zero_divisor_probe(a, b=None):
    """Dimension of ``ker(a)`` for the 1x1 matrix ``(a)`` and, if ``b`` is given, whether ``ab = 0``.

    Over torsion-free (free abelian) groups the dimension must be 0 or 1 with 1
    exactly when ``a = 0``; then ``ab = 0`` forces ``a = 0`` or ``b = 0``.
    """
    G = a.group
    A = GroupRingMatrix(G, 1, 1, [a])
    torsion_free = isinstance(G, FreeAbelianGroup)
    d = (dim_ker_abelian(A) if torsion_free else dim_ker_finite(A)).value
    prod_zero = b is not None and gr_mul(a, b).is_zero()
    dich = None
    if torsion_free:
        dich = d in (0, 1) and (d == 1) == a.is_zero()
        if prod_zero and not (a.is_zero() or b.is_zero()):
            dich = False
    return ZeroDivisorReport(prod_zero, d, torsion_free, dich)


def finite_level_betti(C, q):
    """Betti numbers of ``C`` pushed to a finite quotient, two ways: the finite
    backend and the ordinary rational Betti numbers of the cover divided by ``|G|``."""
    D = push_complex(C, q)
    via_dim = l2_betti(D, "finite").values
    order = q.target.order
    via_cover = [Fraction(b, order) for b in rational_betti(finite_cover_complex(D))]
    return via_dim, via_cover

