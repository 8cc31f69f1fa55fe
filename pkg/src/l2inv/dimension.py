"""von Neumann dimension of kernels of group-ring matrices.

Backends
--------
finite          exact: ``nullity(regular representation) / |G|``
abelian-generic exact: ``cols - generic rank`` over ``Q(x_1, ..., x_n)`` for ``Z^n``
abelian-sampled numeric: average fiberwise nullity over random torus points
tower           exact finite-level values along a user-supplied quotient tower

For structured abelian finite groups the regular representation is never
built: it splits over Galois orbits of characters, and the rank at a character
of order ``d`` is decided over ``Q(zeta_d)``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import GroupMismatchError, ShapeError, UnsupportedGroupError
from .groups import FiniteGroup, FinitelyGeneratedGroup, FreeAbelianGroup, is_trivial
from .linalg import (cyclotomic_rank, integer_rank, laurent_generic_rank, prime_1_mod,
                     rank_mod_p, reduce_cyclotomic, root_of_unity_mod)
from .ring import GroupRingElement, GroupRingMatrix, free_mat_mul, identity_matrix, push_to_quotient, trace_gamma

DEFAULT_SAMPLES = 4096
DEFAULT_SVD_TOL = 1e-9
DEFAULT_WINDOW = 3


def fmt_q(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class DimensionResult:
    """An exact value, or (for the sampled backend) an interval with its midpoint."""

    value: Fraction
    backend: str
    certificate: dict = field(default_factory=dict, compare=False)
    interval: tuple | None = None

    @property
    def exact(self):
        return self.interval is None

    def to_json(self):
        if self.interval is None:
            value = fmt_q(self.value)
        else:
            value = {"lo": fmt_q(self.interval[0]), "hi": fmt_q(self.interval[1])}
        return {"value": value, "backend": self.backend, "certificate": self.certificate}


def _as_finite(group):
    if isinstance(group, FiniteGroup):
        return group
    if isinstance(group, FreeAbelianGroup) and group.rank == 0:
        return FiniteGroup.trivial()
    raise UnsupportedGroupError(f"the finite backend needs a finite group, got {group!r}")


# -- finite groups ------------------------------------------------------------------


def regular_matrix(A):
    """Expand ``A`` over a finite group to its ``(|G| rows) x (|G| cols)`` rational matrix.

    Block ``(i, j)`` is left multiplication by ``A[i, j]`` on ``Q[G]``:
    column ``g``, row ``h g`` carries the coefficient of ``h``.
    """
    G = A.group
    m = G.order
    out = [[0] * (m * A.cols) for _ in range(m * A.rows)]
    table = G.mul_table
    for i in range(A.rows):
        for j in range(A.cols):
            for h, c in A[i, j].terms.items():
                th = table[h]
                for g in range(m):
                    out[i * m + th[g]][j * m + g] = c
    return out


def _nullity_regular(A):
    rows = regular_matrix(A)
    return A.cols * A.group.order - integer_rank(rows, A.cols * A.group.order)


@lru_cache(maxsize=32)
def character_orbits(invariants):
    """Galois orbits of characters of ``Z/k_1 x ... x Z/k_n``.

    Returns ``(reps, orders)``: representative coordinate vectors ``a`` (the
    character ``g -> zeta_K^(sum a_i g_i K/k_i)``) and their orders ``d``; each
    orbit has ``phi(d)`` members.
    """
    inv = np.array(invariants, dtype=np.int64)
    n = len(invariants)
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64), (1,)
    K = math.lcm(*invariants)
    scale = K // inv
    strides = np.ones(n, dtype=np.int64)
    for i in range(n - 2, -1, -1):
        strides[i] = strides[i + 1] * inv[i + 1]
    order = int(np.prod(inv))
    coords = np.array(list(product(*[range(k) for k in invariants])), dtype=np.int64)
    visited = np.zeros(order, dtype=bool)
    reps, orders = [], []
    units_cache = {}
    for idx in range(order):
        if visited[idx]:
            continue
        a = coords[idx]
        g = math.gcd(K, *[int(x) for x in a * scale])
        d = K // g
        units = units_cache.get(d)
        if units is None:
            units = np.array([u for u in range(1, d + 1) if math.gcd(u, d) == 1], dtype=np.int64)
            units_cache[d] = units
        members = (units[:, None] * a[None, :]) % inv[None, :]
        visited[members @ strides] = True
        reps.append(a)
        orders.append(d)
    return np.array(reps, dtype=np.int64), tuple(orders)


def _integer_entries(A):
    den = 1
    for e in A.entries:
        for c in e.terms.values():
            den = math.lcm(den, c.denominator)
    return [{g: int(c * den) for g, c in e.terms.items()} for e in A.entries]


def _nullity_characters(A, rank_cap=None):
    """Nullity of the regular representation of ``A`` over a structured abelian group."""
    G = A.group
    invariants = G.abelian_invariants
    n = len(invariants)
    K = math.lcm(*invariants) if n else 1
    reps, orders = character_orbits(invariants)
    full = min(A.rows, A.cols)
    if A.rows == 0 or A.cols == 0:
        return A.cols * G.order
    cap = full if rank_cap is None else min(full, rank_cap)
    scale = np.array([K // k for k in invariants], dtype=np.int64)
    ents = _integer_entries(A)
    p = prime_1_mod(K)
    w = root_of_unity_mod(p, K)
    pw = np.array([pow(w, j, p) for j in range(K)], dtype=np.int64)
    scaled_reps = reps * scale[None, :] if n else reps
    O = len(orders)
    vals = np.zeros((O, A.rows * A.cols), dtype=np.int64)
    exps = []
    for idx, ent in enumerate(ents):
        if not ent:
            exps.append(None)
            continue
        gs = list(ent)
        C = np.array([G.coords(g) for g in gs], dtype=np.int64).reshape(len(gs), n)
        cf = np.array([c % p for c in ent.values()], dtype=np.int64)
        E = (scaled_reps @ C.T) % K if n else np.zeros((O, len(gs)), dtype=np.int64)
        exps.append((E, list(ent.values())))
        vals[:, idx] = ((pw[E] * cf[None, :]) % p).sum(axis=1) % p
    nullity = 0
    exact_orbits = 0
    for o in range(O):
        d = orders[o]
        rowsv = vals[o].reshape(A.rows, A.cols).tolist()
        r = rank_mod_p(rowsv, p)
        if r < cap:
            exact_orbits += 1
            step = K // d
            mat = []
            for i in range(A.rows):
                row = []
                for j in range(A.cols):
                    ex = exps[i * A.cols + j]
                    vec = [0] * d
                    if ex is not None:
                        E, cf = ex
                        for e, c in zip(E[o].tolist(), cf):
                            vec[e // step] += c
                    row.append(reduce_cyclotomic(vec, d))
                mat.append(row)
            r = cyclotomic_rank(mat, d)
        nullity += _phi(d) * (A.cols - r)
    _nullity_characters.last_exact_orbits = exact_orbits
    return nullity


_nullity_characters.last_exact_orbits = 0


@lru_cache(maxsize=None)
def _phi(d):
    return sum(1 for u in range(1, d + 1) if math.gcd(u, d) == 1)


def finite_nullity(A, rank_cap=None, method=None):
    """Complex nullity of the regular representation of ``A`` (an integer)."""
    G = A.group
    if method is None:
        method = "characters" if G.is_structured_abelian else "regular"
    if method == "characters":
        return _nullity_characters(A, rank_cap)
    return _nullity_regular(A)


def dim_ker_finite(A, *, rank_cap=None, method=None):
    """``dim_G ker A = nullity / |G|`` for a matrix over a finite group."""
    G = _as_finite(A.group)
    if G is not A.group:
        A = GroupRingMatrix(G, A.rows, A.cols, [e.identity_coefficient() for e in A.entries])
    if method is None:
        method = "characters" if G.is_structured_abelian else "regular"
    N = finite_nullity(A, rank_cap, method)
    cert = {"group": G.label, "order": G.order, "nullity": N,
            "expanded_shape": [G.order * A.rows, G.order * A.cols],
            "method": "character orbits over cyclotomic fields" if method == "characters"
            else "regular representation, Bareiss elimination"}
    return DimensionResult(Fraction(N, G.order), "finite", cert)


# -- free abelian groups ------------------------------------------------------------


def _laurent_rows(A):
    G = A.group
    if isinstance(G, FreeAbelianGroup):
        n = G.rank
    elif is_trivial(G):
        n = 0
    else:
        raise UnsupportedGroupError(f"the abelian backend needs a free abelian group, got {G!r}")
    ents = _integer_entries(A)
    if n == 0:
        ents = [{(): sum(e.values())} if e else {} for e in ents]
    rows = [ents[i * A.cols:(i + 1) * A.cols] for i in range(A.rows)]
    return rows, n


def generic_rank(A, seed=0):
    rows, n = _laurent_rows(A)
    return laurent_generic_rank(rows, n, seed=seed)


def dim_ker_abelian(A):
    """``cols - generic rank`` over the fraction field of the Laurent polynomial ring.

    The fiberwise rank of ``A(z)`` equals the generic rank off a proper algebraic
    subset of the torus, which has measure zero, so the integral of the fiberwise
    nullity is the generic nullity.
    """
    rows, n = _laurent_rows(A)
    r = laurent_generic_rank(rows, n)
    cert = {"rank_of_group": n, "generic_rank": r,
            "method": "fraction-free elimination over Z[x^±1]"}
    return DimensionResult(Fraction(A.cols - r), "abelian-generic", cert)


def evaluate_on_torus(A, theta):
    """Evaluate a matrix over ``Z^n`` at points ``exp(2 pi i theta)``; ``theta`` is (N, n)."""
    G = A.group
    n = G.rank if isinstance(G, FreeAbelianGroup) else 0
    N = theta.shape[0]
    out = np.zeros((N, A.rows, A.cols), dtype=complex)
    for i in range(A.rows):
        for j in range(A.cols):
            e = A[i, j]
            if e.is_zero():
                continue
            if n == 0:
                out[:, i, j] = float(e.identity_coefficient())
                continue
            exps = np.array(list(e.terms.keys()), dtype=float).reshape(-1, n)
            cf = np.array([float(c) for c in e.terms.values()])
            out[:, i, j] = np.exp(2j * np.pi * (theta @ exps.T)) @ cf
    return out


def dim_ker_sampled(A, num_samples=DEFAULT_SAMPLES, svd_tol=DEFAULT_SVD_TOL, seed=0, jobs=1):
    """Average fiberwise nullity of ``A(z)`` over uniform random torus points.

    A singular value counts as zero when it is below ``svd_tol`` times the
    largest one at that sample. The interval is the mean plus/minus one
    standard error.
    """
    G = A.group
    if not (isinstance(G, FreeAbelianGroup) or is_trivial(G)):
        raise UnsupportedGroupError(f"the sampled backend needs a free abelian group, got {G!r}")
    n = G.rank if isinstance(G, FreeAbelianGroup) else 0
    rng = np.random.default_rng(seed)
    theta = rng.random((num_samples, n))
    if A.rows == 0 or A.cols == 0:
        nul = np.full(num_samples, A.cols)
    else:
        chunks = np.array_split(np.arange(num_samples), max(1, jobs))

        def work(ix):
            M = evaluate_on_torus(A, theta[ix])
            s = np.linalg.svd(M, compute_uv=False)
            top = s[:, :1]
            rank = np.where(top[:, 0] > 0, (s > svd_tol * top).sum(axis=1), 0)
            return A.cols - rank

        if jobs > 1:
            with ThreadPoolExecutor(jobs) as ex:
                parts = list(ex.map(work, chunks))
        else:
            parts = [work(ix) for ix in chunks]
        nul = np.concatenate(parts)
    total = int(nul.sum())
    mean = Fraction(total, num_samples)
    se = float(nul.std(ddof=1)) / math.sqrt(num_samples) if num_samples > 1 else 0.0
    se_q = Fraction(se)
    lo = max(Fraction(0), mean - se_q)
    hi = min(Fraction(A.cols), mean + se_q)
    cert = {"samples": num_samples, "svd_tol": svd_tol, "seed": seed,
            "midpoint": fmt_q(mean), "std_error": se}
    return DimensionResult(mean, "abelian-sampled", cert, interval=(lo, hi))


# -- quotient towers ----------------------------------------------------------------


@dataclass(frozen=True)
class QuotientTower:
    """Finite list of quotient maps from one source group.

    ``nested`` and ``class_assertion`` record what the user asserts about the
    kernels and the quotient groups; neither is verified here.
    """

    homs: tuple
    nested: bool = True
    class_assertion: bool = True

    def __post_init__(self):
        object.__setattr__(self, "homs", tuple(self.homs))
        if self.homs:
            src = self.homs[0].source
            if any(h.source != src for h in self.homs):
                raise GroupMismatchError("all tower maps must share one source group")

    @property
    def source(self):
        return self.homs[0].source if self.homs else None

    def warnings(self):
        out = []
        orders = [h.target.order for h in self.homs]
        if any(b < a for a, b in zip(orders, orders[1:])):
            out.append("target orders decrease somewhere along the tower")
        return out


def cyclic_tower(source, ks):
    from .ring import cyclic_quotient
    return QuotientTower([cyclic_quotient(source, k) for k in ks])


def doubling(start, stop):
    ks = []
    k = start
    while k <= stop:
        ks.append(k)
        k *= 2
    return ks


@dataclass(frozen=True)
class ApproxReport:
    levels: tuple  # (level index, quotient order, exact value)
    window: int

    @property
    def values(self):
        return [v for _, _, v in self.levels]

    @property
    def last(self):
        return self.levels[-1][2]

    @property
    def tail_diameter(self):
        tail = self.values[-self.window:]
        return max(tail) - min(tail)

    def as_result(self):
        return DimensionResult(self.last, "tower", self.certificate())

    def certificate(self):
        return {
            "sequence": [{"level": k, "order": o, "value": fmt_q(v)} for k, o, v in self.levels],
            "last": fmt_q(self.last),
            "tail_window": self.window,
            "tail_diameter": fmt_q(self.tail_diameter),
            "certified": False,
            "note": "finite-quotient approximation converges but gives no rate; "
                    "the sequence is exact, the limit is not certified",
        }

    def to_json(self):
        return {"value": fmt_q(self.last), "backend": "tower", "certificate": self.certificate()}


def dim_ker_approx(A, tower, window=DEFAULT_WINDOW, jobs=1):
    """Exact ``dim`` of the pushed matrix at every tower level."""
    if not tower.homs:
        raise ValueError("empty tower")
    if A.group != tower.source:
        raise GroupMismatchError(f"matrix over {A.group!r}, tower from {tower.source!r}")
    cap = None
    if isinstance(A.group, FreeAbelianGroup) and A.rows and A.cols:
        # every character of a quotient specialises the Laurent matrix
        cap = generic_rank(A)

    def level(q):
        return dim_ker_finite(push_to_quotient(A, q), rank_cap=cap).value

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            vals = list(ex.map(level, tower.homs))
    else:
        vals = [level(q) for q in tower.homs]
    levels = tuple((k, q.target.order, v) for k, (q, v) in enumerate(zip(tower.homs, vals)))
    return ApproxReport(levels, window)


# -- consistency checks -------------------------------------------------------------


@dataclass(frozen=True)
class MomentCheck:
    equal: bool
    free_trace: Fraction
    quotient_trace: Fraction
    injective: bool
    collisions: tuple
    sound: bool

    def to_json(self):
        return {"equal": self.equal, "free_trace": fmt_q(self.free_trace),
                "quotient_trace": fmt_q(self.quotient_trace), "injective": self.injective,
                "collisions": [str(c) for c in self.collisions], "sound": self.sound}


def trace_moment_check(A, q, m):
    """Compare ``trace_gamma(A^m)`` expanded without relators against the same
    trace computed in the finite quotient.

    The two agree whenever ``q`` sends no nontrivial product of at most ``m``
    support elements to the identity; the collisions found are reported.
    """
    if A.rows != A.cols:
        raise ShapeError("trace moments need a square matrix")
    if A.group != q.source:
        raise GroupMismatchError(f"matrix over {A.group!r}, quotient from {q.source!r}")
    G = A.group
    P = identity_matrix(G, A.rows)
    for _ in range(m):
        P = free_mat_mul(P, A)
    free_tr = trace_gamma(P)
    B = push_to_quotient(A, q)
    Q = identity_matrix(q.target, A.rows)
    for _ in range(m):
        Q = Q @ B
    quot_tr = trace_gamma(Q)
    support = set()
    for e in A.entries:
        support |= e.support()
    words = {G.identity}
    layer = {G.identity}
    for _ in range(m):
        layer = {G.mul(w, s) for w in layer for s in support}
        words |= layer
    collisions = sorted((w for w in words if w != G.identity and q(w) == q.target.identity),
                        key=lambda w: (len(w), w))
    if isinstance(G, FinitelyGeneratedGroup):
        collisions = [G.format_word(w) for w in collisions]
    sound = not (isinstance(G, FinitelyGeneratedGroup) and G.relators)
    return MomentCheck(free_tr == quot_tr, free_tr, quot_tr, not collisions,
                       tuple(collisions), sound)


@dataclass(frozen=True)
class ScalingCheck:
    ok: bool
    dim_full: Fraction
    dim_sub: Fraction
    index: int

    def to_json(self):
        return {"ok": self.ok, "dim_G": fmt_q(self.dim_full), "dim_H": fmt_q(self.dim_sub),
                "index": self.index}


def restrict_to_subgroup(A, H_elements):
    """View ``A`` over ``Z[G]`` as a matrix over ``Z[H]`` using left coset representatives.

    Returns ``(B, H)`` with ``B`` of shape ``(d rows) x (d cols)``, ``d = [G:H]``.
    """
    G = A.group
    H, embed = G.subgroup(H_elements)
    reps, where = [], {}
    for g in G.elements():
        if g in where:
            continue
        alpha = len(reps)
        reps.append(g)
        for i, h in enumerate(embed):
            where[G.mul(g, h)] = (alpha, i)
    d = len(reps)
    out = [dict() for _ in range(d * d * A.rows * A.cols)]
    C = d * A.cols
    for i in range(A.rows):
        for j in range(A.cols):
            for g, c in A[i, j].terms.items():
                for beta, cb in enumerate(reps):
                    alpha, h = where[G.mul(g, cb)]
                    slot = out[(i * d + alpha) * C + j * d + beta]
                    slot[h] = slot.get(h, 0) + c
    ents = [GroupRingElement(H, s) for s in out]
    return GroupRingMatrix(H, d * A.rows, d * A.cols, ents), H


def dim_scaling_check(A, H_elements):
    """Check ``dim_H(ker A) = [G:H] dim_G(ker A)`` with ``dim_H`` computed from the
    restricted ``Z[H]``-matrix, independently of the ``G``-expansion."""
    G = A.group
    if not isinstance(G, FiniteGroup):
        raise UnsupportedGroupError("scaling checks need a finite group")
    B, H = restrict_to_subgroup(A, H_elements)
    index = G.order // H.order
    dg = dim_ker_finite(A).value
    dh = dim_ker_finite(B, method="regular").value
    return ScalingCheck(dh == index * dg, dg, dh, index)
