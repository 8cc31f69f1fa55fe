"""Free chain complexes over group rings, canned builders and Laplacians.

``boundaries[p - 1]`` is the matrix of ``d_p : C_p -> C_{p-1}``, of shape
``c_{p-1} x c_p``, acting on column vectors; ``d_{p-1} d_p = 0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .errors import GroupMismatchError, InvalidGroupError, ShapeError, UnsupportedGroupError
from .groups import (FiniteGroup, FinitelyGeneratedGroup, FreeAbelianGroup, commutator,
                     default_names, reduce_word)
from .linalg import integer_rank
from .ring import (GroupRingElement, GroupRingMatrix, free_mat_mul, free_mul, gen, mat_adjoint,
                   mat_mul, monomial, push_to_quotient, zero, zero_matrix)


class ChainComplex:
    """Ranks ``c_0 .. c_top`` and boundary matrices ``d_1 .. d_top`` over one group."""

    __slots__ = ("group", "ranks", "boundaries", "label")

    def __init__(self, group, ranks, boundaries, label=""):
        ranks = tuple(int(c) for c in ranks)
        if not ranks:
            raise ShapeError("a complex needs at least degree 0")
        if any(c < 0 for c in ranks):
            raise ShapeError("ranks must be non-negative")
        boundaries = tuple(boundaries)
        if len(boundaries) != len(ranks) - 1:
            raise ShapeError(f"{len(ranks)} ranks need {len(ranks) - 1} boundary matrices, "
                             f"got {len(boundaries)}")
        for p, d in enumerate(boundaries, start=1):
            if d.group != group:
                raise GroupMismatchError(f"boundary {p} lives over {d.group!r}, not {group!r}")
            if d.shape != (ranks[p - 1], ranks[p]):
                raise ShapeError(f"boundary {p} has shape {d.shape}, "
                                 f"expected {(ranks[p - 1], ranks[p])}")
        self.group = group
        self.ranks = ranks
        self.boundaries = boundaries
        self.label = label

    @property
    def top(self):
        return len(self.ranks) - 1

    def boundary(self, p):
        """``d_p``; zero matrices outside ``1..top``."""
        if 1 <= p <= self.top:
            return self.boundaries[p - 1]
        rows = self.ranks[p - 1] if 1 <= p <= self.top + 1 else 0
        cols = self.ranks[p] if 0 <= p <= self.top else 0
        return zero_matrix(self.group, rows, cols)

    def euler_characteristic(self):
        return sum((-1) ** p * c for p, c in enumerate(self.ranks))

    def __eq__(self, other):
        return (isinstance(other, ChainComplex) and self.group == other.group
                and self.ranks == other.ranks and self.boundaries == other.boundaries)

    def __hash__(self):
        return hash((self.group, self.ranks, self.boundaries))

    def __repr__(self):
        return f"ChainComplex({self.label or self.group!r}, ranks={list(self.ranks)})"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    degree: int | None = None
    row: int | None = None
    col: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok

    def to_json(self):
        if self.ok:
            return {"ok": True}
        return {"ok": False, "degree": self.degree, "row": self.row, "col": self.col,
                "reason": self.reason}


def _relator_multiple(e, relators):
    """True if ``e = c (w - 1)`` for a declared relator ``w`` or its inverse."""
    terms = e.terms
    if len(terms) != 2 or () not in terms:
        return False
    c = -terms[()]
    (w, cw), = ((g, x) for g, x in terms.items() if g != ())
    if cw != c:
        return False
    inverses = {tuple(-x for x in reversed(r)) for r in relators}
    return w in relators or w in inverses


def validate(C):
    """Check ``d_{p-1} d_p = 0``; report the first failing ``(p, row, col)``.

    Over a finitely generated group the product is formed in the free group
    ring, where an entry ``c (r - 1)`` with ``r`` a declared relator counts as
    zero. Other nonzero entries are reported, since no word problem is solved.
    """
    for p in range(2, C.top + 1):
        a, b = C.boundary(p - 1), C.boundary(p)
        fg = isinstance(C.group, FinitelyGeneratedGroup)
        prod = free_mat_mul(a, b) if fg else mat_mul(a, b)
        for i in range(prod.rows):
            for j in range(prod.cols):
                e = prod[i, j]
                if e.is_zero():
                    continue
                if fg and _relator_multiple(e, C.group.relators):
                    continue
                return ValidationReport(False, p, i, j,
                                        f"d_{p - 1} d_{p} has a nonzero entry at ({i}, {j})")
    return ValidationReport(True)


def laplacian(C, p):
    """``d_p^* d_p + d_{p+1} d_{p+1}^*`` on ``C_p``."""
    if not 0 <= p <= C.top:
        raise ValueError(f"degree {p} outside 0..{C.top}")
    down = C.boundary(p)
    up = C.boundary(p + 1)
    out = mat_mul(mat_adjoint(down), down)
    if p < C.top:
        out = out + mat_mul(up, mat_adjoint(up))
    return out


# -- presentations ------------------------------------------------------------------


class Presentation:
    """Generators and freely reduced relator words (tuples of signed 1-based indices)."""

    __slots__ = ("num_generators", "relators", "generator_names")

    def __init__(self, num_generators, relators=(), generator_names=None):
        self.num_generators = int(num_generators)
        self.generator_names = tuple(generator_names or default_names(self.num_generators))
        rels = []
        for r in relators:
            r = tuple(int(x) for x in r)
            if not r or reduce_word(r) != r:
                raise InvalidGroupError(f"relator {r} is empty or not freely reduced")
            if any(abs(x) > self.num_generators for x in r):
                raise InvalidGroupError(f"relator {r} uses an undeclared generator")
            rels.append(r)
        self.relators = tuple(rels)

    def group(self, label=""):
        return FinitelyGeneratedGroup(self.num_generators, label, self.generator_names,
                                      self.relators)

    def __eq__(self, other):
        return (isinstance(other, Presentation)
                and (self.num_generators, self.relators, self.generator_names)
                == (other.num_generators, other.relators, other.generator_names))

    def __repr__(self):
        return f"Presentation({self.num_generators}, {list(self.relators)})"


def fox_derivative(group, word, i):
    """Right Fox derivative of ``word`` with respect to generator ``i`` (0-based).

    Satisfies ``d(uv) = d(u) v + d(v)``, so ``sum_i (g_i - 1) d(r)/d(g_i) = r - 1``.
    A letter ``g_i`` contributes the suffix after it, a letter ``g_i^-1``
    contributes minus the suffix starting at it.
    """
    out = {}
    g = i + 1
    for k, x in enumerate(word):
        if x == g:
            w, c = reduce_word(word[k + 1:]), 1
        elif x == -g:
            w, c = reduce_word(word[k:]), -1
        else:
            continue
        s = out.get(w, 0) + c
        if s:
            out[w] = s
        else:
            del out[w]
    return GroupRingElement(group, out)


def presentation_complex(P, label=""):
    """The 2-complex of a presentation: one 0-cell, a 1-cell per generator, a 2-cell per relator."""
    G = P.group(label)
    n, m = P.num_generators, len(P.relators)
    d1 = GroupRingMatrix(G, 1, n, [gen(G, i) - 1 for i in range(n)])
    ranks = [1, n]
    bds = [d1]
    if m:
        d2 = GroupRingMatrix(G, n, m, [fox_derivative(G, P.relators[j], i)
                                       for i in range(n) for j in range(m)])
        ranks.append(m)
        bds.append(d2)
    return ChainComplex(G, ranks, bds, label=label or "presentation")


def torus_complex(n):
    """Koszul complex of ``(t_1 - 1, ..., t_n - 1)`` over ``Z[Z^n]``; basis: sorted subsets."""
    G = FreeAbelianGroup(n)
    bases = [list(combinations(range(n), p)) for p in range(n + 1)]
    pos = [{s: k for k, s in enumerate(b)} for b in bases]
    bds = []
    for p in range(1, n + 1):
        rows, cols = comb(n, p - 1), comb(n, p)
        ents = [zero(G)] * (rows * cols)
        for j, S in enumerate(bases[p]):
            for k, i in enumerate(S):
                face = S[:k] + S[k + 1:]
                e = gen(G, i) - 1
                ents[pos[p - 1][face] * cols + j] = e if k % 2 == 0 else -e
        bds.append(GroupRingMatrix(G, rows, cols, ents))
    return ChainComplex(G, [comb(n, p) for p in range(n + 1)], bds, label=f"torus:{n}")


def point_complex():
    return ChainComplex(FreeAbelianGroup(0), [1], [], label="point")


def circle_complex():
    C = torus_complex(1)
    return ChainComplex(C.group, C.ranks, C.boundaries, label="circle")


def wedge_complex(k):
    """Wedge of ``k`` circles over the free group on ``k`` generators."""
    return presentation_complex(Presentation(k), label=f"wedge:{k}")


def _is_commutator_presentation(G):
    n = G.num_generators
    want = {commutator(i, j) for i in range(n) for j in range(i + 1, n)}
    have = set()
    for r in G.relators:
        found = None
        for cand in _cyclic_forms(r):
            if cand in want:
                found = cand
        if found is None:
            return False
        have.add(found)
    return have == want


def _cyclic_forms(r):
    out = []
    for w in (r, tuple(-x for x in reversed(r))):
        for k in range(len(w)):
            out.append(w[k:] + w[:k])
    return out


def is_free_abelian_presentation(G):
    """Recognise ``<g_1..g_n | [g_i, g_j], i < j>`` (any cyclic or inverted forms)."""
    if not isinstance(G, FinitelyGeneratedGroup):
        return False
    if G.num_generators == 1:
        return not G.relators
    return _is_commutator_presentation(G)


def abelianize_element(e, target):
    out = {}
    n = target.rank
    for w, c in e.terms.items():
        v = [0] * n
        for x in w:
            v[abs(x) - 1] += 1 if x > 0 else -1
        v = tuple(v)
        s = out.get(v, 0) + c
        if s:
            out[v] = s
        else:
            del out[v]
    return GroupRingElement(target, out)


def as_free_abelian(C):
    """Rewrite a complex over a recognised free abelian presentation over ``Z^n``."""
    G = C.group
    if isinstance(G, FreeAbelianGroup):
        return C
    if not is_free_abelian_presentation(G):
        raise UnsupportedGroupError(f"{G!r} is not recognised as free abelian")
    Z = FreeAbelianGroup(G.num_generators)
    bds = [GroupRingMatrix(Z, d.rows, d.cols, [abelianize_element(e, Z) for e in d.entries])
           for d in C.boundaries]
    return ChainComplex(Z, C.ranks, bds, label=C.label)


# -- quotients and covers -----------------------------------------------------------


def push_complex(C, q):
    if C.group != q.source:
        raise GroupMismatchError(f"complex over {C.group!r}, quotient from {q.source!r}")
    return ChainComplex(q.target, C.ranks, [push_to_quotient(d, q) for d in C.boundaries],
                        label=C.label)


@dataclass(frozen=True)
class IntegerChainComplex:
    """A complex of finite-dimensional rational vector spaces with integer matrices."""

    ranks: tuple
    boundaries: tuple  # lists of rows

    def euler_characteristic(self):
        return sum((-1) ** p * c for p, c in enumerate(self.ranks))

    def validate(self):
        for p in range(2, len(self.ranks)):
            a, b = self.boundaries[p - 2], self.boundaries[p - 1]
            for i, row in enumerate(a):
                for j in range(self.ranks[p]):
                    if sum(row[k] * b[k][j] for k in range(len(row)) if row[k]):
                        return ValidationReport(False, p, i, j, "nonzero composite")
        return ValidationReport(True)


def finite_cover_complex(C, q=None):
    """Expand a complex over a finite quotient into the integer complex of the cover.

    Each group-ring entry becomes an ``|G| x |G|`` block of the regular
    representation, so ranks scale by ``|G|``.
    """
    from .dimension import regular_matrix

    if q is not None:
        C = push_complex(C, q)
    G = C.group
    if isinstance(G, FreeAbelianGroup) and G.rank == 0:
        G = FiniteGroup.trivial()
        C = ChainComplex(G, C.ranks, [GroupRingMatrix(G, d.rows, d.cols,
                                                      [e.identity_coefficient() for e in d.entries])
                                      for d in C.boundaries])
    if not isinstance(G, FiniteGroup):
        raise UnsupportedGroupError("finite covers need a finite group (pass a quotient)")
    ranks = tuple(G.order * c for c in C.ranks)
    bds = tuple(regular_matrix(d) for d in C.boundaries)
    return IntegerChainComplex(ranks, bds)


def rational_betti(IC):
    """Ordinary Betti numbers over ``Q``: ``c_p - rank d_p - rank d_{p+1}``."""
    ranks = [integer_rank(b, IC.ranks[p + 1]) if b else 0 for p, b in enumerate(IC.boundaries)]
    out = []
    for p, c in enumerate(IC.ranks):
        down = ranks[p - 1] if p >= 1 else 0
        up = ranks[p] if p < len(ranks) else 0
        out.append(c - down - up)
    return out


# -- change of basis ----------------------------------------------------------------


def rescale_basis(C, units):
    """Replace cell ``j`` of degree ``p`` by ``units[p][j] * e_j``, each unit ``(sign, g)``.

    The new boundary is ``D_{p-1}^{-1} d_p D_p``: entry ``u_i^-1 d_ij u_j``.
    """
    G = C.group
    if len(units) != len(C.ranks) or any(len(u) != c for u, c in zip(units, C.ranks)):
        raise ShapeError("need one unit per cell")
    mul = free_mul if isinstance(G, FinitelyGeneratedGroup) else (lambda a, b: a * b)

    def elt(u, inverse=False):
        s, g = u
        if inverse:
            g = G.inv(g)
        return monomial(G, g, s)

    bds = []
    for p, d in enumerate(C.boundaries, start=1):
        ents = []
        for i in range(d.rows):
            left = elt(units[p - 1][i], inverse=True)
            for j in range(d.cols):
                ents.append(mul(mul(left, d[i, j]), elt(units[p][j])))
        bds.append(GroupRingMatrix(G, d.rows, d.cols, ents))
    return ChainComplex(G, C.ranks, bds, label=C.label)

