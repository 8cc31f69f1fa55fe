"""Seeded generators of random test objects, shared by the verify suites and the tests."""
from __future__ import annotations

import math
import random
from fractions import Fraction

from .complexes import ChainComplex, Presentation, presentation_complex, torus_complex
from .groups import FiniteGroup, FreeAbelianGroup, commutator, reduce_word
from .ring import GroupRingElement, GroupRingMatrix, QuotientHom, monomial, one, zero


def make_rng(seed):
    return random.Random(seed)


def table_cyclic(k):
    """``Z/k`` given by an explicit table, so it takes the regular-representation path."""
    return FiniteGroup([[(a + b) % k for b in range(k)] for a in range(k)],
                       identity=0, label=f"C{k}")


def finite_groups(max_order=24):
    """A fixed catalogue of small groups, abelian and not."""
    out = []
    for k in range(1, min(max_order, 12) + 1):
        out.append(FiniteGroup.cyclic(k))
    for inv in [(2, 2), (2, 3), (2, 4), (3, 3), (2, 6), (4, 4), (2, 2, 2), (2, 2, 3)]:
        if math.prod(inv) <= max_order:
            out.append(FiniteGroup.abelian(*inv))
    for k in (4, 6, 8):
        out.append(table_cyclic(k))
    for n in range(3, max_order // 2 + 1):
        if n <= 12:
            out.append(FiniteGroup.dihedral(n))
    out.append(FiniteGroup.symmetric(3))
    out.append(FiniteGroup.quaternion())
    out.append(FiniteGroup.alternating(4))
    if max_order >= 24:
        out.append(FiniteGroup.symmetric(4))
    return [G for G in out if G.order <= max_order]


def random_finite_group(rng, max_order=24):
    return rng.choice(finite_groups(max_order))


def random_group_element(rng, G, radius=2):
    if isinstance(G, FiniteGroup):
        return rng.randrange(G.order)
    if isinstance(G, FreeAbelianGroup):
        return tuple(rng.randint(-radius, radius) for _ in range(G.rank))
    n = G.num_generators
    word = [rng.choice([1, -1]) * rng.randint(1, n) for _ in range(rng.randint(0, radius))]
    return reduce_word(word)


def random_element(rng, G, max_support=6, coef=9, radius=2, allow_zero=True):
    while True:
        terms = {}
        for _ in range(rng.randint(0 if allow_zero else 1, max_support)):
            g = random_group_element(rng, G, radius)
            terms[g] = terms.get(g, 0) + rng.randint(-coef, coef)
        a = GroupRingElement(G, terms)
        if allow_zero or not a.is_zero():
            return a


def random_matrix(rng, G, rows, cols, max_support=3, coef=4, radius=2, density=0.7):
    ents = [random_element(rng, G, max_support, coef, radius) if rng.random() < density else zero(G)
            for _ in range(rows * cols)]
    return GroupRingMatrix(G, rows, cols, ents)


def random_degenerate_matrix(rng, G, rows, cols, **kw):
    """Often rank-deficient: a product through a narrower inner dimension, or a plain matrix."""
    r = rng.randint(0, min(rows, cols))
    if r < min(rows, cols) and rng.random() < 0.6:
        return (random_matrix(rng, G, rows, r, **kw) @ random_matrix(rng, G, r, cols, **kw)
                if r else GroupRingMatrix(G, rows, cols, [0] * (rows * cols)))
    return random_matrix(rng, G, rows, cols, **kw)


def random_quotient(rng, source, max_order=24, tries=200):
    """A random map onto a small finite group that respects the source's relations."""
    for _ in range(tries):
        if isinstance(source, FreeAbelianGroup) or rng.random() < 0.5:
            G = rng.choice([H for H in finite_groups(max_order) if H.is_abelian()])
        else:
            G = random_finite_group(rng, max_order)
        n = source.rank if isinstance(source, FreeAbelianGroup) else source.num_generators
        if n == 0:
            return QuotientHom(source, G, [])
        if isinstance(source, FreeAbelianGroup) and not G.is_abelian():
            continue
        imgs = [rng.randrange(G.order) for _ in range(n)]
        try:
            return QuotientHom(source, G, imgs)
        except Exception:
            continue
    G = FiniteGroup.trivial()
    n = source.rank if isinstance(source, FreeAbelianGroup) else source.num_generators
    return QuotientHom(source, G, [0] * n)


def _elementary(G, n, rng, radius):
    """An invertible ``n x n`` matrix ``I + x e_ij`` with its inverse ``I - x e_ij``."""
    ents = [one(G) if i == j else zero(G) for i in range(n) for j in range(n)]
    inv = list(ents)
    if n >= 2:
        i, j = rng.sample(range(n), 2)
        x = monomial(G, random_group_element(rng, G, radius), rng.choice([1, -1, 2]))
        ents[i * n + j] = x
        inv[i * n + j] = -x
    return GroupRingMatrix(G, n, n, ents), GroupRingMatrix(G, n, n, inv)


def random_valid_complex(rng, G, top=2, max_pieces=4, radius=1, mixes=3):
    """A valid complex over a finite or free abelian group.

    Direct sum of small pieces (free cells, two-cell pieces ``(a)``, and for
    finite groups the periodic pieces ``(1 - g), (sum of <g>)``), then mixed by
    elementary basis changes ``d_p -> E_{p-1}^-1 d_p E_p``.
    """
    ranks = [0] * (top + 1)
    arrows = []  # (p, row_cell, col_cell, element)

    def cell(p):
        ranks[p] += 1
        return ranks[p] - 1

    for _ in range(rng.randint(1, max_pieces)):
        kind = rng.random()
        if kind < 0.3 or top == 0:
            cell(rng.randint(0, top))
        elif kind < 0.7 or not isinstance(G, FiniteGroup) or top < 2:
            p = rng.randint(1, top)
            a = random_element(rng, G, 3, 3, radius)
            arrows.append((p, cell(p - 1), cell(p), a))
        else:
            p = rng.randint(1, top - 1)
            g = rng.randrange(G.order)
            sub = G.generated_subgroup([g])
            norm = GroupRingElement(G, {h: 1 for h in sub})
            i0, i1, i2 = cell(p - 1), cell(p), cell(p + 1)
            arrows.append((p, i0, i1, one(G) - monomial(G, g)))
            arrows.append((p + 1, i1, i2, norm))
    bds = []
    for p in range(1, top + 1):
        ents = [zero(G)] * (ranks[p - 1] * ranks[p])
        for q, i, j, a in arrows:
            if q == p:
                ents[i * ranks[p] + j] = a
        bds.append(GroupRingMatrix(G, ranks[p - 1], ranks[p], ents))
    for _ in range(mixes):
        p = rng.randint(0, top)
        if ranks[p] < 2:
            continue
        E, Einv = _elementary(G, ranks[p], rng, radius)
        if p >= 1:
            bds[p - 1] = bds[p - 1] @ E
        if p < top:
            bds[p] = Einv @ bds[p]
    return ChainComplex(G, ranks, bds, label="random")


def random_presentation(rng, max_generators=2):
    """Small presentations: free groups, torus knots, lens-type and surface relators."""
    kind = rng.randrange(4)
    if kind == 0:
        return Presentation(rng.randint(1, max_generators))
    if kind == 1:
        n = rng.randint(2, 6)
        return Presentation(1, [(1,) * n])
    if kind == 2:
        return Presentation(2, [commutator(0, 1)])
    p, q = rng.choice([(2, 3), (2, 5), (3, 4)])
    return Presentation(2, [(1,) * p + (-2,) * q])


def random_source_complex(rng):
    """A torus or presentation complex, the sources of random finite quotients."""
    if rng.random() < 0.5:
        return torus_complex(rng.randint(1, 3))
    return presentation_complex(random_presentation(rng))


def random_units(rng, C, radius=2):
    """One unit ``(sign, g)`` per cell."""
    return [[(rng.choice([1, -1]), random_group_element(rng, C.group, radius)) for _ in range(c)]
            for c in C.ranks]


def random_laurent_matrix(rng, n, rows, cols, radius=1, coef=3, max_support=3):
    G = FreeAbelianGroup(n)
    return random_degenerate_matrix(rng, G, rows, cols, max_support=max_support, coef=coef,
                                    radius=radius)


def random_interval(rng, max_den=60):
    a = Fraction(rng.randint(-200, 200), rng.randint(1, max_den))
    b = a + Fraction(rng.randint(0, 40), rng.randint(1, max_den) * rng.randint(1, 10))
    return a, b

