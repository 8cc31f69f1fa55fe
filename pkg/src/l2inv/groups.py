"""Group descriptors: finite groups, free abelian groups, finitely generated groups.

Elements are plain hashable Python values:

* finite group      -> ``int`` index in ``range(order)``
* free abelian Z^n  -> ``tuple`` of ``n`` ints (exponent vector)
* finitely generated -> freely reduced ``tuple`` of nonzero ints; ``+i`` is the
  i-th generator (1-based) and ``-i`` its inverse.
"""
from __future__ import annotations

import math
import re
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidGroupError, ParseError

DEFAULT_CHECK_BOUND = 512


class FiniteGroup:
    """A finite group on the index set ``range(order)``.

    Two flavours share this class. Table groups carry an explicit
    multiplication table. Abelian groups built with :meth:`abelian` compute
    products from mixed-radix coordinates and only materialise the table on
    request, so quotients like ``(Z/256)^2`` stay cheap.
    """

    __slots__ = ("order", "identity", "label", "_table", "_inv", "_invariants",
                 "_strides", "_key")

    def __init__(self, mul_table, inv_table=None, identity=0, label=None,
                 check_bound=DEFAULT_CHECK_BOUND):
        table = tuple(tuple(int(x) for x in row) for row in mul_table)
        m = len(table)
        if m == 0:
            raise InvalidGroupError("a group has at least one element")
        if any(len(row) != m for row in table):
            raise InvalidGroupError("mul_table must be square")
        if not 0 <= identity < m:
            raise InvalidGroupError("identity index out of range")
        if inv_table is None:
            inv_table = [row.index(identity) if identity in row else -1 for row in table]
        inv = tuple(int(x) for x in inv_table)
        if len(inv) != m:
            raise InvalidGroupError("inv_table has the wrong length")
        self.order = m
        self.identity = int(identity)
        self.label = label or f"table{m}"
        self._table = table
        self._inv = inv
        self._invariants = None
        self._strides = None
        self._key = ("table", table, self.identity)
        if m <= check_bound:
            _check_table(table, inv, self.identity)

    @classmethod
    def abelian(cls, *invariants, label=None):
        """The group ``Z/k_1 x ... x Z/k_n``; elements indexed in mixed radix."""
        inv = tuple(int(k) for k in invariants)
        if any(k < 1 for k in inv):
            raise InvalidGroupError("cyclic factors must have positive order")
        self = object.__new__(cls)
        self.order = math.prod(inv)
        self.identity = 0
        self.label = label or ("Z/" + " x Z/".join(map(str, inv)) if inv else "1")
        self._table = None
        self._inv = None
        self._invariants = inv
        strides = []
        s = 1
        for k in reversed(inv):
            strides.append(s)
            s *= k
        self._strides = tuple(reversed(strides))
        self._key = ("abelian", inv)
        return self

    @classmethod
    def cyclic(cls, k):
        return cls.abelian(k, label=f"Z/{k}")

    @classmethod
    def trivial(cls):
        return cls.abelian(label="1")

    @classmethod
    def from_permutations(cls, generators, label=None):
        """Close a set of permutations (tuples) under composition."""
        gens = [tuple(g) for g in generators]
        if not gens:
            return cls.trivial()
        n = len(gens[0])
        ident = tuple(range(n))
        elements = [ident]
        seen = {ident: 0}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = tuple(x[g[i]] for i in range(n))
                    if y not in seen:
                        seen[y] = len(elements)
                        elements.append(y)
                        nxt.append(y)
            frontier = nxt
        # (xy)(i) = x(y(i)): apply y first
        table = [[seen[tuple(x[y[i]] for i in range(n))] for y in elements] for x in elements]
        return cls(table, identity=0, label=label or f"perm{len(elements)}")

    @classmethod
    def symmetric(cls, n):
        if n <= 1:
            return cls.from_permutations([tuple(range(max(n, 1)))], label=f"S{n}")
        gens = [tuple([1, 0] + list(range(2, n))), tuple(list(range(1, n)) + [0])]
        return cls.from_permutations(gens, label=f"S{n}")

    @classmethod
    def alternating(cls, n):
        gens = [tuple(list(range(i)) + [i + 1, i + 2, i] + list(range(i + 3, n)))
                for i in range(n - 2)]
        return cls.from_permutations(gens or [tuple(range(n))], label=f"A{n}")

    @classmethod
    def dihedral(cls, n):
        """Dihedral group of order ``2n`` acting on an n-gon."""
        rot = tuple((i + 1) % n for i in range(n))
        ref = tuple((-i) % n for i in range(n))
        return cls.from_permutations([rot, ref], label=f"D{2 * n}")

    @classmethod
    def quaternion(cls):
        # left regular representation of Q8 on {±1, ±i, ±j, ±k}
        names = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
        unit = {("1", x): x for x in "1ijk"}
        base = {("i", "i"): "-1", ("j", "j"): "-1", ("k", "k"): "-1",
                ("i", "j"): "k", ("j", "k"): "i", ("k", "i"): "j",
                ("j", "i"): "-k", ("k", "j"): "-i", ("i", "k"): "-j"}
        for x in "ijk":
            base[(x, "1")] = x
        base.update(unit)

        def mul(a, b):
            sa, a0 = (a[0] == "-"), a.lstrip("-")
            sb, b0 = (b[0] == "-"), b.lstrip("-")
            r = base[(a0, b0)]
            neg = sa ^ sb ^ r.startswith("-")
            r = r.lstrip("-")
            return ("-" + r) if neg else r

        idx = {nm: i for i, nm in enumerate(names)}
        table = [[idx[mul(a, b)] for b in names] for a in names]
        return cls(table, identity=0, label="Q8")

    # -- basic operations -------------------------------------------------

    @property
    def abelian_invariants(self):
        return self._invariants

    @property
    def is_structured_abelian(self):
        return self._invariants is not None

    def coords(self, a):
        if self._invariants is None:
            raise InvalidGroupError("coordinates exist only for structured abelian groups")
        return tuple((a // s) % k for s, k in zip(self._strides, self._invariants))

    def index(self, coords):
        return sum((int(c) % k) * s for c, k, s in zip(coords, self._invariants, self._strides))

    def mul(self, a, b):
        if self._table is not None:
            return self._table[a][b]
        out = 0
        for s, k in zip(self._strides, self._invariants):
            out += (((a // s) + (b // s)) % k) * s
        return out

    def inv(self, a):
        if self._inv is not None:
            return self._inv[a]
        out = 0
        for s, k in zip(self._strides, self._invariants):
            out += ((-(a // s)) % k) * s
        return out

    def pow(self, a, n):
        if n < 0:
            a, n = self.inv(a), -n
        if self._invariants is not None:
            return self.index(tuple(c * n for c in self.coords(a)))
        result, base = self.identity, a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def elements(self):
        return range(self.order)

    def is_element(self, a):
        return isinstance(a, (int, np.integer)) and not isinstance(a, bool) and 0 <= a < self.order

    @property
    def mul_table(self):
        if self._table is None:
            self._table = tuple(tuple(self.mul(a, b) for b in range(self.order))
                                for a in range(self.order))
        return self._table

    @property
    def inv_table(self):
        if self._inv is None:
            self._inv = tuple(self.inv(a) for a in range(self.order))
        return self._inv

    def is_abelian(self):
        if self._invariants is not None:
            return True
        t = self._table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def element_order(self, a):
        x, n = a, 1
        while x != self.identity:
            x = self.mul(x, a)
            n += 1
        return n

    def generated_subgroup(self, generators):
        """Sorted element list of the subgroup generated by ``generators``."""
        elems = {self.identity}
        frontier = [self.identity]
        gens = list(generators)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in elems:
                        elems.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(elems)

    def is_subgroup(self, elements):
        s = set(elements)
        if self.identity not in s:
            return False
        return all(self.inv(a) in s for a in s) and all(self.mul(a, b) in s for a in s for b in s)

    def subgroup(self, elements):
        """Return ``(H, embed)`` where ``embed[i]`` is the image of ``H``'s element ``i``."""
        elems = sorted(set(int(x) for x in elements))
        if not self.is_subgroup(elems):
            raise InvalidGroupError("element list is not closed under the group law")
        elems.remove(self.identity)
        elems.insert(0, self.identity)
        pos = {g: i for i, g in enumerate(elems)}
        table = [[pos[self.mul(a, b)] for b in elems] for a in elems]
        return FiniteGroup(table, identity=0, label=f"sub{len(elems)}<{self.label}"), elems

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"FiniteGroup({self.label}, order={self.order})"


def _check_table(table, inv, e):
    t = np.asarray(table, dtype=np.int64)
    m = t.shape[0]
    if t.min() < 0 or t.max() >= m:
        raise InvalidGroupError("mul_table entries out of range")
    ar = np.arange(m)
    if not (np.array_equal(t[e], ar) and np.array_equal(t[:, e], ar)):
        raise InvalidGroupError("declared identity is not two-sided")
    iv = np.asarray(inv, dtype=np.int64)
    if iv.min() < 0 or iv.max() >= m:
        raise InvalidGroupError("inv_table entries out of range")
    if not (np.all(t[ar, iv] == e) and np.all(t[iv, ar] == e)):
        raise InvalidGroupError("inv_table does not list inverses")
    for a in range(m):
        # (a b) c == a (b c) for all b, c
        if not np.array_equal(t[t[a]], t[a][t]):
            raise InvalidGroupError(f"mul_table is not associative (first failure at a={a})")


class FreeAbelianGroup:
    """``Z^rank`` with exponent-vector elements. Rank 0 is the trivial group."""

    __slots__ = ("rank",)

    def __init__(self, rank):
        if rank < 0:
            raise InvalidGroupError("rank must be non-negative")
        self.rank = int(rank)

    @property
    def identity(self):
        return (0,) * self.rank

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def pow(self, a, n):
        return tuple(n * x for x in a)

    def generator(self, i):
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def is_element(self, a):
        return (isinstance(a, tuple) and len(a) == self.rank
                and all(isinstance(x, int) and not isinstance(x, bool) for x in a))

    @property
    def order(self):
        return 1 if self.rank == 0 else math.inf

    def __eq__(self, other):
        return isinstance(other, FreeAbelianGroup) and other.rank == self.rank

    def __hash__(self):
        return hash(("free_abelian", self.rank))

    def __repr__(self):
        return f"FreeAbelianGroup({self.rank})"


class FinitelyGeneratedGroup:
    """A group known only through generators (and optionally relators).

    Words are reduced in the free group on the generators. Equality in the
    group itself is never decided here; such groups only feed quotient towers.
    """

    __slots__ = ("num_generators", "label", "generator_names", "relators")

    def __init__(self, num_generators, label="", generator_names=None, relators=()):
        if num_generators < 1:
            raise InvalidGroupError("need at least one generator")
        self.num_generators = int(num_generators)
        self.label = label
        names = tuple(generator_names) if generator_names else default_names(num_generators)
        if len(names) != num_generators or len(set(names)) != num_generators:
            raise InvalidGroupError("generator names must be distinct, one per generator")
        for nm in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", nm):
                raise InvalidGroupError(f"bad generator name {nm!r}")
        self.generator_names = names
        rels = tuple(reduce_word(r) for r in relators)
        for r in rels:
            if not r:
                raise InvalidGroupError("relators must be non-empty reduced words")
            if any(abs(x) > num_generators for x in r):
                raise InvalidGroupError("relator uses an undeclared generator")
        self.relators = rels

    identity = ()

    def mul(self, a, b):
        return reduce_word(a + b)

    def inv(self, a):
        return tuple(-x for x in reversed(a))

    def pow(self, a, n):
        if n < 0:
            a, n = self.inv(a), -n
        return reduce_word(a * n)

    def generator(self, i):
        return (i + 1,)

    def is_element(self, a):
        return (isinstance(a, tuple) and all(isinstance(x, int) and 0 < abs(x) <= self.num_generators
                                             for x in a) and reduce_word(a) == a)

    @property
    def order(self):
        return math.inf

    def format_word(self, w):
        return format_word(w, self.generator_names)

    def parse_word(self, s):
        return parse_word(s, self.generator_names)

    def __eq__(self, other):
        return (isinstance(other, FinitelyGeneratedGroup)
                and (self.num_generators, self.generator_names, self.relators)
                == (other.num_generators, other.generator_names, other.relators))

    def __hash__(self):
        # the label is cosmetic
        return hash(("fg", self.num_generators, self.generator_names, self.relators))

    def __repr__(self):
        return f"FinitelyGeneratedGroup({self.label or self.num_generators})"


def default_names(n):
    if n <= 26:
        return tuple("abcdefghijklmnopqrstuvwxyz"[:n])
    return tuple(f"g{i + 1}" for i in range(n))


def reduce_word(word: Iterable[int]) -> tuple:
    out: list[int] = []
    for x in word:
        if x == 0:
            raise InvalidGroupError("0 is not a generator symbol")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(int(x))
    return tuple(out)


def format_word(word: Sequence[int], names: Sequence[str]) -> str:
    """Render ``(1, -2, 1)`` as ``"a b- a"``; the empty word renders as ``"1"``."""
    if not word:
        return "1"
    return " ".join(names[abs(x) - 1] + ("-" if x < 0 else "") for x in word)


_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(-|⁻¹|\^(-?\d+))?$")


def parse_word(text: str, names: Sequence[str]) -> tuple:
    """Parse ``"a b- a"``; also accepts ``a⁻¹`` and ``a^k`` tokens."""
    pos = {nm: i + 1 for i, nm in enumerate(names)}
    letters: list[int] = []
    text = text.strip()
    if text in ("", "1", "e"):
        return ()
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m or m.group(1) not in pos:
            raise ParseError(f"bad word token {tok!r}")
        g = pos[m.group(1)]
        if m.group(3) is not None:
            k = int(m.group(3))
            letters.extend([g if k > 0 else -g] * abs(k))
        elif m.group(2):
            letters.append(-g)
        else:
            letters.append(g)
    return reduce_word(letters)


def commutator(i, j):
    """The word ``g_i g_j g_i^-1 g_j^-1`` (0-based generator indices)."""
    return (i + 1, j + 1, -(i + 1), -(j + 1))


def is_trivial(group):
    return (isinstance(group, FreeAbelianGroup) and group.rank == 0) or (
        isinstance(group, FiniteGroup) and group.order == 1)


def all_vectors(radius, n):
    """All exponent vectors in ``[-radius, radius]^n``."""
    return list(product(range(-radius, radius + 1), repeat=n))
