"""Group-ring elements and matrices with exact rational coefficients.

A :class:`GroupRingElement` is a finite formal sum ``sum c_g g``. Products are
convolutions taken in the group; ``star`` sends ``sum c_g g`` to
``sum conj(c_g) g^-1`` (conjugation is trivial on rationals).

Matrices act on column vectors by left multiplication, so the complexes built
on top of them are complexes of free *right* modules. Dimensions of kernels do
not depend on that choice.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from types import MappingProxyType

from .errors import GroupMismatchError, InvalidGroupError, ShapeError, UnsupportedGroupError
from .groups import FiniteGroup, FinitelyGeneratedGroup, FreeAbelianGroup, reduce_word


def _coef(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)) and not isinstance(x, bool):
        return Fraction(x)
    raise TypeError(f"coefficients must be rational, got {type(x).__name__}")


def conj(c):
    """Complex conjugation of a coefficient; the identity on rationals."""
    return c


class GroupRingElement:
    """Immutable sparse formal sum over a group.

    >>> from l2inv.groups import FreeAbelianGroup
    >>> Z = FreeAbelianGroup(1)
    >>> t = monomial(Z, (1,))
    >>> (t - 1) * (t + 1) == monomial(Z, (2,)) - 1
    True
    """

    __slots__ = ("group", "_terms", "_hash")

    def __init__(self, group, terms=None):
        self.group = group
        clean = {}
        if terms:
            items = terms.items() if hasattr(terms, "items") else terms
            for g, c in items:
                if not group.is_element(g):
                    raise InvalidGroupError(f"{g!r} is not an element of {group!r}")
                c = _coef(c)
                if not isinstance(g, tuple):
                    g = int(g)
                s = clean.get(g, 0) + c
                if s:
                    clean[g] = s
                else:
                    clean.pop(g, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, group, terms):
        # trusted constructor: terms already clean
        self = object.__new__(cls)
        self.group = group
        self._terms = terms
        self._hash = None
        return self

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def support(self):
        return set(self._terms)

    def coefficient(self, g):
        return self._terms.get(g, Fraction(0))

    def identity_coefficient(self):
        return self._terms.get(self.group.identity, Fraction(0))

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    # -- arithmetic -----------------------------------------------------

    def _lift(self, other):
        if isinstance(other, GroupRingElement):
            if other.group != self.group:
                raise GroupMismatchError(f"{self.group!r} vs {other.group!r}")
            return other
        return scalar(self.group, other)

    def __add__(self, other):
        return gr_add(self, self._lift(other))

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElement._raw(self.group, {g: -c for g, c in self._terms.items()})

    def __sub__(self, other):
        return gr_add(self, -self._lift(other))

    def __rsub__(self, other):
        return gr_add(self._lift(other), -self)

    def __mul__(self, other):
        if isinstance(other, GroupRingElement):
            return gr_mul(self, other)
        c = _coef(other)
        if not c:
            return GroupRingElement._raw(self.group, {})
        return GroupRingElement._raw(self.group, {g: c * v for g, v in self._terms.items()})

    def __rmul__(self, other):
        if isinstance(other, GroupRingElement):
            return gr_mul(other, self)
        return self.__mul__(other)

    def __pow__(self, n):
        if n < 0:
            if len(self._terms) == 1:
                ((g, c),) = self._terms.items()
                if c in (1, -1):
                    return GroupRingElement._raw(
                        self.group, {self.group.pow(g, n): c ** n})
            raise ValueError("negative powers only for units ±g")
        result = one(self.group)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def star(self):
        return gr_star(self)

    def __eq__(self, other):
        if isinstance(other, GroupRingElement):
            return self.group == other.group and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == scalar(self.group, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.group, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"GroupRingElement({format_element(self)})"


def format_element(a):
    if not a._terms:
        return "0"
    parts = []
    for g, c in sorted(a._terms.items(), key=lambda kv: _sort_key(kv[0])):
        if isinstance(a.group, FinitelyGeneratedGroup):
            gs = a.group.format_word(g)
        else:
            gs = str(g)
        parts.append(f"{c}*[{gs}]")
    return " + ".join(parts)


def _sort_key(g):
    if isinstance(g, tuple):
        return (len(g), g)
    return (0, (g,))


def scalar(group, c):
    c = _coef(c)
    return GroupRingElement._raw(group, {group.identity: c} if c else {})


def zero(group):
    return GroupRingElement._raw(group, {})


def one(group):
    return scalar(group, 1)


def monomial(group, g, c=1):
    return GroupRingElement(group, {g: c})


def gen(group, i):
    """The basis element of the i-th generator (0-based) of a free abelian or f.g. group."""
    return monomial(group, group.generator(i))


def gr_add(a, b):
    if a.group != b.group:
        raise GroupMismatchError(f"{a.group!r} vs {b.group!r}")
    out = dict(a._terms)
    for g, c in b._terms.items():
        s = out.get(g, 0) + c
        if s:
            out[g] = s
        else:
            out.pop(g, None)
    return GroupRingElement._raw(a.group, out)


def _mul_into(out, a, b, mul):
    for g, c in a._terms.items():
        for h, d in b._terms.items():
            k = mul(g, h)
            s = out.get(k, 0) + c * d
            if s:
                out[k] = s
            else:
                del out[k]


def gr_mul(a, b):
    """Convolution product; finite and free abelian groups only."""
    if a.group != b.group:
        raise GroupMismatchError(f"{a.group!r} vs {b.group!r}")
    if isinstance(a.group, FinitelyGeneratedGroup):
        raise UnsupportedGroupError(
            "multiplication over a finitely generated group needs its word problem; "
            "push to a finite quotient first")
    out = {}
    _mul_into(out, a, b, a.group.mul)
    return GroupRingElement._raw(a.group, out)


def free_mul(a, b):
    """Product in the group ring of the *free* group on the generators.

    Used where a formal expansion without relators is intended (Fox calculus
    checks, trace moments). Over finite and free abelian groups this is gr_mul.
    """
    if not isinstance(a.group, FinitelyGeneratedGroup):
        return gr_mul(a, b)
    if a.group != b.group:
        raise GroupMismatchError(f"{a.group!r} vs {b.group!r}")
    out = {}
    _mul_into(out, a, b, lambda g, h: reduce_word(g + h))
    return GroupRingElement._raw(a.group, out)


def gr_star(a):
    inv = a.group.inv
    return GroupRingElement._raw(a.group, {inv(g): conj(c) for g, c in a._terms.items()})


# -- matrices ---------------------------------------------------------------


class GroupRingMatrix:
    """Dense ``rows x cols`` matrix of group-ring elements over one group."""

    __slots__ = ("group", "rows", "cols", "entries")

    def __init__(self, group, rows, cols, entries):
        entries = tuple(entries)
        if rows < 0 or cols < 0 or len(entries) != rows * cols:
            raise ShapeError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}")
        fixed = []
        for e in entries:
            if not isinstance(e, GroupRingElement):
                e = scalar(group, e)
            elif e.group != group:
                raise GroupMismatchError(f"entry over {e.group!r} in a matrix over {group!r}")
            fixed.append(e)
        self.group = group
        self.rows = rows
        self.cols = cols
        self.entries = tuple(fixed)

    @classmethod
    def from_rows(cls, group, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ShapeError("ragged rows")
        return cls(group, len(rows), ncols, [e for r in rows for e in r])

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def tolist(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def is_zero(self):
        return all(e.is_zero() for e in self.entries)

    def map_entries(self, fn, group=None):
        return GroupRingMatrix(group or self.group, self.rows, self.cols,
                               [fn(e) for e in self.entries])

    def __add__(self, other):
        if self.shape != other.shape:
            raise ShapeError(f"{self.shape} + {other.shape}")
        return GroupRingMatrix(self.group, self.rows, self.cols,
                               [gr_add(a, b) for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return self.map_entries(lambda e: -e)

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __mul__(self, c):
        return self.map_entries(lambda e: e * c)

    def adjoint(self):
        return mat_adjoint(self)

    def __eq__(self, other):
        return (isinstance(other, GroupRingMatrix) and self.group == other.group
                and self.shape == other.shape and self.entries == other.entries)

    def __hash__(self):
        return hash((self.group, self.shape, self.entries))

    def __repr__(self):
        body = "; ".join(", ".join(format_element(e) for e in self.row(i)) for i in range(self.rows))
        return f"GroupRingMatrix({self.rows}x{self.cols}: {body})"


def identity_matrix(group, d):
    return GroupRingMatrix(group, d, d, [1 if i == j else 0 for i in range(d) for j in range(d)])


def zero_matrix(group, rows, cols):
    return GroupRingMatrix(group, rows, cols, [0] * (rows * cols))


def block_diag(a, b):
    if a.group != b.group:
        raise GroupMismatchError(f"{a.group!r} vs {b.group!r}")
    rows, cols = a.rows + b.rows, a.cols + b.cols
    out = [zero(a.group)] * (rows * cols)
    for i in range(a.rows):
        for j in range(a.cols):
            out[i * cols + j] = a[i, j]
    for i in range(b.rows):
        for j in range(b.cols):
            out[(a.rows + i) * cols + a.cols + j] = b[i, j]
    return GroupRingMatrix(a.group, rows, cols, out)


def _mat_mul(a, b, mul):
    if a.group != b.group:
        raise GroupMismatchError(f"{a.group!r} vs {b.group!r}")
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    out = []
    for i in range(a.rows):
        arow = a.row(i)
        for j in range(b.cols):
            acc = {}
            for k in range(a.cols):
                x, y = arow[k], b.entries[k * b.cols + j]
                if x._terms and y._terms:
                    _mul_into(acc, x, y, mul)
            out.append(GroupRingElement._raw(a.group, acc))
    return GroupRingMatrix(a.group, a.rows, b.cols, out)


def mat_mul(a, b):
    if isinstance(a.group, FinitelyGeneratedGroup):
        raise UnsupportedGroupError("matrix products over a finitely generated group; "
                                    "push to a finite quotient first")
    return _mat_mul(a, b, a.group.mul)


def free_mat_mul(a, b):
    """Matrix product in the free group ring (see :func:`free_mul`)."""
    if not isinstance(a.group, FinitelyGeneratedGroup):
        return mat_mul(a, b)
    return _mat_mul(a, b, lambda g, h: reduce_word(g + h))


def mat_adjoint(a):
    return GroupRingMatrix(a.group, a.cols, a.rows,
                           [gr_star(a[j, i]) for i in range(a.cols) for j in range(a.rows)])


def trace_gamma(a):
    """Sum of the identity coefficients of the diagonal entries."""
    if a.rows != a.cols:
        raise ShapeError(f"trace of a non-square {a.shape} matrix")
    e = a.group.identity
    return sum((a[i, i]._terms.get(e, Fraction(0)) for i in range(a.rows)), Fraction(0))


# -- quotients --------------------------------------------------------------


class QuotientHom:
    """A homomorphism from a free abelian or finitely generated group onto a finite group,
    fixed by the images of the generators."""

    __slots__ = ("source", "target", "generator_images", "_cache")

    def __init__(self, source, target, generator_images):
        if not isinstance(target, FiniteGroup):
            raise InvalidGroupError("quotient targets must be finite groups")
        imgs = tuple(int(x) for x in generator_images)
        if not all(target.is_element(x) for x in imgs):
            raise InvalidGroupError("generator image outside the target group")
        if isinstance(source, FreeAbelianGroup):
            if len(imgs) != source.rank:
                raise InvalidGroupError(f"need {source.rank} generator images, got {len(imgs)}")
            for i in range(len(imgs)):
                for j in range(i):
                    if target.mul(imgs[i], imgs[j]) != target.mul(imgs[j], imgs[i]):
                        raise InvalidGroupError(
                            f"images of generators {j} and {i} do not commute")
        elif isinstance(source, FinitelyGeneratedGroup):
            if len(imgs) != source.num_generators:
                raise InvalidGroupError(
                    f"need {source.num_generators} generator images, got {len(imgs)}")
        elif isinstance(source, FiniteGroup):
            raise InvalidGroupError("quotient sources are free abelian or finitely generated")
        else:
            raise InvalidGroupError(f"unknown source group {source!r}")
        self.source = source
        self.target = target
        self.generator_images = imgs
        self._cache = {}
        if isinstance(source, FinitelyGeneratedGroup):
            for r in source.relators:
                if self(r) != target.identity:
                    raise InvalidGroupError(
                        f"relator {source.format_word(r)} does not map to the identity")

    def __call__(self, g):
        hit = self._cache.get(g)
        if hit is not None:
            return hit
        t = self.target
        imgs = self.generator_images
        if isinstance(self.source, FreeAbelianGroup):
            if t.is_structured_abelian:
                acc = [0] * len(t.abelian_invariants)
                for e, img in zip(g, imgs):
                    if e:
                        for k, c in enumerate(t.coords(img)):
                            acc[k] += e * c
                out = t.index(acc)
            else:
                out = t.identity
                for e, img in zip(g, imgs):
                    if e:
                        out = t.mul(out, t.pow(img, e))
        else:
            out = t.identity
            for x in g:
                y = imgs[x - 1] if x > 0 else t.inv(imgs[-x - 1])
                out = t.mul(out, y)
        self._cache[g] = out
        return out

    def __eq__(self, other):
        return (isinstance(other, QuotientHom) and self.source == other.source
                and self.target == other.target and self.generator_images == other.generator_images)

    def __hash__(self):
        return hash((self.source, self.target, self.generator_images))

    def __repr__(self):
        return f"QuotientHom({self.source!r} -> {self.target!r}, {list(self.generator_images)})"


def push_element(a, q):
    if a.group != q.source:
        raise GroupMismatchError(f"element over {a.group!r}, quotient from {q.source!r}")
    out = {}
    for g, c in a._terms.items():
        k = q(g)
        s = out.get(k, 0) + c
        if s:
            out[k] = s
        else:
            del out[k]
    return GroupRingElement._raw(q.target, out)


def push_to_quotient(a, q):
    """Apply the quotient map entry-wise (ring homomorphism to the finite group ring)."""
    if isinstance(a, GroupRingElement):
        return push_element(a, q)
    if a.group != q.source:
        raise GroupMismatchError(f"matrix over {a.group!r}, quotient from {q.source!r}")
    return GroupRingMatrix(q.target, a.rows, a.cols, [push_element(e, q) for e in a.entries])


def cyclic_quotient(source, k):
    """Send every generator to the generator of ``Z/k`` (``(Z/k)^n`` for ``Z^n``)."""
    if isinstance(source, FreeAbelianGroup):
        target = FiniteGroup.abelian(*([k] * source.rank))
        return QuotientHom(source, target, [target.index(source.generator(i))
                                            for i in range(source.rank)])
    target = FiniteGroup.cyclic(k)
    return QuotientHom(source, target, [1 % k] * source.num_generators)


def trivial_quotient(source):
    target = FiniteGroup.trivial()
    n = source.rank if isinstance(source, FreeAbelianGroup) else source.num_generators
    return QuotientHom(source, target, [0] * n)
