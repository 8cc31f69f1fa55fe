"""JSON encoding of groups, elements, matrices, complexes, quotient maps and towers.

Data coefficients are ``{"num": "p", "den": "q"}`` with decimal strings, so
values of any size survive every JSON consumer. Encoding is canonical: terms
are sorted, so ``dumps(load(dumps(x))) == dumps(x)``.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .complexes import ChainComplex, Presentation
from .dimension import QuotientTower
from .errors import InvalidGroupError, ParseError, ShapeError
from .groups import FiniteGroup, FinitelyGeneratedGroup, FreeAbelianGroup, parse_word
from .ring import GroupRingElement, GroupRingMatrix, QuotientHom, _sort_key


def dumps(obj):
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


# -- rationals ----------------------------------------------------------------------


def rational_to_json(q):
    q = Fraction(q)
    return {"num": str(q.numerator), "den": str(q.denominator)}


def _int_field(x, field):
    if isinstance(x, bool):
        raise ParseError("expected an integer", field)
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x.strip())
        except ValueError:
            pass
    raise ParseError(f"expected an integer, got {x!r}", field)


def rational_from_json(obj, field="value"):
    if isinstance(obj, dict):
        if "num" not in obj:
            raise ParseError("missing 'num'", field)
        num = _int_field(obj["num"], f"{field}.num")
        den = _int_field(obj.get("den", "1"), f"{field}.den")
        if den == 0:
            raise ParseError("zero denominator", f"{field}.den")
        return Fraction(num, den)
    if isinstance(obj, bool):
        raise ParseError("expected a rational", field)
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        try:
            return Fraction(obj.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise ParseError(f"expected a rational, got {obj!r}", field)


# -- groups -------------------------------------------------------------------------


def group_to_json(G):
    if isinstance(G, FiniteGroup):
        if G.is_structured_abelian:
            return {"type": "finite", "abelian_invariants": list(G.abelian_invariants),
                    "label": G.label}
        return {"type": "finite", "order": G.order, "mul_table": [list(r) for r in G.mul_table],
                "inv_table": list(G.inv_table), "identity": G.identity, "label": G.label}
    if isinstance(G, FreeAbelianGroup):
        return {"type": "free_abelian", "rank": G.rank}
    if isinstance(G, FinitelyGeneratedGroup):
        return {"type": "finitely_generated", "num_generators": G.num_generators,
                "label": G.label, "generator_names": list(G.generator_names),
                "relators": [G.format_word(r) for r in G.relators]}
    raise TypeError(f"cannot encode {G!r}")


def _require(obj, key, field):
    if not isinstance(obj, dict):
        raise ParseError("expected an object", field)
    if key not in obj:
        raise ParseError(f"missing '{key}'", field)
    return obj[key]


def group_from_json(obj, field="group"):
    kind = _require(obj, "type", field)
    try:
        if kind == "finite":
            if "abelian_invariants" in obj:
                inv = [_int_field(k, f"{field}.abelian_invariants[{i}]")
                       for i, k in enumerate(obj["abelian_invariants"])]
                return FiniteGroup.abelian(*inv, label=obj.get("label"))
            table = _require(obj, "mul_table", field)
            if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
                raise ParseError("expected a list of rows", f"{field}.mul_table")
            order = obj.get("order", len(table))
            if _int_field(order, f"{field}.order") != len(table):
                raise ParseError("order does not match the table size", f"{field}.order")
            return FiniteGroup(table, obj.get("inv_table"), _int_field(obj.get("identity", 0),
                                                                       f"{field}.identity"),
                               label=obj.get("label"))
        if kind == "free_abelian":
            return FreeAbelianGroup(_int_field(_require(obj, "rank", field), f"{field}.rank"))
        if kind == "finitely_generated":
            n = _int_field(_require(obj, "num_generators", field), f"{field}.num_generators")
            names = obj.get("generator_names")
            G0 = FinitelyGeneratedGroup(n, "", names)
            rels = [parse_word(r, G0.generator_names) if isinstance(r, str) else tuple(r)
                    for r in obj.get("relators", [])]
            return FinitelyGeneratedGroup(n, obj.get("label", ""), names, rels)
    except InvalidGroupError as exc:
        raise ParseError(str(exc), field) from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc), field) from exc
    raise ParseError(f"unknown group type {kind!r}", f"{field}.type")


# -- elements -----------------------------------------------------------------------


def element_key_to_json(G, g):
    if isinstance(G, FiniteGroup):
        return int(g)
    if isinstance(G, FreeAbelianGroup):
        return list(g)
    return G.format_word(g)


def element_key_from_json(G, obj, field):
    if isinstance(G, FiniteGroup):
        g = _int_field(obj, field)
        if not G.is_element(g):
            raise ParseError(f"{g} is not an element of {G.label}", field)
        return g
    if isinstance(G, FreeAbelianGroup):
        if not isinstance(obj, list) or len(obj) != G.rank:
            raise ParseError(f"expected an exponent vector of length {G.rank}", field)
        return tuple(_int_field(x, f"{field}[{i}]") for i, x in enumerate(obj))
    if isinstance(obj, str):
        return G.parse_word(obj)
    if isinstance(obj, list):
        w = tuple(_int_field(x, f"{field}[{i}]") for i, x in enumerate(obj))
        if not G.is_element(w):
            raise ParseError("not a reduced word over the generators", field)
        return w
    raise ParseError("expected a word string", field)


def element_to_json(a):
    G = a.group
    items = sorted(a.terms.items(), key=lambda kv: _sort_key(kv[0]))
    return [{"g": element_key_to_json(G, g), "c": rational_to_json(c)} for g, c in items]


def element_from_json(G, obj, field="element"):
    if not isinstance(obj, list):
        raise ParseError("expected a list of terms", field)
    terms = {}
    for k, t in enumerate(obj):
        f = f"{field}[{k}]"
        g = element_key_from_json(G, _require(t, "g", f), f"{f}.g")
        c = rational_from_json(_require(t, "c", f), f"{f}.c")
        terms[g] = terms.get(g, 0) + c
    return GroupRingElement(G, terms)


# -- matrices and complexes ---------------------------------------------------------


def _matrix_body(A):
    return {"rows": A.rows, "cols": A.cols, "entries": [element_to_json(e) for e in A.entries]}


def matrix_to_json(A):
    return {"group": group_to_json(A.group), **_matrix_body(A)}


def _matrix_from_body(G, obj, field):
    rows = _int_field(_require(obj, "rows", field), f"{field}.rows")
    cols = _int_field(_require(obj, "cols", field), f"{field}.cols")
    ents = _require(obj, "entries", field)
    if not isinstance(ents, list):
        raise ParseError("expected a list", f"{field}.entries")
    if len(ents) != rows * cols:
        raise ParseError(f"expected {rows * cols} entries, got {len(ents)}", f"{field}.entries")
    elems = [element_from_json(G, e, f"{field}.entries[{k}]") for k, e in enumerate(ents)]
    return GroupRingMatrix(G, rows, cols, elems)


def matrix_from_json(obj, field="matrix", group=None):
    G = group if group is not None else group_from_json(_require(obj, "group", field),
                                                        f"{field}.group")
    return _matrix_from_body(G, obj, field)


def complex_to_json(C):
    return {"group": group_to_json(C.group), "ranks": list(C.ranks),
            "boundaries": [_matrix_body(d) for d in C.boundaries]}


def complex_from_json(obj, field="complex"):
    G = group_from_json(_require(obj, "group", field), f"{field}.group")
    ranks = _require(obj, "ranks", field)
    if not isinstance(ranks, list):
        raise ParseError("expected a list", f"{field}.ranks")
    ranks = [_int_field(c, f"{field}.ranks[{i}]") for i, c in enumerate(ranks)]
    bds = _require(obj, "boundaries", field)
    if not isinstance(bds, list):
        raise ParseError("expected a list", f"{field}.boundaries")
    mats = [_matrix_from_body(G, b, f"{field}.boundaries[{i}]") for i, b in enumerate(bds)]
    try:
        return ChainComplex(G, ranks, mats, label=obj.get("label", ""))
    except ShapeError as exc:
        raise ParseError(str(exc), f"{field}.boundaries") from exc


def presentation_to_json(P):
    G = P.group()
    return {"generators": list(P.generator_names),
            "relators": [G.format_word(r) for r in P.relators]}


def presentation_from_json(obj, field="presentation"):
    gens = _require(obj, "generators", field)
    if isinstance(gens, int):
        gens = FinitelyGeneratedGroup(gens).generator_names
    if not isinstance(gens, list) or not gens:
        raise ParseError("expected a non-empty list of names", f"{field}.generators")
    rels = []
    for i, r in enumerate(obj.get("relators", [])):
        f = f"{field}.relators[{i}]"
        if not isinstance(r, str):
            raise ParseError("expected a word string", f)
        rels.append(parse_word(r, gens) if r.strip() else ())
        if not rels[-1]:
            raise ParseError("relators must be non-empty", f)
    try:
        return Presentation(len(gens), rels, gens)
    except InvalidGroupError as exc:
        raise ParseError(str(exc), field) from exc


# -- quotient maps and towers -------------------------------------------------------


def hom_to_json(q):
    return {"target": group_to_json(q.target), "images": list(q.generator_images)}


def hom_from_json(source, obj, field="hom"):
    target = group_from_json(_require(obj, "target", field), f"{field}.target")
    imgs = _require(obj, "images", field)
    if not isinstance(imgs, list):
        raise ParseError("expected a list", f"{field}.images")
    imgs = [_int_field(x, f"{field}.images[{i}]") for i, x in enumerate(imgs)]
    try:
        return QuotientHom(source, target, imgs)
    except InvalidGroupError as exc:
        raise ParseError(str(exc), field) from exc


def tower_to_json(T):
    return {"source": group_to_json(T.source), "homs": [hom_to_json(q) for q in T.homs],
            "nested": T.nested, "class_assertion": T.class_assertion}


def tower_from_json(obj, field="tower"):
    source = group_from_json(_require(obj, "source", field), f"{field}.source")
    homs = _require(obj, "homs", field)
    if not isinstance(homs, list) or not homs:
        raise ParseError("expected a non-empty list", f"{field}.homs")
    return QuotientTower([hom_from_json(source, h, f"{field}.homs[{i}]") for i, h in enumerate(homs)],
                         bool(obj.get("nested", True)), bool(obj.get("class_assertion", True)))
