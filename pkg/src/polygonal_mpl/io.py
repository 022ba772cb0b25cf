"""JSON payloads (schema "polygonal-mpl/1") for expressions, identities, templates,
search problems and symbols."""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import ParseError
from .lab import Identity, SearchProblem
from .mpl import Expression, FunctionTerm, ProductTerm
from .polygon import DecoratedCell, TermTemplate, cyclic_ratio
from .ratfunc import parse_ratfunc
from .tensor import SymbolTensor

SCHEMA = "polygonal-mpl/1"
_SYMMETRIZE_ALIASES = {"signedCyclic": "signed", "signed-cyclic": "signed"}


def _frac(v):
    try:
        return Fraction(str(v))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {v!r}") from None


def _need(d, key, where):
    if key not in d:
        raise ParseError(f"{where}: missing field {key!r}")
    return d[key]


def _check_schema(d):
    s = d.get("schema", SCHEMA)
    if s != SCHEMA:
        raise ParseError(f"unsupported schema {s!r} (expected {SCHEMA})")


# -- terms and expressions -------------------------------------------------------------


def arg_from_json(a, nvars):
    if isinstance(a, dict):
        if "cr" in a:
            return cyclic_ratio(a["cr"], nvars)
        raise ParseError(f"unknown argument spec {a!r}")
    if isinstance(a, (int, str)):
        return parse_ratfunc(str(a), nvars)
    raise ParseError(f"argument must be a string or {{'cr': [...]}}, got {a!r}")


def term_to_json(t):
    if isinstance(t, ProductTerm):
        return {"coeff": str(t.coeff), "product": [term_to_json(f) for f in t.factors]}
    return {"coeff": str(t.coeff), "kind": t.kind, "comp": list(t.comp), "args": [str(a) for a in t.args]}


def term_from_json(d, nvars):
    if not isinstance(d, dict):
        raise ParseError(f"term must be an object, got {d!r}")
    coeff = _frac(d.get("coeff", "1"))
    if "product" in d:
        return ProductTerm(coeff, tuple(term_from_json(f, nvars) for f in d["product"]))
    kind = _need(d, "kind", "term")
    comp = tuple(int(x) for x in _need(d, "comp", "term"))
    args = tuple(arg_from_json(a, nvars) for a in _need(d, "args", "term"))
    try:
        return FunctionTerm(coeff, kind, comp, args)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def expression_to_json(e, nvars=None):
    return {"schema": SCHEMA, "type": "expression", "nvars": nvars or e.nvars, "terms": [term_to_json(t) for t in e.terms]}


def _infer_nvars(d):
    n = d.get("nvars")
    if n is None:
        raise ParseError("missing field 'nvars'")
    return int(n)


def expression_from_json(d):
    if isinstance(d, list):
        raise ParseError("expression payload must be an object with 'nvars' and 'terms'")
    _check_schema(d)
    n = _infer_nvars(d)
    return Expression([term_from_json(t, n) for t in _need(d, "terms", "expression")])


def identity_to_json(idn):
    d = expression_to_json(idn.expr, idn.expr.nvars if idn.expr.terms else None)
    d["type"] = "identity"
    d.update(
        {
            "status": idn.status,
            "name": idn.name,
            "polygon": idn.polygon,
            "orbits": idn.orbits,
            "notes": idn.notes,
            "coefficients": {k: str(v) for k, v in idn.coefficients.items()},
        }
    )
    if d["nvars"] is None:
        d["nvars"] = 0
    return d


def identity_from_json(d):
    _check_schema(d)
    expr = expression_from_json(d) if d.get("terms") else Expression([])
    return Identity(
        expr,
        d.get("status", "conjectured"),
        d.get("name", ""),
        d.get("polygon"),
        d.get("orbits"),
        d.get("notes", ""),
        {k: _frac(v) for k, v in d.get("coefficients", {}).items()},
    )


# -- templates -------------------------------------------------------------------------


def template_to_json(t):
    return {
        "coeff": str(t.coeff),
        "kind": t.kind,
        "comp": list(t.comp),
        "cells": [{"pie": list(c.vertices), "anchor": c.anchor, "order": c.order} for c in t.cells],
        "symmetrize": "signedCyclic" if t.symmetrize == "signed" else t.symmetrize,
        "polygon": t.polygon,
    }


def template_from_json(d):
    cells = []
    for c in _need(d, "cells", "template"):
        verts = c.get("vertices", c.get("pie"))
        if verts is None:
            raise ParseError("template cell needs 'pie' (its vertices)")
        cells.append(DecoratedCell(tuple(sorted(int(v) for v in verts)), int(_need(c, "anchor", "cell")), int(_need(c, "order", "cell"))))
    sym = d.get("symmetrize", "cyclic")
    sym = _SYMMETRIZE_ALIASES.get(sym, sym)
    return TermTemplate(_frac(d.get("coeff", "1")), _need(d, "kind", "template"), tuple(d["comp"]), tuple(cells), sym, int(_need(d, "polygon", "template")))


def templates_to_json(ts):
    return {"schema": SCHEMA, "type": "templates", "templates": [template_to_json(t) for t in ts]}


def templates_from_json(d):
    _check_schema(d)
    return [template_from_json(t) for t in _need(d, "templates", "templates")]


# -- search problems -------------------------------------------------------------------


def problem_from_json(d):
    _check_schema(d)
    n = d.get("nvars")
    gens, names = [], []
    for i, g in enumerate(_need(d, "generators", "search problem")):
        names.append(g.get("name", f"g{i + 1}"))
        if "template" in g:
            gens.append(template_from_json(g["template"]))
        elif "terms" in g:
            if n is None:
                raise ParseError("'nvars' is required for expression generators")
            gens.append(Expression([term_from_json(t, int(n)) for t in g["terms"]]))
        elif "term" in g:
            if n is None:
                raise ParseError("'nvars' is required for term generators")
            gens.append(term_from_json(g["term"], int(n)))
        else:
            raise ParseError(f"generator {i + 1} needs 'template', 'term' or 'terms'")
    frozen = {k: _frac(v) for k, v in d.get("frozen", {}).items()}
    try:
        return SearchProblem(gens, names, frozen, int(d.get("max_unknowns", 2000)), int(d.get("max_weight", 5)))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def problem_to_json(p, nvars):
    gens = []
    for name, g in zip(p.names, p.generators):
        if isinstance(g, TermTemplate):
            gens.append({"name": name, "template": template_to_json(g)})
        elif isinstance(g, Expression):
            gens.append({"name": name, "terms": [term_to_json(t) for t in g.terms]})
        else:
            gens.append({"name": name, "term": term_to_json(g)})
    return {
        "schema": SCHEMA,
        "type": "search",
        "nvars": nvars,
        "generators": gens,
        "frozen": {k: str(v) for k, v in p.frozen.items()},
        "max_unknowns": p.max_unknowns,
        "max_weight": p.max_weight,
    }


# -- symbols ---------------------------------------------------------------------------


def symbol_to_json(s, reg):
    d = s.to_json(reg)
    d["schema"] = SCHEMA
    d["type"] = "symbol"
    d["nvars"] = reg.nvars
    return d


def symbol_from_json(d, reg):
    _check_schema(d)
    return SymbolTensor.from_json(d, reg)


# -- files -----------------------------------------------------------------------------


def load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def dumps(d):
    return json.dumps(d, indent=2, sort_keys=False) + "\n"


