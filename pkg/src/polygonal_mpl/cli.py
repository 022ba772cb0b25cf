"""Command-line interface.

Exit codes: 0 success or verified, 1 refuted or empty result, 2 usage or data
error, 3 scale exceeded.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import mpmath

from . import io
from .errors import MPLError, ParseError, ScaleExceeded
from .lab import (
    Substitution,
    catalog_entry,
    catalog_names,
    depth_reduce,
    dims,
    search,
    specialize,
    verify,
)
from .mpl import Expression
from .numeric import SeriesParams, term_value
from .polygon import enumerate_even_dissections, generate_ansatz
from .registry import LetterRegistry

OK, REFUTED, USAGE, SCALE = 0, 1, 2, 3

# named depth-reduction steps
PLAN_STEPS = {
    "collapse-odd": ("collapse", "x3=x1,x5=x1"),
    "collapse-odd4": ("collapse", "x3=x1,x5=x1,x7=x1"),
    "subtract": ("subtract", "x2=x1"),
    "subtract4": ("subtract", "x4=x1"),
    "merge72": ("collapse", "x7=x2"),
}


def _out(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_expression(path):
    d = io.load(path)
    if not isinstance(d, dict):
        raise ParseError(f"{path}: expected a JSON object")
    if d.get("type") == "identity":
        return io.identity_from_json(d).expr
    return io.expression_from_json(d)


def _ints(s, what):
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"{what}: expected comma separated integers, got {s!r}") from None


def _comps(s):
    out = []
    for part in s.split(";"):
        if part.strip():
            out.append(tuple(_ints(part, "--comps")))
    if not out:
        raise ParseError("--comps is empty")
    return out


# -- subcommands -------------------------------------------------------------------


def cmd_symbol(a):
    expr = _read_expression(a.expr)
    reg = LetterRegistry(expr.nvars)
    r = verify(expr, reg)
    if a.json:
        d = io.symbol_to_json(r.symbol, reg)
        d["residue"] = io.symbol_to_json(r.residue, reg)
        _out(io.dumps(d), a.output)
    else:
        _out(f"symbol (weight {r.symbol.weight}, {len(r.symbol.terms)} words):\n{r.symbol.render(reg)}\n"
             f"residue modulo products ({len(r.residue.terms)} words):\n{r.residue.render(reg)}\n", a.output)
    return OK


def cmd_verify(a):
    expr = _read_expression(a.expr)
    r = verify(expr)
    print("verified" if r.verified else f"refuted ({len(r.residue.terms)} residue words)")
    return OK if r.verified else REFUTED


def cmd_search(a):
    problem = io.problem_from_json(io.load(a.problem))
    for spec in a.freeze or []:
        name, _, value = spec.partition("=")
        if not value:
            raise ParseError(f"--freeze expects name=value, got {spec!r}")
        try:
            problem.frozen[name.strip()] = Fraction(value.strip())
        except ValueError:
            raise ParseError(f"--freeze: not a rational number: {value!r}") from None
    unknown = set(problem.frozen) - set(problem.names)
    if unknown:
        raise ParseError(f"--freeze names unknown generators: {', '.join(sorted(unknown))}")
    ids = search(problem)
    d = {"schema": io.SCHEMA, "type": "identities", "identities": [io.identity_to_json(i) for i in ids]}
    _out(io.dumps(d), a.output)
    print(f"{len(ids)} identities", file=sys.stderr)
    return OK if ids else REFUTED


def cmd_polygons(a):
    multiset = _ints(a.cells, "--cells") if a.cells else None
    ds = enumerate_even_dissections(a.size, multiset=multiset)
    for d in ds:
        cells = " ".join("(" + ",".join(map(str, c)) + ")" for c in d.cells)
        print(f"{d}  cells: {cells}")
    print(f"{len(ds)} dissections")
    return OK


def cmd_ansatz(a):
    cell_sizes = _ints(a.cell_sizes, "--cell-sizes") if a.cell_sizes else None
    ts = generate_ansatz(a.size, a.weight, _comps(a.comps), a.symmetrize, a.kind, cell_sizes)
    _out(io.dumps(io.templates_to_json(ts)), a.output)
    print(f"{len(ts)} templates", file=sys.stderr)
    return OK if ts else REFUTED


def cmd_specialize(a):
    expr = _read_expression(a.expr)
    subst = Substitution.parse([s for spec in a.set for s in spec.split(",") if s.strip()])
    reg = LetterRegistry(expr.nvars)
    r = specialize(expr, subst, reg)
    d = {
        "schema": io.SCHEMA,
        "type": "specialization",
        "substitution": str(subst),
        "eps": reg.name(r.eps),
        "regularized": io.symbol_to_json(r.regularized, reg),
        "divergent": io.symbol_to_json(r.divergent, reg),
        "divergent_vanishes": r.divergent_vanishes,
    }
    _out(io.dumps(d), a.output)
    return OK


def _plan(spec, steps):
    plan = []
    for name in [s.strip() for s in spec.split(",") if s.strip()] if spec else []:
        if name not in PLAN_STEPS:
            raise ParseError(f"unknown plan step {name!r}; known: {', '.join(sorted(PLAN_STEPS))}")
        action, subst = PLAN_STEPS[name]
        plan.append((action, Substitution.parse(subst)))
    for action, subst in steps or []:
        if action not in ("collapse", "subtract"):
            raise ParseError(f"--step action must be collapse or subtract, got {action!r}")
        plan.append((action, Substitution.parse(subst)))
    if not plan:
        raise ParseError("empty plan: give --plan and/or --step")
    return plan


def cmd_reduce(a):
    expr = _read_expression(a.identity)
    r = depth_reduce(expr, _plan(a.plan, a.step))
    for action, subst, n in r.steps:
        print(f"{action} {subst}: {n} terms")
    print(r)
    print("residue check: " + ("ok" if r.residue_ok else "FAILED"))
    if a.output:
        d = io.expression_to_json(Expression([r.target.with_coeff(-1)] + list(r.expression.terms)), expr.nvars)
        d["counts"] = r.counts
        _out(io.dumps(d), a.output)
    return OK if r.residue_ok else REFUTED


def cmd_dims(a):
    print(dims(a.weight, a.points))
    return OK


def cmd_eval(a):
    expr = _read_expression(a.expr)
    point = []
    for s in a.at.split(","):
        try:
            point.append(Fraction(s.strip()))
        except ValueError:
            raise ParseError(f"--at: not a rational number: {s!r}") from None
    if len(point) < expr.nvars:
        raise ParseError(f"--at gives {len(point)} values for {expr.nvars} variables")
    params = SeriesParams(error=a.error, prec=a.prec)
    with mpmath.workprec(params.prec):
        total, bound = mpmath.mpc(0), mpmath.mpf(0)
        for t in expr.terms:
            v, e = term_value(t, point, params)
            total += v
            bound += e
        digits = max(15, int(params.prec * 0.30103))
        print(f"{mpmath.nstr(total, digits)}  +/- {mpmath.nstr(bound, 3)}")
        if a.check:
            ok = abs(total) <= 10 * mpmath.mpf(params.error)
            print("pass" if ok else f"fail residual={mpmath.nstr(abs(total), 5)}")
            return OK if ok else REFUTED
    return OK


def cmd_catalog(a):
    if a.action == "list":
        for name in catalog_names():
            e = catalog_entry(name)
            print(f"{name:12} {e.status:12} {e.notes}")
        return OK
    if not a.name:
        raise ParseError("catalog show needs a name")
    try:
        e = catalog_entry(a.name)
    except KeyError as exc:
        raise ParseError(exc.args[0]) from None
    _out(io.dumps(io.identity_to_json(e)), a.output)
    return OK


def cmd_normalize(a):
    from .normalize import depth_normalize

    r = depth_normalize(tuple(_ints(a.comp, "--comp")))
    print(r)
    print("verified" if r.verified else "not verified")
    if a.output:
        _out(io.dumps(io.expression_to_json(r.expression(), len(r.comp))), a.output)
    return OK


# -- parser ------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="polygonal-mpl", description="Polygonal functional equations of multiple polylogarithms.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("symbol", help="print the symbol of an expression and its residue modulo products")
    s.add_argument("expr")
    s.add_argument("--json", action="store_true", help="write JSON instead of text")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_symbol)

    s = sub.add_parser("verify", help="check that an expression vanishes modulo products")
    s.add_argument("expr")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="find linear relations among generators")
    s.add_argument("problem")
    s.add_argument("--freeze", action="append", metavar="NAME=VALUE")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("polygons", help="list even dissections of a polygon")
    s.add_argument("--size", type=int, required=True)
    s.add_argument("--cells", help="exact cell sizes, e.g. 4,4,4")
    s.set_defaults(func=cmd_polygons)

    s = sub.add_parser("ansatz", help="write term templates for a search")
    s.add_argument("--size", type=int, required=True)
    s.add_argument("--weight", type=int, required=True)
    s.add_argument("--comps", required=True, help='compositions, e.g. "3,1,1;4,1"')
    s.add_argument("--symmetrize", choices=("none", "cyclic", "signed"), default="cyclic")
    s.add_argument("--kind", choices=("I", "IN", "Li"), default="IN")
    s.add_argument("--cell-sizes", help="allowed cell sizes, e.g. 4,6")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_ansatz)

    s = sub.add_parser("specialize", help="degenerate an expression's symbol")
    s.add_argument("expr")
    s.add_argument("--set", action="append", required=True, metavar="xI=xJ")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_specialize)

    s = sub.add_parser("reduce", help="run a depth-reduction plan on an identity")
    s.add_argument("identity")
    s.add_argument("--plan", help=f"comma separated steps: {', '.join(sorted(PLAN_STEPS))}")
    s.add_argument("--step", nargs=2, action="append", metavar=("ACTION", "SUBST"), help="extra step, e.g. collapse x3=x1,x5=x1")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("dims", help="Brown's dimension count")
    s.add_argument("--weight", type=int, required=True)
    s.add_argument("--points", type=int, required=True)
    s.set_defaults(func=cmd_dims)

    s = sub.add_parser("eval", help="evaluate an expression by nested series")
    s.add_argument("expr")
    s.add_argument("--at", required=True, help="rational point, e.g. 1/3,1/4")
    s.add_argument("--prec", type=int, default=256)
    s.add_argument("--error", type=float, default=1e-30)
    s.add_argument("--check", action="store_true", help="exit 1 unless the value is zero to the target error")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("catalog", help="known identities")
    s.add_argument("action", choices=("list", "show"))
    s.add_argument("name", nargs="?")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("normalize", help="depth normal form recipe for a composition")
    s.add_argument("--comp", required=True, help="e.g. 2,1,2")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_normalize)
    return p


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else USAGE
    try:
        return args.func(args)
    except ScaleExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return SCALE
    except (MPLError, ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


def main():
    sys.exit(run())
