"""Identity lab: verification modulo products, kernel search, degeneration,
depth reduction by specialization, Brown's dimension count and a small catalog."""

from __future__ import annotations

import itertools
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    DegenerateArgument,
    IsolationFailed,
    ParseError,
    ScaleExceeded,
    UndefinedSubstitution,
)
from .linalg import SparseMatQ, kernel, rref, solve_affine
from .mpl import Expression, FunctionTerm, ProductTerm, expression_symbol
from .poly import MultiPoly
from .polygon import TermTemplate, cyclic_ratio, instantiate
from .ratfunc import RatFunc
from .registry import FactoredValue, LetterRegistry
from .tensor import SymbolTensor, expand_multilinear, is_zero_mod_products, mod_products_reduce

STATUSES = ("conjectured", "verified", "refuted")


# -- verification ---------------------------------------------------------------


@dataclass
class VerifyResult:
    verified: bool
    residue: SymbolTensor
    symbol: SymbolTensor

    def __bool__(self):
        return self.verified


def verify(expr, reg=None):
    """Reduce the symbol of ``expr`` modulo products; verified iff nothing is left."""
    if reg is None:
        reg = LetterRegistry(expr.nvars)
    s = expression_symbol(expr, reg)
    if is_zero_mod_products(s):
        return VerifyResult(True, SymbolTensor(s.weight), s)
    res = s if s.weight < 2 else mod_products_reduce(s)
    return VerifyResult(res.is_zero(), res, s)


@dataclass
class Identity:
    expr: Expression
    status: str = "conjectured"
    name: str = ""
    polygon: int | None = None
    orbits: int | None = None
    notes: str = ""
    coefficients: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"status must be one of {STATUSES}")

    def check(self, reg=None):
        """Re-verify and update the status."""
        r = verify(self.expr, reg)
        self.status = "verified" if r.verified else "refuted"
        return r


# -- search ---------------------------------------------------------------------


@dataclass
class SearchProblem:
    generators: list
    names: list = None
    frozen: dict = field(default_factory=dict)
    max_unknowns: int = 2000
    max_weight: int = 5

    def __post_init__(self):
        if self.names is None:
            self.names = [f"g{i + 1}" for i in range(len(self.generators))]
        if len(self.names) != len(self.generators) or len(set(self.names)) != len(self.names):
            raise ValueError("generator names must be unique, one per generator")
        unknown = set(self.frozen) - set(self.names)
        if unknown:
            raise ValueError(f"frozen coefficients for unknown generators: {sorted(unknown)}")


def generator_expression(g):
    if isinstance(g, Expression):
        return g
    if isinstance(g, TermTemplate):
        return instantiate(g)
    if isinstance(g, (FunctionTerm, ProductTerm)):
        return Expression([g])
    raise TypeError(f"cannot use {type(g).__name__} as a generator")


def _sort_key(expr):
    return "\n".join(str(t) for t in expr.terms)


def search(problem, reg=None):
    """Relations among the generators modulo products.

    Returns a list of conjectured Identities.  Without frozen coefficients these
    are the kernel vectors in reduced echelon form; with frozen coefficients the
    first identity is a particular solution satisfying them and the rest span
    the remaining freedom (vectors vanishing on the frozen generators).
    """
    n = len(problem.generators)
    exprs = [generator_expression(g) for g in problem.generators]
    weights = {t.weight for e in exprs for t in e.terms}
    if n > problem.max_unknowns or (weights and max(weights) > problem.max_weight):
        raise ScaleExceeded(
            f"{n} unknowns at weight {max(weights, default=0)} exceeds the limits "
            f"({problem.max_unknowns} unknowns, weight {problem.max_weight})",
            unknowns=n,
            weight=max(weights, default=0),
        )
    order = sorted(range(n), key=lambda i: (_sort_key(exprs[i]), problem.names[i]))
    exprs = [exprs[i] for i in order]
    names = [problem.names[i] for i in order]
    nv = max(e.nvars for e in exprs)
    if reg is None:
        reg = LetterRegistry(nv)
    syms = [expression_symbol(e, reg) for e in exprs]
    syms = [s.canonical(reg) for s in syms]
    reduced = [mod_products_reduce(s) if s.weight >= 2 else s for s in syms]
    words = sorted({w for r in reduced for w in r.terms})
    row_of = {w: i for i, w in enumerate(words)}
    rows = [dict() for _ in words]
    for j, r in enumerate(reduced):
        for w, c in r.terms.items():
            rows[row_of[w]][j] = c
    m = SparseMatQ(rows, n)

    frozen_cols = {names.index(k): Fraction(v) for k, v in problem.frozen.items()}
    vectors = []
    if frozen_cols:
        cons = [dict(r) for r in m.rows] + [{j: 1} for j in sorted(frozen_cols)]
        rhs = [0] * m.nrows + [frozen_cols[j] for j in sorted(frozen_cols)]
        x = solve_affine(SparseMatQ(cons, n), rhs)
        if x is None:
            return []
        vectors.append(x)
        hom = SparseMatQ(cons, n)
        kb = kernel(hom).vectors
    else:
        kb = kernel(m).vectors
    if kb:
        ech, _ = rref(SparseMatQ([{j: v for j, v in enumerate(vec) if v} for vec in kb], n))
        kb = [[r.get(j, Fraction(0)) for j in range(n)] for r in ech.rows]
    vectors.extend(kb)

    out = []
    for vec in vectors:
        terms = []
        coeffs = {}
        for j, c in enumerate(vec):
            if c:
                coeffs[names[j]] = c
                terms.extend(exprs[j].scale(c).terms)
        out.append(Identity(Expression(terms), "conjectured", coefficients=coeffs))
    return out


# -- substitutions and degeneration ----------------------------------------------


@dataclass
class Substitution:
    """Variable images: index -> another variable index (int) or a constant (Fraction).

    Plain ints always name variables; write Fraction(1) for the constant 1.
    """

    images: dict

    def __post_init__(self):
        clean = {}
        for k, v in self.images.items():
            k = int(k)
            if isinstance(v, Fraction):
                clean[k] = v
            elif isinstance(v, int) and not isinstance(v, bool):
                clean[k] = v
            else:
                raise UndefinedSubstitution(f"bad image {v!r} for x{k}")
        self.images = clean
        self.resolved()

    @classmethod
    def parse(cls, specs):
        """From strings like "x2=x1" or "x3=1/2" (a list, or one comma separated string)."""
        if isinstance(specs, str):
            specs = [s for s in specs.split(",") if s.strip()]
        images = {}
        for s in specs:
            mt = re.fullmatch(r"\s*x(\d+)\s*=\s*(?:x(\d+)|(-?\d+(?:/\d+)?))\s*", s)
            if not mt:
                raise ParseError(f"cannot read substitution {s!r}")
            k = int(mt.group(1))
            images[k] = int(mt.group(2)) if mt.group(2) else Fraction(mt.group(3))
        return cls(images)

    def resolved(self):
        """Follow chains x_a -> x_b -> ... to their end; cycles are errors."""
        out = {}
        for k in self.images:
            seen = {k}
            v = self.images[k]
            while isinstance(v, int) and v in self.images:
                if v in seen:
                    raise UndefinedSubstitution(f"substitution is cyclic at x{v}")
                seen.add(v)
                v = self.images[v]
            if isinstance(v, int) and v == k:
                raise UndefinedSubstitution(f"x{k} maps to itself")
            out[k] = v
        return out

    def then(self, other):
        """Apply self first, then other."""
        imgs = dict(other.images)
        for k, v in self.resolved().items():
            if isinstance(v, int) and v in other.images:
                v = other.resolved()[v]
            imgs[k] = v
        return Substitution(imgs)

    def poly_images(self, nvars, eps_index=None):
        """MultiPoly images; with ``eps_index`` each moved variable gets a tangent x_v + v*eps."""
        n = nvars if eps_index is None else eps_index
        out = {}
        for k, v in self.resolved().items():
            if k > nvars:
                raise UndefinedSubstitution(f"x{k} is outside x1..x{nvars}")
            if isinstance(v, Fraction):
                base = MultiPoly.const(n, Fraction(v))
            else:
                if v > nvars:
                    raise UndefinedSubstitution(f"x{v} is outside x1..x{nvars}")
                base = MultiPoly.var(n, v)
            if eps_index is not None:
                base = base + MultiPoly.var(n, eps_index).scale(k)
            out[k] = base
        return out

    def ratfunc_images(self, nvars):
        return {k: RatFunc(p, reduced=True) for k, p in self.poly_images(nvars).items()}

    def __str__(self):
        return ", ".join(f"x{k}={'x' + str(v) if isinstance(v, int) else v}" for k, v in sorted(self.images.items()))


@dataclass
class SpecializeResult:
    regularized: SymbolTensor
    divergent: SymbolTensor
    eps: int

    @property
    def divergent_vanishes(self):
        d = self.divergent
        return is_zero_mod_products(d)


def _eps_expand(p, images, nvars):
    """Lowest-order coefficient of p(x_v -> image_v + v*eps) in eps: (order, coefficient)."""
    q = p.extend(nvars + 1).substitute({k: v for k, v in images.items()})
    by_order = defaultdict(dict)
    for e, c in q.terms.items():
        by_order[e[nvars]][e[:nvars]] = c
    k = min(by_order)
    return k, MultiPoly(nvars, by_order[k])


def specialize_symbol(sym, subst, reg):
    """Degenerate a symbol: substitute into every letter with a common tangential scale eps.

    Each moved variable x_v becomes image_v + v*eps; a letter that vanishes on the
    locus becomes eps^k times its leading coefficient.  Terms are split by whether
    the eps letter occurs.
    """
    n = reg.nvars
    eps = reg.special("eps")
    images = subst.poly_images(n, eps_index=n + 1)
    images = {k: v for k, v in images.items()}
    letter_image = {}
    for a in sym.letters():
        p = reg.entries[a]
        if isinstance(p, str):
            letter_image[a] = FactoredValue({a: 1})
            continue
        k, c = _eps_expand(p, images, n)
        fv = reg.factor_poly(c) if not c.is_constant() else FactoredValue({}, Fraction(c.constant_value()))
        if k:
            fv = FactoredValue(dict(fv.exponents), fv.constant) * FactoredValue({eps: k})
        letter_image[a] = fv
    out = SymbolTensor(sym.weight)
    for w, c in sym.terms.items():
        entries = [FactoredValue(reg.canonical(letter_image[a].exponents), 1) for a in w]
        out = out + expand_multilinear(entries).scale(c)
    out = out.canonical(reg)
    reg_part = {w: c for w, c in out.terms.items() if eps not in w}
    div_part = {w: c for w, c in out.terms.items() if eps in w}
    return SpecializeResult(SymbolTensor(sym.weight, reg_part), SymbolTensor(sym.weight, div_part), eps)


def specialize(expr, subst, reg=None):
    """Symbol-level degeneration of an expression (or a SymbolTensor with ``reg``)."""
    if isinstance(expr, SymbolTensor):
        if reg is None:
            raise ValueError("a registry is needed to specialize a bare symbol")
        return specialize_symbol(expr, subst, reg)
    if reg is None:
        reg = LetterRegistry(expr.nvars)
    return specialize_symbol(expression_symbol(expr, reg), subst, reg)


def substitute_term(t, subst):
    """Substitute into a term's arguments; None if an argument degenerates (0, pole)."""
    imgs = subst.ratfunc_images(t.nvars)
    factors = t.factors if isinstance(t, ProductTerm) else (t,)
    new = []
    for f in factors:
        try:
            args = tuple(a.substitute(imgs) for a in f.args)
            new.append(FunctionTerm(f.coeff, f.kind, f.comp, args))
        except (ZeroDivisionError, DegenerateArgument):
            return None
    if isinstance(t, ProductTerm):
        return ProductTerm(t.coeff, tuple(new))
    return new[0]


@dataclass
class Specialized:
    """Expression-level specialization: generic survivors plus the degenerate remainder."""

    regular: Expression
    degenerate: list


def specialize_expression(expr, subst):
    regular, degenerate = [], []
    for t in expr.terms:
        s = substitute_term(t, subst)
        if s is None:
            degenerate.append(t)
        else:
            regular.append(s)
    return Specialized(Expression(regular).collect() if regular else Expression([]), degenerate)


# -- depth reduction --------------------------------------------------------------


@dataclass
class Recipe:
    target: FunctionTerm
    expression: Expression
    degenerate: list
    counts: dict
    steps: list
    residue_ok: bool

    def __str__(self):
        head = f"{self.target} ="
        body = "\n".join(f"  {t}" for t in self.expression.terms)
        cnt = ", ".join(f"{k}: {v}" for k, v in sorted(self.counts.items()))
        return f"{head}\n{body}\n[{cnt}; {len(self.degenerate)} degenerate terms]"


def _comp_label(t):
    if isinstance(t, ProductTerm):
        return "product"
    return f"{t.kind}_{','.join(map(str, t.comp))}"


def _n_vars_used(t):
    vs = set()
    for a in t.args:
        vs |= set(a.num.variables()) | set(a.den.variables())
    return len(vs)


def depth_reduce(anchor, plan, reg=None):
    """Run a specialization plan on an identity and isolate its generic top-depth term.

    ``plan`` is a list of (action, Substitution) with action "collapse" (replace
    the expression by its specialization) or "subtract" (subtract the
    specialization from the expression).  Terms whose arguments degenerate are
    dropped at expression level and tracked at symbol level: the result is
    accepted only when the dropped terms' regularized limit, taken together with
    the surviving terms, still vanishes modulo products.
    """
    expr = anchor.expr if isinstance(anchor, Identity) else anchor
    nv = expr.nvars
    if reg is None:
        reg = LetterRegistry(nv)
    sym = expression_symbol(expr, reg)
    cur = expr
    steps = []
    degenerate = []
    for action, subst in plan:
        sp = specialize_expression(cur, subst)
        symsp = specialize_symbol(sym, subst, reg)
        if action == "collapse":
            cur = sp.regular
            sym = symsp.regularized
            degenerate = [(subst, t) for t in sp.degenerate] + [(subst, t) for _, t in degenerate]
        elif action == "subtract":
            cur = (cur - sp.regular).collect()
            sym = (sym.canonical(reg) - symsp.regularized)
            degenerate = degenerate + [(subst, t) for t in sp.degenerate]
        else:
            raise ValueError(f"unknown plan action {action!r}")
        steps.append((action, str(subst), len(cur.terms)))
    funcs = [t for t in cur.terms if isinstance(t, FunctionTerm)]
    if not funcs:
        raise IsolationFailed("no function terms survive the plan")
    top = max(t.depth for t in funcs)
    tops = [t for t in funcs if t.depth == top]
    most = max(_n_vars_used(t) for t in tops)
    generic = [t for t in tops if _n_vars_used(t) == most]
    if top <= 1 or len(generic) != 1:
        raise IsolationFailed(f"{len(generic)} generic terms of depth {top}; need exactly one of depth >= 2")
    g = generic[0]
    if not g.coeff:
        raise IsolationFailed("the generic term's coefficient vanishes")
    rest = Expression([t for t in cur.terms if t is not g]).scale(Fraction(-1) / g.coeff).collect()
    target = g.with_coeff(1)
    # symbol bookkeeping: the surviving expression vs the degenerated symbol
    diff = expression_symbol(cur, reg).canonical(reg) - sym.canonical(reg) if cur.terms else -sym
    ok = is_zero_mod_products(diff)
    counts = Counter(_comp_label(t) for t in rest.terms)
    return Recipe(target, rest, degenerate, dict(counts), steps, ok)


# -- Brown's dimension count ------------------------------------------------------


def mobius(n):
    if n < 1:
        raise ValueError("mobius needs n >= 1")
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def dims(k, n):
    """(1/k) sum_{d | k} mu(k/d) sum_{i=2}^{n-2} i^d, checked to be an integer."""
    if k < 1 or n < 4:
        raise ValueError("need k >= 1 and n >= 4")
    total = 0
    for d in range(1, k + 1):
        if k % d == 0:
            total += mobius(k // d) * sum(i ** d for i in range(2, n - 1))
    q, r = divmod(total, k)
    if r:
        raise ArithmeticError(f"dimension sum {total} is not divisible by {k}")
    return q


# -- catalog ----------------------------------------------------------------------


def li2(arg, coeff=1):
    return FunctionTerm(coeff, "Li", (2,), (arg,))


def five_term(nvars=5, points=(1, 2, 3, 4, 5)):
    """Sum over the five quadrilaterals of a pentagon of Li2 at their cyclic ratio."""
    terms = []
    pts = list(points)
    for i in range(5):
        quad = pts[i + 1:] + pts[:i]
        terms.append(li2(cyclic_ratio(quad, nvars)))
    return Expression(terms)


def cross_ratio_generators(points=(1, 2, 3, 4, 5), nvars=5):
    """Li2 at the cross-ratios of all 4-subsets, one representative per inversion pair."""
    gens = []
    for sub in itertools.combinations(points, 4):
        seen = {}
        for perm in itertools.permutations(sub):
            r = cyclic_ratio(perm, nvars)
            inv = r.inverse()
            key = min(str(r), str(inv))
            if key not in seen:
                seen[key] = r if str(r) == key else inv
        for key in sorted(seen):
            gens.append(li2(seen[key]))
    return gens


def _inversion():
    x = RatFunc.var(1, 1)
    return Expression([li2(x), li2(x.inverse())])


def _reflection():
    x = RatFunc.var(1, 1)
    one = RatFunc.const(1, 1)
    p = ProductTerm(1, (FunctionTerm(1, "Li", (1,), (x,)), FunctionTerm(1, "Li", (1,), (one - x,))))
    return Expression([li2(x), li2(one - x), p])


def _reversal():
    x, y = RatFunc.var(2, 1), RatFunc.var(2, 2)
    return Expression([FunctionTerm(1, "I", (2, 1), (x, y)), FunctionTerm(-1, "I", (2, 1), (y, x))])


CATALOG = {
    "five-term": dict(build=five_term, status="verified", polygon=5, notes="Li2 over the five quadrilaterals of a pentagon"),
    "inversion": dict(build=_inversion, status="verified", polygon=None, notes="Li2(x) + Li2(1/x)"),
    "reflection": dict(build=_reflection, status="verified", polygon=None, notes="Li2(x) + Li2(1-x) + Li1(x) Li1(1-x)"),
    "reversal": dict(build=_reversal, status="verified", polygon=None, notes="I_{2,1}(x,y) - I_{2,1}(y,x): the word read backwards"),
    "Q5": dict(build=None, status="conjectured", polygon=8, notes="weight 5, depth 3; leading orbit -4 IN_{3,1,1} on the fan quadrangulation"),
    "Q6": dict(build=None, status="conjectured", polygon=10, notes="weight 6, depth 3"),
    "Q6^4": dict(build=None, status="conjectured", polygon=12, orbits=168, notes="weight 6, depth 4"),
    "Q7": dict(build=None, status="conjectured", polygon=12, orbits=121, notes="weight 7, depth 4"),
}


def catalog_names():
    return sorted(CATALOG)


def catalog_entry(name):
    if name not in CATALOG:
        raise KeyError(f"no catalog entry {name!r}; known: {', '.join(catalog_names())}")
    d = CATALOG[name]
    expr = d["build"]() if d["build"] else Expression([])
    return Identity(expr, d["status"], name, d.get("polygon"), d.get("orbits"), d["notes"])
