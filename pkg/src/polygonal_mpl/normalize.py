"""Depth normal form: rewrite I_c with weight(c) - depth(c) = 2 in terms of
compositions with a single 3 and all other parts 1 (optionally only
I_{3,1,..,1}), lower depth and products.

The rewrite is assembled from three kinds of relations, all exact modulo products:

* dihedral: for a word whose last letter is nonzero,
  I(0; a1..an; 1) = (-1)^(n+1) I(0; an..a1; 1);
* stuffle: for I_{2,1^b,2,1^c} with b >= 1, the product Li_{2,2,1^c} * Li_{1^b}
  whose interleavings move the 1's out from between the 2's;
* shuffle: for I_{2,2,1^m}, the product of the I_{3,1^m} word with one letter.

Every word met along the way becomes an unknown; the relations are solved
exactly and the target is reduced against them with non-normal words
eliminated first.  When these three do not close, the search is widened to
every shuffle u ⧢ v of convergent subwords and every stuffle splitting of the
Li form.  The returned recipe is checked by symbol before it is handed out.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import UnsupportedComposition
from .linalg import Reducer
from .mpl import Expression, FunctionTerm, composition
from .ratfunc import RatFunc
from .registry import LetterRegistry
from .tensor import is_zero_mod_products, word_shuffle

MAX_WEIGHT = 8
MAX_UNKNOWNS = 4000
# (extended relations?, stuffle generations), tried in order
STRATEGIES = ((False, 2), (True, 0), (True, 1))


# Every letter met by the relations below is a Laurent monomial in t1..td with
# coefficient 1, so letters are stored as exponent vectors and the zero letter
# as None.  This keeps the closure free of rational-function arithmetic.


def comp_of_word(w):
    comp = []
    for x in w:
        if x is None:
            comp[-1] += 1
        else:
            comp.append(1)
    return tuple(comp)


def _exps_of_word(w):
    return tuple(x for x in w if x is not None)


def _monomial(e):
    n = len(e)
    out = RatFunc.const(n, 1)
    for i, k in enumerate(e):
        if k:
            v = RatFunc.var(n, i + 1)
            out = out * (v ** k if k > 0 else v.inverse() ** (-k))
    return out


def args_of_word(w):
    return tuple(_monomial(x) for x in w if x is not None)


def one_three(comp):
    return sorted(comp) == [1] * (len(comp) - 1) + [3]


def is_normal(comp, strict=False):
    """A single 3 among 1's; with ``strict`` the 3 must come first."""
    if strict:
        return tuple(comp) == (3,) + (1,) * (len(comp) - 1)
    return one_three(comp)


def two_twos(comp):
    return sorted(comp) == [1] * (len(comp) - 2) + [2, 2]


def word_of(comp, exps):
    out = []
    for e, k in zip(exps, comp):
        out.append(e)
        out.extend([None] * (k - 1))
    return tuple(out)


def _neg(e):
    return tuple(-x for x in e)


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _to_li(b):
    """I-letters b1..bd to Li arguments z_j = b_{j+1}/b_j, z_d = 1/b_d."""
    z = [_add(b[j + 1], _neg(b[j])) for j in range(len(b) - 1)]
    z.append(_neg(b[-1]))
    return tuple(z)


def _to_i(z):
    """Li arguments to I-letters b_j = 1/(z_j...z_d)."""
    out, acc = [], tuple(0 for _ in z[0])
    for x in reversed(z):
        acc = _add(acc, x)
        out.append(_neg(acc))
    return tuple(reversed(out))


def _quasi(u, v):
    """Stuffle of two sequences of (part, exponent) pairs."""
    if not u:
        return [v]
    if not v:
        return [u]
    out = [(u[0],) + r for r in _quasi(u[1:], v)]
    out += [(v[0],) + r for r in _quasi(u, v[1:])]
    head = (u[0][0] + v[0][0], _add(u[0][1], v[0][1]))
    out += [(head,) + r for r in _quasi(u[1:], v[1:])]
    return out


def _li_stuffle(u, v):
    """Li_u * Li_v as a relation among I-words; Li_c(z) = (-1)^depth I(0; word; 1)."""
    rel = defaultdict(Fraction)
    for seq in _quasi(u, v):
        comp = tuple(p for p, _ in seq)
        b = _to_i(tuple(e for _, e in seq))
        rel[word_of(comp, b)] += (-1) ** len(seq)
    return dict(rel)


@dataclass
class Recipe:
    """I_comp(t1..td) == sum of coeff * I-term, modulo products."""

    comp: tuple
    target: FunctionTerm
    terms: list
    steps: Counter = field(default_factory=Counter)
    verified: bool = False

    def expression(self):
        """target - sum(terms), which vanishes modulo products."""
        return Expression([self.target] + [t.with_coeff(-t.coeff) for t in self.terms])

    def by_composition(self):
        return Counter(t.comp for t in self.terms)

    def __str__(self):
        lines = [str(self.target.with_coeff(1)).removeprefix("1 * ") + " ="]
        lines += [f"  {t}" for t in self.terms] or ["  0"]
        used = ", ".join(f"{k}: {v}" for k, v in sorted(self.steps.items()))
        lines.append(f"[relations used: {used}]")
        return "\n".join(lines)


class _System:
    """Relations accumulated into an incremental echelon basis.  Columns of
    non-normal words sort before all others, so reducing the target eliminates them
    whenever the relations allow it."""

    def __init__(self, depth, strict=False):
        self.depth = depth
        self.strict = strict
        self.keys = {}
        self.words = {}
        self.red = Reducer()
        self.used = Counter()

    def classify(self, w):
        if w[0] is None or (w[-1] is not None and not any(w[-1])):
            raise UnsupportedComposition("a relation produced a divergent word that needs regularization", step="regularization")
        comp = comp_of_word(w)
        if len(comp) < self.depth:
            return "lower"
        if is_normal(comp, self.strict):
            return "normal"
        if two_twos(comp) or one_three(comp):
            return "unknown"
        raise UnsupportedComposition(f"unexpected composition {comp} in a relation", step="classification")

    def key(self, w):
        k = self.keys.get(w)
        if k is None:
            rank = 0 if self.classify(w) == "unknown" else 1
            k = self.keys[w] = (rank, len(self.keys))
            self.words[k] = w
        return k

    def add(self, rel, kind):
        row = {self.key(w): c for w, c in rel.items() if c}
        if row and self.red.add(row):
            self.used[kind] += 1
        return [w for w in rel if rel[w] and self.keys[w][0] == 0]

    def reduce(self, target):
        left = self.red.reduce({self.key(target): Fraction(1)})
        stuck = sorted(k for k in left if k[0] == 0)
        if stuck:
            return None, self.words[stuck[0]]
        return {self.words[k]: c for k, c in left.items()}, None


def _dihedral(w):
    if w[-1] is None:
        return None
    return {w: Fraction(1), tuple(reversed(w)): Fraction(-((-1) ** (len(w) + 1)))}


def _stuffle(w):
    comp = comp_of_word(w)
    if comp[0] != 2 or 2 not in comp[1:]:
        return None
    j = comp.index(2, 1)
    if j < 2 or any(p != 1 for p in comp[j + 1:]):
        return None
    z = _to_li(_exps_of_word(w))
    a = ((2, z[0]), (2, z[j])) + tuple((1, x) for x in z[j + 1:])
    b = tuple((1, x) for x in z[1:j])
    return _li_stuffle(a, b)


def _insert_all(base, letter):
    rel = defaultdict(Fraction)
    pool = base + (letter,)
    for perm, m in word_shuffle(tuple(range(len(base))), (len(base),)).items():
        rel[tuple(pool[i] for i in perm)] += m
    return dict(rel)


def _shuffle(w):
    comp = comp_of_word(w)
    if comp[:2] != (2, 2) or any(p != 1 for p in comp[2:]):
        return None
    return _insert_all(w[:2] + w[3:], w[2])


def _convergent(u):
    return u[0] is not None and (u[-1] is None or any(u[-1]))


def _extra_shuffles(w):
    """u ⧢ v for every split of w's positions into two convergent subwords."""
    n = len(w)
    out = []
    for mask in range(1, 2 ** (n - 1)):
        u = tuple(w[i] for i in range(n) if not mask >> i & 1)
        v = tuple(w[i] for i in range(n) if mask >> i & 1)
        if not (_convergent(u) and _convergent(v)):
            continue
        rel = defaultdict(Fraction)
        pool = u + v
        for perm, m in word_shuffle(tuple(range(len(u))), tuple(range(len(u), n))).items():
            rel[tuple(pool[i] for i in perm)] += m
        out.append(dict(rel))
    return out


def _all_stuffles(w):
    """Every splitting of the Li-form index positions into two nonempty subsequences."""
    comp = comp_of_word(w)
    d = len(comp)
    z = _to_li(_exps_of_word(w))
    out = []
    for mask in range(1, 2 ** (d - 1)):
        a = tuple((comp[i], z[i]) for i in range(d) if not mask >> i & 1)
        b = tuple((comp[i], z[i]) for i in range(d) if mask >> i & 1)
        out.append(_li_stuffle(a, b))
    return out


def _letters(w):
    return frozenset(x for x in w if x is not None)


def _solve(comp, extra, generations=3, strict=False):
    """Layered closure: letter-preserving relations (dihedral, shuffle) are closed
    within a generation; stuffle relations introduce new letters and feed the next
    generation.  The target is reduced after every generation."""
    d = len(comp)
    target = word_of(comp, tuple(tuple(int(i == j) for i in range(d)) for j in range(d)))
    sysm = _System(d, strict)
    sysm.key(target)
    seen = {target}
    frontier = [target]
    stuck = target
    for gen in range(generations + 1):
        nxt = []
        queue = list(frontier)
        while queue:
            w = queue.pop(0)
            if len(seen) > MAX_UNKNOWNS:
                raise UnsupportedComposition(f"relation closure exceeded {MAX_UNKNOWNS} unknown words", step="closure")
            local = []
            r = _dihedral(w)
            if r is not None:
                local.append((r, "dihedral"))
            r = _shuffle(w)
            if r is not None:
                local.append((r, "shuffle"))
            if extra:
                local.extend((r, "shuffle") for r in _extra_shuffles(w))
            lifted = []
            if gen < generations:
                r = _stuffle(w)
                if r is not None:
                    lifted.append((r, "stuffle"))
                if extra:
                    lifted.extend((r, "stuffle") for r in _all_stuffles(w))
            for rel, kind in local:
                for u in sysm.add(rel, kind):
                    if u not in seen:
                        seen.add(u)
                        queue.append(u)
            for rel, kind in lifted:
                for u in sysm.add(rel, kind):
                    if u not in seen:
                        seen.add(u)
                        (queue if _letters(u) <= _letters(w) else nxt).append(u)
        sol, stuck = sysm.reduce(target)
        if sol is not None:
            return sol, None, sysm.used
        if not nxt:
            break
        frontier = nxt
    return None, stuck, sysm.used


def _failing_step(w):
    comp = comp_of_word(w)
    if _shuffle(w) is None and comp[:2] == (2, 2):
        return "shuffle"
    if comp[0] == 2:
        return "stuffle"
    return "dihedral"


def depth_normalize(c, verify=True, strict=False):
    """Recipe for I_c(t1..td) in terms of single-3 compositions, lower depth and products.

    With ``strict`` only I_{3,1,..,1} itself counts as normal; this needs the
    wider relation set more often and may fail where the default succeeds.
    """
    comp = composition(c)
    w, d = sum(comp), len(comp)
    if w > MAX_WEIGHT:
        raise UnsupportedComposition(f"weight {w} is above {MAX_WEIGHT}", step="classification")
    if d != w - 2:
        raise UnsupportedComposition(f"composition {comp} does not have depth weight-2", step="classification")
    target = FunctionTerm(1, "I", comp, tuple(RatFunc.var(d, i + 1) for i in range(d)))
    if is_normal(comp, strict):
        return Recipe(comp, target, [target], Counter(), True)
    sol = None
    for extra, gens in STRATEGIES:
        try:
            sol, stuck, used = _solve(comp, extra, gens, strict)
        except UnsupportedComposition as exc:
            if exc.step != "closure":
                raise
            stuck = None
            continue
        if sol is not None:
            break
    if sol is None:
        step = _failing_step(stuck) if stuck is not None else "closure"
        raise UnsupportedComposition(f"relations do not eliminate the non-normal words of {comp}", step=step)
    n = d
    terms = []
    for word, coeff in sorted(sol.items(), key=lambda kv: (comp_of_word(kv[0]), str(kv[0]))):
        terms.append(FunctionTerm(coeff, "I", comp_of_word(word), args_of_word(word)))
    recipe = Recipe(comp, target, terms, used)
    if verify:
        from .mpl import expression_symbol

        reg = LetterRegistry(n)
        s = expression_symbol(recipe.expression(), reg)
        recipe.verified = is_zero_mod_products(s)
        if not recipe.verified:
            raise UnsupportedComposition(f"recipe for {comp} fails the symbol check", step="verification")
    return recipe
