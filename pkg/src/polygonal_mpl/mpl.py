"""Multiple polylogarithms as data, and their symbols.

Conventions (fixed here and pinned by tests):

* ``I_{n1..nd}(a1..ad) = I(0; a1, 0^{n1-1}, a2, 0^{n2-1}, ..., ad, 0^{nd-1}; 1)``.
* ``Li_{n1..nd}(z1..zd) = sum_{0<k1<...<kd} z1^k1...zd^kd / (k1^n1...kd^nd)``
  equals ``(-1)^d I_{n1..nd}(y1..yd)`` with ``y_j = (z_j...z_d)^{-1}``.
* ``IN_{n1..nd}(a1..ad) = I_{n1..nd}(a1, (a2...ad)^{-1}, (a2...a_{d-1})^{-1}, ..., a2^{-1})``.

Symbols follow the iterated-integral recursion with the usual regularization:
a vanishing difference ``a_i - a_j`` contributes nothing to an entry.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DegenerateArgument, EndpointMismatch, KindMismatch, SingularTerm
from .ratfunc import RatFunc
from .tensor import SymbolTensor, shuffle as tensor_shuffle

KINDS = ("I", "IN", "Li")


def composition(parts):
    parts = tuple(int(p) for p in parts)
    if not parts or any(p < 1 for p in parts):
        raise ValueError(f"invalid composition {parts}")
    return parts


@dataclass(frozen=True)
class FunctionTerm:
    coeff: Fraction
    kind: str
    comp: tuple
    args: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        object.__setattr__(self, "comp", composition(self.comp))
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) != len(self.comp):
            raise ValueError(f"{len(self.args)} arguments for depth {len(self.comp)}")
        if any(a.is_zero() for a in self.args):
            raise DegenerateArgument(f"{self.kind}{list(self.comp)} has an argument identically 0")

    @property
    def weight(self):
        return sum(self.comp)

    @property
    def depth(self):
        return len(self.comp)

    @property
    def nvars(self):
        return self.args[0].nvars

    def key(self):
        return (self.kind, self.comp, self.args)

    def with_coeff(self, c):
        return FunctionTerm(c, self.kind, self.comp, self.args)

    def __str__(self):
        a = ", ".join(str(x) for x in self.args)
        return f"{self.coeff} * {self.kind}_{{{','.join(map(str, self.comp))}}}({a})"


@dataclass(frozen=True)
class ProductTerm:
    """coeff times a product of functions (factor coefficients are folded in)."""

    coeff: Fraction
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        fs = tuple(self.factors)
        if len(fs) < 2:
            raise ValueError("a product needs at least two factors")
        object.__setattr__(self, "factors", fs)

    @property
    def weight(self):
        return sum(f.weight for f in self.factors)

    @property
    def depth(self):
        return max(f.depth for f in self.factors)

    @property
    def nvars(self):
        return self.factors[0].nvars

    def key(self):
        return ("prod",) + tuple(f.key() for f in self.factors)

    def with_coeff(self, c):
        return ProductTerm(c, self.factors)

    def __str__(self):
        return f"{self.coeff} * " + " * ".join(f"[{f.kind}_{{{','.join(map(str, f.comp))}}}({', '.join(map(str, f.args))})]" for f in self.factors)


@dataclass
class Expression:
    terms: list = field(default_factory=list)

    def __post_init__(self):
        ns = {t.nvars for t in self.terms}
        if len(ns) > 1:
            raise ValueError(f"terms use different variable counts: {sorted(ns)}")

    @property
    def nvars(self):
        return self.terms[0].nvars if self.terms else 0

    def __add__(self, other):
        return Expression(list(self.terms) + list(other.terms))

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return Expression([t.with_coeff(t.coeff * Fraction(c)) for t in self.terms])

    def collect(self):
        """Merge terms with identical function and arguments; drop zeros; canonical order."""
        acc = {}
        proto = {}
        for t in self.terms:
            k = t.key()
            acc[k] = acc.get(k, 0) + t.coeff
            proto.setdefault(k, t)
        out = [proto[k].with_coeff(c) for k, c in acc.items() if c]
        out.sort(key=lambda t: str(t.with_coeff(1)))
        return Expression(out)

    def __len__(self):
        return len(self.terms)

    def __str__(self):
        return "\n".join(str(t) for t in self.terms) if self.terms else "0"


@dataclass(frozen=True)
class IntegralWord:
    a0: RatFunc
    letters: tuple
    a_end: RatFunc

    @property
    def weight(self):
        return len(self.letters)

    @property
    def nvars(self):
        return self.a0.nvars

    def points(self):
        return (self.a0,) + tuple(self.letters) + (self.a_end,)


# -- conversions -----------------------------------------------------------------


def _prod(fs, n):
    out = RatFunc.const(n, 1)
    for f in fs:
        out = out * f
    return out


def in_to_i_args(args):
    """IN(a1..ad) -> I(a1, (a2..ad)^-1, (a2..a_{d-1})^-1, ..., a2^-1)."""
    n = args[0].nvars
    d = len(args)
    out = [args[0]]
    for k in range(d, 1, -1):
        out.append(_prod(args[1:k], n).inverse())
    return tuple(out)


def i_to_in_args(b):
    """Inverse of :func:`in_to_i_args`."""
    d = len(b)
    if d == 1:
        return tuple(b)
    # b_{d-k+2} = (a2..a_k)^-1 for k = 2..d, so a_k = b_{d-k+3} / b_{d-k+2}
    a = [b[0], b[d - 1].inverse()]
    for k in range(3, d + 1):
        a.append(b[d - k + 2] / b[d - k + 1])
    return tuple(a)


def li_to_i_args(z):
    n = z[0].nvars
    d = len(z)
    return tuple(_prod(z[j:], n).inverse() for j in range(d))


def i_to_li_args(b):
    d = len(b)
    z = [b[j + 1] / b[j] for j in range(d - 1)]
    z.append(b[d - 1].inverse())
    return tuple(z)


def as_kind(t, kind):
    """Re-express a FunctionTerm in another kind (same function, same value)."""
    if t.kind == kind:
        return t
    try:
        if t.kind == "I":
            b = t.args
        elif t.kind == "IN":
            b = in_to_i_args(t.args)
        else:
            b = li_to_i_args(t.args)
        sign = 1
        if kind == "I":
            args = b
        elif kind == "IN":
            args = i_to_in_args(b)
        else:
            args = i_to_li_args(b)
            sign = (-1) ** t.depth
        if t.kind == "Li":
            sign *= (-1) ** t.depth
    except ZeroDivisionError:
        raise DegenerateArgument(f"cannot convert {t} to kind {kind}") from None
    return FunctionTerm(t.coeff * sign, kind, t.comp, args)


def to_integral_word(t):
    """(scalar, IntegralWord) with scalar * I(0; word; 1) equal to the term (coefficient excluded)."""
    try:
        if t.kind == "I":
            b, s = t.args, 1
        elif t.kind == "IN":
            b, s = in_to_i_args(t.args), 1
        else:
            b, s = li_to_i_args(t.args), (-1) ** t.depth
    except ZeroDivisionError:
        raise DegenerateArgument(f"argument conversion of {t} is undefined") from None
    if any(x.is_zero() for x in b):
        raise DegenerateArgument(f"a word letter of {t} vanishes identically")
    n = t.nvars
    zero = RatFunc.const(n, 0)
    letters = []
    for bj, nj in zip(b, t.comp):
        letters.append(bj)
        letters.extend([zero] * (nj - 1))
    return Fraction(s), IntegralWord(zero, tuple(letters), RatFunc.const(n, 1))


def word_to_term(w, coeff=1):
    """Read I(0; b1, 0.., b2, 0.., ...; c) back as an I-term (scaling the endpoint to 1)."""
    if not w.a0.is_zero() or w.a_end.is_zero() or not w.letters or w.letters[0].is_zero():
        raise DegenerateArgument("word is not of the form I(0; b1, ...; c) with b1, c nonzero")
    args, comp = [], []
    for x in w.letters:
        if x.is_zero():
            comp[-1] += 1
        else:
            args.append(x / w.a_end)
            comp.append(1)
    return FunctionTerm(coeff, "I", tuple(comp), tuple(args))


# -- symbols ---------------------------------------------------------------------


def symbol_of_word(w, reg):
    pts = w.points()
    n = w.weight
    if w.a0 == w.a_end:
        return SymbolTensor(n)
    diffs = {}
    for i, j in itertools.combinations(range(n + 2), 2):
        d = pts[j] - pts[i]
        if not d.is_zero():
            diffs[(i, j)] = reg.refine_register(d).exponents
    diffs = {k: reg.canonical(v) for k, v in diffs.items()}

    def entry(prev, cur, nxt):
        e = defaultdict(int)
        up = diffs.get((min(cur, nxt), max(cur, nxt)))
        down = diffs.get((min(cur, prev), max(cur, prev)))
        if up:
            for a, k in up.items():
                e[a] += k
        if down:
            for a, k in down.items():
                e[a] -= k
        return {a: k for a, k in e.items() if k}

    memo = {(): {(): 1}}

    def rec(sub):
        hit = memo.get(sub)
        if hit is not None:
            return hit
        out = defaultdict(int)
        m = len(sub)
        for t in range(m):
            prev = sub[t - 1] if t else 0
            nxt = sub[t + 1] if t + 1 < m else n + 1
            e = entry(prev, sub[t], nxt)
            if not e:
                continue
            rest = rec(sub[:t] + sub[t + 1:])
            for word, c in rest.items():
                for a, k in e.items():
                    out[word + (a,)] += c * k
        res = {x: c for x, c in out.items() if c}
        memo[sub] = res
        return res

    terms = rec(tuple(range(1, n + 1)))
    return SymbolTensor._raw(n, {x: Fraction(c) for x, c in terms.items()})


def reverse_word(w):
    return Fraction((-1) ** w.weight), IntegralWord(w.a_end, tuple(reversed(w.letters)), w.a0)


def term_symbol(t, reg):
    """Symbol of a FunctionTerm or ProductTerm including its coefficient."""
    if isinstance(t, ProductTerm):
        acc = None
        for f in t.factors:
            s = term_symbol(f.with_coeff(1), reg)
            acc = s if acc is None else tensor_shuffle(acc, s)
        return acc.scale(t.coeff)
    key = t.key()
    hit = reg.memo.get(key)
    if hit is None:
        s, w = to_integral_word(t)
        hit = symbol_of_word(w, reg).scale(s)
        reg.memo[key] = hit
    return hit.canonical(reg).scale(t.coeff)


def expression_symbol(e, reg):
    """Sum of the term symbols; all letters refer to live registry entries."""
    if not e.terms:
        return SymbolTensor(0)
    weights = {t.weight for t in e.terms}
    if len(weights) > 1:
        from .errors import NonHomogeneous

        raise NonHomogeneous(f"expression mixes weights {sorted(weights)}")
    total = SymbolTensor(weights.pop())
    parts = []
    for i, t in enumerate(e.terms):
        try:
            parts.append(term_symbol(t, reg))
        except DegenerateArgument as exc:
            raise SingularTerm(f"term {i}: {exc}", index=i) from None
    for p in parts:
        total = total + p.canonical(reg)
    return total


# -- products ----------------------------------------------------------------------


def _quasi_shuffle(u, v):
    """Quasi-shuffle of sequences of (n, z) pairs -> list of sequences (with repetition)."""
    if not u:
        return [v]
    if not v:
        return [u]
    out = []
    for rest in _quasi_shuffle(u[1:], v):
        out.append((u[0],) + rest)
    for rest in _quasi_shuffle(u, v[1:]):
        out.append((v[0],) + rest)
    merged = (u[0][0] + v[0][0], u[0][1] * v[0][1])
    for rest in _quasi_shuffle(u[1:], v[1:]):
        out.append((merged,) + rest)
    return out


def stuffle_product(a, b):
    """Li_A(x) * Li_B(y) as a sum of Li terms (interleavings and contractions)."""
    if a.kind != "Li" or b.kind != "Li":
        raise KindMismatch("stuffle_product needs two Li terms")
    u = tuple(zip(a.comp, a.args))
    v = tuple(zip(b.comp, b.args))
    c = a.coeff * b.coeff
    terms = []
    for seq in _quasi_shuffle(u, v):
        terms.append(FunctionTerm(c, "Li", tuple(p[0] for p in seq), tuple(p[1] for p in seq)))
    return Expression(terms).collect()


def shuffle_words(u, v):
    """Formal shuffle of two words with common endpoints: list of (multiplicity, word)."""
    if u.a0 != v.a0 or u.a_end != v.a_end:
        raise EndpointMismatch("shuffle needs words with the same endpoints")
    idx_u = tuple(range(u.weight))
    idx_v = tuple(range(u.weight, u.weight + v.weight))
    from .tensor import word_shuffle

    pool = u.letters + v.letters
    acc = defaultdict(int)
    for w, m in word_shuffle(idx_u, idx_v).items():
        acc[tuple(pool[i] for i in w)] += m
    return [(m, IntegralWord(u.a0, ls, u.a_end)) for ls, m in acc.items()]


def words_symbol(words, reg):
    """Symbol of a combination [(coeff, IntegralWord)]."""
    total = None
    for c, w in words:
        s = symbol_of_word(w, reg).scale(c)
        total = s if total is None else total + s
    return total.canonical(reg)
