"""Symbol tensors: Q-linear combinations of words in registry letters.

The quotient "modulo products" is the quotient of the weight-n tensors by the
span of shuffles ``u ⧢ v`` with u, v nonempty.  Over Q the shuffle algebra is
freely generated by Lyndon words, and for Lyndon words l1 >= ... >= lk the
shuffle l1 ⧢ ... ⧢ lk equals a positive multiple of the concatenation l1...lk
plus lexicographically smaller words.  Those products therefore form a
triangular generating set of the product span, and eliminating every
non-Lyndon word from the top down leaves the unique representative supported
on Lyndon words.  :func:`shuffle_span_reduce` is the brute-force matrix version
of the same quotient and is kept as an independent check.
"""

from __future__ import annotations

import heapq
import itertools
import re
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd

from .errors import NonHomogeneous, ZeroEntry
from .linalg import Reducer


class SymbolTensor:
    __slots__ = ("weight", "terms")

    def __init__(self, weight, terms=None):
        self.weight = weight
        self.terms = {}
        if terms:
            for w, c in terms.items():
                w = tuple(w)
                if len(w) != weight:
                    raise NonHomogeneous(f"word {w} has length {len(w)}, expected {weight}")
                if c:
                    self.terms[w] = self.terms.get(w, 0) + Fraction(c)
            self.terms = {w: c for w, c in self.terms.items() if c}

    @classmethod
    def word(cls, *letters, coeff=1):
        return cls(len(letters), {tuple(letters): coeff})

    @classmethod
    def _raw(cls, weight, terms):
        t = cls.__new__(cls)
        t.weight = weight
        t.terms = terms
        return t

    def is_zero(self):
        return not self.terms

    def letters(self):
        return sorted({a for w in self.terms for a in w})

    def _same(self, other):
        if self.weight != other.weight and self.terms and other.terms:
            raise NonHomogeneous(f"weights {self.weight} and {other.weight} differ")

    def __add__(self, other):
        self._same(other)
        t = dict(self.terms)
        for w, c in other.terms.items():
            s = t.get(w, 0) + c
            if s:
                t[w] = s
            else:
                t.pop(w, None)
        return SymbolTensor._raw(self.weight if self.terms else other.weight, t)

    def __neg__(self):
        return SymbolTensor._raw(self.weight, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return SymbolTensor(self.weight)
        return SymbolTensor._raw(self.weight, {w: v * c for w, v in self.terms.items()})

    __rmul__ = scale

    def __mul__(self, c):
        return self.scale(c)

    def tensor(self, other):
        """Concatenation product self ⊗ other."""
        t = defaultdict(Fraction)
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                t[w1 + w2] += c1 * c2
        return SymbolTensor._raw(self.weight + other.weight, {w: c for w, c in t.items() if c})

    def __eq__(self, other):
        if not isinstance(other, SymbolTensor):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return self.weight == other.weight and self.terms == other.terms

    def __repr__(self):
        return f"SymbolTensor({self.weight}, {len(self.terms)} terms)"

    def relabel(self, mapping):
        """Apply a letter map ``id -> {id: exponent}`` multilinearly (e.g. a registry rewrite)."""
        if not any(a in mapping for w in self.terms for a in w):
            return self
        t = defaultdict(Fraction)
        for w, c in self.terms.items():
            slots = [mapping[a].items() if a in mapping else ((a, 1),) for a in w]
            for combo in itertools.product(*slots):
                k = c
                for _, e in combo:
                    k *= e
                t[tuple(a for a, _ in combo)] += k
        return SymbolTensor._raw(self.weight, {w: c for w, c in t.items() if c})

    def canonical(self, reg):
        """Bring letters up to date with the registry's split history."""
        mapping = {}
        for a in self.letters():
            if a in reg.rewrite:
                mapping[a] = reg.canonical({a: 1})
        return self.relabel(mapping) if mapping else self

    # -- text / json ---------------------------------------------------------

    def render(self, reg=None):
        if not self.terms:
            return "0"
        lines = []
        for w, c in sorted(self.terms.items()):
            names = [reg.name(a) if reg is not None else f"L{a}" for a in w]
            lines.append(f"{c} * " + " (x) ".join(names))
        return "\n".join(lines)

    def to_json(self, reg):
        letters = self.letters()
        pos = {a: i for i, a in enumerate(letters)}
        return {
            "weight": self.weight,
            "letters": [str(reg.entries[a]) for a in letters],
            "terms": [[str(c), [pos[a] for a in w]] for w, c in sorted(self.terms.items())],
        }

    @classmethod
    def from_json(cls, data, reg):
        from .poly import parse_poly

        ids = []
        for s in data["letters"]:
            if s in reg._special or (s.isidentifier() and not re.fullmatch(r"x\d+", s)):
                ids.append({reg.special(s): 1})
            else:
                fv = reg.factor_poly(parse_poly(s, reg.nvars))
                ids.append(reg.canonical(fv.exponents))
        out = cls(data["weight"])
        for c, w in data["terms"]:
            out = out + expand_multilinear([_Exps(ids[i]) for i in w]).scale(Fraction(c))
        return out


class _Exps:
    __slots__ = ("exponents",)

    def __init__(self, e):
        self.exponents = e


def _exps(v):
    return v.exponents if hasattr(v, "exponents") else v


def expand_multilinear(entries):
    """Expand a sequence of factored entries into letter tensors.

    Each entry is a FactoredValue (or a bare ``{letter: exponent}`` map).  A
    slot with no letters is a pure constant and annihilates the whole term.
    """
    slots = []
    for i, e in enumerate(entries):
        if getattr(e, "constant", 1) == 0:
            raise ZeroEntry(f"slot {i} is the zero function")
        items = [(a, k) for a, k in _exps(e).items() if k]
        if not items:
            return SymbolTensor(len(entries))
        slots.append(items)
    t = defaultdict(Fraction)
    for combo in itertools.product(*slots):
        c = 1
        for _, k in combo:
            c *= k
        t[tuple(a for a, _ in combo)] += c
    return SymbolTensor._raw(len(entries), {w: Fraction(c) for w, c in t.items() if c})


@lru_cache(maxsize=None)
def word_shuffle(u, v):
    """Shuffle of two words as a dict word -> multiplicity."""
    p, q = len(u), len(v)
    out = defaultdict(int)
    for pos in itertools.combinations(range(p + q), p):
        w = [None] * (p + q)
        ps = set(pos)
        iu = iter(u)
        iv = iter(v)
        for k in range(p + q):
            w[k] = next(iu) if k in ps else next(iv)
        out[tuple(w)] += 1
    return dict(out)


def shuffle(u, v):
    """Bilinear shuffle product of two tensors."""
    t = defaultdict(Fraction)
    for w1, c1 in u.terms.items():
        for w2, c2 in v.terms.items():
            for w, m in word_shuffle(w1, w2).items():
                t[w] += c1 * c2 * m
    return SymbolTensor._raw(u.weight + v.weight, {w: c for w, c in t.items() if c})


@lru_cache(maxsize=None)
def _rho_word(w):
    if len(w) == 1:
        return {w: 1}
    out = defaultdict(int)
    for x, c in _rho_word(w[:-1]).items():
        out[x + (w[-1],)] += c
    for x, c in _rho_word(w[1:]).items():
        out[x + (w[0],)] -= c
    return {x: c for x, c in out.items() if c}


def rho_project(s):
    """rho(a1..an) = rho(a1..a_{n-1}) ⊗ a_n - rho(a2..an) ⊗ a1; kills all shuffles."""
    # integer arithmetic after clearing one common denominator
    den = 1
    for c in s.terms.values():
        d = Fraction(c).denominator
        den = den * d // gcd(den, d)
    t = defaultdict(int)
    for w, c in s.terms.items():
        k = int(c * den)
        for x, m in _rho_word(w).items():
            t[x] += k * m
    return SymbolTensor._raw(s.weight, {w: Fraction(c, den) for w, c in t.items() if c})


# -- Lyndon machinery ------------------------------------------------------------


def lyndon_factorization(w):
    """Chen-Fox-Lyndon factorization (Duval): nonincreasing Lyndon factors."""
    n = len(w)
    i = 0
    out = []
    while i < n:
        j, k = i + 1, i
        while j < n and w[k] <= w[j]:
            k = i if w[k] < w[j] else k + 1
            j += 1
        while i <= k:
            out.append(tuple(w[i:i + j - k]))
            i += j - k
    return out


def is_lyndon(w):
    return len(lyndon_factorization(w)) == 1


@lru_cache(maxsize=None)
def _product_of_factors(factors):
    acc = {factors[0]: 1}
    for f in factors[1:]:
        nxt = defaultdict(int)
        for x, c in acc.items():
            for y, m in word_shuffle(x, f).items():
                nxt[y] += c * m
        acc = dict(nxt)
    return acc


def _leading_multiplicity(factors):
    m = 1
    for _, grp in itertools.groupby(factors):
        m *= factorial(len(list(grp)))
    return m


def mod_products_reduce(s):
    """Canonical representative of ``s`` modulo shuffle products (Lyndon-supported).

    Zero exactly when ``s`` lies in the span of products u ⧢ v with u, v nonempty.
    """
    if s.weight < 2 and s.terms:
        if s.weight < 1:
            raise NonHomogeneous("weight must be at least 1")
        return SymbolTensor._raw(s.weight, dict(s.terms))
    work = dict(s.terms)
    heap = [tuple(-a for a in w) for w in work]
    heapq.heapify(heap)
    while heap:
        w = tuple(-a for a in heapq.heappop(heap))
        c = work.get(w)
        if not c:
            continue
        fac = lyndon_factorization(w)
        if len(fac) == 1:
            continue
        prod = _product_of_factors(tuple(fac))
        f = Fraction(c) / _leading_multiplicity(fac)
        for x, m in prod.items():
            v = work.get(x, 0) - f * m
            if v:
                if x not in work:
                    heapq.heappush(heap, tuple(-a for a in x))
                work[x] = v
            else:
                work.pop(x, None)
        # w itself was pushed once; it is now gone from ``work``
    return SymbolTensor._raw(s.weight, work)


def is_zero_mod_products(s):
    """Cheap membership test: rho has exactly the products as its kernel."""
    if s.weight < 2:
        return s.is_zero()
    return rho_project(s).is_zero()


def shuffle_span_reduce(s):
    """Brute-force quotient: reduce ``s`` against an echelon basis of all shuffles
    u ⧢ v of words over the letters of ``s``.  Exponential; for small checks only."""
    n = s.weight
    if n < 2:
        return s
    letters = s.letters()
    words = list(itertools.product(letters, repeat=n))
    col = {w: i for i, w in enumerate(sorted(words, reverse=True))}
    red = Reducer()
    for p in range(1, n // 2 + 1):
        for u in itertools.product(letters, repeat=p):
            for v in itertools.product(letters, repeat=n - p):
                row = defaultdict(int)
                for w, m in word_shuffle(u, v).items():
                    row[col[w]] += m
                red.add(row)
    r = red.reduce({col[w]: c for w, c in s.terms.items()})
    inv = {i: w for w, i in col.items()}
    return SymbolTensor._raw(n, {inv[i]: c for i, c in r.items()})
