"""Coprime letter registry.

Every rational function that enters a symbol is factored over a pairwise
coprime basis of polynomials (a gcd-free basis).  The basis is refined
incrementally: when a new polynomial shares a proper factor with an entry,
that entry is retired and replaced by the pieces of the split.  Retired ids
stay in a rewrite table so exponent maps issued before a split can be brought
up to date with :meth:`LetterRegistry.canonical`.
"""

from __future__ import annotations

import json
import threading
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ZeroInput
from .poly import MultiPoly, _content_v, poly_gcd
from .ratfunc import RatFunc


@dataclass
class FactoredValue:
    """constant * prod(entry[id] ** exp).  Exponents may reference retired ids until canonicalized."""

    exponents: dict = field(default_factory=dict)
    constant: Fraction = Fraction(1)

    def __mul__(self, other):
        e = Counter(self.exponents)
        for k, v in other.exponents.items():
            e[k] += v
        return FactoredValue({k: v for k, v in e.items() if v}, self.constant * other.constant)

    def __truediv__(self, other):
        return self * other.inverse()

    def inverse(self):
        return FactoredValue({k: -v for k, v in self.exponents.items()}, 1 / self.constant)

    def __pow__(self, k):
        return FactoredValue({i: v * k for i, v in self.exponents.items() if v * k}, self.constant ** k)

    def is_constant(self):
        return not self.exponents


def _fast_gcd(q, L, dq, dL):
    # linear polynomials are irreducible: the gcd is either them or 1
    if dL == 1:
        return L if L.divides(q) else None
    if dq == 1:
        return q if q.divides(L) else None
    g = poly_gcd(q, L)
    return None if g.is_constant() else g


def _split_once(q):
    """Cheap factor discovery: a content in some variable, or a repeated factor."""
    for v in q.variables():
        c = _content_v(q, v)
        if not c.is_constant():
            return [c.monic_normal(), q.exact_div(c).monic_normal()]
    v = q.variables()[0]
    g = poly_gcd(q, _deriv(q, v))
    if not g.is_constant():
        return [g, q.exact_div(g).monic_normal()]
    return None


def _deriv(p, v):
    i = v - 1
    t = {}
    for e, c in p.terms.items():
        if e[i]:
            t[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
    return MultiPoly(p.nvars, t)


class LetterRegistry:
    def __init__(self, nvars):
        self.nvars = nvars
        self.entries = []
        self.rewrite = {}
        self._vars = []
        self._deg = []
        self._index = {}
        self._special = {}
        self._cache = {}
        self.memo = {}
        self._lock = threading.Lock()

    # -- basic access -------------------------------------------------------

    def live_ids(self):
        return [i for i in range(len(self.entries)) if i not in self.rewrite]

    def is_live(self, i):
        return 0 <= i < len(self.entries) and i not in self.rewrite

    def name(self, i):
        e = self.entries[i]
        if isinstance(e, str):
            return e
        return f"({e})"

    def special(self, name):
        """A symbolic letter that is not a polynomial (used for the degeneration scale)."""
        if name not in self._special:
            self._special[name] = self._append(name)
        return self._special[name]

    def _append(self, p):
        self.entries.append(p)
        if isinstance(p, str):
            self._vars.append(frozenset())
            self._deg.append(0)
        else:
            self._vars.append(frozenset(p.variables()))
            self._deg.append(p.degree())
            self._index[p] = len(self.entries) - 1
        return len(self.entries) - 1

    def canonical(self, exps):
        """Rewrite an exponent map so that only live ids occur."""
        out = Counter()
        stack = list(exps.items())
        while stack:
            i, v = stack.pop()
            if i in self.rewrite:
                for j, w in self.rewrite[i].items():
                    stack.append((j, v * w))
            else:
                out[i] += v
        return {k: v for k, v in sorted(out.items()) if v}

    # -- refinement ---------------------------------------------------------

    def _insert(self, q):
        """Factor a normalized nonconstant polynomial, refining the basis as needed."""
        if q in self._index and self.is_live(self._index[q]):
            return {self._index[q]: 1}
        exps = Counter()
        restart = True
        while restart and not q.is_constant():
            restart = False
            qvars = frozenset(q.variables())
            dq = q.degree()
            for i in range(len(self.entries)):
                if i in self.rewrite or not (self._vars[i] & qvars):
                    continue
                L = self.entries[i]
                g = _fast_gcd(q, L, dq, self._deg[i])
                if g is None:
                    continue
                if g == L:
                    while not q.is_constant() and L.divides(q):
                        q = q.exact_div(L)
                        exps[i] += 1
                else:
                    h = L.exact_div(g)
                    self.rewrite[i] = {}
                    del self._index[L]
                    parts = Counter(self._insert(g))
                    for j, v in self._insert(h).items():
                        parts[j] += v
                    self.rewrite[i] = dict(parts)
                restart = True
                break
        if not q.is_constant():
            piece = _split_once(q)
            if piece is None:
                exps[self._append(q)] += 1
            else:
                for part in piece:
                    for j, v in self._insert(part).items():
                        exps[j] += v
        return exps

    def factor_poly(self, p):
        if p.is_zero():
            raise ZeroInput("cannot factor the zero polynomial")
        c, q = p.normalized()
        if q.is_constant():
            return FactoredValue({}, Fraction(c))
        return FactoredValue(dict(self._insert(q)), Fraction(c))

    def refine_register(self, f):
        """Factor ``f`` (RatFunc or MultiPoly) exactly over the registry."""
        if isinstance(f, MultiPoly):
            f = RatFunc(f, reduced=True)
        if f.is_zero():
            raise ZeroInput("cannot register the zero function")
        with self._lock:
            hit = self._cache.get(f)
            if hit is not None:
                return FactoredValue(self.canonical(hit.exponents), hit.constant)
            fn = self.factor_poly(f.num)
            fd = self.factor_poly(f.den)
            fv = fn / fd
            fv = FactoredValue(self.canonical(fv.exponents), fv.constant)
            self._cache[f] = fv
            return fv

    def reconstruct(self, fv):
        """The RatFunc represented by a FactoredValue (polynomial letters only)."""
        num = MultiPoly.const(self.nvars, 1)
        den = MultiPoly.const(self.nvars, 1)
        for i, v in self.canonical(fv.exponents).items():
            p = self.entries[i]
            if isinstance(p, str):
                raise ValueError(f"symbolic letter {p} has no polynomial value")
            if v > 0:
                num = num * p ** v
            else:
                den = den * p ** (-v)
        return RatFunc(num.scale(fv.constant), den)

    # -- persistence --------------------------------------------------------

    def dump(self):
        """JSON list of the live polynomial entries, in id order."""
        return json.dumps([str(self.entries[i]) for i in self.live_ids() if not isinstance(self.entries[i], str)])

    @classmethod
    def load(cls, text, nvars):
        from .poly import parse_poly

        reg = cls(nvars)
        for s in json.loads(text):
            reg.factor_poly(parse_poly(s, nvars))
        return reg
