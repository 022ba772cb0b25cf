"""Sparse multivariate polynomials over the rationals.

A polynomial in ``nvars`` variables x1..xn is a dict from exponent tuples to
nonzero coefficients.  Coefficients are kept as ``int`` when integral and as
``Fraction`` otherwise, which keeps the common case (integer polynomials
built from differences x_i - x_j) fast.

The gcd is the classical recursive algorithm: content and primitive part with
respect to the highest-index variable, then a primitive polynomial remainder
sequence in that variable.  Most gcds met in practice are trivial, so a cheap
exact coprimality certificate (univariate images modulo a prime) runs first.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from functools import reduce

from .errors import ParseError


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def grlex_key(exp):
    return (sum(exp), exp)


class MultiPoly:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = {}
        self._hash = None
        if terms:
            for e, c in terms.items():
                if c:
                    self.terms[tuple(e)] = _norm(c)

    @classmethod
    def _raw(cls, nvars, terms):
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, nvars):
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars, c):
        c = _norm(Fraction(c))
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, nvars, i):
        """The variable x_i (1-based)."""
        if not 1 <= i <= nvars:
            raise ValueError(f"variable x{i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i - 1] = 1
        return cls._raw(nvars, {tuple(e): 1})

    @classmethod
    def diff(cls, nvars, i, j):
        """x_i - x_j"""
        return cls.var(nvars, i) - cls.var(nvars, j)

    # -- predicates -----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        if not self.terms:
            return 0
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    # -- arithmetic -----------------------------------------------------

    def _check(self, other):
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = _norm(s)
            else:
                t.pop(e, None)
        return MultiPoly._raw(self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(self.terms) > len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        t = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = t.get(e, 0) + c1 * c2
                if s:
                    t[e] = s
                else:
                    del t[e]
        return MultiPoly._raw(self.nvars, {e: _norm(c) for e, c in t.items()})

    __rmul__ = __mul__

    def scale(self, c):
        c = _norm(Fraction(c)) if not isinstance(c, int) else c
        if not c:
            return MultiPoly.zero(self.nvars)
        return MultiPoly._raw(self.nvars, {e: _norm(v * c) for e, v in self.terms.items()})

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- structure ------------------------------------------------------

    def degree(self, i=None):
        """Total degree, or degree in x_i when ``i`` is given (1-based). -1 for zero."""
        if not self.terms:
            return -1
        if i is None:
            return max(sum(e) for e in self.terms)
        return max(e[i - 1] for e in self.terms)

    def variables(self):
        """Sorted 1-based indices of variables that occur."""
        seen = set()
        for e in self.terms:
            for k, x in enumerate(e):
                if x:
                    seen.add(k + 1)
        return sorted(seen)

    def leading(self):
        """(exponent, coefficient) of the graded-lex leading term."""
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def rational_content(self):
        """Positive rational c with self/c integral and primitive."""
        if not self.terms:
            return Fraction(1)
        nums = []
        dens = []
        for c in self.terms.values():
            c = Fraction(c)
            nums.append(c.numerator)
            dens.append(c.denominator)
        g = reduce(math.gcd, nums)
        lcm = reduce(lambda a, b: a * b // math.gcd(a, b), dens)
        return Fraction(abs(g), lcm)

    def normalized(self):
        """Return (c, p) with self = c * p, p primitive integral with positive leading coefficient."""
        if not self.terms:
            raise ValueError("cannot normalize the zero polynomial")
        c = self.rational_content()
        if self.leading()[1] < 0:
            c = -c
        return _norm(c), self.scale(1 / c)

    def monic_normal(self):
        return self.normalized()[1]

    def evaluate(self, point):
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        total = Fraction(0)
        for e, c in self.terms.items():
            v = Fraction(c)
            for x, k in zip(point, e):
                if k:
                    v *= Fraction(x) ** k
            total += v
        return _norm(total)

    def substitute(self, images):
        """Substitute x_i -> images[i] (dict of 1-based index to MultiPoly, possibly
        with a different variable count).  Unlisted variables map to themselves and
        therefore require matching variable counts."""
        if not self.terms:
            n = next(iter(images.values())).nvars if images else self.nvars
            return MultiPoly.zero(n)
        target = next(iter(images.values())).nvars if images else self.nvars
        full = []
        for i in range(1, self.nvars + 1):
            if i in images:
                full.append(images[i])
            else:
                full.append(MultiPoly.var(target, i))
        powers = [dict() for _ in range(self.nvars)]
        result = MultiPoly.zero(target)
        one = MultiPoly.const(target, 1)
        for e, c in self.terms.items():
            m = one
            for i, k in enumerate(e):
                if k:
                    pk = powers[i].get(k)
                    if pk is None:
                        pk = full[i] ** k
                        powers[i][k] = pk
                    m = m * pk
            result = result + m.scale(c)
        return result

    def extend(self, nvars):
        """Same polynomial viewed in more variables."""
        if nvars < self.nvars:
            raise ValueError("cannot shrink variable count")
        pad = (0,) * (nvars - self.nvars)
        return MultiPoly._raw(nvars, {e + pad: c for e, c in self.terms.items()})

    # -- text -------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}") for i, k in enumerate(e) if k
            )
            c = Fraction(c)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if mono and a == 1:
                body = mono
            elif mono:
                body = f"{a}*{mono}"
            else:
                body = str(a)
            out.append((sign, body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {str(self)!r})"

    # -- division ---------------------------------------------------------

    def exact_div(self, other):
        """self / other, raising ValueError if the division is not exact."""
        q, r = divmod_lex(self, other)
        if not r.is_zero():
            raise ValueError("polynomial division is not exact")
        return q

    def divides(self, other):
        """True when self divides other exactly."""
        if self.is_zero():
            return other.is_zero()
        return divmod_lex(other, self)[1].is_zero()


def divmod_lex(a, b):
    """Multivariate division with lex leading terms.  Exact divisibility yields a zero remainder."""
    a._check(b)
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    lb = max(b.terms)
    cb = b.terms[lb]
    q = {}
    r = dict(a.terms)
    rem = {}
    while r:
        lr = max(r)
        cr = r[lr]
        if all(x >= y for x, y in zip(lr, lb)):
            shift = tuple(x - y for x, y in zip(lr, lb))
            f = _norm(Fraction(cr) / cb)
            q[shift] = f
            for e, c in b.terms.items():
                ee = tuple(x + y for x, y in zip(e, shift))
                s = r.get(ee, 0) - f * c
                if s:
                    r[ee] = _norm(s)
                else:
                    r.pop(ee, None)
        else:
            rem[lr] = cr
            del r[lr]
    return MultiPoly._raw(a.nvars, q), MultiPoly._raw(a.nvars, rem)


# -- gcd ---------------------------------------------------------------------


def _coeffs_in(p, v):
    """Split p as sum_k c_k * x_v^k; returns {k: c_k} with c_k free of x_v."""
    out = {}
    i = v - 1
    for e, c in p.terms.items():
        k = e[i]
        ee = e[:i] + (0,) + e[i + 1:]
        out.setdefault(k, {})[ee] = c
    return {k: MultiPoly._raw(p.nvars, t) for k, t in out.items()}


def _from_coeffs(cs, v, nvars):
    t = {}
    i = v - 1
    for k, c in cs.items():
        for e, x in c.terms.items():
            t[e[:i] + (k,) + e[i + 1:]] = x
    return MultiPoly._raw(nvars, t)


def _xpow(nvars, v, k):
    e = [0] * nvars
    e[v - 1] = k
    return MultiPoly._raw(nvars, {tuple(e): 1})


def _content_v(p, v):
    g = None
    for c in _coeffs_in(p, v).values():
        g = c if g is None else _gcd(g, c)
        if g.is_constant():
            return MultiPoly.const(p.nvars, 1)
    return g


def _prem(a, b, v):
    db = b.degree(v)
    cb = _coeffs_in(b, v)
    lcb = cb[db]
    r = a
    while not r.is_zero():
        dr = r.degree(v)
        if dr < db:
            break
        lcr = _coeffs_in(r, v)[dr]
        r = r * lcb - lcr * _xpow(r.nvars, v, dr - db) * b
    return r


def _pp_v(p, v):
    c = _content_v(p, v)
    if c.is_constant():
        return p.monic_normal()
    return p.exact_div(c).monic_normal()


_P = (1 << 61) - 1
_rng = random.Random(20240521)


def _image_mod_p(p, v, point):
    """Coefficients (low to high) of p in x_v with the other variables set to ``point``, mod _P."""
    i = v - 1
    out = [0] * (p.degree(v) + 1)
    for e, c in p.terms.items():
        c = Fraction(c)
        t = c.numerator * pow(c.denominator, -1, _P)
        for j, k in enumerate(e):
            if k and j != i:
                t = t * pow(point[j], k, _P)
        out[e[i]] = (out[e[i]] + t) % _P
    return out


def _uni_gcd_degree_mod_p(f, g):
    def trim(h):
        while h and h[-1] == 0:
            h.pop()
        return h

    f, g = trim(list(f)), trim(list(g))
    while g:
        inv = pow(g[-1], -1, _P)
        while len(f) >= len(g):
            q = f[-1] * inv % _P
            shift = len(f) - len(g)
            for k, gk in enumerate(g):
                f[shift + k] = (f[shift + k] - q * gk) % _P
            trim(f)
            if not f:
                break
        f, g = g, f
    return len(f) - 1


def _certainly_coprime(a, b):
    """True only if gcd(a, b) is constant.

    For each shared variable v, a gcd of positive degree in v survives as a
    common factor of the univariate images whenever the leading coefficients in
    v do not vanish at the evaluation point, also modulo a prime.
    """
    shared = set(a.variables()) & set(b.variables())
    for v in shared:
        point = [_rng.randrange(2, _P) for _ in range(a.nvars)]
        try:
            fa, fb = _image_mod_p(a, v, point), _image_mod_p(b, v, point)
        except ValueError:  # a denominator divisible by the prime
            return False
        if fa[-1] == 0 or fb[-1] == 0:
            return False
        if _uni_gcd_degree_mod_p(fa, fb) > 0:
            return False
    return True


def _gcd(a, b):
    """gcd of nonzero-or-zero polynomials, normalized (primitive, positive lead)."""
    if a.is_zero():
        return b.monic_normal() if not b.is_zero() else b
    if b.is_zero():
        return a.monic_normal()
    if a.is_constant() or b.is_constant():
        return MultiPoly.const(a.nvars, 1)
    va, vb = set(a.variables()), set(b.variables())
    if not va & vb:
        return MultiPoly.const(a.nvars, 1)
    if len(va | vb) > 1 and _certainly_coprime(a, b):
        return MultiPoly.const(a.nvars, 1)
    v = max(va | vb)
    if v not in va:
        return _gcd(a, _content_v(b, v))
    if v not in vb:
        return _gcd(_content_v(a, v), b)
    ca, cb = _content_v(a, v), _content_v(b, v)
    g = _gcd(ca, cb)
    A = a if ca.is_constant() else a.exact_div(ca)
    B = b if cb.is_constant() else b.exact_div(cb)
    A, B = A.monic_normal(), B.monic_normal()
    if A.degree(v) < B.degree(v):
        A, B = B, A
    while not B.is_zero() and B.degree(v) > 0:
        R = _prem(A, B, v)
        A, B = B, (R if R.is_zero() else _pp_v(R, v))
    if not B.is_zero():
        # B is free of x_v and nonzero: primitive parts are coprime
        return g.monic_normal()
    return (g * A).monic_normal()


def poly_gcd(a, b):
    """Greatest common divisor with content 1 and positive leading coefficient."""
    a._check(b)
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    return _gcd(a, b)


# -- parsing -----------------------------------------------------------------

def parse_poly(text, nvars):
    """Parse the canonical rendering (and ordinary arithmetic) into a MultiPoly."""
    from .ratfunc import parse_ratfunc

    f = parse_ratfunc(text, nvars)
    if not f.den.is_constant():
        raise ParseError(f"not a polynomial: {text!r}")
    return f.num.scale(Fraction(1) / Fraction(f.den.constant_value()))
