"""Exact rational functions in x1..xn over the rationals."""

from __future__ import annotations

import ast
from fractions import Fraction

from .errors import ParseError, PoleAtPoint
from .poly import MultiPoly, poly_gcd


class RatFunc:
    """num/den in lowest terms; den primitive with positive graded-lex leading coefficient."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, *, reduced=False):
        if den is None:
            den = MultiPoly.const(num.nvars, 1)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            den = MultiPoly.const(num.nvars, 1)
        elif not reduced and not den.is_constant():
            g = poly_gcd(num, den)
            if not g.is_constant():
                num, den = num.exact_div(g), den.exact_div(g)
        c, den = den.normalized() if not den.is_zero() else (1, den)
        if c != 1:
            num = num.scale(Fraction(1) / c)
        self.num = num
        self.den = den
        self._hash = None

    @property
    def nvars(self):
        return self.num.nvars

    @classmethod
    def const(cls, nvars, c):
        return cls(MultiPoly.const(nvars, c), reduced=True)

    @classmethod
    def var(cls, nvars, i):
        return cls(MultiPoly.var(nvars, i), reduced=True)

    def is_zero(self):
        return self.num.is_zero()

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self):
        return Fraction(self.num.constant_value()) / Fraction(self.den.constant_value())

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, MultiPoly):
            return RatFunc(other, reduced=True)
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFunc(self.den, self.num, reduced=True)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num ** k, self.den ** k, reduced=True)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if isinstance(other, MultiPoly):
            other = RatFunc(other, reduced=True)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def evaluate(self, point):
        d = self.den.evaluate(point)
        if d == 0:
            raise PoleAtPoint(f"denominator {self.den} vanishes at {tuple(str(p) for p in point)}")
        return Fraction(self.num.evaluate(point)) / d

    def substitute(self, images):
        """Substitute variables by polynomials or rational functions (1-based dict)."""
        polys = {}
        dens = {}
        for i, img in images.items():
            if isinstance(img, RatFunc):
                polys[i] = img
            else:
                polys[i] = RatFunc(img, reduced=True)
            dens[i] = polys[i]
        if all(f.den.is_constant() for f in polys.values()):
            pm = {i: f.num.scale(Fraction(1) / Fraction(f.den.constant_value())) for i, f in polys.items()}
            num = self.num.substitute(pm)
            den = self.den.substitute(pm)
            if den.is_zero():
                raise ZeroDivisionError("denominator vanishes under substitution")
            return RatFunc(num, den)
        return _subst_general(self.num, polys) / _subst_general(self.den, polys)

    def extend(self, nvars):
        return RatFunc(self.num.extend(nvars), self.den.extend(nvars), reduced=True)

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        n = str(self.num)
        if len(self.num.terms) > 1:
            n = f"({n})"
        d = str(self.den)
        if len(self.den.terms) > 1 or not self.den.is_constant() and self.den.degree() > 1:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RatFunc({str(self)!r})"


def _subst_general(p, images):
    n = next(iter(images.values())).nvars
    result = RatFunc.const(n, 0)
    for e, c in p.terms.items():
        m = RatFunc.const(n, c)
        for i, k in enumerate(e):
            if k:
                img = images.get(i + 1) or RatFunc.var(n, i + 1)
                m = m * img ** k
        result = result + m
    return result


_BINOPS = {ast.Add: "__add__", ast.Sub: "__sub__", ast.Mult: "__mul__", ast.Div: "__truediv__"}


def parse_ratfunc(text, nvars):
    """Parse an arithmetic expression in x1..xn, integers, + - * / and ^ (or **)."""
    src = text.replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return RatFunc.const(nvars, node.value)
        if isinstance(node, ast.Name):
            name = node.id
            if name.startswith("x") and name[1:].isdigit():
                i = int(name[1:])
                if not 1 <= i <= nvars:
                    raise ParseError(f"variable {name} out of range (nvars={nvars})")
                return RatFunc.var(nvars, i)
            raise ParseError(f"unknown symbol {name!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = node.right
                neg = False
                if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                    neg, exp = True, exp.operand
                if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
                    raise ParseError("exponents must be integer literals")
                return walk(node.left) ** (-exp.value if neg else exp.value)
            op = _BINOPS.get(type(node.op))
            if op is None:
                raise ParseError(f"unsupported operator in {text!r}")
            left, right = walk(node.left), walk(node.right)
            try:
                return getattr(left, op)(right)
            except ZeroDivisionError:
                raise ParseError(f"division by zero in {text!r}") from None
        raise ParseError(f"unsupported syntax in {text!r}")

    return walk(tree)
