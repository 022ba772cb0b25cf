"""Nested-series evaluation of Li_{n1..nd} inside the direct convergence domain.

Li_{n1..nd}(z1..zd) = sum over 0 < k1 < ... < kd of z1^k1...zd^kd / (k1^n1...kd^nd).

Writing k_j = k_{j-1} + m_j turns the summand into prod_j s_j^{m_j} / prod k_j^{n_j}
with suffix products s_j = z_j...z_d, so the series converges geometrically when
every |s_j| < 1.  Truncating at k_d <= K leaves a tail bounded by

    sum_{M > K} binom(M-1, d-1) q^M / (K+1)^{n_d},    q = max |s_j|,

which is summed in closed form once the term ratio drops below 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import OutsideDomain, PrecisionUnreachable
from .mpl import FunctionTerm, ProductTerm, as_kind

MAX_TERMS = 2_000_000


@dataclass(frozen=True)
class SeriesParams:
    error: float = 1e-30
    prec: int = 256
    K: int | None = None
    delta: float = 0.05

    def __post_init__(self):
        if self.prec < 64:
            raise ValueError("precision must be at least 64 bits")
        if not self.error > 0:
            raise ValueError("target error must be positive")
        if self.K is not None and self.K < 1:
            raise ValueError("truncation order must be >= 1")


@dataclass
class NumericResult:
    value: mpmath.mpc
    bound: mpmath.mpf
    K: int

    def __str__(self):
        return f"{mpmath.nstr(self.value, 30)}  (+/- {mpmath.nstr(self.bound, 3)}, K={self.K})"


def _to_mp(z):
    if isinstance(z, Fraction):
        return mpmath.mpf(z.numerator) / z.denominator
    return mpmath.mpmathify(z)


def suffix_moduli(args):
    out = []
    acc = mpmath.mpf(1)
    for z in reversed(args):
        acc = acc * z
        out.append(abs(acc))
    return out[::-1]


def tail_bound(comp, q, K):
    """Upper bound for the part of the series with k_d > K."""
    d = len(comp)
    if q == 0:
        return mpmath.mpf(0)
    M = K + 1
    first = mpmath.binomial(M - 1, d - 1) * q ** M
    ratio = M * q / (M - d + 1)
    if ratio >= 1:
        return mpmath.inf
    return first / (1 - ratio) / mpmath.mpf(M) ** comp[-1]


def _pick_K(comp, q, target):
    K = max(len(comp), 8)
    while tail_bound(comp, q, K) > target:
        K *= 2
        if K > MAX_TERMS:
            raise PrecisionUnreachable(f"tail bound cannot reach {target} within {MAX_TERMS} terms")
    lo, hi = K // 2, K
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tail_bound(comp, q, mid) > target:
            lo = mid
        else:
            hi = mid
    return hi


def li_eval(comp, args, params=SeriesParams()):
    comp = tuple(comp)
    if len(args) != len(comp):
        raise ValueError("one argument per composition part")
    with mpmath.workprec(params.prec):
        z = [mpmath.mpc(_to_mp(a)) for a in args]
        mods = suffix_moduli(z)
        q = max(mods)
        if q >= 1 - params.delta:
            raise OutsideDomain(f"suffix product modulus {mpmath.nstr(q, 5)} not below 1 - {params.delta}")
        target = mpmath.mpf(params.error)
        if params.K is None:
            K = _pick_K(comp, q, target)
        else:
            K = params.K
            if tail_bound(comp, q, K) > target:
                raise PrecisionUnreachable(f"K={K} gives tail bound {mpmath.nstr(tail_bound(comp, q, K), 3)} > {params.error}")
        d = len(comp)
        # partial[j] = sum over k1 < ... < kj <= k of the first j factors
        partial = [mpmath.mpc(1)] + [mpmath.mpc(0)] * d
        powers = [mpmath.mpc(1)] * d
        for k in range(1, K + 1):
            kk = mpmath.mpf(k)
            for j in range(d):
                powers[j] *= z[j]
            for j in range(d, 0, -1):
                partial[j] += partial[j - 1] * powers[j - 1] / kk ** comp[j - 1]
        return NumericResult(partial[d], tail_bound(comp, q, K), K)


def term_value(t, point, params):
    """(value, error bound) of a FunctionTerm or ProductTerm at a rational point."""
    if isinstance(t, ProductTerm):
        val, err = mpmath.mpc(1), mpmath.mpf(0)
        for f in t.factors:
            v, e = term_value(f.with_coeff(1), point, params)
            err = abs(val) * e + abs(v) * err + err * e
            val *= v
        return val * _to_mp(t.coeff), err * abs(_to_mp(t.coeff))
    li = as_kind(t, "Li")
    zs = [a.evaluate(point) for a in li.args]
    r = li_eval(li.comp, zs, params)
    c = _to_mp(li.coeff)
    return r.value * c, r.bound * abs(c)


@dataclass
class CheckResult:
    passed: bool
    residual: mpmath.mpf
    value: mpmath.mpc

    def __str__(self):
        word = "pass" if self.passed else "fail"
        return f"{word} residual={mpmath.nstr(self.residual, 5)}"


def check_numeric(expr, point, params=SeriesParams()):
    """Evaluate an expression at a rational point and compare |value| with 10x the target error."""
    point = [Fraction(p) for p in point]
    with mpmath.workprec(params.prec):
        total = mpmath.mpc(0)
        for i, t in enumerate(expr.terms):
            try:
                v, _ = term_value(t, point, params)
            except OutsideDomain as exc:
                raise OutsideDomain(f"term {i} ({t}): {exc}") from None
            total += v
        res = abs(total)
        return CheckResult(bool(res <= 10 * mpmath.mpf(params.error)), res, total)


def li_term(comp, *args, coeff=1, nvars=1):
    """Small helper: an Li FunctionTerm at constant rational arguments."""
    from .ratfunc import RatFunc

    return FunctionTerm(coeff, "Li", tuple(comp), tuple(RatFunc.const(nvars, Fraction(a)) for a in args))
