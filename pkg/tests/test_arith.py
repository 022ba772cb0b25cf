from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from polygonal_mpl.errors import PoleAtPoint, ZeroInput
from polygonal_mpl.poly import MultiPoly, parse_poly, poly_gcd
from polygonal_mpl.ratfunc import RatFunc, parse_ratfunc
from polygonal_mpl.registry import LetterRegistry


def xs(n):
    return [MultiPoly.var(n, i) for i in range(1, n + 1)]


def test_difference_of_squares():
    x1, x2 = xs(2)
    assert (x1 - x2) * (x1 + x2) == x1 ** 2 - x2 ** 2


def test_add_zero():
    x1, x2, x3 = xs(3)
    p = x1 * x2 - 3 * x3 + 1
    assert p + MultiPoly.zero(3) == p


def test_telescoping_product():
    x1, x2, x3 = xs(3)
    assert ((x1 - x2) + (x2 - x3)) * (x3 - x1) == -((x1 - x3) ** 2)


def test_gcd_common_factor():
    x1, x2, x3, x4 = xs(4)
    assert poly_gcd((x1 - x2) * (x2 - x3), (x1 - x2) * (x3 - x4)) == x1 - x2


def test_gcd_with_zero_is_normalized():
    x1, x2 = xs(2)
    assert poly_gcd(2 * x1 + 4 * x2, MultiPoly.zero(2)) == x1 + 2 * x2


def test_gcd_univariate():
    (x,) = xs(1)
    assert poly_gcd(x ** 2 - 1, x ** 2 - 2 * x + 1) == x - 1


def test_parse_and_render_roundtrip():
    p = parse_poly("x1^2 - 3/2*x2*x3 + 7", 3)
    assert parse_poly(str(p), 3) == p
    assert str(p) == "x1^2 - 3/2*x2*x3 + 7"


def test_evaluate():
    f = parse_ratfunc("(x1-x2)/(x3-x4)", 4)
    assert f.evaluate([1, 2, 3, 4]) == 1
    assert RatFunc.const(4, 5).evaluate([9, 9, 9, 9]) == 5
    g = parse_ratfunc("(x1-x2)*(x3-x4)/((x2-x3)*(x4-x1))", 4)
    assert g.evaluate([1, 2, 3, 4]) == Fraction(-1, 3)


def test_evaluate_at_pole():
    f = parse_ratfunc("1/(x1-x2)", 2)
    with pytest.raises(PoleAtPoint):
        f.evaluate([1, 1])


def test_registry_split():
    (x,) = xs(1)
    reg = LetterRegistry(1)
    reg.refine_register(x - 1)
    fv = reg.refine_register(x ** 2 - 1)
    live = sorted(str(reg.entries[i]) for i in reg.live_ids())
    assert live == ["x1 + 1", "x1 - 1"]
    names = {str(reg.entries[i]): e for i, e in fv.exponents.items()}
    assert names == {"x1 - 1": 1, "x1 + 1": 1}


def test_registry_idempotent():
    reg = LetterRegistry(2)
    f = parse_ratfunc("(x1-x2)^2/(x1+x2)", 2)
    assert reg.refine_register(f) == reg.refine_register(f)


def test_registry_constant_and_exponents():
    reg = LetterRegistry(3)
    f = parse_ratfunc("7/3*(x1-x2)^2/(x2-x3)", 3)
    fv = reg.refine_register(f)
    assert fv.constant == Fraction(7, 3)
    names = {str(reg.entries[i]): e for i, e in fv.exponents.items()}
    assert names == {"x1 - x2": 2, "x2 - x3": -1}
    assert reg.reconstruct(fv) == f


def test_registry_rejects_zero():
    with pytest.raises(ZeroInput):
        LetterRegistry(1).refine_register(RatFunc.const(1, 0))


def test_registry_dump_load():
    reg = LetterRegistry(2)
    reg.refine_register(parse_ratfunc("(x1-x2)*(x1+x2)", 2))
    again = LetterRegistry.load(reg.dump(), 2)
    assert again.dump() == reg.dump()


# -- properties -------------------------------------------------------------------

small = st.integers(-3, 3)


@st.composite
def polys(draw, n=3, max_terms=4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        e = tuple(draw(st.integers(0, 2)) for _ in range(n))
        terms[e] = Fraction(draw(small))
    return MultiPoly(n, terms)


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == MultiPoly.zero(3)


@settings(max_examples=40, deadline=None)
@given(polys(max_terms=3), polys(max_terms=3), polys(max_terms=3))
def test_gcd_divides_both(a, b, c):
    if a.is_zero() or b.is_zero() or c.is_zero():
        return
    g = poly_gcd(a * c, b * c)
    assert g.divides(a * c) and g.divides(b * c)
    assert c.normalized()[1].divides(g) or c.is_constant()


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 3), st.integers(1, 3), st.integers(-2, 2)), min_size=1, max_size=4))
def test_registry_reconstructs(factors):
    n = 3
    x = [RatFunc.var(n, i) for i in range(1, n + 1)]
    f = RatFunc.const(n, 2)
    for i, j, e in factors:
        if i == j or e == 0:
            continue
        d = x[i - 1] - x[j - 1] + 1
        f = f * (d ** e if e > 0 else d.inverse() ** (-e))
    reg = LetterRegistry(n)
    fv = reg.refine_register(f)
    assert reg.reconstruct(fv) == f
    # letters stay pairwise coprime
    live = [reg.entries[i] for i in reg.live_ids()]
    for a in range(len(live)):
        for b in range(a + 1, len(live)):
            assert poly_gcd(live[a], live[b]).is_constant()


def test_gcd_certificate_never_claims_a_shared_factor_away():
    from polygonal_mpl.poly import _certainly_coprime

    x1, x2, x3, x4 = xs(4)
    common = x1 * x3 - x2 * x4 + 1
    assert not _certainly_coprime(common * (x1 + x2), common * (x3 - 2))
    assert poly_gcd(common * (x1 + x2), common * (x3 - 2)) == common
    assert _certainly_coprime(x1 * x3 - x2, x1 + x2 * x4)


@settings(max_examples=40, deadline=None)
@given(polys(max_terms=3), polys(max_terms=3), polys(max_terms=2))
def test_gcd_certificate_is_sound(a, b, c):
    from polygonal_mpl.poly import _certainly_coprime

    if a.is_zero() or b.is_zero() or c.is_constant():
        return
    assert not _certainly_coprime(a * c, b * c)
