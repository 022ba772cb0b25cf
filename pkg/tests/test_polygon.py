import itertools
from fractions import Fraction
from math import comb

import pytest

from oracles import brute_quadrangulations, crosses

from polygonal_mpl.errors import BadIndexList, DecorationMismatch, InfeasibleMultiset, NoQuadrangulation
from polygonal_mpl.mpl import FunctionTerm
from polygonal_mpl.polygon import (
    DecoratedCell,
    TermTemplate,
    cyclic_ratio,
    enumerate_even_dissections,
    enumerate_quadrangulations,
    fan_template,
    fuss_catalan,
    generate_ansatz,
    instantiate,
    merge_in_order,
)


def test_cyclic_ratio_value():
    assert cyclic_ratio([1, 2, 3, 4], 4).evaluate([1, 2, 3, 4]) == Fraction(-1, 3)


def test_cyclic_ratio_rotation_is_reciprocal():
    for idx in ([1, 2, 3, 4], [1, 3, 2, 5, 4, 6]):
        r = cyclic_ratio(idx, 6)
        assert cyclic_ratio(idx[1:] + idx[:1], 6) == r.inverse()


def test_cyclic_ratio_reversal():
    assert cyclic_ratio([4, 3, 2, 1], 4) == cyclic_ratio([1, 2, 3, 4], 4)


@pytest.mark.parametrize("bad", [[1, 2, 3], [1, 2, 2, 3], [1, 2, 3, 9], []])
def test_cyclic_ratio_bad_indices(bad):
    with pytest.raises(BadIndexList):
        cyclic_ratio(bad, 4)


@pytest.mark.parametrize("n", [4, 6, 8, 10])
def test_quadrangulation_counts(n):
    got = enumerate_quadrangulations(n)
    assert len(got) == brute_quadrangulations(n) == fuss_catalan((n - 2) // 2)


def test_fuss_catalan_values():
    assert [fuss_catalan(m) for m in (1, 2, 3, 4, 5)] == [1, 3, 12, 55, 273]
    assert fuss_catalan(5) == comb(15, 5) // 11


def test_quadrangulations_are_noncrossing():
    for d in enumerate_quadrangulations(10):
        assert all(not crosses(p, q) for p, q in itertools.combinations(d.diagonals, 2))
        assert sorted(len(c) for c in d.cells) == [4, 4, 4, 4]


def test_odd_polygon_has_none():
    with pytest.raises(NoQuadrangulation):
        enumerate_quadrangulations(7)


def test_even_dissections_single_cell():
    (d,) = enumerate_even_dissections(8, multiset=(8,))
    assert d.diagonals == frozenset()


def test_even_dissections_four_six():
    got = enumerate_even_dissections(8, multiset=(4, 6))
    # one diagonal splitting off a quadrilateral: it spans three edges
    oracle = [(a, b) for a, b in itertools.combinations(range(1, 9), 2) if b - a in (3, 5)]
    assert len(got) == len(oracle) == 8


def test_even_dissections_match_quadrangulations():
    assert len(enumerate_even_dissections(8, multiset=(4, 4, 4))) == 12
    assert {d.diagonals for d in enumerate_even_dissections(8, multiset=(4, 4, 4))} == {
        d.diagonals for d in enumerate_quadrangulations(8)
    }


def test_even_dissections_all_sizes():
    # 8-gon: {8} + {4,6} + {4,4,4}
    assert len(enumerate_even_dissections(8)) == 1 + 8 + 12


def test_infeasible_multiset():
    with pytest.raises(InfeasibleMultiset):
        enumerate_even_dissections(8, multiset=(4, 4))
    with pytest.raises(InfeasibleMultiset):
        enumerate_even_dissections(8, multiset=(5, 5))


# -- templates --------------------------------------------------------------------


def q5_expected():
    n = 8
    v = lambda k: (k - 1) % n + 1
    out = []
    for j in range(1, n + 1):
        cells = [[j + 1, j + 2, j + 3, j + 4], [j + 1, j + 4, j + 5, j + 6], [j + 1, j + 6, j + 7, j + 8]]
        args = tuple(cyclic_ratio([v(k) for k in c], n) for c in cells)
        out.append(FunctionTerm(-4, "IN", (3, 1, 1), args))
    return out


def test_q5_leading_orbit():
    got = instantiate(fan_template())
    assert len(got.terms) == 8
    assert got.terms == q5_expected()
    assert [str(t) for t in got.terms] == [str(t) for t in q5_expected()]


def test_symmetrize_none_single_term():
    tpl = TermTemplate(1, "Li", (2,), (DecoratedCell((1, 2, 3, 4), 1, 1),), "none", 4)
    e = instantiate(tpl)
    assert len(e.terms) == 1
    assert e.terms[0].args == (cyclic_ratio([1, 2, 3, 4], 4),)


def test_signed_orbit():
    # shifts by 1 invert the ratio and shifts by 2 fix it, so signs pair up
    tpl = TermTemplate(1, "Li", (2,), (DecoratedCell((1, 2, 3, 4), 1, 1),), "signed", 4)
    e = instantiate(tpl)
    r = cyclic_ratio([1, 2, 3, 4], 4)
    assert {(t.args[0] == r, t.coeff) for t in e.terms} == {(True, 2), (False, -2)}


def test_opposite_signs_cancel():
    t = FunctionTerm(1, "Li", (2,), (cyclic_ratio([1, 2, 3, 4], 4),))
    assert merge_in_order([t, t.with_coeff(-1)]).terms == []


def test_decoration_errors():
    with pytest.raises(DecorationMismatch):
        TermTemplate(1, "Li", (2,), (DecoratedCell((1, 2, 3, 4), 5, 1),), "none", 4)
    with pytest.raises(DecorationMismatch):
        TermTemplate(1, "Li", (2, 1), (DecoratedCell((1, 2, 3, 4), 1, 1),), "none", 4)
    with pytest.raises(DecorationMismatch):
        instantiate(fan_template(), size=10)


def test_ansatz_square():
    assert len(generate_ansatz(4, 2, [(2,)], symmetrize="none")) == 4
    assert len(generate_ansatz(4, 2, [(2,)])) == 1


def test_ansatz_one_cell_count():
    # every 4-subset of the 8-gon with one of its vertices as anchor
    none = generate_ansatz(8, 5, [(5,)], symmetrize="none", cell_sizes=(4,))
    assert len(none) == comb(8, 4) * 4
    # rotations act freely on anchored subsets
    assert len(generate_ansatz(8, 5, [(5,)], cell_sizes=(4,))) == comb(8, 4) * 4 // 8


def test_ansatz_contains_q5():
    from polygonal_mpl.polygon import canonical_rotation

    ans = generate_ansatz(8, 5, [(3, 1, 1)], kind="IN", cell_sizes=(4,))
    keys = {t.key() for t in ans}
    assert canonical_rotation(fan_template(coeff=1)).key() in keys
