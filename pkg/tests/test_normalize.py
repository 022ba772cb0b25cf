import pytest

from polygonal_mpl.errors import UnsupportedComposition
from polygonal_mpl.mpl import expression_symbol
from polygonal_mpl.normalize import depth_normalize, is_normal
from polygonal_mpl.registry import LetterRegistry
from polygonal_mpl.tensor import is_zero_mod_products


def check(recipe):
    reg = LetterRegistry(len(recipe.comp))
    assert is_zero_mod_products(expression_symbol(recipe.expression(), reg))
    for t in recipe.terms:
        assert len(t.comp) < len(recipe.comp) or is_normal(t.comp)


def test_normal_form_is_identity():
    r = depth_normalize((3, 1))
    assert r.terms == [r.target]
    assert r.verified


def test_two_two():
    r = depth_normalize((2, 2))
    assert r.verified
    assert len(r.terms) == 3
    assert r.steps["shuffle"] >= 1
    check(r)


def test_weight_five():
    for comp in [(1, 2, 2), (2, 1, 2), (2, 2, 1)]:
        r = depth_normalize(comp)
        assert r.verified
        check(r)


def test_weight_six_sample():
    r = depth_normalize((2, 2, 1, 1))
    assert r.verified
    check(r)


def test_strict_normal_form():
    r = depth_normalize((1, 3), strict=True)
    assert all(t.comp == (3, 1) or len(t.comp) < 2 for t in r.terms)
    check(r)
    r = depth_normalize((2, 2), strict=True)
    assert all(t.comp[0] == 3 or len(t.comp) < 2 for t in r.terms)


def test_rejects_wrong_depth():
    with pytest.raises(UnsupportedComposition):
        depth_normalize((2, 3))
    with pytest.raises(UnsupportedComposition):
        depth_normalize((1, 1, 1, 1, 1, 1, 1, 2))


def test_recipe_renders():
    text = str(depth_normalize((2, 2)))
    assert text.startswith("I_{2,2}(x1, x2) =")
    assert "relations used" in text
