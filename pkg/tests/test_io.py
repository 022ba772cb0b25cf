import json
from fractions import Fraction

import pytest

from polygonal_mpl import io
from polygonal_mpl.errors import ParseError
from polygonal_mpl.lab import SearchProblem, catalog_entry, five_term, li2
from polygonal_mpl.mpl import expression_symbol
from polygonal_mpl.polygon import cyclic_ratio, fan_template, generate_ansatz
from polygonal_mpl.ratfunc import RatFunc
from polygonal_mpl.registry import LetterRegistry


def through_text(d):
    return json.loads(io.dumps(d))


def test_expression_roundtrip():
    e = catalog_entry("reflection").expr
    back = io.expression_from_json(through_text(io.expression_to_json(e)))
    assert back == e


def test_identity_roundtrip():
    idn = catalog_entry("five-term")
    idn.coefficients = {"a": Fraction(1, 2)}
    back = io.identity_from_json(through_text(io.identity_to_json(idn)))
    assert back.expr == idn.expr
    assert (back.status, back.name, back.polygon, back.coefficients) == ("verified", "five-term", 5, {"a": Fraction(1, 2)})


def test_empty_identity_roundtrip():
    idn = catalog_entry("Q7")
    back = io.identity_from_json(through_text(io.identity_to_json(idn)))
    assert back.expr.terms == [] and back.orbits == 121


def test_template_roundtrip():
    ts = generate_ansatz(8, 5, [(3, 1, 1)], cell_sizes=(4,))[:5] + [fan_template()]
    back = io.templates_from_json(through_text(io.templates_to_json(ts)))
    assert back == ts


def test_signed_alias():
    d = io.template_to_json(fan_template(symmetrize="signed"))
    assert d["symmetrize"] == "signedCyclic"
    assert io.template_from_json(d).symmetrize == "signed"


def test_problem_roundtrip():
    x = RatFunc.var(1, 1)
    p = SearchProblem([li2(x), li2(x.inverse())], ["a", "b"], frozen={"a": 2})
    back = io.problem_from_json(through_text(io.problem_to_json(p, 1)))
    assert back.generators == p.generators
    assert back.names == p.names and back.frozen == {"a": 2}


def test_symbol_roundtrip():
    reg = LetterRegistry(5)
    s = expression_symbol(five_term().scale(Fraction(3, 2)), reg)
    d = through_text(io.symbol_to_json(s, reg))
    fresh = LetterRegistry(5)
    back = io.symbol_from_json(d, fresh)
    assert io.symbol_to_json(back, fresh) == d


def test_cyclic_ratio_argument():
    d = {"nvars": 4, "terms": [{"kind": "Li", "comp": [2], "args": [{"cr": [1, 2, 3, 4]}]}]}
    e = io.expression_from_json(d)
    assert e.terms[0].args[0] == cyclic_ratio([1, 2, 3, 4], 4)


@pytest.mark.parametrize(
    "payload",
    [
        {"schema": "other/9", "nvars": 1, "terms": []},
        {"terms": []},
        {"nvars": 1, "terms": [{"comp": [2], "args": ["x1"]}]},
        {"nvars": 1, "terms": [{"kind": "Li", "comp": [2], "args": [{"bad": 1}]}]},
        {"nvars": 1, "terms": [{"kind": "Li", "comp": [2], "args": ["x1"], "coeff": "1/0"}]},
        [],
    ],
)
def test_bad_payloads(payload):
    with pytest.raises(ParseError):
        io.expression_from_json(payload)


def test_load_bad_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ParseError):
        io.load(p)
