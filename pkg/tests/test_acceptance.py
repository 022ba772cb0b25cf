"""Acceptance criteria, one test each.  Every test records a single PASS/FAIL line,
printed in the terminal summary, and asserts both the result and its time budget."""

import itertools
import random
import time
from fractions import Fraction

from conftest import record_line
from oracles import brute_quadrangulations

from polygonal_mpl.lab import (
    SearchProblem,
    Substitution,
    catalog_entry,
    cross_ratio_generators,
    dims,
    five_term,
    li2,
    search,
    specialize,
    verify,
)
from polygonal_mpl.linalg import SparseMatQ, rank
from polygonal_mpl.mpl import (
    Expression,
    FunctionTerm,
    IntegralWord,
    ProductTerm,
    shuffle_words,
    stuffle_product,
    symbol_of_word,
    words_symbol,
)
from polygonal_mpl.numeric import SeriesParams, check_numeric
from polygonal_mpl.polygon import cyclic_ratio, enumerate_quadrangulations, fan_template, instantiate
from polygonal_mpl.ratfunc import RatFunc
from polygonal_mpl.registry import LetterRegistry
from polygonal_mpl.tensor import SymbolTensor, mod_products_reduce, rho_project, shuffle


def report(name, ok, elapsed, budget, detail=""):
    line = f"{'PASS' if ok else 'FAIL'}  {name}  ({elapsed:.2f}s, budget {budget}s){'  ' + detail if detail else ''}"
    record_line(line)
    assert ok, line


def test_brown_dimension():
    t = time.perf_counter()
    value = dims(7, 8)
    integral = all(isinstance(dims(k, n), int) for k in range(1, 9) for n in range(4, 11))
    el = time.perf_counter() - t
    report("brown-dimension", value == 53820 and integral and el < 1, el, 1, f"dims(7,8)={value}")


def test_quadrangulation_counts():
    t = time.perf_counter()
    expected = {6: 3, 8: 12, 10: 55, 12: 273}
    got = {n: len(enumerate_quadrangulations(n)) for n in expected}
    brute = {n: brute_quadrangulations(n) for n in expected}
    el = time.perf_counter() - t
    report("quadrangulation-counts", got == expected == brute and el < 10, el, 10, f"{got}")


def test_q5_first_term():
    t = time.perf_counter()
    got = instantiate(fan_template())
    n = 8
    v = lambda k: (k - 1) % n + 1
    expected = []
    for j in range(1, n + 1):
        cells = [[j + 1, j + 2, j + 3, j + 4], [j + 1, j + 4, j + 5, j + 6], [j + 1, j + 6, j + 7, j + 8]]
        expected.append(FunctionTerm(-4, "IN", (3, 1, 1), tuple(cyclic_ratio([v(k) for k in c], n) for c in cells)))
    ok = got.terms == expected and [str(x) for x in got.terms] == [str(x) for x in expected]
    el = time.perf_counter() - t
    report("q5-first-term", ok and el < 1, el, 1, f"{len(got.terms)} terms")


def test_five_term_relation():
    t = time.perf_counter()
    fixture = catalog_entry("five-term")
    verified = verify(fixture.expr).verified
    five = list(five_term().terms)
    taken = {x.args[0] for x in five} | {x.args[0].inverse() for x in five}
    gens = five + [g for g in cross_ratio_generators() if g.args[0] not in taken]
    names = [f"g{i}" for i in range(len(gens))]
    found = search(SearchProblem(gens, names))
    vectors = [[idn.coefficients.get(nm, Fraction(0)) for nm in names] for idn in found]
    target = [Fraction(1)] * 5 + [Fraction(0)] * (len(gens) - 5)
    in_span = bool(found) and rank(SparseMatQ.from_dense(vectors)) == rank(SparseMatQ.from_dense(vectors + [target]))
    el = time.perf_counter() - t
    report("five-term", verified and in_span and el < 60, el, 60, f"kernel dim {len(found)} over {len(gens)} generators")


def _word(rng, k, letters):
    return SymbolTensor.word(*(rng.randrange(letters) for _ in range(k)))


def test_mod_products_engine():
    t = time.perf_counter()
    rng = random.Random(20240601)
    products_ok = 0
    for _ in range(200):
        letters = rng.randint(2, 6)
        p = rng.randint(1, 4)
        q = rng.randint(1, 5 - p)
        s = shuffle(_word(rng, p, letters), _word(rng, q, letters)).scale(rng.randint(1, 5))
        products_ok += rho_project(s).is_zero() and mod_products_reduce(s).is_zero()
    nonproducts_ok = 0
    for _ in range(200):
        k = rng.randint(2, 5)
        w = SymbolTensor.word(*rng.sample(range(6), k))
        nonproducts_ok += not mod_products_reduce(w).is_zero()
    el = time.perf_counter() - t
    ok = products_ok == 200 and nonproducts_ok == 200 and el < 300
    report("mod-products", ok, el, 300, f"{products_ok}/200 products, {nonproducts_ok}/200 non-products")


def test_symbol_shuffle_homomorphism():
    t = time.perf_counter()
    rng = random.Random(77)
    n = 4
    v = [RatFunc.var(n, i) for i in range(1, n + 1)]
    zero, one = RatFunc.const(n, 0), RatFunc.const(n, 1)
    pool = [zero, v[0], v[1], v[2], v[3], v[0] + v[1], v[2] - v[3] + 2, one - v[1]]
    good = 0
    for _ in range(50):
        p = rng.randint(1, 4)
        q = rng.randint(1, 5 - p)
        u = IntegralWord(zero, tuple(rng.choice(pool) for _ in range(p)), one)
        w = IntegralWord(zero, tuple(rng.choice(pool) for _ in range(q)), one)
        reg = LetterRegistry(n)
        lhs = words_symbol(shuffle_words(u, w), reg)
        rhs = shuffle(symbol_of_word(u, reg).canonical(reg), symbol_of_word(w, reg).canonical(reg)).canonical(reg)
        good += lhs == rhs
    el = time.perf_counter() - t
    report("symbol-shuffle", good == 50 and el < 300, el, 300, f"{good}/50 pairs")


def _random_point(rng, n):
    return [Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(19, 40)) for _ in range(n)]


def _stuffle_cases(rng):
    """All 17 composition pairs of total weight <= 4 at free variables, then the same
    pairs again at rational-function arguments, shuffled; the first 20 are used."""
    comps = [c for w in range(1, 4) for d in range(1, w + 1) for c in itertools.product(range(1, w + 1), repeat=d) if sum(c) == w]
    pairs = [(a, b) for a in comps for b in comps if sum(a) + sum(b) <= 4]
    rng.shuffle(pairs)
    for twisted in (False, True):
        for ca, cb in pairs:
            n = len(ca) + len(cb)
            xs = [RatFunc.var(n, i) for i in range(1, n + 1)]
            one = RatFunc.const(n, 1)
            if twisted:
                xs = [xs[i] * (one - xs[(i + 1) % n]) for i in range(n)]
            a = FunctionTerm(1, "Li", ca, tuple(xs[: len(ca)]))
            b = FunctionTerm(1, "Li", cb, tuple(xs[len(ca):]))
            yield n, Expression([ProductTerm(1, (a, b))]) - stuffle_product(a, b)


def test_stuffle_cross_validation():
    t = time.perf_counter()
    rng = random.Random(5)
    params = SeriesParams(error=1e-30, prec=256)
    cases = list(itertools.islice(_stuffle_cases(rng), 20))
    sym_ok = num_ok = 0
    for n, e in cases:
        sym_ok += verify(e).verified
        num_ok += all(check_numeric(e, _random_point(rng, n), params).passed for _ in range(5))
    el = time.perf_counter() - t
    ok = len(cases) == 20 and sym_ok == 20 and num_ok == 20 and el < 600
    report("stuffle-cross-validation", ok, el, 600, f"symbol {sym_ok}/{len(cases)}, numeric {num_ok}/{len(cases)}")


def test_degeneration_engine():
    t = time.perf_counter()
    x = RatFunc.var(1, 1)
    at_one = Substitution({1: Fraction(1)})
    r2 = specialize(Expression([li2(x)]), at_one)
    li2_ok = r2.regularized.is_zero() and r2.divergent.is_zero()
    r1 = specialize(Expression([FunctionTerm(1, "Li", (1,), (x,))]), at_one, LetterRegistry(1))
    li1_ok = r1.regularized.is_zero() and r1.divergent == SymbolTensor.word(r1.eps).scale(-1)
    refl = catalog_entry("reflection").expr
    rr = specialize(refl, at_one)
    refl_ok = verify(refl).verified and rr.regularized.is_zero() and rr.divergent_vanishes
    el = time.perf_counter() - t
    report("degeneration", li2_ok and li1_ok and refl_ok and el < 10, el, 10, f"Li2 {li2_ok}, Li1 {li1_ok}, reflection {refl_ok}")
