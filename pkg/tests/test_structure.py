import itertools
import json

import pytest
import sympy as sp

from _oracle import generic, mat_poly, sym_name, to_sympy
from triwaring import CPoly, SymId, coefficient_poly, commutative_image, compute_order, parse_ncpoly, sym_eval
from triwaring.acceptance import random_ncpoly, reconstruct_entry
from triwaring.errors import OrderExceedsCap, ZeroPolynomial
from triwaring.ncpoly import NcPoly
from triwaring.structure import coefficient_value


def z(q, i):
    return CPoly.var(SymId.diag(q, i))


def oracle_coefficient(p, word):
    """Coefficient of a12(w1)*a23(w2)*... in entry (1, k+1), via sympy."""
    k = len(word)
    ref = mat_poly(p, [generic(k + 1, v) for v in range(1, p.m + 1)])[0, k]
    steps = [sp.Symbol(sym_name(SymId.entry(j, j + 1, letter))) for j, letter in enumerate(word, 1)]
    others = [sp.Symbol(sym_name(SymId.entry(j, j + 1, v))) for j in range(1, k + 1) for v in range(1, p.m + 1)]
    exps = sp.Poly(sp.Mul(*steps), *others).monoms()[0]
    return sp.expand(sp.Poly(ref, *others).as_dict().get(exps, 0))


def test_commutative_image():
    assert commutative_image(parse_ncpoly("[x1,x2]")).is_zero()
    y1, y2 = z(1, 1), z(1, 2)
    assert commutative_image(parse_ncpoly("x1*x2 + x2*x1")) == (y1 * y2).scale(2)
    assert commutative_image(parse_ncpoly("x1")) == y1


def test_commutator_coefficients():
    comm = parse_ncpoly("[x1,x2]")
    assert coefficient_poly(comm, (1,)) == z(2, 2) - z(1, 2)
    assert coefficient_poly(comm, (2,)) == z(1, 1) - z(2, 1)


def test_commutator_square_coefficients():
    p = parse_ncpoly("[x1,x2]^2")
    assert coefficient_poly(p, (1,)).is_zero()
    assert coefficient_poly(p, (2,)).is_zero()
    # factored with sympy once and frozen
    assert coefficient_poly(p, (1, 2)) == -(z(1, 2) - z(2, 2)) * (z(2, 1) - z(3, 1))
    assert coefficient_poly(p, (2, 1)) == -(z(1, 1) - z(2, 1)) * (z(2, 2) - z(3, 2))
    assert coefficient_poly(p, (1, 1)) == (z(1, 2) - z(2, 2)) * (z(2, 2) - z(3, 2))


def test_coefficients_match_sympy(rng):
    for _ in range(15):
        p = random_ncpoly(rng, max_vars=2, max_degree=4)
        for k in (1, 2):
            for word in itertools.product(range(1, p.m + 1), repeat=k):
                assert to_sympy(coefficient_poly(p, word)) == oracle_coefficient(p, word)


def test_coefficient_value_agrees(rng):
    for _ in range(30):
        p = random_ncpoly(rng)
        k = rng.randint(1, 3)
        word = tuple(rng.randint(1, p.m) for _ in range(k))
        points = [[rng.randint(-5, 5) for _ in range(p.m)] for _ in range(k + 1)]
        at = {SymId.diag(q, i): points[q - 1][i - 1] for q in range(1, k + 2) for i in range(1, p.m + 1)}
        assert coefficient_value(p, word, points) == coefficient_poly(p, word).evaluate(at)


def test_coefficient_poly_needs_word():
    with pytest.raises(ValueError):
        coefficient_poly(parse_ncpoly("x1"), ())


@pytest.mark.parametrize("r", [1, 2, 3])
def test_commutator_power_order(r):
    report = compute_order(parse_ncpoly(f"[x1,x2]^{r}"))
    assert report.order == r
    assert len(report.certificate) == r


def test_order_examples():
    assert compute_order(parse_ncpoly("[x1,x2]")).certificate == (1,)
    zero = compute_order(parse_ncpoly("x1"))
    assert (zero.order, zero.certificate) == (0, None)
    assert json.dumps(zero.to_json()) == '{"order": 0, "certificate": null, "checkedUpTo": 0}'
    # lex-least word for the square is (1, 1): see the frozen coefficient above
    assert compute_order(parse_ncpoly("[x1,x2]^2")).certificate == (1, 1)
    assert compute_order(parse_ncpoly("[x1,x2]*[x3,x4]")).order == 2


def test_order_errors():
    with pytest.raises(ZeroPolynomial):
        compute_order(NcPoly({}))
    with pytest.raises(OrderExceedsCap):
        compute_order(parse_ncpoly("[x1,x2]^3"), cap=2)
    # [x1,x2]*[x3,x4]*[x5,x6] is an identity of T_3 only; cap 2 stops first
    with pytest.raises(OrderExceedsCap):
        compute_order(parse_ncpoly("[x1,x2]*[x3,x4]*[x5,x6]"), cap=2)


def _check_report(p, report):
    r = report.order
    if r >= 1:
        assert commutative_image(p).is_zero()
        assert not coefficient_poly(p, report.certificate).is_zero()
        for k in range(1, r):
            for word in itertools.product(range(1, p.m + 1), repeat=k):
                assert coefficient_poly(p, word).is_zero()
        for word in itertools.product(range(1, p.m + 1), repeat=r):
            if word < report.certificate:
                assert coefficient_poly(p, word).is_zero()
    # downward closure along the computed order
    if r >= 1:
        assert not sym_eval(p, r + 1).is_zero()
        for k in range(1, r + 1):
            assert sym_eval(p, k).is_zero()


def test_order_reports_random(rng):
    samples = [parse_ncpoly(t) for t in ["[x1,x2]^2", "[x1,x2]^3", "[x1,x2]*[x2,x3]", "[[x1,x2],x3]"]]
    samples += [random_ncpoly(rng, max_degree=3) for _ in range(20)]
    for p in samples:
        _check_report(p, compute_order(p))


def test_low_entries_vanish():
    for text, n in [("[x1,x2]^2", 5), ("[x1,x2]^3", 6), ("[x1,x2]*[x3,x1]", 4)]:
        p = parse_ncpoly(text)
        r = compute_order(p).order
        assert 1 < r < n - 1
        sym = sym_eval(p, n)
        for s in range(1, n + 1):
            for t in range(s, min(s + r, n + 1)):
                assert sym[s, t].is_zero(), (text, s, t)


def test_reconstruction_identity(rng):
    for _ in range(25):
        p = random_ncpoly(rng, max_degree=3)
        n = rng.randint(1, 4)
        sym = sym_eval(p, n)
        for s in range(1, n + 1):
            for t in range(s, n + 1):
                assert reconstruct_entry(p, n, s, t) == sym[s, t]
