from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracle import nc_expand, nc_symbols, words_of
from triwaring import NcPoly, format_ncpoly, ncpoly_arith, parse_ncpoly
from triwaring.acceptance import PARSER_CORPUS
from triwaring.errors import NonzeroConstantTerm, PolySyntaxError, ZeroPolynomial

coeffs = st.integers(-9, 9)
words = st.lists(st.integers(1, 3), min_size=1, max_size=3).map(tuple)
ncpolys = st.dictionaries(words, coeffs, min_size=1, max_size=4).map(NcPoly)


def test_commutator_text():
    p = parse_ncpoly("x1*x2 - x2*x1")
    assert p.terms == {(1, 2): 1, (2, 1): -1}
    assert (p.m, p.degree) == (2, 2)


def test_commutator_square():
    # expanded by hand: (x1x2 - x2x1)(x1x2 - x2x1)
    expected = {(1, 2, 1, 2): 1, (1, 2, 2, 1): -1, (2, 1, 1, 2): -1, (2, 1, 2, 1): 1}
    p = parse_ncpoly("[x1,x2]^2")
    assert p.terms == expected
    assert (p.m, p.degree) == (2, 4)
    assert parse_ncpoly("[x1,x2]^2") == ncpoly_arith(parse_ncpoly("[x1,x2]"), 2, "pow")


def _sympy_cases():
    x1, x2, x3 = nc_symbols(3)
    half, q = sp.Rational(1, 2), sp.Rational(3, 4)

    def c(a, b):
        return a * b - b * a

    return [
        ("[x1,x2]^3", c(x1, x2) ** 3),
        ("(x1 + 2*x2)^3 - x1^3", (x1 + 2 * x2) ** 3 - x1**3),
        ("[[x1,x2],x3] + 1/2*x3*x1", c(c(x1, x2), x3) + half * x3 * x1),
        ("[x1*x2, x2 - 3/4*x1]", c(x1 * x2, x2 - q * x1)),
        ("(x1 - x2)*(x1 + x2)", (x1 - x2) * (x1 + x2)),
        ("-x3*(x1 - 1/2*x2)^2*x3", -x3 * (x1 - half * x2) ** 2 * x3),
    ]


@pytest.mark.parametrize("text,expr", _sympy_cases())
def test_expansion_matches_sympy(text, expr):
    assert parse_ncpoly(text).terms == words_of(expr, nc_symbols(3))


def test_constant_term_rejected():
    with pytest.raises(NonzeroConstantTerm):
        parse_ncpoly("x1 + 1")
    with pytest.raises(NonzeroConstantTerm):
        parse_ncpoly("(x1 + 1)^2 - x1^2")


def test_cancelling_constant_is_fine():
    assert parse_ncpoly("(x1 + 1)^2 - 1").terms == {(1, 1): 1, (1,): 2}


@pytest.mark.parametrize("text", ["x1 +", "x0", "x1 x2", "2x1", "[x1 x2]", "x1^", "x1^0*x2", "(x1", "x1 & x2", ""])
def test_syntax_errors(text):
    with pytest.raises(PolySyntaxError):
        parse_ncpoly(text)


def test_syntax_error_position():
    with pytest.raises(PolySyntaxError) as info:
        parse_ncpoly("x1 + x2 $")
    assert info.value.position == 8


def test_zero_polynomial():
    with pytest.raises(ZeroPolynomial):
        parse_ncpoly("x1 - x1")
    with pytest.raises(ZeroPolynomial):
        parse_ncpoly("[x1,x1]")
    x1 = NcPoly.var(1)
    with pytest.raises(ZeroPolynomial):
        ncpoly_arith(x1, -x1, "add")
    assert ncpoly_arith(x1, x1, "sub", strict=False).is_zero()


def test_mul_and_scalars():
    assert ncpoly_arith(NcPoly.var(1), NcPoly.var(2), "mul").terms == {(1, 2): 1}
    assert ncpoly_arith(Fraction(3, 2), NcPoly.var(2), "mul").terms == {(2,): Fraction(3, 2)}
    with pytest.raises(NonzeroConstantTerm):
        NcPoly({(): 1})
    with pytest.raises(NonzeroConstantTerm):
        NcPoly.var(1) + 1


def test_formatting():
    assert format_ncpoly(parse_ncpoly("[x1,x2]")) == "x1*x2 - x2*x1"
    assert format_ncpoly(parse_ncpoly("-3/2*x2 + x1*x1")) == "-3/2*x2 + x1*x1"
    assert format_ncpoly(parse_ncpoly("x2*x1 - 5*x3")) == "-5*x3 + x2*x1"


@pytest.mark.parametrize("text", PARSER_CORPUS)
def test_corpus_round_trip(text):
    p = parse_ncpoly(text)
    printed = format_ncpoly(p)
    assert parse_ncpoly(printed) == p
    assert format_ncpoly(parse_ncpoly(printed)) == printed


def test_corpus_size():
    assert len(PARSER_CORPUS) >= 30


@given(ncpolys)
def test_print_parse_identity(p):
    if p.is_zero():
        return
    assert parse_ncpoly(format_ncpoly(p)) == p


@given(ncpolys)
def test_matches_oracle_expansion(p):
    if p.is_zero():
        return
    assert p.terms == nc_expand(p)


@settings(max_examples=1000)
@given(ncpolys, ncpolys, ncpolys)
def test_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert (a - a).is_zero()


@given(ncpolys, st.integers(1, 3))
def test_pow_is_repeated_mul(a, k):
    if a.is_zero():
        return
    expected = a
    for _ in range(k - 1):
        expected = expected * a
    assert a**k == expected


@given(ncpolys)
def test_no_empty_word_stored(p):
    assert () not in p.terms
    assert all(c != 0 for c in p.terms.values())
