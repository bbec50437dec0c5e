"""Noncommutative polynomials in the word basis, plus their text format.

Grammar accepted by :func:`parse_ncpoly` (whitespace is ignored)::

    poly     := term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' nat)?
    base     := var | rational | '(' poly ')' | '[' poly ',' poly ']'
    var      := 'x' nat            (nat >= 1)
    rational := ('-')? nat ('/' nat)?

``[a,b]`` is the commutator ``a*b - b*a``.  As a small extension a term may
start with a unary ``-`` (``-x1*x2``), which is how negative unit
coefficients are printed.  Juxtaposition is not multiplication.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping

from .errors import NonzeroConstantTerm, PolySyntaxError, ZeroPolynomial

Word = tuple  # tuple[int, ...], 1-based variable indices


def _clean(terms: Mapping) -> dict:
    return {w: Fraction(c) for w, c in terms.items() if c}


def _add(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for w, c in b.items():
        v = out.get(w, 0) + sign * c
        if v:
            out[w] = v
        else:
            out.pop(w, None)
    return out


def _mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            w = wa + wb
            v = out.get(w, 0) + ca * cb
            if v:
                out[w] = v
            else:
                out.pop(w, None)
    return out


def _pow(a: dict, k: int) -> dict:
    result = {(): Fraction(1)}
    for _ in range(k):
        result = _mul(result, a)
    return result


class NcPoly:
    """Element of the free algebra Q<x1, x2, ...> with zero constant term.

    ``terms`` maps words (tuples of 1-based variable indices) to nonzero
    rational coefficients.  The zero polynomial is representable so that ring
    identities can be checked, but :func:`parse_ncpoly` and the strict mode
    of :func:`ncpoly_arith` refuse to return it.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, object] | None = None):
        clean = {}
        for w, c in (terms or {}).items():
            w = tuple(int(i) for i in w)
            c = Fraction(c)
            if not c:
                continue
            if not w:
                raise NonzeroConstantTerm(f"constant term {c} is not allowed")
            if min(w) < 1:
                raise ValueError(f"variable indices start at 1, got word {w}")
            clean[w] = clean.get(w, 0) + c
        self._terms = {w: c for w, c in clean.items() if c}

    @classmethod
    def var(cls, i: int) -> "NcPoly":
        return cls({(i,): 1})

    @property
    def terms(self) -> dict[Word, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    @property
    def m(self) -> int:
        """Number of variables: the largest index that occurs."""
        return max((max(w) for w in self._terms), default=0)

    @property
    def degree(self) -> int:
        return max((len(w) for w in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            if other:
                raise NonzeroConstantTerm("adding a nonzero scalar creates a constant term")
            return self
        if not isinstance(other, NcPoly):
            return NotImplemented
        return NcPoly(_add(self._terms, other._terms))

    __radd__ = __add__

    def __neg__(self):
        return NcPoly({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self + (-other)
        if not isinstance(other, NcPoly):
            return NotImplemented
        return NcPoly(_add(self._terms, other._terms, -1))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NcPoly({w: c * other for w, c in self._terms.items()})
        if not isinstance(other, NcPoly):
            return NotImplemented
        return NcPoly(_mul(self._terms, other._terms))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, k: int):
        if k < 1:
            raise ValueError("exponent must be >= 1 (p^0 would be a constant)")
        return NcPoly(_pow(self._terms, k))

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def __str__(self):
        return format_ncpoly(self)

    def __repr__(self):
        return f"NcPoly({format_ncpoly(self)!r})"


def ncpoly_arith(a, b: NcPoly, op: str, strict: bool = True) -> NcPoly:
    """Ring operation ``a op b``; for ``pow`` the exponent is ``b`` (an int).

    ``a`` may be a scalar for ``mul``.  With ``strict`` a zero result raises
    :class:`ZeroPolynomial`.
    """
    if op == "add":
        out = a + b
    elif op == "sub":
        out = a - b
    elif op == "mul":
        out = a * b
    elif op == "pow":
        out = a ** b
    else:
        raise ValueError(f"unknown NcPoly operation {op!r}")
    if strict and out.is_zero():
        raise ZeroPolynomial(f"{op} produced the zero polynomial")
    return out


def _format_coeff_word(c: Fraction, w: Word) -> str:
    body = "*".join(f"x{i}" for i in w)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return f"{c}*{body}"


def format_ncpoly(p: NcPoly) -> str:
    """Canonical text: words in degree-lexicographic order."""
    terms = p.sorted_terms()
    if not terms:
        return "0"
    out = _format_coeff_word(*terms[0][::-1])
    for w, c in terms[1:]:
        if c < 0:
            out += " - " + _format_coeff_word(-c, w)
        else:
            out += " + " + _format_coeff_word(c, w)
    return out


# parsing

_TOKEN = re.compile(r"\s*(?:(x\d+)|(\d+)|([-+*^/()\[\],])|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None:  # only trailing whitespace left
            break
        var, num, punct, bad = mt.groups()
        start = mt.start(mt.lastindex)
        if bad is not None:
            raise PolySyntaxError(f"unexpected character {bad!r}", start)
        if var is not None:
            tokens.append(("var", var, start))
        elif num is not None:
            tokens.append(("num", num, start))
        else:
            tokens.append((punct, punct, start))
        pos = mt.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, ahead: int = 0):
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def take(self, kind: str):
        tok = self.peek()
        if tok[0] != kind:
            shown = tok[1] or "end of input"
            raise PolySyntaxError(f"expected {kind!r}, found {shown!r}", tok[2])
        self.i += 1
        return tok

    def poly(self) -> dict:
        acc = self.term()
        while self.peek()[0] in "+-":
            sign = 1 if self.take(self.peek()[0])[0] == "+" else -1
            acc = _add(acc, self.term(), sign)
        return acc

    def term(self) -> dict:
        negate = False
        if self.peek()[0] == "-" and self.peek(1)[0] != "num":
            self.take("-")
            negate = True
        acc = self.factor()
        while self.peek()[0] == "*":
            self.take("*")
            acc = _mul(acc, self.factor())
        if negate:
            acc = {w: -c for w, c in acc.items()}
        return acc

    def factor(self) -> dict:
        base = self.base()
        if self.peek()[0] == "^":
            self.take("^")
            _, text, pos = self.take("num")
            if int(text) < 1:
                raise PolySyntaxError("exponent must be at least 1", pos)
            base = _pow(base, int(text))
        return base

    def base(self) -> dict:
        kind, text, pos = self.peek()
        if kind == "var":
            self.i += 1
            idx = int(text[1:])
            if idx < 1:
                raise PolySyntaxError("variable indices start at x1", pos)
            return {(idx,): Fraction(1)}
        if kind == "num" or (kind == "-" and self.peek(1)[0] == "num"):
            sign = 1
            if kind == "-":
                self.take("-")
                sign = -1
            num = int(self.take("num")[1])
            den = 1
            if self.peek()[0] == "/":
                self.take("/")
                den_tok = self.take("num")
                den = int(den_tok[1])
                if den == 0:
                    raise PolySyntaxError("zero denominator", den_tok[2])
            value = Fraction(sign * num, den)
            return {(): value} if value else {}
        if kind == "(":
            self.take("(")
            inner = self.poly()
            self.take(")")
            return inner
        if kind == "[":
            self.take("[")
            a = self.poly()
            self.take(",")
            b = self.poly()
            self.take("]")
            return _add(_mul(a, b), _mul(b, a), -1)
        shown = text or "end of input"
        raise PolySyntaxError(f"unexpected token {shown!r}", pos)


def parse_ncpoly(text: str) -> NcPoly:
    """Parse and expand ``text`` into the word basis.

    Raises :class:`PolySyntaxError`, :class:`NonzeroConstantTerm` if the
    expanded constant is nonzero, or :class:`ZeroPolynomial` if everything
    cancels.
    """
    parser = _Parser(text)
    terms = parser.poly()
    parser.take("end")
    const = terms.pop((), 0)
    if const:
        raise NonzeroConstantTerm(f"constant term {const} is not allowed")
    if not terms:
        raise ZeroPolynomial(f"{text!r} expands to the zero polynomial")
    return NcPoly(terms)
