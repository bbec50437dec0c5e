"""Order of a polynomial on upper triangular matrices and its coefficient polynomials.

For a word w = (i_1..i_k), the coefficient polynomial p_w(z_1..z_{k+1}) is the
commutative polynomial multiplying a_{12}^{(i_1)} ... a_{k,k+1}^{(i_k)} in
entry (1, k+1) of p evaluated on generic matrices of size k+1.  Slot z_q is
the diagonal tuple of node q, encoded as ``SymId.diag(q, var)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cpoly import CPoly, SymId
from .errors import OrderExceedsCap, ZeroPolynomial
from .ncpoly import NcPoly, Word

DEFAULT_ORDER_CAP = 12


@dataclass(frozen=True)
class OrderReport:
    order: int
    certificate: Word | None
    checked_up_to: int

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "certificate": list(self.certificate) if self.certificate is not None else None,
            "checkedUpTo": self.checked_up_to,
        }


def commutative_image(p: NcPoly) -> CPoly:
    """p with commuting variables, written in the scalars ``SymId.diag(1, i)``."""
    total = CPoly.zero()
    for word, c in p.items():
        mono = CPoly.const(c)
        for letter in word:
            mono = mono * CPoly.var(SymId.diag(1, letter))
        total = total + mono
    return total


def coefficient_poly(p: NcPoly, word: Sequence[int]) -> CPoly:
    """The commutative polynomial p_word in (len(word)+1) diagonal slots.

    Each term lambda*x_{w_1}...x_{w_L} of p contributes once for every way of
    picking len(word) of its letters, in order, equal to ``word``; the other
    letters are absorbed by the diagonal of the node the path is sitting on.
    """
    word = tuple(word)
    k = len(word)
    if k < 1:
        raise ValueError("coefficient polynomials are indexed by nonempty words")
    total = CPoly.zero()
    for w, c in p.items():
        if len(w) < k:
            continue
        # states[q]: sum over ways having matched q letters of `word`
        states: list[CPoly | None] = [CPoly.const(c)] + [None] * k
        for letter in w:
            nxt: list[CPoly | None] = [None] * (k + 1)
            for q, acc in enumerate(states):
                if acc is None:
                    continue
                stay = acc * CPoly.var(SymId.diag(q + 1, letter))
                nxt[q] = stay if nxt[q] is None else nxt[q] + stay
                if q < k and word[q] == letter:
                    nxt[q + 1] = acc if nxt[q + 1] is None else nxt[q + 1] + acc
            states = nxt
        if states[k] is not None:
            total = total + states[k]
    return total


def coefficient_value(p: NcPoly, word: Sequence[int], points: Sequence[Sequence[Fraction]]) -> Fraction:
    """Numeric p_word(points[0], ..., points[k]); ``points[q][i-1]`` is variable i at slot q+1."""
    word = tuple(word)
    k = len(word)
    if len(points) != k + 1:
        raise ValueError(f"word of length {k} needs {k + 1} diagonal points, got {len(points)}")
    total = Fraction(0)
    for w, c in p.items():
        if len(w) < k:
            continue
        states = [c] + [0] * k
        for letter in w:
            nxt = [0] * (k + 1)
            for q, acc in enumerate(states):
                if not acc:
                    continue
                nxt[q] += acc * points[q][letter - 1]
                if q < k and word[q] == letter:
                    nxt[q + 1] += acc
            states = nxt
        total += states[k]
    return Fraction(total)


def words_of_length(m: int, k: int):
    """All words over x1..xm of length k in lexicographic order."""
    return itertools.product(range(1, m + 1), repeat=k)


def compute_order(p: NcPoly, cap: int = DEFAULT_ORDER_CAP) -> OrderReport:
    """Least r with p vanishing on T_r but not on T_{r+1}, plus a certificate word.

    Vanishing on T_{k+1} given vanishing on T_k is decided by the (1, k+1)
    entry, which is the sum of p_w times distinct multilinear monomials over
    words w of length k; so the first k with a nonzero p_w is the order and
    the lexicographically least such w is the certificate.
    """
    if p.is_zero():
        raise ZeroPolynomial("the zero polynomial has no order")
    if cap < 1:
        raise ValueError("cap must be positive")
    if not commutative_image(p).is_zero():
        return OrderReport(0, None, 0)
    for k in range(1, cap + 1):
        if k > p.degree:
            # every path of length k needs k letters
            break
        for word in words_of_length(p.m, k):
            if not coefficient_poly(p, word).is_zero():
                return OrderReport(k, word, k)
    raise OrderExceedsCap(cap)
