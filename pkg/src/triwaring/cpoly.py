"""Sparse commutative polynomials over the rationals.

Variables are :class:`SymId` values naming either a diagonal symbol
``a[j,j](i)`` or an off-diagonal symbol ``a[j,k](i)`` of a generic upper
triangular matrix tuple.  A monomial is a sorted tuple of ``(SymId, exp)``
pairs; the polynomial is a mapping monomial -> Fraction with no zero
coefficients stored.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

from .errors import MissingAssignment

DIAG = "diag"
ENTRY = "entry"


class SymId(NamedTuple):
    """Indeterminate ``a_{row,col}^{(var)}``; ordering is (role, row, col, var)."""

    role: str
    row: int
    col: int
    var: int

    @classmethod
    def diag(cls, j: int, var: int) -> "SymId":
        return cls(DIAG, j, j, var)

    @classmethod
    def entry(cls, row: int, col: int, var: int) -> "SymId":
        if row >= col:
            raise ValueError(f"off-diagonal symbol needs row < col, got ({row},{col})")
        return cls(ENTRY, row, col, var)

    @property
    def position(self) -> tuple[int, int]:
        return (self.row, self.col)

    def __str__(self):
        return f"a[{self.row},{self.col}]({self.var})"


Monomial = tuple  # tuple[tuple[SymId, int], ...]

_ONE: Monomial = ()


def _as_fraction(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    # merge of two sorted exponent vectors
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        sa, ea = a[i]
        sb, eb = b[j]
        if sa == sb:
            out.append((sa, ea + eb))
            i += 1
            j += 1
        elif sa < sb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


class CPoly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = _as_fraction(c)
                if c:
                    clean[mono] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "CPoly":
        # terms already canonical: no zeros, Fraction coefficients
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls) -> "CPoly":
        return cls._raw({})

    @classmethod
    def const(cls, c) -> "CPoly":
        c = _as_fraction(c)
        return cls._raw({_ONE: c} if c else {})

    @classmethod
    def var(cls, sym: SymId) -> "CPoly":
        return cls._raw({((sym, 1),): Fraction(1)})

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and _ONE in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get(_ONE, Fraction(0))

    def variables(self) -> set[SymId]:
        return {s for mono in self._terms for s, _ in mono}

    def total_degree(self) -> int:
        """Total degree; the zero polynomial is given degree -1."""
        if not self._terms:
            return -1
        return max(sum(e for _, e in mono) for mono in self._terms)

    def degree_in(self, sym: SymId) -> int:
        return max((e for mono in self._terms for s, e in mono if s == sym), default=0)

    # ring structure

    @staticmethod
    def _coerce(other) -> "CPoly":
        if isinstance(other, CPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return CPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for mono, c in other._terms.items():
            v = out.get(mono, 0) + c
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
        return CPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return CPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c) -> "CPoly":
        c = _as_fraction(c)
        if not c:
            return CPoly.zero()
        return CPoly._raw({m: v * c for m, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, CPoly):
            return NotImplemented
        if not self._terms or not other._terms:
            return CPoly.zero()
        if other.is_constant():
            return self.scale(other.constant_term())
        if self.is_constant():
            return other.scale(self.constant_term())
        out: dict = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                mono = _mono_mul(ma, mb)
                v = out.get(mono, 0) + ca * cb
                if v:
                    out[mono] = v
                else:
                    out.pop(mono, None)
        return CPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = CPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CPoly.const(other)
        if not isinstance(other, CPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # evaluation and substitution

    def evaluate(self, assignment: Mapping[SymId, object]) -> Fraction:
        total = Fraction(0)
        for mono, c in self._terms.items():
            v = c
            for s, e in mono:
                try:
                    x = assignment[s]
                except KeyError:
                    raise MissingAssignment(f"no value for {s}") from None
                v *= _as_fraction(x) ** e
            total += v
        return total

    def substitute(self, assignment: Mapping[SymId, object]) -> "CPoly":
        """Partial evaluation: replace every assigned symbol by its value."""
        out: dict = {}
        for mono, c in self._terms.items():
            v = c
            rest = []
            for s, e in mono:
                if s in assignment:
                    v *= _as_fraction(assignment[s]) ** e
                    if not v:
                        break
                else:
                    rest.append((s, e))
            if not v:
                continue
            key = tuple(rest)
            w = out.get(key, 0) + v
            if w:
                out[key] = w
            else:
                out.pop(key, None)
        return CPoly._raw(out)

    def rename(self, mapping: Mapping[SymId, SymId]) -> "CPoly":
        """Rename variables; renamed symbols that collide have exponents merged."""
        out: dict = {}
        for mono, c in self._terms.items():
            exps: dict = {}
            for s, e in mono:
                t = mapping.get(s, s)
                exps[t] = exps.get(t, 0) + e
            key = tuple(sorted(exps.items()))
            w = out.get(key, 0) + c
            if w:
                out[key] = w
            else:
                out.pop(key, None)
        return CPoly._raw(out)

    def coefficients_in(self, syms: Iterable[SymId]) -> dict[Monomial, "CPoly"]:
        """Group terms by their part in ``syms``; values are polynomials in the rest."""
        syms = set(syms)
        groups: dict = {}
        for mono, c in self._terms.items():
            inner = tuple((s, e) for s, e in mono if s in syms)
            outer = tuple((s, e) for s, e in mono if s not in syms)
            groups.setdefault(inner, {})[outer] = c
        return {k: CPoly._raw(v) for k, v in groups.items()}

    def affine_parts(self) -> tuple[dict[SymId, Fraction], Fraction]:
        """Split a polynomial of total degree <= 1 into (coefficients, constant)."""
        coeffs = {}
        const = Fraction(0)
        for mono, c in self._terms.items():
            if not mono:
                const = c
            elif len(mono) == 1 and mono[0][1] == 1:
                coeffs[mono[0][0]] = c
            else:
                raise ValueError(f"polynomial is not affine: {self}")
        return coeffs, const

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            factors = [str(s) if e == 1 else f"{s}^{e}" for s, e in mono]
            if not factors:
                body, coef = "", str(c)
            elif c == 1:
                body, coef = "*".join(factors), ""
            elif c == -1:
                body, coef = "*".join(factors), "-"
            else:
                body, coef = "*".join(factors), f"{c}*"
            parts.append(coef + body)
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"CPoly({self})"


def cpoly_arith(a: CPoly, b, op: str) -> CPoly:
    """Dispatch ``add``/``sub``/``mul`` on two polynomials, ``scale`` by a rational."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "scale":
        return a.scale(b)
    raise ValueError(f"unknown CPoly operation {op!r}")


def cpoly_eval(p: CPoly, assignment: Mapping[SymId, object]) -> Fraction:
    return p.evaluate(assignment)
