"""Upper triangular matrices over Q and over CPoly, and polynomial evaluation on them.

Indices are 1-based throughout.  Matrices store only their nonzero entries.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .cpoly import CPoly, SymId
from .errors import ArityMismatch, DimensionMismatch
from .ncpoly import NcPoly

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(text) -> Fraction:
    """Exact rational from ``"-4/3"``-style text; decimals and floats are refused."""
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL.match(text.strip()):
        raise ValueError(f"not an exact rational string: {text!r}")
    try:
        return Fraction(text.strip())
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {text!r}") from None


def _check_position(n: int, row: int, col: int):
    if not (1 <= row <= col <= n):
        raise ValueError(f"position ({row},{col}) is not upper triangular in an {n}x{n} matrix")


class UTMatrix:
    """n x n upper triangular matrix with exact rational entries."""

    __slots__ = ("n", "_entries")

    def __init__(self, n: int, entries: Mapping[tuple[int, int], object] | None = None):
        if n < 1:
            raise ValueError("matrix size must be positive")
        self.n = n
        clean = {}
        for (i, j), v in (entries or {}).items():
            _check_position(n, i, j)
            v = Fraction(v)
            if v:
                clean[(i, j)] = v
        self._entries = clean

    @classmethod
    def zero(cls, n: int) -> "UTMatrix":
        return cls(n)

    @classmethod
    def identity(cls, n: int) -> "UTMatrix":
        return cls(n, {(i, i): 1 for i in range(1, n + 1)})

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "UTMatrix":
        """Matrix unit e_{ij}."""
        return cls(n, {(i, j): 1})

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]]) -> "UTMatrix":
        n = len(rows)
        entries = {}
        for i, row in enumerate(rows, 1):
            if len(row) != n:
                raise DimensionMismatch("rows must form a square matrix")
            for j, v in enumerate(row, 1):
                if v and j < i:
                    raise ValueError(f"nonzero entry below the diagonal at ({i},{j})")
                if j >= i:
                    entries[(i, j)] = v
        return cls(n, entries)

    def to_rows(self) -> list[list[Fraction]]:
        return [[self[i, j] for j in range(1, self.n + 1)] for i in range(1, self.n + 1)]

    def __getitem__(self, pos: tuple[int, int]) -> Fraction:
        return self._entries.get(pos, Fraction(0))

    def items(self):
        return sorted(self._entries.items())

    @property
    def entries(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._entries)

    def is_zero(self) -> bool:
        return not self._entries

    def _same_n(self, other: "UTMatrix"):
        if self.n != other.n:
            raise DimensionMismatch(f"sizes differ: {self.n} vs {other.n}")

    def __add__(self, other: "UTMatrix") -> "UTMatrix":
        self._same_n(other)
        out = dict(self._entries)
        for k, v in other._entries.items():
            out[k] = out.get(k, 0) + v
        return UTMatrix(self.n, out)

    def __neg__(self):
        return UTMatrix(self.n, {k: -v for k, v in self._entries.items()})

    def __sub__(self, other: "UTMatrix") -> "UTMatrix":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UTMatrix(self.n, {k: v * other for k, v in self._entries.items()})
        if not isinstance(other, UTMatrix):
            return NotImplemented
        self._same_n(other)
        by_row: dict = {}
        for (j, k), v in other._entries.items():
            by_row.setdefault(j, []).append((k, v))
        out: dict = {}
        for (i, j), a in self._entries.items():
            for k, b in by_row.get(j, ()):
                out[(i, k)] = out.get((i, k), 0) + a * b
        return UTMatrix(self.n, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, UTMatrix):
            return NotImplemented
        return self.n == other.n and self._entries == other._entries

    def __hash__(self):
        return hash((self.n, frozenset(self._entries.items())))

    def __repr__(self):
        body = ", ".join(f"({i},{j}): {v}" for (i, j), v in self.items())
        return f"UTMatrix({self.n}, {{{body}}})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "entries": [
                {"row": i, "col": j, "value": str(v)} for (i, j), v in self.items()
            ],
        }

    @classmethod
    def from_json(cls, data) -> "UTMatrix":
        if not isinstance(data, dict) or "n" not in data:
            raise ValueError("matrix JSON must be an object with an 'n' field")
        n = data["n"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ValueError(f"bad matrix size {n!r}")
        entries: dict = {}
        for e in data.get("entries", []):
            try:
                i, j, v = e["row"], e["col"], e["value"]
            except (KeyError, TypeError):
                raise ValueError(f"malformed matrix entry {e!r}") from None
            if not all(isinstance(x, int) and not isinstance(x, bool) for x in (i, j)):
                raise ValueError(f"row/col must be integers in {e!r}")
            _check_position(n, i, j)
            if (i, j) in entries:
                raise ValueError(f"duplicate entry at ({i},{j})")
            entries[(i, j)] = parse_rational(v)
        return cls(n, entries)


class SymUTMatrix:
    """Upper triangular matrix whose entries are commutative polynomials."""

    __slots__ = ("n", "_entries")

    def __init__(self, n: int, entries: Mapping[tuple[int, int], CPoly] | None = None):
        self.n = n
        clean = {}
        for (i, j), v in (entries or {}).items():
            _check_position(n, i, j)
            if not isinstance(v, CPoly):
                v = CPoly.const(v)
            if v:
                clean[(i, j)] = v
        self._entries = clean

    @classmethod
    def generic(cls, n: int, var: int) -> "SymUTMatrix":
        """The matrix u_var = (a_{jk}^{(var)}) of independent indeterminates."""
        entries = {}
        for j in range(1, n + 1):
            entries[(j, j)] = CPoly.var(SymId.diag(j, var))
            for k in range(j + 1, n + 1):
                entries[(j, k)] = CPoly.var(SymId.entry(j, k, var))
        return cls(n, entries)

    @classmethod
    def from_numeric(cls, a: UTMatrix) -> "SymUTMatrix":
        return cls(a.n, {k: CPoly.const(v) for k, v in a.entries.items()})

    def __getitem__(self, pos: tuple[int, int]) -> CPoly:
        return self._entries.get(pos, CPoly.zero())

    def items(self):
        return sorted(self._entries.items())

    def is_zero(self) -> bool:
        return not self._entries

    def __add__(self, other: "SymUTMatrix") -> "SymUTMatrix":
        out = dict(self._entries)
        for k, v in other._entries.items():
            out[k] = out[k] + v if k in out else v
        return SymUTMatrix(self.n, out)

    def scale(self, c) -> "SymUTMatrix":
        return SymUTMatrix(self.n, {k: v.scale(c) for k, v in self._entries.items()})

    def __mul__(self, other: "SymUTMatrix") -> "SymUTMatrix":
        if self.n != other.n:
            raise DimensionMismatch(f"sizes differ: {self.n} vs {other.n}")
        by_row: dict = {}
        for (j, k), v in other._entries.items():
            by_row.setdefault(j, []).append((k, v))
        out: dict = {}
        for (i, j), a in self._entries.items():
            for k, b in by_row.get(j, ()):
                prod = a * b
                out[(i, k)] = out[(i, k)] + prod if (i, k) in out else prod
        return SymUTMatrix(self.n, out)

    def substitute(self, assignment: Mapping[SymId, object]) -> "SymUTMatrix":
        return SymUTMatrix(self.n, {k: v.substitute(assignment) for k, v in self._entries.items()})

    def evaluate(self, assignment: Mapping[SymId, object]) -> UTMatrix:
        return UTMatrix(self.n, {k: v.evaluate(assignment) for k, v in self._entries.items()})


def _eval_words(p: NcPoly, gens: Sequence, one, add, scale):
    """Sum of lambda_w * gens[w1]*...*gens[wk], reusing shared word prefixes."""
    cache = {(): one}

    def product(word):
        if word not in cache:
            cache[word] = product(word[:-1]) * gens[word[-1] - 1]
        return cache[word]

    total = None
    for word, c in p.sorted_terms():
        term = scale(product(word), c)
        total = term if total is None else add(total, term)
    return total


def mat_eval(p: NcPoly, inputs: Sequence[UTMatrix]) -> UTMatrix:
    """Exact value p(u_1, ..., u_m) in T_n(Q)."""
    if len(inputs) != p.m:
        raise ArityMismatch(f"polynomial has {p.m} variables, got {len(inputs)} matrices")
    n = inputs[0].n
    if any(u.n != n for u in inputs):
        raise DimensionMismatch("all input matrices must have the same size")
    if p.is_zero():
        return UTMatrix.zero(n)
    return _eval_words(
        p, inputs, UTMatrix.identity(n), lambda a, b: a + b, lambda a, c: a * c
    )


def sym_eval(p: NcPoly, n: int) -> SymUTMatrix:
    """p evaluated at generic upper triangular matrices u_1..u_m of size n."""
    if n < 1:
        raise ValueError("n must be positive")
    gens = [SymUTMatrix.generic(n, i) for i in range(1, p.m + 1)]
    if p.is_zero():
        return SymUTMatrix(n)
    one = SymUTMatrix(n, {(i, i): CPoly.const(1) for i in range(1, n + 1)})
    return _eval_words(p, gens, one, lambda a, b: a + b, lambda a, c: a.scale(c))


def entry_polynomial(
    p: NcPoly,
    n: int,
    s: int,
    t: int,
    fixed: Mapping[SymId, object] | None = None,
) -> CPoly:
    """Entry (s, t) of p(u_1..u_m) from weakly increasing paths s=j_1<=...<=j_{k+1}=t.

    Symbols listed in ``fixed`` are replaced by their values while walking
    the paths; a fixed zero prunes every path through that position.  The
    remaining symbols stay symbolic.
    """
    if not (1 <= s <= t <= n):
        raise ValueError(f"({s},{t}) is not an upper triangular position for n={n}")
    fixed = fixed or {}
    factor_cache: dict = {}

    def factor(j, k, letter):
        key = (j, k, letter)
        if key not in factor_cache:
            sym = SymId.diag(j, letter) if j == k else SymId.entry(j, k, letter)
            if sym in fixed:
                v = Fraction(fixed[sym])
                factor_cache[key] = CPoly.const(v) if v else None
            else:
                factor_cache[key] = CPoly.var(sym)
        return factor_cache[key]

    # state for a word prefix: node -> sum over partial paths ending at node
    states: dict = {(): {s: CPoly.const(1)}}

    def state(prefix):
        if prefix not in states:
            prev = state(prefix[:-1])
            letter = prefix[-1]
            nxt: dict = {}
            for j, acc in prev.items():
                for k in range(j, t + 1):
                    f = factor(j, k, letter)
                    if f is None:
                        continue
                    term = acc * f
                    nxt[k] = nxt[k] + term if k in nxt else term
            states[prefix] = {k: v for k, v in nxt.items() if v}
        return states[prefix]

    total = CPoly.zero()
    for word, c in p.sorted_terms():
        end = state(word).get(t)
        if end is not None:
            total = total + end.scale(c)
    return total


def band_check(a: UTMatrix, t: int) -> bool:
    """True iff every entry (i, j) with j - i <= t vanishes, i.e. a lies in T_n^{(t)}."""
    if t < 0:
        raise ValueError("band index must be nonnegative")
    if t > a.n - 1:
        raise ValueError(f"band index {t} exceeds n-1 = {a.n - 1}")
    return all(j - i > t for (i, j) in a.entries)


def positions_on_diagonal(n: int, offset: int) -> Iterable[tuple[int, int]]:
    return ((s, s + offset) for s in range(1, n - offset + 1))
