"""Explicit preimages of matrices in J^r under a polynomial of order r.

Three constructions are provided:

* :func:`image_witness` -- one tuple u with p(u) = A when every entry on
  the r-diagonal of A is nonzero (1 < r < n-1);
* :func:`witness_corner_case` -- one tuple for any A in J^{n-2} when the
  order is exactly n-2;
* :func:`decompose_sum` -- two tuples u, v with p(u) + p(v) = A for any A
  in J^r.

Every result is checked by exact re-evaluation before it is returned.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .cpoly import CPoly, SymId
from .errors import (
    DimensionMismatch,
    InternalVerificationFailure,
    OrderMismatch,
    OrderOutOfRange,
    TargetNotInBand,
    ZeroOnRDiagonal,
)
from .ncpoly import NcPoly, Word, format_ncpoly, parse_ncpoly
from .pointsearch import AffineForm, constrained_linear_solve, nonvanishing_point, subset_tuple_point
from .structure import OrderReport, coefficient_poly, coefficient_value, compute_order
from .triangular import UTMatrix, band_check, entry_polynomial, mat_eval

SINGLE = "single"
SUM = "sum"


@dataclass
class WitnessPlan:
    """Bookkeeping of one run of the single-witness construction."""

    n: int
    r: int
    word: Word
    diag_tuples: list
    phase_a_entries: dict = field(default_factory=dict)
    step_order: list = field(default_factory=list)
    # (start, end_col, t) -> value of the prefix coefficient polynomial
    f_table: dict = field(default_factory=dict)
    # (s, r+s) -> protected side forms used at that t=0 step
    protected: dict = field(default_factory=dict)


@dataclass
class WitnessBundle:
    p: NcPoly
    n: int
    tuples: list  # list of lists of UTMatrix, one list per summand
    target: UTMatrix
    mode: str
    verified: bool = False
    seed: int = 0
    plans: list = field(default_factory=list, repr=False, compare=False)

    def value(self) -> UTMatrix:
        total = UTMatrix.zero(self.n)
        for us in self.tuples:
            total = total + mat_eval(self.p, us)
        return total

    def to_json(self) -> dict:
        return {
            "poly": format_ncpoly(self.p),
            "n": self.n,
            "mode": self.mode,
            "tuples": [[u.to_json() for u in us] for us in self.tuples],
            "target": self.target.to_json(),
            "verified": self.verified,
            "seed": self.seed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"

    @classmethod
    def from_json(cls, data) -> "WitnessBundle":
        if not isinstance(data, dict):
            raise ValueError("bundle JSON must be an object")
        try:
            p = parse_ncpoly(data["poly"])
            n = data["n"]
            mode = data["mode"]
            tuples = [[UTMatrix.from_json(u) for u in us] for us in data["tuples"]]
            target = UTMatrix.from_json(data["target"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed bundle: {exc}") from None
        if mode not in (SINGLE, SUM):
            raise ValueError(f"unknown bundle mode {mode!r}")
        expected = 1 if mode == SINGLE else 2
        if len(tuples) != expected:
            raise ValueError(f"mode {mode} needs {expected} tuple(s), got {len(tuples)}")
        if any(len(us) != p.m for us in tuples):
            raise ValueError(f"every tuple needs {p.m} matrices")
        if any(u.n != n for us in tuples for u in us) or target.n != n:
            raise ValueError("matrix sizes disagree with n")
        return cls(p, n, tuples, target, mode, bool(data.get("verified", False)), int(data.get("seed", 0)))


def verify_bundle(bundle: WitnessBundle) -> bool:
    """Re-evaluate every tuple and compare the sum with the target exactly."""
    try:
        ok = bundle.value() == bundle.target
    except (ValueError, ArithmeticError):
        ok = False
    bundle.verified = ok
    return ok


def bundle_diff(bundle: WitnessBundle) -> list[tuple[int, int, Fraction, Fraction]]:
    """Entries (row, col, got, expected) where the bundle misses its target."""
    got = bundle.value()
    positions = sorted(set(got.entries) | set(bundle.target.entries))
    return [(i, j, got[i, j], bundle.target[i, j]) for i, j in positions if got[i, j] != bundle.target[i, j]]


# shared helpers


def _order_for(p: NcPoly, report: OrderReport | None) -> OrderReport:
    return report if report is not None else compute_order(p)


def _check_target(target: UTMatrix, n: int, r: int):
    if target.n != n:
        raise DimensionMismatch(f"target is {target.n}x{target.n}, expected {n}x{n}")
    if not band_check(target, r - 1):
        bad = sorted((i, j) for (i, j) in target.entries if j - i < r)
        raise TargetNotInBand(f"target has nonzero entries below the {r}-diagonal at {bad}")


def _matrices(n: int, m: int, values: dict) -> list[UTMatrix]:
    entries: list[dict] = [{} for _ in range(m)]
    for sym, v in values.items():
        if v:
            entries[sym.var - 1][sym.position] = v
    return [UTMatrix(n, e) for e in entries]


def _step_seed(seed: int, *tag: int) -> int:
    out = seed
    for x in tag:
        out = out * 1_000_003 + x
    return out


class _SingleWitness:
    """State of the construction for one target with a nonzero r-diagonal."""

    def __init__(self, p: NcPoly, n: int, target: UTMatrix, word: Word, seed: int):
        self.p = p
        self.n = n
        self.m = p.m
        self.r = len(word)
        self.word = tuple(word)
        self.letters = sorted(set(self.word))
        self.target = target
        self.seed = seed
        self.values: dict[SymId, Fraction] = {}
        self.fixed: dict[SymId, Fraction] = {}
        self._coef_cache: dict = {}
        self.plan = WitnessPlan(n, self.r, self.word, [])

    # coefficient and prefix polynomials

    def nodes(self, start: int, t: int) -> tuple[int, ...]:
        """Diagonal nodes start, ..., r+start-1, r+start+t of the intended path."""
        return tuple(range(start, start + self.r)) + (self.r + start + t,)

    def coef(self, word: Word, nodes: tuple[int, ...]) -> Fraction:
        key = (word, nodes)
        if key not in self._coef_cache:
            pts = [self.plan.diag_tuples[j - 1] for j in nodes]
            self._coef_cache[key] = coefficient_value(self.p, word, pts)
        return self._coef_cache[key]

    def row_letters(self, row: int) -> list[int]:
        return list(range(1, self.m + 1)) if row < self.r else self.letters

    def superdiag(self, row: int, letter: int, symbolic: set) -> CPoly | None:
        sym = SymId.entry(row, row + 1, letter)
        if sym in symbolic:
            return CPoly.var(sym)
        v = self.fixed.get(sym, Fraction(0))
        return CPoly.const(v) if v else None

    def prefix_poly(self, start: int, t: int, end_col: int, symbolic: set) -> CPoly:
        """Prefix coefficient polynomial of the path from ``start`` along the first superdiagonal.

        The path takes unit steps through rows start..end_col-1 with free
        letters; the letters of the remaining steps are fixed to the tail of
        the certificate word, and the diagonal tuples are those of the full
        path ``nodes(start, t)``.
        """
        steps = end_col - start
        suffix = self.word[steps:]
        nodes = self.nodes(start, t)
        partial = [((), CPoly.const(1))]
        for row in range(start, end_col):
            nxt = []
            for letters, acc in partial:
                for ell in self.row_letters(row):
                    f = self.superdiag(row, ell, symbolic)
                    if f is not None:
                        nxt.append((letters + (ell,), acc * f))
            partial = nxt
        total = CPoly.zero()
        for letters, acc in partial:
            c = self.coef(letters + suffix, nodes)
            if c:
                total = total + acc.scale(c)
        return total

    def record_f(self, start: int, end_col: int, t: int, value: Fraction):
        if not value:
            raise InternalVerificationFailure(
                f"prefix coefficient f[{start},{end_col}] (t={t}) vanished"
            )
        self.plan.f_table[(start, end_col, t)] = value

    # phases

    def choose_diagonal(self):
        lead = coefficient_poly(self.p, self.word)
        self.plan.diag_tuples = subset_tuple_point(
            lead, self.n, _step_seed(self.seed, 1), slots=self.r + 1, m=self.m
        )
        for j, tup in enumerate(self.plan.diag_tuples, 1):
            for i, v in enumerate(tup, 1):
                self.fixed[SymId.diag(j, i)] = v
                self.values[SymId.diag(j, i)] = v

    def structural_zeros(self):
        n, r = self.n, self.r
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                for k in range(1, self.m + 1):
                    sym = SymId.entry(i, j, k)
                    if (i < r and j > i + 1) or (i >= r and k not in self.letters):
                        self.fixed[sym] = Fraction(0)

    def phase_a(self):
        """First-superdiagonal entries of rows 1..r-1 making every f[s', r] nonzero."""
        n, r, m = self.n, self.r, self.m
        symbolic = {SymId.entry(i, i + 1, k) for i in range(1, r) for k in range(1, m + 1)}
        keyed = []
        for start in range(1, min(r - 1, n - r) + 1):
            for t in range(0, n - r - start + 1):
                poly = self.prefix_poly(start, t, r, symbolic)
                if poly.is_zero():
                    raise InternalVerificationFailure(f"prefix f[{start},{r}] (t={t}) is identically zero")
                keyed.append(((start, r, t), poly))
        point = nonvanishing_point([q for _, q in keyed], sorted(symbolic), _step_seed(self.seed, 2))
        self.fixed.update(point)
        self.values.update(point)
        self.plan.phase_a_entries = dict(point)
        for key, poly in keyed:
            self.record_f(*key, poly.evaluate(point))

    def step_unknowns(self, row: int, col: int) -> list[SymId]:
        return [SymId.entry(row, col, ell) for ell in self.letters]

    def slice_at(self, s: int, t: int, unknowns: list[SymId]) -> AffineForm:
        col = self.r + s + t
        poly = entry_polynomial(self.p, self.n, s, col, self.fixed)
        if not poly.variables() <= set(unknowns) or poly.total_degree() > 1:
            raise InternalVerificationFailure(
                f"entry ({s},{col}) is not affine in the step unknowns: {poly}"
            )
        return AffineForm.from_cpoly(poly)

    def assign(self, unknowns: list[SymId], point: dict):
        for sym in unknowns:
            v = Fraction(point.get(sym, 0))
            self.fixed[sym] = v
            self.values[sym] = v

    def step_t0(self, s: int):
        n, r = self.n, self.r
        row, col = r + s - 1, r + s
        unknowns = self.step_unknowns(row, col)
        form = self.slice_at(s, 0, unknowns)
        if form.constant:
            raise InternalVerificationFailure(f"slice ({s},{col}) has a constant term")
        pivot = SymId.entry(row, col, self.word[-1])
        self._check_pivot(form, pivot, s, 0)

        symbolic = set(unknowns)
        keyed = []
        for start in range(s + 1, min(s + r - 1, n - r) + 1):
            for t in range(0, n - r - start + 1):
                side = AffineForm.from_cpoly(self.prefix_poly(start, t, col, symbolic))
                if side.constant or not side.coeffs:
                    raise InternalVerificationFailure(f"protected prefix f[{start},{col}] (t={t}) degenerated")
                keyed.append(((start, col, t), side))
        self.plan.protected[(s, col)] = [f for _, f in keyed]
        point = constrained_linear_solve(
            form, self.target[s, col], [f for _, f in keyed], pivot, _step_seed(self.seed, 3, s)
        )
        self.assign(unknowns, point)
        for key, side in keyed:
            self.record_f(*key, side.evaluate(point))

    def step_t(self, s: int, t: int):
        row, col = self.r + s - 1, self.r + s + t
        unknowns = self.step_unknowns(row, col)
        form = self.slice_at(s, t, unknowns)
        pivot = SymId.entry(row, col, self.word[-1])
        lead = self._check_pivot(form, pivot, s, t)
        self.assign(unknowns, {pivot: (self.target[s, col] - form.constant) / lead})

    def _check_pivot(self, form: AffineForm, pivot: SymId, s: int, t: int) -> Fraction:
        lead = form.coeffs.get(pivot, Fraction(0))
        expected = self.plan.f_table.get((s, self.r + s - 1, t))
        if not lead or lead != expected:
            raise InternalVerificationFailure(
                f"leading coefficient at step ({s},{self.r + s + t}) is {lead}, expected {expected}"
            )
        return lead

    def run(self) -> list[UTMatrix]:
        n, r = self.n, self.r
        self.choose_diagonal()
        self.structural_zeros()
        self.phase_a()
        for t in range(0, n - r):
            for s in range(1, n - r - t + 1):
                self.plan.step_order.append((s, r + s + t))
                if t == 0:
                    self.step_t0(s)
                else:
                    self.step_t(s, t)
        return _matrices(n, self.m, self.values)


def step_order(n: int, r: int) -> list[tuple[int, int]]:
    """Positions (s, r+s+t) sorted by t, then by s."""
    return [(s, r + s + t) for t in range(0, n - r) for s in range(1, n - r - t + 1)]


def image_witness(
    p: NcPoly,
    n: int,
    target: UTMatrix,
    seed: int = 0,
    report: OrderReport | None = None,
) -> WitnessBundle:
    """u_1..u_m with p(u) = target, for targets with no zero on the r-diagonal."""
    report = _order_for(p, report)
    r = report.order
    if not 1 < r < n - 1:
        raise OrderOutOfRange(r, n)
    _check_target(target, n, r)
    zeros = [(s, s + r) for s in range(1, n - r + 1) if not target[s, s + r]]
    if zeros:
        raise ZeroOnRDiagonal(zeros)

    builder = _SingleWitness(p, n, target, report.certificate, seed)
    us = builder.run()
    bundle = WitnessBundle(p, n, [us], target, SINGLE, seed=seed, plans=[builder.plan])
    if not verify_bundle(bundle):
        raise InternalVerificationFailure("single witness does not reproduce the target")
    return bundle


def witness_corner_case(
    p: NcPoly,
    n: int,
    target: UTMatrix,
    seed: int = 0,
    report: OrderReport | None = None,
) -> WitnessBundle:
    """Single witness for any target in J^{n-2} when the order is n-2 (n >= 4)."""
    report = _order_for(p, report)
    r = report.order
    if r != n - 2:
        raise OrderMismatch(r, n)
    if n < 4:
        raise OrderOutOfRange(r, n)
    _check_target(target, n, r)
    m = p.m
    word = report.certificate
    first, last = word[0], word[-1]

    diag = subset_tuple_point(coefficient_poly(p, word), n, _step_seed(seed, 1), slots=n - 1, m=m)
    values: dict[SymId, Fraction] = {}
    for j, tup in enumerate(diag, 1):
        for i, v in enumerate(tup, 1):
            values[SymId.diag(j, i)] = v

    if target[1, n - 1]:
        x12 = SymId.entry(1, 2, first)
        x_last = SymId.entry(n - 1, n, last)
        x_jump = SymId.entry(n - 2, n, last)
        unknowns = {x12, x_last, x_jump}
        interior = {SymId.entry(i, i + 1, k) for i in range(2, n - 1) for k in range(1, m + 1)}
    else:
        x23 = SymId.entry(2, 3, first)
        x13 = SymId.entry(1, 3, first)
        unknowns = {x23, x13}
        interior = {SymId.entry(i, i + 1, k) for i in range(3, n) for k in range(1, m + 1)}

    fixed = dict(values)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for k in range(1, m + 1):
                sym = SymId.entry(i, j, k)
                if sym not in unknowns and sym not in interior:
                    fixed[sym] = Fraction(0)

    top = entry_polynomial(p, n, 1, n - 1, fixed).coefficients_in(unknowns)
    right = entry_polynomial(p, n, 2, n, fixed).coefficients_in(unknowns)
    corner = entry_polynomial(p, n, 1, n, fixed).coefficients_in(unknowns)

    def only(groups: dict, allowed: set, name: str):
        extra = set(groups) - allowed
        if extra:
            raise InternalVerificationFailure(f"{name} has unexpected shape: {sorted(extra)}")

    if target[1, n - 1]:
        mono12, mono_last = ((x12, 1),), ((x_last, 1),)
        mono_jump = tuple(sorted([(x12, 1), (x_jump, 1)]))
        mono_alpha = tuple(sorted([(x12, 1), (x_last, 1)]))
        only(top, {mono12}, "p[1,n-1]")
        only(right, {mono_last}, "p[2,n]")
        only(corner, {mono_jump, mono_alpha}, "p[1,n]")
        zero = CPoly.zero()
        f_top, f_right = top.get(mono12, zero), right.get(mono_last, zero)
        f_corner, alpha = corner.get(mono_jump, zero), corner.get(mono_alpha, zero)
        leads = [f_top, f_right, f_corner]
        if any(f.is_zero() for f in leads):
            raise InternalVerificationFailure("a leading polynomial of the corner case vanished")
        point = nonvanishing_point(leads, sorted(interior), _step_seed(seed, 2))
        f_top, f_right, f_corner, alpha = (q.evaluate(point) for q in (*leads, alpha))
        v12 = target[1, n - 1] / f_top
        v_last = target[2, n] / f_right
        v_jump = (target[1, n] - alpha * v12 * v_last) / (f_corner * v12)
        values.update(point)
        values.update({x12: v12, x_last: v_last, x_jump: v_jump})
    else:
        mono23, mono13 = ((x23, 1),), ((x13, 1),)
        if top:
            raise InternalVerificationFailure("p[1,n-1] should vanish when row 1 is cleared")
        only(right, {mono23}, "p[2,n]")
        only(corner, {mono13}, "p[1,n]")
        zero = CPoly.zero()
        g_right, g_corner = right.get(mono23, zero), corner.get(mono13, zero)
        if g_right.is_zero() or g_corner.is_zero():
            raise InternalVerificationFailure("a leading polynomial of the corner case vanished")
        point = nonvanishing_point([g_right, g_corner], sorted(interior), _step_seed(seed, 2))
        values.update(point)
        values[x23] = target[2, n] / g_right.evaluate(point)
        values[x13] = target[1, n] / g_corner.evaluate(point)

    bundle = WitnessBundle(p, n, [_matrices(n, m, values)], target, SINGLE, seed=seed)
    if not verify_bundle(bundle):
        raise InternalVerificationFailure("corner-case witness does not reproduce the target")
    return bundle


def split_target(target: UTMatrix, r: int, seed: int = 0) -> tuple[UTMatrix, UTMatrix]:
    """A = B + C with both r-diagonals entrywise nonzero and C zero above them."""
    n = target.n
    positions = [(s, s + r) for s in range(1, n - r + 1)]
    labels = {pos: SymId.entry(pos[0], pos[1], 1) for pos in positions}
    polys = []
    for pos in positions:
        x = CPoly.var(labels[pos])
        polys += [CPoly.const(target[pos]) - x, x]
    point = nonvanishing_point(polys, [labels[pos] for pos in positions], seed)
    b_entries = {k: v for k, v in target.entries.items() if k[1] - k[0] > r}
    c_entries = {}
    for pos in positions:
        b_entries[pos] = point[labels[pos]]
        c_entries[pos] = target[pos] - point[labels[pos]]
    return UTMatrix(n, b_entries), UTMatrix(n, c_entries)


def decompose_sum(
    p: NcPoly,
    n: int,
    target: UTMatrix,
    seed: int = 0,
    report: OrderReport | None = None,
) -> WitnessBundle:
    """Two tuples u, v with p(u) + p(v) = target, for any target in J^r."""
    report = _order_for(p, report)
    r = report.order
    if not 1 < r < n - 1:
        raise OrderOutOfRange(r, n)
    _check_target(target, n, r)
    b, c = split_target(target, r, _step_seed(seed, 4))
    wb = image_witness(p, n, b, _step_seed(seed, 5), report)
    wc = image_witness(p, n, c, _step_seed(seed, 6), report)
    bundle = WitnessBundle(
        p, n, [wb.tuples[0], wc.tuples[0]], target, SUM, seed=seed, plans=wb.plans + wc.plans
    )
    if not verify_bundle(bundle):
        raise InternalVerificationFailure("sum decomposition does not reproduce the target")
    return bundle


def find_single_witness(
    p: NcPoly,
    n: int,
    target: UTMatrix,
    seed: int = 0,
    report: OrderReport | None = None,
) -> WitnessBundle:
    """Try the nonzero-diagonal construction, then the order n-2 one.

    Raises :class:`ZeroOnRDiagonal` or :class:`OrderOutOfRange` when neither
    applies; only :func:`decompose_sum` can help then.
    """
    report = _order_for(p, report)
    try:
        return image_witness(p, n, target, seed, report)
    except (ZeroOnRDiagonal, OrderOutOfRange):
        if report.order == n - 2 and n >= 4:
            return witness_corner_case(p, n, target, seed, report)
        raise


def random_band_matrix(rng, n: int, r: int, lo: int = -9, hi: int = 9) -> UTMatrix:
    """Random element of J^r with integer entries in [lo, hi]."""
    return UTMatrix(
        n,
        {(i, j): rng.randint(lo, hi) for i in range(1, n + 1) for j in range(i + r, n + 1)},
    )
