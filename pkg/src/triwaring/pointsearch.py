"""Constructive nonvanishing: points avoiding finitely many hypersurfaces.

Every search is deterministic for a fixed seed.  A bounded number of
seeded random draws from {1..64} is tried first; if they all fail, a
coordinate-by-coordinate walk over the grid {1..D+1} (D the total degree of
the product of the constraints) is used, which always succeeds because a
nonzero polynomial of degree <= D in one variable has at most D roots.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .cpoly import CPoly, SymId
from .errors import (
    DegenerateSideForm,
    InternalVerificationFailure,
    PivotZero,
    TargetZero,
    ZeroPolynomialInput,
)

RANDOM_RANGE = 64
RANDOM_TRIES = 32

PointAssignment = dict  # dict[SymId, Fraction]


@dataclass(frozen=True)
class AffineForm:
    """sum_i coeffs[v_i] * v_i + constant."""

    coeffs: Mapping[SymId, Fraction] = field(default_factory=dict)
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        clean = {s: Fraction(c) for s, c in self.coeffs.items() if c}
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "constant", Fraction(self.constant))

    @classmethod
    def from_cpoly(cls, p: CPoly) -> "AffineForm":
        coeffs, const = p.affine_parts()
        return cls(coeffs, const)

    def to_cpoly(self) -> CPoly:
        total = CPoly.const(self.constant)
        for s, c in self.coeffs.items():
            total = total + CPoly.var(s).scale(c)
        return total

    def evaluate(self, point: Mapping[SymId, object]) -> Fraction:
        return self.constant + sum(
            (c * Fraction(point.get(s, 0)) for s, c in self.coeffs.items()), Fraction(0)
        )

    def variables(self) -> set[SymId]:
        return set(self.coeffs)


def _all_nonzero(polys: Sequence[CPoly], point: Mapping[SymId, Fraction]) -> bool:
    return all(p.evaluate(point) != 0 for p in polys)


def grid_point(polys: Sequence[CPoly], vars: Sequence[SymId]) -> PointAssignment:
    """Deterministic point on {1..D+1}^vars where every polynomial is nonzero."""
    bound = sum(max(p.total_degree(), 0) for p in polys) + 1
    remaining = list(polys)
    point: PointAssignment = {}
    for v in vars:
        for value in range(1, bound + 1):
            trial = [p.substitute({v: value}) for p in remaining]
            if all(not q.is_zero() for q in trial):
                point[v] = Fraction(value)
                remaining = trial
                break
        else:  # pragma: no cover - impossible for nonzero inputs
            raise InternalVerificationFailure(f"grid search exhausted for {v}")
    return point


def nonvanishing_point(
    polys: Sequence[CPoly],
    vars: Sequence[SymId],
    seed: int = 0,
    tries: int = RANDOM_TRIES,
) -> PointAssignment:
    """A rational point at which every polynomial in ``polys`` is nonzero."""
    polys = list(polys)
    if not polys:
        raise ValueError("need at least one polynomial")
    for i, p in enumerate(polys):
        if p.is_zero():
            raise ZeroPolynomialInput(f"polynomial #{i} is identically zero")
    vars = list(dict.fromkeys(vars))
    missing = set().union(*(p.variables() for p in polys)) - set(vars)
    if missing:
        raise ValueError(f"vars do not cover {sorted(missing)}")

    rng = random.Random(seed)
    point = None
    for _ in range(tries):
        trial = {v: Fraction(rng.randint(1, RANDOM_RANGE)) for v in vars}
        if _all_nonzero(polys, trial):
            point = trial
            break
    if point is None:
        point = grid_point(polys, vars)
    if not _all_nonzero(polys, point):
        raise InternalVerificationFailure("nonvanishing point failed re-verification")
    return point


def subset_tuple_point(
    p: CPoly,
    n: int,
    seed: int = 0,
    slots: int | None = None,
    m: int | None = None,
) -> list[tuple[Fraction, ...]]:
    """Points c_1..c_n in Q^m with p(c_{j_1}, ..., c_{j_s}) != 0 for every j_1 < ... < j_s.

    ``p`` is written in slot symbols ``SymId.diag(q, i)`` (slot q, coordinate
    i).  ``slots`` and ``m`` default to the largest slot and coordinate that
    occur, but callers should pass them when some slot may be absent.
    """
    if p.is_zero():
        raise ZeroPolynomialInput("subset_tuple_point needs a nonzero polynomial")
    syms = p.variables()
    slots = slots if slots is not None else max((s.row for s in syms), default=1)
    m = m if m is not None else max((s.var for s in syms), default=1)
    if slots > n:
        raise ValueError(f"{slots} slots cannot be filled from {n} points")

    instances = []
    for combo in itertools.combinations(range(1, n + 1), slots):
        mapping = {SymId.diag(q, i): SymId.diag(j, i) for q, j in enumerate(combo, 1) for i in range(1, m + 1)}
        instances.append(p.rename(mapping))
    vars = [SymId.diag(j, i) for j in range(1, n + 1) for i in range(1, m + 1)]
    point = nonvanishing_point(instances, vars, seed)
    tuples = [tuple(point[SymId.diag(j, i)] for i in range(1, m + 1)) for j in range(1, n + 1)]
    # re-check on the original polynomial, independent of the renaming
    for combo in itertools.combinations(range(n), slots):
        at = {SymId.diag(q, i): tuples[j][i - 1] for q, j in enumerate(combo, 1) for i in range(1, m + 1)}
        if p.evaluate(at) == 0:
            raise InternalVerificationFailure(f"subset {combo} vanishes")
    return tuples


def constrained_linear_solve(
    target: AffineForm,
    b,
    keep_nonzero: Sequence[AffineForm],
    pivot: SymId,
    seed: int = 0,
) -> PointAssignment:
    """Solve target(c) = b while keeping every side form nonzero.

    The side rows are split by whether their pivot coefficient vanishes.  Rows
    with a nonzero pivot coefficient are turned into
    ``a_i1/a_11*b + sum_j (a_ij - a_i1*a_1j/a_11) x_j`` (the value of the
    row once the pivot is eliminated), the others keep their non-pivot part.
    Together with ``b - sum_j a_1j x_j`` these are handed to
    :func:`nonvanishing_point`, and the pivot is back-substituted.
    """
    b = Fraction(b)
    if target.constant:
        raise ValueError("target form must be homogeneous")
    if not b:
        raise TargetZero("right-hand side must be nonzero")
    a11 = target.coeffs.get(pivot, Fraction(0))
    if not a11:
        raise PivotZero(f"pivot {pivot} has zero coefficient in the target")
    for i, form in enumerate(keep_nonzero):
        if form.constant:
            raise DegenerateSideForm(f"side form #{i} has a constant term")
        if not form.coeffs:
            raise DegenerateSideForm(f"side form #{i} has no nonzero coefficient")

    all_vars = set(target.coeffs).union(*(f.coeffs for f in keep_nonzero))
    others = sorted(all_vars - {pivot})

    if not others:
        point = {pivot: b / a11}
    else:
        x = {v: CPoly.var(v) for v in others}
        lead = CPoly.const(b)
        for v in others:
            lead = lead - x[v].scale(target.coeffs.get(v, 0))
        constraints = [lead]
        for form in keep_nonzero:
            ai1 = form.coeffs.get(pivot, Fraction(0))
            if ai1:
                ratio = ai1 / a11
                g = CPoly.const(ratio * b)
                for v in others:
                    g = g + x[v].scale(form.coeffs.get(v, 0) - ratio * target.coeffs.get(v, 0))
            else:
                g = CPoly.zero()
                for v in others:
                    g = g + x[v].scale(form.coeffs.get(v, 0))
            constraints.append(g)
        point = nonvanishing_point(constraints, others, seed)
        rest = sum((target.coeffs.get(v, 0) * point[v] for v in others), Fraction(0))
        point[pivot] = (b - rest) / a11

    if target.evaluate(point) != b:
        raise InternalVerificationFailure("linear solve missed its target")
    for i, form in enumerate(keep_nonzero):
        if form.evaluate(point) == 0:
            raise InternalVerificationFailure(f"side form #{i} vanished")
    return point
