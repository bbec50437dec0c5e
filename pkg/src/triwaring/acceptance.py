"""Acceptance checks, usable from pytest and from ``triwaring selftest``.

Each check returns a :class:`CheckResult`; ``trials`` optionally caps the
number of random cases so a quick smoke run is possible (the full gate
uses the default counts).
"""

from __future__ import annotations

import itertools
import json
import os
import random
import tempfile
import time
from dataclasses import dataclass

from .cpoly import CPoly, SymId
from .ncpoly import NcPoly, format_ncpoly, parse_ncpoly
from .pointsearch import AffineForm, constrained_linear_solve
from .structure import coefficient_poly, commutative_image, compute_order
from .triangular import UTMatrix, band_check, mat_eval, sym_eval
from .witness import (
    decompose_sum,
    image_witness,
    random_band_matrix,
    verify_bundle,
    witness_corner_case,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _count(default: int, trials: int | None) -> int:
    return default if trials is None else min(default, trials)


def commutator_power(r: int) -> NcPoly:
    return parse_ncpoly(f"[x1,x2]^{r}")


# random generators shared with the property tests


def random_ncpoly(rng: random.Random, max_vars: int = 3, max_degree: int = 4, max_terms: int = 4) -> NcPoly:
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            k = rng.randint(1, max_degree)
            word = tuple(rng.randint(1, max_vars) for _ in range(k))
            terms[word] = terms.get(word, 0) + rng.choice([c for c in range(-9, 10) if c])
        p = NcPoly(terms)
        if not p.is_zero():
            return p


def random_ut(rng: random.Random, n: int, lo: int = -9, hi: int = 9) -> UTMatrix:
    return UTMatrix(n, {(i, j): rng.randint(lo, hi) for i in range(1, n + 1) for j in range(i, n + 1)})


def assignment_for(inputs: list[UTMatrix]) -> dict:
    """Symbol values that specialise the generic matrices to ``inputs``."""
    point = {}
    for var, u in enumerate(inputs, 1):
        for i in range(1, u.n + 1):
            point[SymId.diag(i, var)] = u[i, i]
            for j in range(i + 1, u.n + 1):
                point[SymId.entry(i, j, var)] = u[i, j]
    return point


def reconstruct_entry(p: NcPoly, n: int, s: int, t: int) -> CPoly:
    """Entry (s, t) rebuilt as a sum over strict paths of coefficient polynomials."""
    m = p.m
    if s == t:
        return commutative_image(p).rename({SymId.diag(1, i): SymId.diag(s, i) for i in range(1, m + 1)})
    total = CPoly.zero()
    cache: dict = {}
    for k in range(1, t - s + 1):
        for inner in itertools.combinations(range(s + 1, t), k - 1):
            nodes = (s, *inner, t)
            for word in itertools.product(range(1, m + 1), repeat=k):
                if word not in cache:
                    cache[word] = coefficient_poly(p, word)
                coeff = cache[word]
                if coeff.is_zero():
                    continue
                placed = coeff.rename(
                    {SymId.diag(q, i): SymId.diag(j, i) for q, j in enumerate(nodes, 1) for i in range(1, m + 1)}
                )
                for q, letter in enumerate(word):
                    placed = placed * CPoly.var(SymId.entry(nodes[q], nodes[q + 1], letter))
                total = total + placed
    return total


# the criteria


def check_order_reproduction(trials=None) -> CheckResult:
    found = {r: compute_order(commutator_power(r), cap=12).order for r in (1, 2, 3)}
    ok = all(found[r] == r for r in found)
    return CheckResult("1 order of [x1,x2]^r", ok, f"orders {found}")


def check_sum_decomposition(trials=None) -> CheckResult:
    counts = []
    ok = True
    for r, n, default in ((2, 5, 100), (3, 6, 25)):
        p = commutator_power(r)
        report = compute_order(p)
        rng = random.Random(1000 + r)
        good = 0
        total = _count(default, trials)
        for case in range(total):
            a = random_band_matrix(rng, n, r)
            bundle = decompose_sum(p, n, a, seed=case, report=report)
            if verify_bundle(bundle) and bundle.mode == "sum":
                good += 1
        counts.append(f"r={r},n={n}: {good}/{total}")
        ok &= good == total
    return CheckResult("2 p(T_n)+p(T_n) = J^r", ok, "; ".join(counts))


def _random_full_diagonal(rng: random.Random, n: int, r: int) -> UTMatrix:
    a = random_band_matrix(rng, n, r)
    entries = a.entries
    for s in range(1, n - r + 1):
        entries[(s, s + r)] = rng.choice([c for c in range(-9, 10) if c])
    return UTMatrix(n, entries)


def check_single_witness(trials=None) -> CheckResult:
    p = commutator_power(2)
    report = compute_order(p)
    rng = random.Random(3)
    total = _count(50, trials)
    good = 0
    for case in range(total):
        a = _random_full_diagonal(rng, 6, 2)
        if verify_bundle(image_witness(p, 6, a, seed=case, report=report)):
            good += 1
    return CheckResult("3 single witness, nonzero r-diagonal", good == total, f"r=2,n=6: {good}/{total}")


def check_corner_case(trials=None) -> CheckResult:
    counts = []
    ok = True
    for r in (2, 3):
        n = r + 2
        p = commutator_power(r)
        report = compute_order(p)
        rng = random.Random(40 + r)
        total = _count(50, trials)
        forced = max(1, total // 4) if trials is not None else 13
        good = case2 = 0
        for case in range(total):
            a = random_band_matrix(rng, n, r)
            if case < forced:
                entries = a.entries
                entries.pop((1, n - 1), None)
                a = UTMatrix(n, entries)
            if not a[1, n - 1]:
                case2 += 1
            if verify_bundle(witness_corner_case(p, n, a, seed=case, report=report)):
                good += 1
        counts.append(f"r={r},n={n}: {good}/{total} ({case2} with a'[1,n-1]=0)")
        ok &= good == total and case2 >= min(10, forced)
    return CheckResult("4 p(T_n) = J^{n-2} for order n-2", ok, "; ".join(counts))


def check_containment(trials=None) -> CheckResult:
    p = commutator_power(2)
    n = 5
    sym = sym_eval(p, n)
    low = [(s, t) for s in range(1, n + 1) for t in range(s, n + 1) if t - s < 2 and not sym[s, t].is_zero()]
    rng = random.Random(5)
    total = _count(200, trials)
    inside = sum(band_check(mat_eval(p, [random_ut(rng, n), random_ut(rng, n)]), 1) for _ in range(total))
    ok = not low and inside == total
    return CheckResult("5 p(T_5) inside J^2", ok, f"symbolic low entries nonzero: {low}; numeric {inside}/{total}")


def obstruction_hits(r: int, n: int, trials: int, seed: int) -> int:
    """How often [B,C]^r has a[1,r+1] != 0, a[2,r+2] == 0, a[3,r+3] != 0."""
    p = commutator_power(r)
    rng = random.Random(seed)
    hits = 0
    for _ in range(trials):
        # small range so that zero entries actually occur
        v = mat_eval(p, [random_ut(rng, n, -2, 2), random_ut(rng, n, -2, 2)])
        if v[1, r + 1] and not v[2, r + 2] and v[3, r + 3]:
            hits += 1
    return hits


def check_obstruction(trials=None) -> CheckResult:
    from .cli import main

    total = _count(500, trials)
    hits = obstruction_hits(2, 5, total, seed=6)
    target = UTMatrix(5, {(1, 3): 1, (3, 5): 1})
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "target.json")
        out = os.path.join(tmp, "bundle.json")
        with open(path, "w") as fh:
            json.dump(target.to_json(), fh)
        code_w = main(["witness", "--poly", "[x1,x2]^2", "--n", "5", "--target", path, "--out", out], quiet=True)
        code_d = main(["decompose", "--poly", "[x1,x2]^2", "--n", "5", "--target", path, "--out", out], quiet=True)
        code_v = main(["verify", out], quiet=True) if code_d == 0 else None
    ok = hits == 0 and code_w == 4 and code_d == 0 and code_v == 0
    return CheckResult(
        "6 obstruction for e13+e35",
        ok,
        f"pattern hits {hits}/{total}; witness exit {code_w}, decompose exit {code_d}, verify exit {code_v}",
    )


def check_oracle_equivalence(trials=None) -> CheckResult:
    rng = random.Random(7)
    total = _count(100, trials)
    spec_ok = recon_ok = 0
    for _ in range(total):
        p = random_ncpoly(rng)
        n = rng.randint(1, 4)
        inputs = [random_ut(rng, n) for _ in range(p.m)]
        sym = sym_eval(p, n)
        if sym.evaluate(assignment_for(inputs)) == mat_eval(p, inputs):
            spec_ok += 1
        if all(sym[s, t] == reconstruct_entry(p, n, s, t) for s in range(1, n + 1) for t in range(s, n + 1)):
            recon_ok += 1
    ok = spec_ok == total and recon_ok == total
    return CheckResult(
        "7 symbolic vs numeric evaluation", ok, f"specialisation {spec_ok}/{total}; reconstruction {recon_ok}/{total}"
    )


def random_solver_instance(rng: random.Random):
    """Random preconditioned input for constrained_linear_solve."""
    s = rng.randint(1, 5)
    syms = [SymId.entry(1, j + 1, 1) for j in range(1, s + 1)]
    coeffs = {v: rng.randint(-9, 9) for v in syms}
    pivot = syms[0]
    if not coeffs[pivot]:
        coeffs[pivot] = rng.choice([-1, 1]) * rng.randint(1, 9)
    target = AffineForm(coeffs)
    b = rng.choice([c for c in range(-9, 10) if c])
    sides = []
    for _ in range(rng.randint(0, 6)):
        row = {v: rng.randint(-9, 9) for v in syms}
        if not any(row.values()):
            row[rng.choice(syms)] = rng.choice([c for c in range(-9, 10) if c])
        sides.append(AffineForm(row))
    return target, b, sides, pivot


def check_linear_solver(trials=None) -> CheckResult:
    rng = random.Random(8)
    total = _count(1000, trials)
    good = 0
    for case in range(total):
        target, b, sides, pivot = random_solver_instance(rng)
        point = constrained_linear_solve(target, b, sides, pivot, seed=case)
        if target.evaluate(point) == b and all(f.evaluate(point) != 0 for f in sides):
            good += 1
    return CheckResult("8 constrained linear solve", good == total, f"{good}/{total}")


PARSER_CORPUS = [
    "x1",
    "x2",
    "x1*x2",
    "x1*x2 - x2*x1",
    "[x1,x2]",
    "[x1,x2]^2",
    "[x1,x2]^3",
    "[x1,[x1,x2]]",
    "[[x1,x2],x3]",
    "x1^2",
    "x1^3 - 2*x2",
    "3/2*x1",
    "-x1",
    "-3/4*x1*x2 + x2",
    "(x1 + x2)^2",
    "(x1 - x2)*(x1 + x2)",
    "x1*-2",
    "x1 - -2*x2",
    "[x1^2,x2]",
    "[x1,x2]*[x2,x3]",
    "x1*x2*x3 - x3*x2*x1",
    "  x1   +   x2  ",
    "1/3*x1 + 2/3*x1",
    "(x1)",
    "((x1 + x2))^2 - x1^2 - x2^2",
    "[x1 + x2, x1 - x2]",
    "x10*x1",
    "2*[x1,x2]^2 + [x1,x2]",
    "x1*(x2 + x3)*x1",
    "[x1,x2]^2*x3",
    "5*x1^2*x2 - 5*x2*x1^2",
    "(1 + x1)^2 - 1",
]

PARSER_ERRORS = [("x1 x2", "PolySyntaxError"), ("2x1", "PolySyntaxError"), ("x1 +", "PolySyntaxError"),
                 ("[x1 x2]", "PolySyntaxError"), ("x0", "PolySyntaxError"), ("x1 + 1", "NonzeroConstantTerm"),
                 ("(x1 + 1)^2 - x1^2 - 2*x1", "NonzeroConstantTerm"), ("x1 - x1", "ZeroPolynomial")]


def check_parser(trials=None) -> CheckResult:
    from . import errors

    fixed = 0
    for text in PARSER_CORPUS:
        p = parse_ncpoly(text)
        printed = format_ncpoly(p)
        again = parse_ncpoly(printed)
        if again == p and format_ncpoly(again) == printed:
            fixed += 1
    raised = 0
    for text, name in PARSER_ERRORS:
        try:
            parse_ncpoly(text)
        except getattr(errors, name):
            raised += 1
    ok = fixed == len(PARSER_CORPUS) and raised == len(PARSER_ERRORS)
    return CheckResult(
        "9 parser round trip", ok, f"fixed points {fixed}/{len(PARSER_CORPUS)}; errors {raised}/{len(PARSER_ERRORS)}"
    )


CHECKS = [
    check_order_reproduction,
    check_sum_decomposition,
    check_single_witness,
    check_corner_case,
    check_containment,
    check_obstruction,
    check_oracle_equivalence,
    check_linear_solver,
    check_parser,
]


# wall-clock budgets in seconds, part of the criteria
TIME_LIMITS = {check_order_reproduction: 60, check_sum_decomposition: 300}


def run_check(check, trials=None) -> CheckResult:
    start = time.perf_counter()
    try:
        result = check(trials)
    except Exception as exc:  # report, do not abort the table
        result = CheckResult(check.__name__, False, f"raised {type(exc).__name__}: {exc}")
    result.seconds = time.perf_counter() - start
    limit = TIME_LIMITS.get(check)
    if limit is not None and result.seconds > limit:
        result.passed = False
        result.detail += f"; over the {limit}s budget"
    return result


def run_all(trials=None) -> list[CheckResult]:
    return [run_check(c, trials) for c in CHECKS]
