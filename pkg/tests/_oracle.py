"""Independent reference implementations built on sympy.

Nothing here touches the package's own polynomial or matrix code, so the
tests compare two unrelated computations.
"""

import sympy as sp

from triwaring import SymId


def nc_symbols(m):
    return sp.symbols(f"x1:{m + 1}", commutative=False)


def nc_expand(p):
    """The word->coefficient map of an NcPoly, rebuilt through sympy."""
    xs = nc_symbols(p.m)
    expr = sp.Integer(0)
    for word, c in p.items():
        term = sp.Rational(c.numerator, c.denominator)
        for letter in word:
            term = term * xs[letter - 1]
        expr += term
    return words_of(sp.expand(expr), xs)


def words_of(expr, xs):
    index = {x: i + 1 for i, x in enumerate(xs)}
    out = {}
    for term in sp.Add.make_args(sp.expand(expr)):
        if term == 0:
            continue
        coeff, factors = term.args_cnc()
        c = sp.Mul(*coeff)
        word = []
        for f in factors:
            base, exp = f.as_base_exp()
            word += [index[base]] * int(exp)
        out[tuple(word)] = out.get(tuple(word), 0) + c
    return {w: c for w, c in out.items() if c != 0}


def sym_name(sym: SymId) -> str:
    return f"{sym.role}_{sym.row}_{sym.col}_{sym.var}"


def generic(n, var):
    def entry(i, j):
        if j < i:
            return 0
        sym = SymId.diag(i + 1, var) if i == j else SymId.entry(i + 1, j + 1, var)
        return sp.Symbol(sym_name(sym))

    return sp.Matrix(n, n, entry)


def mat_poly(p, mats):
    """p evaluated on sympy matrices by plain products."""
    n = mats[0].shape[0]
    total = sp.zeros(n, n)
    for word, c in p.items():
        prod = sp.eye(n)
        for letter in word:
            prod = prod * mats[letter - 1]
        total += sp.Rational(c.numerator, c.denominator) * prod
    return total.applyfunc(sp.expand)


def to_sympy(cpoly):
    expr = sp.Integer(0)
    for mono, c in cpoly.items():
        term = sp.Rational(c.numerator, c.denominator)
        for sym, e in mono:
            term *= sp.Symbol(sym_name(sym)) ** e
        expr += term
    return sp.expand(expr)


def to_sympy_matrix(u):
    return sp.Matrix(u.n, u.n, lambda i, j: u[i + 1, j + 1] if j >= i else 0)
