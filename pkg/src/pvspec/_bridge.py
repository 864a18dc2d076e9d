"""Factorization of univariate polynomials through sympy.

Only towers sympy can represent are supported: Q(params) at the bottom and
quadratic levels whose minimal polynomials have rational coefficients.
Anything else reports ``None`` and the caller keeps an unverified block.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import sympy
from gmpy2 import mpq

from .fields import Field, Scalar


class BridgeFailure(Exception):
    pass


def supported(F: Field) -> bool:
    for f in F.chain()[1:]:
        if f.degree != 2:
            return False
        for c in f.minpoly:
            if f.parent.rational_value(c) is None:
                return False
    return True


@lru_cache(maxsize=None)
def _setup(F: Field):
    syms = {name: sympy.Symbol(name) for name in F.params}
    radicals = []  # per level: (sympy sqrt(D), raw of 2*theta + p in F)
    roots = []  # per level: sympy expression of theta
    for f in F.chain()[1:]:
        P = f.parent
        p = P.rational_value(f.minpoly[1])
        q = P.rational_value(f.minpoly[0])
        D = sympy.Rational(p.numerator, p.denominator) ** 2 - 4 * sympy.Rational(
            q.numerator, q.denominator
        )
        s = sympy.sqrt(D)
        roots.append((-sympy.Rational(p.numerator, p.denominator) + s) / 2)
        theta = F.named(f.name)
        radicals.append((s, (2 * theta + F(p)).raw))
    table = {}
    for k in range(len(radicals) + 1):
        for subset in combinations(range(len(radicals)), k):
            expr = sympy.Integer(1)
            ours = F.one
            for i in subset:
                expr = expr * radicals[i][0]
                ours = F.mul(ours, radicals[i][1])
            c, rest = sympy.expand(expr).as_coeff_Mul()
            inv_c = F.from_rational(mpq(1) / _to_mpq(c))
            table.setdefault(rest, F.mul(ours, inv_c))
    return syms, roots, table


def _to_mpq(r):
    r = sympy.Rational(r)
    return mpq(int(r.p), int(r.q))


def to_sympy(F: Field, raw):
    syms, roots, _ = _setup(F)
    return _to_sympy(F, raw, syms, roots, len(F.chain()) - 1)


def _to_sympy(field, raw, syms, roots, level):
    if field.parent is None:
        if field._frac is None:
            return sympy.Rational(int(raw.numerator), int(raw.denominator))
        return raw.as_expr(*[syms[n] for n in field.params])
    out = sympy.Integer(0)
    for k, c in enumerate(raw):
        out += _to_sympy(field.parent, c, syms, roots, level - 1) * roots[level - 1] ** k
    return out


def _is_radical(f):
    if f is sympy.I:
        return True
    return f.is_Pow and f.exp == sympy.Rational(1, 2) and f.base.is_Rational


def from_sympy(F: Field, expr):
    syms, _, table = _setup(F)
    expr = sympy.expand(expr)
    total = F.zero
    for term in sympy.Add.make_args(expr):
        c, factors = term.as_coeff_mul()
        value = F.from_rational(_to_mpq(c))
        rad = []
        for f in factors:
            if _is_radical(f):
                rad.append(f)
            elif f.is_Symbol and f.name in syms:
                value = F.mul(value, F.param(f.name).raw)
            elif f.is_Pow and f.base.is_Symbol and f.exp.is_Integer and f.exp > 0:
                value = F.mul(value, F.pow(F.param(f.base.name).raw, int(f.exp)))
            else:
                raise BridgeFailure(f"cannot map {f} into the tower")
        if rad:
            rc, rest = sympy.Mul(*rad).as_coeff_Mul()
            if rest not in table:
                raise BridgeFailure(f"radical {rest} not in the tower")
            value = F.mul(value, F.mul(table[rest], F.from_rational(_to_mpq(rc))))
        total = F.add(total, value)
    return total


def factor_squarefree(poly):
    """Irreducible monic factors of a squarefree UPoly, or None."""
    from .univar import UPoly

    F = poly.field
    if not supported(F):
        return None
    syms, _, _ = _setup(F)
    X = sympy.Dummy("x")
    base = F.base
    # clear parameter denominators
    scale = F.one
    if base._frac is not None:
        den = base._frac.ring.one
        for c in poly.c:
            for _, b in _base_entries(F, c):
                if b:
                    den = den.lcm(b.denom)
        scale = F.lift_raw(base._frac.new(den, base._frac.ring.one), base)
    expr = sympy.Integer(0)
    for k, c in enumerate(poly.c):
        expr += to_sympy(F, F.mul(c, scale)) * X**k
    gens = [X] + [syms[n] for n in F.params]
    ext = [r for r, _ in _radicals(F)]
    try:
        if ext:
            _, facs = sympy.factor_list(expr, *gens, extension=ext)
        else:
            _, facs = sympy.factor_list(expr, *gens)
        out = []
        for fac, mult in facs:
            if not fac.has(X):
                continue
            coeffs = sympy.Poly(fac, X).all_coeffs()[::-1]
            up = UPoly(F, [from_sympy(F, c) for c in coeffs]).monic()
            out.extend([up] * int(mult))
    except (BridgeFailure, sympy.PolynomialError, NotImplementedError):
        return None
    prod = UPoly(F, [F.one])
    for f in out:
        prod = prod * f
    if prod != poly.monic():
        return None
    return out


def _radicals(F):
    out = []
    for f in F.chain()[1:]:
        P = f.parent
        p = P.rational_value(f.minpoly[1])
        q = P.rational_value(f.minpoly[0])
        D = sympy.Rational(p.numerator, p.denominator) ** 2 - 4 * sympy.Rational(
            q.numerator, q.denominator
        )
        out.append((sympy.sqrt(D), None))
    return out


def _base_entries(field, raw, prefix=()):
    if field.parent is None:
        yield prefix, raw
        return
    for k, c in enumerate(raw):
        yield from _base_entries(field.parent, c, (k,) + prefix)


def scalar_from_sympy(F: Field, expr) -> Scalar:
    return Scalar(F, from_sympy(F, expr))
