import sympy
from hypothesis import given, settings, strategies as st

from pvspec.fields import Scalar
from pvspec.univar import (
    INFINITY,
    LinePoint,
    RatF,
    UPoly,
    discriminant,
    factor,
    local_expand,
    ord_at,
    partial_fractions,
    residue_at,
    resultant,
    sylvester_resultant,
)
from helpers import Q, QA, QAB, QI, ratfs, upolys

X = sympy.Symbol("x")


def to_sympy_poly(p):
    return sympy.Poly([sympy.Rational(str(c)) for c in reversed(p.coeffs())] or [0], X, domain="QQ")


@settings(max_examples=80)
@given(upolys(Q, 5), upolys(Q, 5))
def test_gcd_matches_sympy(a, b):
    g = a.gcd(b)
    expected = sympy.gcd(to_sympy_poly(a), to_sympy_poly(b))
    if expected.is_zero:
        assert g.is_zero()
    else:
        assert to_sympy_poly(g) == expected.monic()


@settings(max_examples=80)
@given(upolys(Q, 4, nonzero=True), upolys(Q, 4, nonzero=True))
def test_resultant_matches_sympy_and_sylvester(a, b):
    r = resultant(a, b)
    assert r == sylvester_resultant(a, b)
    if a.deg > 0 and b.deg > 0:
        assert sympy.Rational(str(r)) == sympy.resultant(to_sympy_poly(a), to_sympy_poly(b))


@settings(max_examples=50)
@given(upolys(QAB, 2, nonzero=True), upolys(QAB, 3, nonzero=True))
def test_gcd_over_parameters_divides_both(a, b):
    aa, bb = a * UPoly.x(QAB) + UPoly.const(QAB, QAB.param("a")), b
    for p, q in ((a * bb, aa * bb), (aa, b)):
        g = p.gcd(q)
        assert (p % g).is_zero() and (q % g).is_zero()


def test_quartic_resultant_identities():
    a, b = QAB.param("a"), QAB.param("b")
    x = UPoly.x(QAB)
    f = x**4 + x + a
    assert resultant(f, f.derivative()) == 256 * a**3 - 27
    assert discriminant(f) == 256 * a**3 - 27
    # prod (alpha_i - beta)^2 = f(beta)^2 for the monic quartic
    lin = x - UPoly.const(QAB, b)
    assert resultant(f, lin) ** 2 == f(b) ** 2
    assert sylvester_resultant(f, f.derivative()) == 256 * a**3 - 27


@settings(max_examples=40)
@given(ratfs(QI, 3))
def test_partial_fractions_reassemble(u):
    assert partial_fractions(u).reassemble() == u


def test_partial_fraction_residues():
    x = RatF.x(QI)
    i = QI.gen()
    u = (3 * x + 1) / (x * x + 1)
    res = dict((str(r), c) for r, c in partial_fractions(u).residues())
    assert res[str(i)] == (3 * i + 1) / (2 * i)
    assert res[str(-i)] == (-3 * i + 1) / (-2 * i)


def test_local_data_at_infinity():
    x = RatF.x(Q)
    assert ord_at(x, INFINITY) == 1
    assert residue_at(1 / x, INFINITY) == Scalar.coerce(-1, Q)
    assert residue_at(1 / x, LinePoint(Scalar.coerce(0, Q))) == Scalar.coerce(1, Q)
    s = local_expand(1 / (1 - x), LinePoint(Scalar.coerce(0, Q)), 5)
    assert [s.coeff(k) for k in range(5)] == [Scalar.coerce(1, Q)] * 5


@settings(max_examples=60)
@given(ratfs(Q, 3))
def test_residues_sum_to_zero_on_the_line(u):
    pts = [LinePoint(r) for r, _ in partial_fractions(u).residues()]
    total = sum((residue_at(u, p) for p in pts), Scalar.coerce(0, Q)) + residue_at(u, INFINITY)
    # the line minus its rational points: only valid when the denominator splits
    _, facs = factor(u.den)
    if all(f.poly.deg == 1 for f in facs):
        assert total.is_zero()


def test_factor_over_parameters():
    a = QA.param("a")
    x = UPoly.x(QA)
    lc, facs = factor((x * x + 1) * (x**3 - UPoly.const(QA, a)) ** 2)
    degs = sorted((f.poly.deg, f.multiplicity) for f in facs)
    assert degs == [(2, 1), (3, 2)]
