from fractions import Fraction
from itertools import product

import pytest

from pvspec.diffop import DiffOperator, companion, right_divide, riccati_residual
from pvspec.errors import CapExceeded
from pvspec.expdata import (
    NO_EXPONENTIAL_POSSIBLE,
    exp_bound,
    exponential_solutions,
    generalized_exponents,
    principal_parts,
    relation_degree_bound,
    singular_points,
)
from pvspec.fields import Scalar
from pvspec.univar import INFINITY, LinePoint, RatF
from helpers import Q, QA, QI, bessel


def zero(F):
    return LinePoint(Scalar.coerce(0, F))


def exps(L, p):
    return sorted((e.to_str(), e.multiplicity) for e in generalized_exponents(L, p))


def test_bessel_exponents_symbolic():
    L = bessel(QA, QA.param("a"))
    assert exps(L, zero(QA)) == [("-a", 1), ("a", 1)]
    assert exps(L, INFINITY) == [("-i/x - 1/2", 1), ("i/x - 1/2", 1)]


def test_bessel_exponents_alpha_zero():
    L = bessel(Q, Scalar.coerce(0, Q))
    assert exps(L, zero(Q)) == [("0", 2)]


def test_euler_operator_exponents():
    x = RatF.x(Q)
    D = DiffOperator.generator(Q)
    L = DiffOperator.scalar(x * x) * D * D + DiffOperator.scalar(x) * D - Fraction(1, 9)
    assert exps(L, zero(Q)) == [("-1/3", 1), ("1/3", 1)]
    # ordinary point: -e/(x - 1) must be the log-derivative of 1 or of x - 1
    assert exps(L, LinePoint(Scalar.coerce(1, Q))) == [("-1", 1), ("0", 1)]


def test_bessel_principal_parts():
    L = bessel(QA, QA.param("a"))
    at_inf = sorted(h.value.to_str() for h in principal_parts(L, INFINITY))
    assert at_inf == ["(-i*x - 1/2)/x", "(i*x - 1/2)/x"]
    at_zero = sorted(h.value.to_str() for h in principal_parts(L, zero(QA)))
    assert at_zero == ["-a/x", "a/x"]


@pytest.mark.parametrize(
    "alpha, bound",
    [(Fraction(1, 3), 1), (Fraction(5, 2), 3), (Fraction(7, 2), 4), (Fraction(1, 2), 1)],
)
def test_bessel_bound(alpha, bound):
    rep = exp_bound(bessel(Q, Scalar.coerce(alpha, Q)))
    assert rep.bound == bound
    assert rep.recompute_bound() == bound


def test_bessel_bound_symbolic():
    rep = exp_bound(bessel(QA, QA.param("a")))
    assert rep.bound == 1
    assert rep.phi_integers == []


def _brute_force(L, values, denominators):
    """Every u = p + q/x with p, q from small sets that right-divides L."""
    F = L.field
    x = RatF.x(F)
    out = set()
    for p, q in product(values, denominators):
        u = RatF.const(F, p) + x.inverse() * q
        if not right_divide(L, u)[1]:
            out.add(u.to_str())
    return out


def test_bessel_half_solutions_and_brute_force():
    L = bessel(Q, Scalar.coerce(Fraction(1, 2), Q))
    sols = exponential_solutions(L)
    F = sols[0].field
    i, x = F.named("i"), RatF.x(F)
    assert set(sols) == {RatF.const(F, i) - 1 / (2 * x), RatF.const(F, -i) - 1 / (2 * x)}
    for u in sols:
        assert riccati_residual(L, u).is_zero()
    Li = L.lift(sols[0].field)
    i = Li.field.named("i")
    values = [Scalar.coerce(c, Li.field) + i * d for c in (-1, 0, 1) for d in (-1, 0, 1)]
    dens = [Scalar.coerce(Fraction(n, 2), Li.field) for n in range(-3, 4)]
    assert _brute_force(Li, values, dens) == {u.to_str() for u in sols}


def test_bessel_third_has_no_solutions():
    L = bessel(Q, Scalar.coerce(Fraction(1, 3), Q))
    assert exponential_solutions(L) == []
    Li = L.lift(QI)
    i = QI.gen()
    values = [Scalar.coerce(c, QI) + i * d for c in (-1, 0, 1) for d in (-1, 0, 1)]
    dens = [Scalar.coerce(Fraction(n, 6), QI) for n in range(-6, 7)]
    assert _brute_force(Li, values, dens) == set()


def test_second_derivative_solutions():
    D = DiffOperator.generator(Q)
    sols = exponential_solutions(D * D)
    assert [u.to_str() for u in sols] == ["0", "1/x"]
    assert exp_bound(D * D).bound == 1


def test_known_exponential_solutions():
    # x y'' - (x + 1) y' + y = 0 has e^x and x + 1
    x = RatF.x(Q)
    D = DiffOperator.generator(Q)
    L = DiffOperator.scalar(x) * D * D - DiffOperator.scalar(x + 1) * D + 1
    assert [u.to_str() for u in exponential_solutions(L)] == ["1", "1/(x + 1)"]


def test_no_exponential_possible_when_a_point_has_no_unramified_exponent():
    # Airy: only ramified exponents at infinity
    x = RatF.x(Q)
    D = DiffOperator.generator(Q)
    L = D * D - DiffOperator.scalar(x)
    rep = exp_bound(L)
    assert rep.bound == NO_EXPONENTIAL_POSSIBLE
    assert exponential_solutions(L, rep) == []


def test_singular_points_of_bessel():
    pts, _ = singular_points(bessel(QA, QA.param("a")))
    assert [str(p.value) for p in pts] == ["0"]


def test_relation_bound_order_one_is_zero():
    x = RatF.x(Q)
    D = DiffOperator.generator(Q)
    for L in (D - DiffOperator.scalar(1 / x), D - 1, D):
        assert relation_degree_bound(companion(L)) == 0


def test_relation_bound_bessel_is_consistent():
    A = companion(bessel(Q, Scalar.coerce(Fraction(1, 3), Q)))
    first = relation_degree_bound(A, detailed=True)
    second = relation_degree_bound(A, detailed=True)
    assert first == second
    assert first.value == max(t[-1] for t in first.terms)
    for s, mu, degT, N, value in first.terms:
        assert value == 2 * mu * degT + (mu * (mu - 1) * N if N != NO_EXPONENTIAL_POSSIBLE else 0)


def test_relation_bound_cap():
    x = RatF.x(Q)
    D = DiffOperator.generator(Q)
    L = D**7 - DiffOperator.scalar(x)
    with pytest.raises(CapExceeded):
        relation_degree_bound(companion(L), cap=20)
