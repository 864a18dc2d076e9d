from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from pvspec.errors import DenominatorVanishes
from pvspec.fields import Scalar, SpecializationMap, adjoin_root
from pvspec.logres import QuadField
from pvspec.specfam import (
    AdditiveGroupSpec,
    Family,
    JacCondition,
    ad_open_member,
    family_logindep_check,
    jac_condition_eval,
    relation_lattice,
    specialize_function_field,
    specialize_operator,
    specialize_ratf,
)
from pvspec.univar import RatF, UPoly
from helpers import Q, QA, QAB, QS, bessel

A_, B_ = QAB.param("a"), QAB.param("b")


def test_relation_lattice_examples():
    r2 = adjoin_root(Q, [-2, 0, 1], "r").gen()
    assert relation_lattice([Scalar.coerce(1, r2.field), r2]).lattice.is_zero()
    assert [list(v) for v in relation_lattice([Scalar.coerce(1, Q), Scalar.coerce(Fraction(1, 2), Q)]).basis] == [[1, -2]]
    a = QA.param("a")
    assert relation_lattice([a, a * a]).lattice.is_zero()


def test_ad_open_examples():
    K = adjoin_root(Q, [-2, 0, 1], "r")
    gamma = AdditiveGroupSpec((Scalar.coerce(1, QA), QA.param("a")))
    assert ad_open_member(gamma, SpecializationMap(QA, K, {"a": K.gen()})).member
    res = ad_open_member(gamma, SpecializationMap(QA, Q, {"a": Fraction(1, 2)}))
    assert not res.member and res.witness == (1, -2)


# --- brute-force oracle ---------------------------------------------------------------

MONOMIALS = [(0, 0), (1, 0), (0, 1)]


@st.composite
def generator_sets(draw):
    n = draw(st.integers(1, 3))
    gens = [(draw(st.sampled_from([1, -1, 2])), draw(st.sampled_from(MONOMIALS))) for _ in range(n)]
    point = (draw(st.sampled_from([-1, 0, 1, 2])), draw(st.sampled_from([-1, 0, 1, 2])))
    return gens, point


def _value(gen, point):
    c, (i, j) = gen
    return Fraction(c) * Fraction(point[0]) ** i * Fraction(point[1]) ** j


def _brute_member(gens, point, height=5):
    """No integer vector of height <= 5 is a relation after but not before."""
    for n in product(range(-height, height + 1), repeat=len(gens)):
        if not any(n):
            continue
        before = {}
        for k, (c, mono) in zip(n, gens):
            before[mono] = before.get(mono, 0) + k * c
        if not any(before.values()):
            continue
        if sum(k * _value(g, point) for k, g in zip(n, gens)) == 0:
            return False
    return True


@settings(max_examples=100)
@given(generator_sets())
def test_ad_open_matches_brute_force(t):
    gens, point = t
    scalars = tuple(c * A_**i * B_**j for c, (i, j) in gens)
    m = SpecializationMap(QAB, Q, {"a": point[0], "b": point[1]})
    res = ad_open_member(AdditiveGroupSpec(scalars), m)
    assert res.member == _brute_member(gens, point)
    if not res.member:
        w = res.witness
        assert sum((v * k for v, k in zip(res.values, w)), Scalar.coerce(0, Q)).is_zero()
        assert not sum((g * k for g, k in zip(scalars, w)), Scalar.coerce(0, QAB)).is_zero()


@settings(max_examples=50)
@given(generator_sets())
def test_ad_open_monotone(t):
    gens, point = t
    scalars = tuple(c * A_**i * B_**j for c, (i, j) in gens)
    m = SpecializationMap(QAB, Q, {"a": point[0], "b": point[1]})
    if ad_open_member(AdditiveGroupSpec(scalars), m).member:
        for k in range(1, len(scalars)):
            assert ad_open_member(AdditiveGroupSpec(scalars[:k]), m).member


# --- specialization of objects ------------------------------------------------------------

def test_specialize_operator_and_polynomial():
    a = QA.param("a")
    m = SpecializationMap(QA, Q, {"a": Fraction(1, 2)})
    assert specialize_operator(m, bessel(QA, a)) == bessel(Q, Scalar.coerce(Fraction(1, 2), Q))
    x = UPoly.x(QA)
    F = QuadField(x**4 + x + UPoly.const(QA, a))
    m1 = SpecializationMap(QA, Q, {"a": 1})
    assert specialize_function_field(m1, F).f == UPoly.x(Q) ** 4 + UPoly.x(Q) + 1


def test_specialize_denominator_vanishes():
    t = adjoin_root(Q, [-2, 0, 0, 1], "t", assume_irreducible=True).gen()  # t^3 = 2
    a = QA.param("a")
    m = SpecializationMap(QA, t.field, {"a": 3 / (4 * t * t)})
    lam = RatF.const(QA, 1 / (256 * a**3 - 27))
    with pytest.raises(DenominatorVanishes):
        specialize_ratf(m, lam)


# --- Jacobian condition and the family check ---------------------------------------------

def _jac():
    return JacCondition(-4 * A_, Scalar.coerce(1, QAB), Scalar.coerce(0, QAB), Scalar.coerce(1, QAB))


def test_jac_condition():
    s = QS.gen()
    assert jac_condition_eval(_jac(), SpecializationMap(QAB, Q, {"a": 1, "b": 0})).status == "satisfied"
    r = jac_condition_eval(_jac(), SpecializationMap(QAB, QS, {"a": -(1 + s) / 4, "b": 0}))
    assert r.status == "violated" and r.order == 4


def _family():
    x = UPoly.x(QAB)
    F = QuadField(x**4 + x + UPoly.const(QAB, A_))
    eta = (F.x() - B_) / F.z()
    bb = eta * eta
    gamma = AdditiveGroupSpec(((B_**4 + B_ + A_) ** 2, 256 * A_**3 - 27))
    return Family(F, [bb + eta, bb - eta], gamma, _jac(), [256 * A_**3 - 27])


def test_family_check_is_deterministic():
    fam = _family()
    m = SpecializationMap(QAB, Q, {"a": 1, "b": 0})
    first = family_logindep_check(fam, m).to_record()
    second = family_logindep_check(_family(), SpecializationMap(QAB, Q, {"a": 1, "b": 0})).to_record()
    assert first == second
    assert first["verdict"] == "independent"
    assert first["ad_open"] == "not_member, witness (229, -1)"
    assert first["Z1"] == "span{(1, -1)}" and first["Z2"] == "0"


def test_family_check_degenerate():
    t = adjoin_root(Q, [-2, 0, 0, 1], "t", assume_irreducible=True).gen()
    m = SpecializationMap(QAB, t.field, {"a": 3 / (4 * t * t), "b": 0})
    assert family_logindep_check(_family(), m).verdict == "DegenerateCurve"


def test_family_check_sign_flipped_point_is_dependent():
    s = QS.gen()
    m = SpecializationMap(QAB, QS, {"a": -(1 + s) / 4, "b": (1 + s) / 8})
    v = family_logindep_check(_family(), m)
    assert v.verdict == "dependent" and v.certificate_d == (2, -2)
    assert v.jac.status == "violated" and v.ad_open.member
