from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from pvspec import _bridge
from pvspec.errors import DenominatorVanishes, DivisionByZero, Reducible
from pvspec.fields import (
    Scalar,
    SpecializationMap,
    adjoin_root,
    common_field,
    rational_coordinates,
    rational_field,
)
from helpers import Q, QA, QAB, QA_SQRT, QI, QS, QSI, scalars

FIELDS = [Q, QI, QS, QSI, QA, QAB, QA_SQRT]


@st.composite
def triples(draw):
    F = draw(st.sampled_from(FIELDS))
    s = scalars(F)
    return F, draw(s), draw(s), draw(s)


@settings(max_examples=500)
@given(triples())
def test_field_axioms(t):
    F, a, b, c = t
    zero, one = Scalar.coerce(0, F), Scalar.coerce(1, F)
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + zero == a and a * one == a
    assert a - a == zero
    if not a.is_zero():
        assert a * a.inverse() == one
        assert (b / a) * a == b


@settings(max_examples=60)
@given(st.sampled_from([QI, QS, QSI, QA]).flatmap(lambda F: st.tuples(st.just(F), scalars(F), scalars(F))))
def test_arithmetic_matches_sympy(t):
    F, a, b = t
    sa, sb = _bridge.to_sympy(F, a.raw), _bridge.to_sympy(F, b.raw)
    assert sympy.simplify(_bridge.to_sympy(F, (a * b).raw) - sa * sb) == 0
    assert sympy.simplify(_bridge.to_sympy(F, (a + b).raw) - sa - sb) == 0
    if not b.is_zero():
        assert sympy.simplify(_bridge.to_sympy(F, (a / b).raw) - sa / sb) == 0


def test_running_example_values():
    s = QS.gen()
    a, b = QAB.param("a"), QAB.param("b")
    m = SpecializationMap(QAB, QS, {"a": -(1 + s) / 4, "b": -(1 + s) / 8})
    assert m(256 * a**3 - 27) == Scalar.coerce(5, QS)
    assert m((b**4 + b + a) ** 2) == 37249 * (s + 1) ** 2 / 262144


def test_specialization_is_a_homomorphism():
    a, b = QAB.param("a"), QAB.param("b")
    m = SpecializationMap(QAB, Q, {"a": Fraction(2, 3), "b": -1})
    u, v = a**2 / (b + 3) + 1, (a - b) / (a * b + 7)
    assert m(u * v) == m(u) * m(v)
    assert m(u + v) == m(u) + m(v)


def test_specialization_denominator_vanishes():
    a = QA.param("a")
    m = SpecializationMap(QA, Q, {"a": 3})
    with pytest.raises(DenominatorVanishes):
        m(1 / (a - 3))


def test_tower_lookup_and_common_field():
    i = QSI.named("i")
    s = QSI.named("s")
    assert i * i == Scalar.coerce(-1, QSI)
    assert s * s == Scalar.coerce(-3, QSI)
    assert common_field(QS, QSI) is QSI
    assert (i * s).sqrt() is None or ((i * s).sqrt() ** 2 == i * s)


def test_reducible_minpoly_rejected():
    with pytest.raises(Reducible):
        adjoin_root(Q, [-4, 0, 1], "t")


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        Scalar.coerce(1, QI) / Scalar.coerce(0, QI)


def test_rational_coordinates():
    r = QA_SQRT.named("r")
    a = QA_SQRT.param("a")
    coords = rational_coordinates([r, 2 * r, a + 1])
    assert coords[1] == {k: 2 * v for k, v in coords[0].items()}
    assert coords[0] and set(coords[0]).isdisjoint(coords[2])


def test_sqrt_in_parametric_field():
    a, b = QAB.param("a"), QAB.param("b")
    w = ((a + 1) ** 2 / (4 * b**2)).sqrt()
    assert w is not None and w * w == (a + 1) ** 2 / (4 * b**2)
    assert a.sqrt() is None
