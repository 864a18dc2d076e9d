"""Shared strategies and small builders for the test suite."""

from fractions import Fraction

from hypothesis import strategies as st

from pvspec.diffop import DiffOperator
from pvspec.fields import Scalar, adjoin_root, rational_field
from pvspec.univar import RatF, UPoly

Q = rational_field()
QI = adjoin_root(Q, [1, 0, 1], "i")
QS = adjoin_root(Q, [3, 0, 1], "s")  # s^2 = -3
QSI = adjoin_root(QS, [1, 0, 1], "i")
QA = rational_field(("a",))
QAB = rational_field(("a", "b"))
QA_SQRT = adjoin_root(QA, UPoly(QA, [-QA.param("a").raw, QA.zero, QA.one]), "r")  # r^2 = a

small_ints = st.integers(min_value=-6, max_value=6)
small_fracs = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))


def scalars(F, coeff=small_fracs):
    """Random elements of a field: rational combinations of a power basis."""
    gens = []
    if F.params:
        gens = [F.param(p) for p in F.params]
    basis = [Scalar.coerce(1, F)]
    for g in gens:
        basis.append(g)
    for lvl in F.chain()[1:]:
        t = F.named(lvl.name)
        basis = basis + [b * t for b in basis]

    @st.composite
    def build(draw):
        acc = Scalar.coerce(0, F)
        for b in basis:
            acc = acc + b * draw(coeff)
        if F.params and draw(st.booleans()):
            den = Scalar.coerce(draw(st.integers(1, 3)), F) + gens[0] * draw(st.integers(1, 2))
            acc = acc / den
        return acc

    return build()


def upolys(F, max_deg=3, coeff=small_ints, nonzero=False):
    @st.composite
    def build(draw):
        n = draw(st.integers(0, max_deg))
        cs = [Scalar.coerce(draw(coeff), F) for _ in range(n + 1)]
        p = UPoly.from_scalars(F, cs)
        if nonzero and p.is_zero():
            p = UPoly.one(F)
        return p

    return build()


def ratfs(F, max_deg=3):
    @st.composite
    def build(draw):
        num = draw(upolys(F, max_deg))
        den = draw(upolys(F, max_deg, nonzero=True))
        return RatF(num, den)

    return build()


def bessel(F, alpha):
    x = RatF.x(F)
    D = DiffOperator.generator(F)
    return D * D + DiffOperator.scalar(1 / x) * D + DiffOperator.scalar(1 - (x.inverse() * alpha) ** 2)
