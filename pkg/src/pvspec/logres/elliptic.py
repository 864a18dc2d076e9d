"""Short Weierstrass curves v^2 = u^3 + a u + b: group law and torsion orders."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DegenerateCurve, DenominatorVanishes, DescriptorMismatch, PointNotOnCurve, Reducible
from ..fields import Field, Scalar, common_field, specialize_tower

__all__ = [
    "EllCurve",
    "EllPoint",
    "ell_add",
    "ell_mul",
    "TorsionResult",
    "torsion_order",
    "absolute_degree",
]


class EllCurve:
    """v^2 = u^3 + a u + b over a tower field."""

    def __init__(self, a, b, field: Field | None = None):
        if field is None:
            fa = a.field if isinstance(a, Scalar) else None
            fb = b.field if isinstance(b, Scalar) else None
            if fa is None and fb is None:
                raise DescriptorMismatch("field needed for rational coefficients")
            field = fa if fb is None else fb if fa is None else common_field(fa, fb)
        self.field = field
        self.a = Scalar.coerce(a, field)
        self.b = Scalar.coerce(b, field)
        if (4 * self.a**3 + 27 * self.b**2).is_zero():
            raise DegenerateCurve(f"4a^3 + 27b^2 = 0 for a = {self.a}, b = {self.b}")

    @property
    def O(self) -> "EllPoint":
        return EllPoint(self, None, None)

    def point(self, u, v) -> "EllPoint":
        P = EllPoint(self, Scalar.coerce(u, self.field), Scalar.coerce(v, self.field))
        if not self.contains(P):
            raise PointNotOnCurve(f"({u}, {v}) is not on {self}")
        return P

    def contains(self, P: "EllPoint") -> bool:
        if P.is_zero():
            return True
        return (P.v * P.v - (P.u**3 + self.a * P.u + self.b)).is_zero()

    def lift(self, field: Field) -> "EllCurve":
        return EllCurve(self.a.lift(field), self.b.lift(field), field)

    def discriminant(self) -> Scalar:
        return -16 * (4 * self.a**3 + 27 * self.b**2)

    def __eq__(self, other):
        return isinstance(other, EllCurve) and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __str__(self):
        return f"v^2 = u^3 + ({self.a})*u + ({self.b})"


@dataclass(frozen=True, eq=False)
class EllPoint:
    curve: EllCurve
    u: Scalar | None
    v: Scalar | None

    def is_zero(self) -> bool:
        return self.u is None

    def __add__(self, other):
        return ell_add(self.curve, self, other)

    def __neg__(self):
        if self.is_zero():
            return self
        return EllPoint(self.curve, self.u, -self.v)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, n: int):
        return ell_mul(self.curve, n, self)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, EllPoint):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.u == other.u and self.v == other.v

    def __hash__(self):
        return hash(None) if self.is_zero() else hash((self.u, self.v))

    def lift(self, curve: EllCurve) -> "EllPoint":
        if self.is_zero():
            return curve.O
        return EllPoint(curve, self.u.lift(curve.field), self.v.lift(curve.field))

    def to_str(self) -> str:
        return "O" if self.is_zero() else f"({self.u}, {self.v})"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"EllPoint{self.to_str()}" if not self.is_zero() else "EllPoint(O)"


def _check(C: EllCurve, P: EllPoint):
    if not C.contains(P):
        raise PointNotOnCurve(f"{P} is not on {C}")


def ell_add(C: EllCurve, P: EllPoint, Q: EllPoint) -> EllPoint:
    """Chord-and-tangent addition."""
    if P.is_zero():
        return Q
    if Q.is_zero():
        return P
    if P.u == Q.u:
        if (P.v + Q.v).is_zero():
            return C.O
        lam = (3 * P.u * P.u + C.a) / (2 * P.v)
    else:
        lam = (Q.v - P.v) / (Q.u - P.u)
    u = lam * lam - P.u - Q.u
    v = lam * (P.u - u) - P.v
    return EllPoint(C, u, v)


def ell_mul(C: EllCurve, n: int, P: EllPoint) -> EllPoint:
    """n P by double-and-add."""
    _check(C, P)
    if n < 0:
        return ell_mul(C, -n, -P)
    out = C.O
    base = P
    while n:
        if n & 1:
            out = ell_add(C, out, base)
        n >>= 1
        if n:
            base = ell_add(C, base, base)
    return out


# --- torsion ----------------------------------------------------------------------

@dataclass(frozen=True)
class TorsionResult:
    status: str  # "order" | "non_torsion" | "inconclusive"
    order: int | None
    bound: int
    method: str

    def __str__(self):
        if self.status == "order":
            return f"order {self.order} ({self.method})"
        if self.status == "non_torsion":
            return f"non-torsion ({self.method})"
        return f"inconclusive up to {self.bound} ({self.method})"


# largest torsion order over number fields of degree 1 and 2
_DEFINITIVE = {1: 12, 2: 18}
_DEFAULT_BOUND = 24


def absolute_degree(F: Field) -> int:
    d = 1
    for f in F.chain()[1:]:
        d *= f.degree
    return d


def _search(C, P, bound):
    Q = P
    for k in range(1, bound + 1):
        if Q.is_zero():
            return k
        Q = ell_add(C, Q, P)
    return None


_SPECIAL_VALUES = (2, 3, 5, 7, 1, -1, 11, -2, 13, 4)


def _specializations(params):
    n = len(_SPECIAL_VALUES)
    for i in range(n):
        yield {p: _SPECIAL_VALUES[(i + 3 * j) % n] + j for j, p in enumerate(params)}


def torsion_order(C: EllCurve, P: EllPoint, bound: int | None = None) -> TorsionResult:
    """Decide whether P has finite order.

    Over Q and quadratic fields the search up to the largest possible
    torsion order is conclusive.  Over fields with parameters a good
    specialization decides: specialization is injective on torsion, so a
    non-torsion image proves non-torsion, and a finite image order n is
    the only candidate for the generic order.  Other fields get a plain
    bounded search.
    """
    _check(C, P)
    F = C.field
    if not F.params:
        d = absolute_degree(F)
        if d in _DEFINITIVE:
            cap = _DEFINITIVE[d]
            n = _search(C, P, cap)
            method = "Mazur bound over Q" if d == 1 else "uniform bound over quadratic fields"
            if n is not None:
                return TorsionResult("order", n, cap, method)
            return TorsionResult("non_torsion", None, cap, method)
        cap = bound or _DEFAULT_BOUND
        n = _search(C, P, cap)
        if n is not None:
            return TorsionResult("order", n, cap, "multiple search")
        return TorsionResult("inconclusive", None, cap, "multiple search")
    cap = bound or _DEFAULT_BOUND
    for images in _specializations(F.params):
        try:
            m = specialize_tower(F, images)
            Cs = EllCurve(m(C.a), m(C.b), m.target)
            Ps = Cs.O if P.is_zero() else EllPoint(Cs, m(P.u), m(P.v))
        except (DenominatorVanishes, DegenerateCurve, Reducible, DescriptorMismatch):
            continue
        r = torsion_order(Cs, Ps, bound)
        where = ", ".join(f"{k}={v}" for k, v in images.items())
        if r.status == "non_torsion":
            return TorsionResult("non_torsion", None, r.bound, f"specialization {where}: {r.method}")
        if r.status == "order":
            if ell_mul(C, r.order, P).is_zero():
                return TorsionResult("order", r.order, r.bound, f"specialization {where}, checked generically")
            return TorsionResult("non_torsion", None, r.bound, f"specialization {where} has order {r.order}, generic point does not")
    n = _search(C, P, cap)
    if n is not None:
        return TorsionResult("order", n, cap, "multiple search")
    return TorsionResult("inconclusive", None, cap, "no usable specialization")
