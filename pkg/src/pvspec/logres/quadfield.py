"""The function fields K(x) and K(x, z) with z^2 = f(x)."""

from __future__ import annotations

from ..errors import DescriptorMismatch, DivisionByZero, NotGenusOne
from ..fields import Field, Scalar, common_field
from ..univar import RatF, UPoly, discriminant

__all__ = ["RationalFunctionField", "QuadField", "QuadElem"]


class RationalFunctionField:
    """K(x) viewed as a function field of genus 0; elements are RatF."""

    genus = 0

    def __init__(self, base: Field):
        self.base = base

    def __eq__(self, other):
        return isinstance(other, RationalFunctionField) and other.base is self.base

    def __hash__(self):
        return hash(("K(x)", id(self.base)))

    def coerce(self, g) -> RatF:
        if isinstance(g, QuadElem):
            if g.b:
                raise DescriptorMismatch("element involves z")
            g = g.a
        r = RatF.coerce(g, self.base)
        if r.field is not self.base:
            r = r.lift(common_field(r.field, self.base))
            if r.field is not self.base:
                raise DescriptorMismatch("element lives in a larger constant field")
        return r

    def one(self) -> RatF:
        return RatF.const(self.base, 1)

    def x(self) -> RatF:
        return RatF.x(self.base)

    def describe(self) -> str:
        return f"{self.base.describe()}(x)"


class QuadField:
    """K(x, z) with z^2 = f for a nonsquare polynomial f.

    Arithmetic works for any nonsquare f; the place machinery needs a
    monic squarefree quartic (genus one), see :meth:`check_genus_one`.
    """

    genus = 1

    def __init__(self, f: UPoly, name: str = "z"):
        if f.deg < 1:
            raise NotGenusOne("radicand must be a nonconstant polynomial")
        self.f = f
        self.base = f.field
        self.name = name
        self._f_ratf = RatF(f)
        self._df = RatF(f.derivative())

    def __eq__(self, other):
        return isinstance(other, QuadField) and other.f == self.f and other.base is self.base

    def __hash__(self):
        return hash(("K(x,z)", id(self.base), tuple(self.f.c)))

    def check_genus_one(self):
        f = self.f
        if f.deg != 4:
            raise NotGenusOne(f"radicand has degree {f.deg}, not 4")
        if not f.field.is_one(f.c[-1]):
            raise NotGenusOne("the quartic must be monic")
        if discriminant(f).is_zero():
            raise NotGenusOne("the quartic is not squarefree")

    @property
    def radicand(self) -> RatF:
        return self._f_ratf

    def coerce(self, g) -> "QuadElem":
        if isinstance(g, QuadElem):
            if g.parent == self:
                return g
            raise DescriptorMismatch("element of a different quadratic field")
        return QuadElem(self, RatF.coerce(g, self.base), RatF.const(self.base, 0))

    def elem(self, a, b=0) -> "QuadElem":
        return QuadElem(self, RatF.coerce(a, self.base), RatF.coerce(b, self.base))

    def one(self) -> "QuadElem":
        return self.elem(1)

    def x(self) -> "QuadElem":
        return self.elem(RatF.x(self.base))

    def z(self) -> "QuadElem":
        return self.elem(0, 1)

    def describe(self) -> str:
        return f"{self.base.describe()}(x, {self.name}), {self.name}^2 = {self.f.to_str()}"


def _lift_pair(a: RatF, b: RatF, field: Field):
    return (a if a.field is field else a.lift(field)), (b if b.field is field else b.lift(field))


class QuadElem:
    """a + b z with a, b in K(x)."""

    __slots__ = ("parent", "a", "b")

    def __init__(self, parent: QuadField, a: RatF, b: RatF):
        F = parent.base
        if a.field is not F or b.field is not F:
            a, b = _lift_pair(a, b, F)
        self.parent = parent
        self.a = a
        self.b = b

    def _other(self, other):
        if isinstance(other, QuadElem):
            if other.parent != self.parent:
                raise DescriptorMismatch("elements of different quadratic fields")
            return other
        if isinstance(other, (RatF, Scalar, int)) or hasattr(other, "numerator"):
            return self.parent.coerce(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.parent, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(self.parent, -self.a, -self.b)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.parent, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        f = self.parent.radicand
        if not self.b and not o.b:
            return QuadElem(self.parent, self.a * o.a, self.b)
        return QuadElem(
            self.parent,
            self.a * o.a + self.b * o.b * f,
            self.a * o.b + self.b * o.a,
        )

    __rmul__ = __mul__

    def norm(self) -> RatF:
        return self.a * self.a - self.b * self.b * self.parent.radicand

    def conj(self) -> "QuadElem":
        return QuadElem(self.parent, self.a, -self.b)

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if not n:
            raise DivisionByZero("inverse of zero")
        return QuadElem(self.parent, self.a / n, -self.b / n)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if not o.b:
            if not o.a:
                raise DivisionByZero("division by zero")
            return QuadElem(self.parent, self.a / o.a, self.b / o.a)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.parent.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def derivative(self) -> "QuadElem":
        """d/dx, with z' = f'/(2z) = (f'/(2f)) z."""
        P = self.parent
        b = self.b
        db = b.derivative() + b * P._df / (P.radicand * 2) if b else b
        return QuadElem(P, self.a.derivative(), db)

    def is_zero(self) -> bool:
        return not self.a and not self.b

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        try:
            o = self._other(other)
        except DescriptorMismatch:
            return False
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def to_str(self) -> str:
        z = self.parent.name
        if not self.b:
            return self.a.to_str()
        bs = self.b.to_str()
        zt = z if bs == "1" else (f"-{z}" if bs == "-1" else f"({bs})*{z}")
        if not self.a:
            return zt
        return f"{self.a.to_str()} + {zt}"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"QuadElem({self})"
