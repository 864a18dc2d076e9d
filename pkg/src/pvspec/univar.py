"""Univariate polynomials, rational functions and local expansions over a tower field.

Orders follow the pole-positive convention: ``ord_at(1/x, 0) == 1`` and
``ord_at(0, p) == 0``.  ``val_at`` is the valuation, i.e. ``-ord_at``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from gmpy2 import mpq

from . import _rawpoly as rp
from .errors import DescriptorMismatch, DivisionByZero, PrecisionExhausted
from .fields import Field, Scalar, common_field

__all__ = [
    "UPoly",
    "RatF",
    "LinePoint",
    "LaurentSeries",
    "Factor",
    "PartialFractions",
    "poly_gcd",
    "resultant",
    "discriminant",
    "sylvester_resultant",
    "squarefree_decomposition",
    "factor",
    "partial_fractions",
    "local_expand",
    "ord_at",
    "val_at",
    "residue_at",
    "INFINITY",
]


def _is_rational_number(v):
    return isinstance(v, (int, Fraction)) or type(v) is type(mpq(0))


class UPoly:
    """Dense polynomial in x with coefficients in ``field`` (raws, low -> high)."""

    __slots__ = ("field", "c")

    def __init__(self, field: Field, coeffs=()):
        self.field = field
        self.c = tuple(rp.strip(field, coeffs))

    # -- constructors ---------------------------------------------------------
    @classmethod
    def from_scalars(cls, field: Field, seq) -> "UPoly":
        return cls(field, [Scalar.coerce(v, field).raw for v in seq])

    @classmethod
    def x(cls, field: Field) -> "UPoly":
        return cls(field, [field.zero, field.one])

    @classmethod
    def const(cls, field: Field, value) -> "UPoly":
        return cls(field, [Scalar.coerce(value, field).raw])

    @classmethod
    def one(cls, field: Field) -> "UPoly":
        return cls(field, [field.one])

    # -- basic data -------------------------------------------------------------
    @property
    def deg(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self):
        return bool(self.c)

    @property
    def lc(self) -> Scalar:
        if not self.c:
            return Scalar(self.field, self.field.zero)
        return Scalar(self.field, self.c[-1])

    def coeff(self, k: int) -> Scalar:
        if 0 <= k < len(self.c):
            return Scalar(self.field, self.c[k])
        return Scalar(self.field, self.field.zero)

    def coeffs(self) -> list:
        return [Scalar(self.field, r) for r in self.c]

    def lift(self, field: Field) -> "UPoly":
        if field is self.field:
            return self
        return UPoly(field, [field.lift_raw(r, self.field) for r in self.c])

    # -- arithmetic ---------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, UPoly):
            F = common_field(self.field, other.field)
            return F, self.lift(F), other.lift(F)
        if isinstance(other, Scalar):
            F = common_field(self.field, other.field)
            return F, self.lift(F), UPoly(F, [Scalar.coerce(other, F).raw])
        if _is_rational_number(other):
            return self.field, self, UPoly(self.field, [self.field.from_rational(other)])
        return None

    def __add__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        F, a, b = t
        return UPoly(F, rp.add(F, a.c, b.c))

    __radd__ = __add__

    def __neg__(self):
        return UPoly(self.field, rp.neg(self.field, self.c))

    def __sub__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        F, a, b = t
        return UPoly(F, rp.sub(F, a.c, b.c))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        F, a, b = t
        return UPoly(F, rp.mul(F, a.c, b.c))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        return UPoly(self.field, rp.pow_(self.field, list(self.c), n))

    def __divmod__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        F, a, b = t
        q, r = rp.divmod_(F, list(a.c), list(b.c))
        return UPoly(F, q), UPoly(F, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exquo(self, other) -> "UPoly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def __truediv__(self, other):
        return RatF(self) / other

    def __eq__(self, other):
        if isinstance(other, UPoly):
            try:
                F = common_field(self.field, other.field)
            except DescriptorMismatch:
                return False
            return self.lift(F).c == other.lift(F).c
        if isinstance(other, Scalar) or _is_rational_number(other):
            return self.deg <= 0 and self.coeff(0) == other
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.c))

    def derivative(self) -> "UPoly":
        return UPoly(self.field, rp.deriv(self.field, list(self.c)))

    def monic(self) -> "UPoly":
        return UPoly(self.field, rp.monic(self.field, list(self.c)))

    def gcd(self, other: "UPoly") -> "UPoly":
        F, a, b = self._coerce(other)
        return UPoly(F, rp.gcd(F, list(a.c), list(b.c)))

    def xgcd(self, other: "UPoly"):
        F, a, b = self._coerce(other)
        g, s, t = rp.xgcd(F, list(a.c), list(b.c))
        return UPoly(F, g), UPoly(F, s), UPoly(F, t)

    def __call__(self, value):
        if isinstance(value, UPoly):
            F, a, b = self._coerce(value)
            return UPoly(F, rp.compose(F, list(a.c), list(b.c)))
        if isinstance(value, RatF):
            acc = RatF.const(value.field, 0)
            for c in reversed(self.coeffs()):
                acc = acc * value + c
            return acc
        v = Scalar.coerce(value, self.field) if not isinstance(value, Scalar) else value
        F = common_field(self.field, v.field)
        a = self.lift(F)
        return Scalar(F, rp.evaluate(F, a.c, Scalar.coerce(v, F).raw))

    def shift(self, c) -> "UPoly":
        """P(x + c)."""
        c = Scalar.coerce(c, self.field) if not isinstance(c, Scalar) else c
        F = common_field(self.field, c.field)
        return UPoly(F, rp.taylor_shift(F, list(self.lift(F).c), Scalar.coerce(c, F).raw))

    def reverse(self, n: int | None = None) -> "UPoly":
        """x^n P(1/x) with n = deg P by default."""
        n = self.deg if n is None else n
        c = list(self.c) + [self.field.zero] * (n + 1 - len(self.c))
        return UPoly(self.field, c[::-1])

    def valuation_at(self, point) -> int:
        """Multiplicity of ``point`` as a root (0 if P(point) != 0)."""
        if not self.c:
            raise ValueError("valuation of the zero polynomial")
        s = self.shift(point)
        k = 0
        while s.field.is_zero(s.c[k]):
            k += 1
        return k

    def to_str(self, var: str = "x") -> str:
        F = self.field
        terms = []
        for k in range(len(self.c) - 1, -1, -1):
            r = self.c[k]
            if F.is_zero(r):
                continue
            cs = F.to_str(r)
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if not mono:
                terms.append(cs)
            elif cs == "1":
                terms.append(mono)
            elif cs == "-1":
                terms.append("-" + mono)
            elif _atomic(cs):
                terms.append(f"{cs}*{mono}")
            else:
                terms.append(f"({cs})*{mono}")
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"UPoly({self})"


def _atomic(s: str) -> bool:
    from .fields import _is_atomic

    return _is_atomic(s)


class RatF:
    """A reduced quotient of polynomials with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _reduced=False):
        if not isinstance(num, UPoly):
            raise TypeError("RatF numerator must be a UPoly")
        if den is None:
            den = UPoly.one(num.field)
        if num.field is not den.field:
            F = common_field(num.field, den.field)
            num, den = num.lift(F), den.lift(F)
        if not den:
            raise DivisionByZero("zero denominator")
        if not _reduced:
            if not num:
                den = UPoly.one(num.field)
            else:
                g = num.gcd(den)
                if g.deg > 0:
                    num, den = num.exquo(g), den.exquo(g)
                lc = den.lc
                if lc != 1:
                    inv = lc.inverse()
                    num, den = num * inv, den * inv
        self.num = num
        self.den = den

    # -- constructors ---------------------------------------------------------------
    @classmethod
    def x(cls, field: Field) -> "RatF":
        return cls(UPoly.x(field), _reduced=True)

    @classmethod
    def const(cls, field: Field, value) -> "RatF":
        return cls(UPoly.const(field, value), _reduced=True)

    @classmethod
    def coerce(cls, value, field: Field | None = None) -> "RatF":
        if isinstance(value, RatF):
            return value if field is None else value.lift(field)
        if isinstance(value, UPoly):
            r = cls(value, _reduced=True)
            return r if field is None else r.lift(field)
        if isinstance(value, Scalar):
            F = value.field if field is None else field
            return cls.const(F, value)
        if _is_rational_number(value) and field is not None:
            return cls.const(field, value)
        raise TypeError(f"cannot coerce {type(value).__name__} to RatF")

    @property
    def field(self) -> Field:
        return self.num.field

    def lift(self, field: Field) -> "RatF":
        if field is self.field:
            return self
        return RatF(self.num.lift(field), self.den.lift(field), _reduced=True)

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_poly(self) -> bool:
        return self.den.deg == 0

    def is_const(self) -> bool:
        return self.den.deg == 0 and self.num.deg <= 0

    @property
    def deg(self) -> int:
        """max(deg num, deg den); -1 for the zero function."""
        if not self.num:
            return -1
        return max(self.num.deg, self.den.deg)

    # -- arithmetic ----------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RatF):
            F = common_field(self.field, other.field)
            return self.lift(F), other.lift(F)
        if isinstance(other, UPoly):
            F = common_field(self.field, other.field)
            return self.lift(F), RatF(other.lift(F), _reduced=True)
        if isinstance(other, Scalar):
            F = common_field(self.field, other.field)
            return self.lift(F), RatF.const(F, other)
        if _is_rational_number(other):
            return self, RatF.const(self.field, other)
        return None

    def __add__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        a, b = t
        if a.den == b.den:
            return RatF(a.num + b.num, a.den)
        return RatF(a.num * b.den + b.num * a.den, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return RatF(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        a, b = t
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        a, b = t
        return RatF(a.num * b.num, a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatF":
        if not self.num:
            raise DivisionByZero("inverse of zero rational function")
        return RatF(self.den, self.num)

    def __truediv__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        a, b = t
        return a * b.inverse()

    def __rtruediv__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        a, b = t
        return b * a.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return RatF(self.num**n, self.den**n, _reduced=True)

    def __eq__(self, other):
        try:
            t = self._coerce(other)
        except DescriptorMismatch:
            return False
        if t is None:
            return NotImplemented
        a, b = t
        return a.num.c == b.num.c and a.den.c == b.den.c

    def __hash__(self):
        return hash((self.num, self.den))

    # -- calculus and evaluation ------------------------------------------------------
    def derivative(self) -> "RatF":
        n, d = self.num, self.den
        return RatF(n.derivative() * d - n * d.derivative(), d * d)

    def __call__(self, value):
        if isinstance(value, (RatF, UPoly)):
            value = RatF.coerce(value)
            return self.num(value) / self.den(value)
        v = value if isinstance(value, Scalar) else Scalar.coerce(value, self.field)
        d = self.den(v)
        if d.is_zero():
            raise DivisionByZero("rational function has a pole at the point")
        return self.num(v) / d

    def at_inverse(self) -> "RatF":
        """u(1/x)."""
        dn, dd = self.num.deg, self.den.deg
        if not self.num:
            return self
        num, den = self.num.reverse(), self.den.reverse()
        xpow = UPoly.x(self.field)
        if dd >= dn:
            num = num * xpow ** (dd - dn)
        else:
            den = den * xpow ** (dn - dd)
        return RatF(num, den)

    def shift(self, c) -> "RatF":
        """u(x + c)."""
        return RatF(self.num.shift(c), self.den.shift(c))

    def polynomial_part(self) -> UPoly:
        return self.num // self.den

    def to_str(self, var: str = "x") -> str:
        n = self.num.to_str(var)
        if self.den.deg == 0:
            return n
        d = self.den.to_str(var)
        ns = n if _atomic(n) and "/" not in n else f"({n})"
        ds = d if (_atomic(d) and "*" not in d and "/" not in d) else f"({d})"
        return f"{ns}/{ds}"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"RatF({self})"


# --- points of the projective line ------------------------------------------------

@dataclass(frozen=True)
class LinePoint:
    """A finite point (``value`` a Scalar) or infinity (``value`` None)."""

    value: Scalar | None = None

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    @classmethod
    def finite(cls, v) -> "LinePoint":
        return cls(v)

    def __str__(self):
        return "infinity" if self.value is None else str(self.value)


INFINITY = LinePoint(None)


# --- gcd, resultant, discriminant -------------------------------------------------

def poly_gcd(a: UPoly, b: UPoly) -> UPoly:
    return a.gcd(b)


def resultant(a: UPoly, b: UPoly) -> Scalar:
    """Res(a, b) by the Euclidean algorithm over the coefficient field."""
    F = common_field(a.field, b.field)
    a, b = a.lift(F), b.lift(F)
    if not a or not b:
        return Scalar(F, F.zero)
    sign = 1
    acc = F.one
    A, B = list(a.c), list(b.c)
    while True:
        da, db = len(A) - 1, len(B) - 1
        if da < db:
            if (da * db) % 2:
                sign = -sign
            A, B = B, A
            continue
        if db == 0:
            acc = F.mul(acc, F.pow(B[0], da))
            break
        R = rp.divmod_(F, A, B)[1]
        if not R:
            return Scalar(F, F.zero)
        dr = len(R) - 1
        if (da * db) % 2:
            sign = -sign
        acc = F.mul(acc, F.pow(B[-1], da - dr))
        A, B = B, R
    out = Scalar(F, acc)
    return out if sign > 0 else -out


def sylvester_resultant(a: UPoly, b: UPoly) -> Scalar:
    """Res(a, b) as the Sylvester determinant (independent check)."""
    from .linalg import field_det

    F = common_field(a.field, b.field)
    a, b = a.lift(F), b.lift(F)
    m, n = a.deg, b.deg
    size = m + n
    rows = []
    ac, bc = list(a.c)[::-1], list(b.c)[::-1]
    for i in range(n):
        rows.append([F.zero] * i + ac + [F.zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([F.zero] * i + bc + [F.zero] * (size - n - 1 - i))
    return Scalar(F, field_det(F, rows))


def discriminant(a: UPoly) -> Scalar:
    d = a.deg
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    r = resultant(a, a.derivative()) / a.lc
    return r if (d * (d - 1) // 2) % 2 == 0 else -r


# --- factorization ------------------------------------------------------------------

def squarefree_decomposition(p: UPoly) -> list:
    """[(s_i, i)] with p = lc * prod s_i^i, each s_i monic squarefree (Yun)."""
    if p.deg <= 0:
        return []
    f = p.monic()
    out = []
    df = f.derivative()
    a = f.gcd(df)
    b = f.exquo(a)
    c = df.exquo(a)
    d = c - b.derivative()
    i = 1
    while b.deg > 0:
        g = b.gcd(d)
        if g.deg > 0:
            out.append((g, i))
        b = b.exquo(g)
        c = d.exquo(g)
        d = c - b.derivative()
        i += 1
    return out


@dataclass
class Factor:
    poly: UPoly  # monic irreducible (or an unverified block)
    multiplicity: int
    verified: bool = True


def _split_quadratic(q: UPoly):
    F = q.field
    b, c = q.coeff(1), q.coeff(0)
    disc = b * b - 4 * c
    s = disc.sqrt()
    if s is None:
        return None
    x = UPoly.x(F)
    r1 = (-b + s) / 2
    r2 = (-b - s) / 2
    return [x - r1, x - r2]


def _split_squarefree(s: UPoly) -> list:
    """Irreducible factors of a monic squarefree polynomial as (poly, verified)."""
    if s.deg <= 1:
        return [(s, True)]
    if s.deg == 2:
        sp = _split_quadratic(s)
        return [(f, True) for f in sp] if sp else [(s, True)]
    from . import _bridge

    # strip the obvious root x = 0 first
    if s.field.is_zero(s.c[0]):
        x = UPoly.x(s.field)
        return [(x, True)] + _split_squarefree(s.exquo(x))
    facs = _bridge.factor_squarefree(s)
    if facs is None:
        return [(s, False)]
    out = []
    for f in facs:
        if f.deg == 2:
            sp = _split_quadratic(f)
            out.extend((g, True) for g in (sp or [f]))
        else:
            out.append((f, True))
    return out


def factor(p: UPoly) -> tuple:
    """(leading coefficient, [Factor]) over the coefficient field.

    Factors of degree >= 3 that cannot be checked through sympy are kept as
    unverified blocks.
    """
    if not p:
        raise ValueError("factor of the zero polynomial")
    out = []
    for s, mult in squarefree_decomposition(p):
        for f, ok in _split_squarefree(s):
            out.append(Factor(f, mult, ok))
    out.sort(key=lambda f: (f.poly.deg, f.poly.to_str()))
    return p.lc, out


# --- partial fractions --------------------------------------------------------------

@dataclass
class PartialFractions:
    poly_part: UPoly
    # one entry per irreducible denominator factor: (factor, [c_1, ..., c_k])
    # meaning sum_j c_j / factor^j with deg c_j < deg factor
    parts: list = dc_field(default_factory=list)

    def reassemble(self) -> RatF:
        acc = RatF(self.poly_part)
        for fac, cs in self.parts:
            for j, c in enumerate(cs, start=1):
                if c:
                    acc = acc + RatF(c, fac**j)
        return acc

    def residues(self) -> list:
        """(root, residue) for every linear factor."""
        out = []
        for fac, cs in self.parts:
            if fac.deg == 1 and cs:
                out.append((-fac.coeff(0), cs[0].coeff(0) if cs[0] else Scalar(fac.field, fac.field.zero)))
        return out


def partial_fractions(u: RatF) -> PartialFractions:
    q, r = divmod(u.num, u.den)
    _, facs = factor(u.den)
    parts = []
    for f in facs:
        pk = f.poly ** f.multiplicity
        comp = u.den.exquo(pk)
        g, s, _ = comp.xgcd(pk)
        # s * comp == 1 mod pk
        a = (r * s) % pk
        cs = []
        for _ in range(f.multiplicity):
            a, rem = divmod(a, f.poly)
            cs.append(rem)
        # cs[0] belongs to the highest power; reorder to c_1..c_k
        parts.append((f.poly, cs[::-1]))
    return PartialFractions(q, parts)


# --- local expansions ---------------------------------------------------------------

def _series_quotient(F, num, den, count):
    """First ``count`` power-series coefficients of num/den, den[0] != 0."""
    inv0 = F.inv(den[0])
    out = []
    n = list(num) + [F.zero] * max(0, count - len(num))
    for k in range(count):
        acc = n[k] if k < len(n) else F.zero
        for j in range(1, min(k, len(den) - 1) + 1):
            acc = F.sub(acc, F.mul(den[j], out[k - j]))
        out.append(F.mul(acc, inv0))
    return out


def _leading_zeros(F, c):
    k = 0
    while k < len(c) and F.is_zero(c[k]):
        k += 1
    return k


def _local_data(u: RatF, p: LinePoint):
    """(field, shifted numerator raws, shifted denominator raws) in the uniformizer."""
    if p.is_infinite:
        F = u.field
        v = u.at_inverse()
        return F, list(v.num.c), list(v.den.c)
    F = common_field(u.field, p.value.field)
    w = u.lift(F)
    c = Scalar.coerce(p.value, F).raw
    return F, rp.taylor_shift(F, list(w.num.c), c), rp.taylor_shift(F, list(w.den.c), c)


@dataclass
class LaurentSeries:
    point: LinePoint
    uniformizer: str
    ell: int  # lowest exponent
    coeffs: list  # Scalars, coefficient of t^(ell + k)
    prec: int  # number of terms requested

    def coeff(self, k: int) -> Scalar:
        i = k - self.ell
        if i < 0:
            return self.coeffs[0] * 0
        if i >= len(self.coeffs):
            raise PrecisionExhausted(f"coefficient of t^{k} beyond precision")
        return self.coeffs[i]

    def __str__(self):
        t = self.uniformizer
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            e = self.ell + k
            mono = "1" if e == 0 else (t if e == 1 else f"{t}^{e}" if e > 0 else f"{t}^({e})")
            cs = str(c)
            parts.append(mono if cs == "1" and e != 0 else (cs if e == 0 else f"({cs})*{mono}"))
        return " + ".join(parts) + f" + O({t}^{self.ell + len(self.coeffs)})" if parts else f"O({t}^{self.ell + len(self.coeffs)})"


def local_expand(u: RatF, p: LinePoint, prec: int) -> LaurentSeries:
    """The first ``prec`` terms of u at p, starting at t^ell with ell = val_p(u)."""
    if prec < 1:
        raise ValueError("prec must be >= 1")
    tag = "1/x" if p.is_infinite else ("x" if p.value.is_zero() else f"(x - ({p.value}))")
    F, n, d = _local_data(u, p)
    if not n:
        return LaurentSeries(p, tag, 0, [Scalar(F, F.zero)] * prec, prec)
    vn, vd = _leading_zeros(F, n), _leading_zeros(F, d)
    coeffs = _series_quotient(F, n[vn:], d[vd:], prec)
    return LaurentSeries(p, tag, vn - vd, [Scalar(F, c) for c in coeffs], prec)


def val_at(u: RatF, p: LinePoint) -> int:
    """Valuation (zero order positive, pole order negative); val(0) = 0."""
    if not u:
        return 0
    if p.is_infinite:
        return u.den.deg - u.num.deg
    F = common_field(u.field, p.value.field)
    w = u.lift(F)
    return w.num.valuation_at(p.value) - w.den.valuation_at(p.value)


def ord_at(u: RatF, p: LinePoint) -> int:
    """Pole-positive order, the negative of :func:`val_at`."""
    return -val_at(u, p)


def residue_at(u: RatF, p: LinePoint) -> Scalar:
    """res_p(u); at infinity res_0(-(1/x^2) u(1/x))."""
    if p.is_infinite:
        x = RatF.x(u.field)
        return residue_at(-(u.at_inverse()) / (x * x), LinePoint(Scalar(u.field, u.field.zero)))
    F, n, d = _local_data(u, p)
    if not n:
        return Scalar(F, F.zero)
    vn, vd = _leading_zeros(F, n), _leading_zeros(F, d)
    ell = vn - vd
    if ell > -1:
        return Scalar(F, F.zero)
    coeffs = _series_quotient(F, n[vn:], d[vd:], -ell)
    return Scalar(F, coeffs[-1 - ell])
