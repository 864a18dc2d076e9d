"""Exact scalar arithmetic over a tower of fields.

The bottom level is Q or Q(a, b, ...) for named transcendental parameters.
Each further level adjoins one root of a monic irreducible polynomial over
the level below.  Raw values are ``gmpy2.mpq`` (no parameters), sympy
``FracElement`` (with parameters) or tuples of lower-level raws.  Fields are
interned, so structurally equal towers are the same object and ``is`` is a
valid field comparison.

``Scalar`` wraps a raw value with its field and carries the operator
overloads; internal loops work on raws directly.
"""

from __future__ import annotations

import operator
from fractions import Fraction
from math import isqrt

import gmpy2
from gmpy2 import mpq
from sympy import QQ
from sympy.polys.fields import FracField
from sympy.polys.rings import PolyRing

from . import _rawpoly as rp
from .errors import (
    DenominatorVanishes,
    DescriptorMismatch,
    DivisionByZero,
    NotSquarefree,
    Reducible,
)

__all__ = [
    "Field",
    "BaseField",
    "ExtensionField",
    "Scalar",
    "rational_field",
    "adjoin_root",
    "is_rational_integer",
    "SpecializationMap",
    "specialize_tower",
    "common_field",
]


class Field:
    """Common interface of a tower level."""

    parent: "Field | None" = None
    name: str | None = None
    degree = 1

    # -- structure -------------------------------------------------------
    @property
    def base(self) -> "BaseField":
        f = self
        while f.parent is not None:
            f = f.parent
        return f

    @property
    def params(self) -> tuple:
        return self.base.params

    def chain(self) -> list:
        out, f = [], self
        while f is not None:
            out.append(f)
            f = f.parent
        return out[::-1]

    def generators(self) -> list:
        return [f.name for f in self.chain()[1:]]

    def names(self) -> set:
        return set(self.params) | set(self.generators())

    def is_ancestor_of(self, other: "Field") -> bool:
        f = other
        while f is not None:
            if f is self:
                return True
            f = f.parent
        return False

    def lift_raw(self, raw, source: "Field"):
        """Embed a raw value of the ancestor ``source`` into this field."""
        if source is self:
            return raw
        if self.parent is None:
            raise DescriptorMismatch("field is not an extension of the source")
        inner = self.parent.lift_raw(raw, source)
        return (inner,) + (self.parent.zero,) * (self.degree - 1)

    # -- scalar helpers ----------------------------------------------------
    def __call__(self, value) -> "Scalar":
        return Scalar.coerce(value, self)

    def gen(self) -> "Scalar":
        if self.parent is None:
            raise DescriptorMismatch("the base level has no generator")
        return Scalar(self, self.generator_raw())

    def param(self, name: str) -> "Scalar":
        b = self.base
        return Scalar(self, self.lift_raw(b.param_raw(name), b))

    def named(self, name: str) -> "Scalar":
        """Parameter or generator called ``name``."""
        for f in self.chain()[1:]:
            if f.name == name:
                return Scalar(self, self.lift_raw(f.generator_raw(), f))
        if name in self.params:
            return self.param(name)
        raise KeyError(name)

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        out, base = self.one, a
        while n:
            if n & 1:
                out = self.mul(out, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return out

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def from_rational(self, q):
        q = mpq(q)
        return self.lift_raw(self.base.from_rational(q), self.base)

    def from_int(self, n: int):
        return self.from_rational(n)

    def is_one(self, a) -> bool:
        return a == self.one

    def __repr__(self):
        return f"Field({self.describe()})"

    def describe(self) -> str:
        b = self.base
        s = "Q" if not b.params else "Q(" + ",".join(b.params) + ")"
        for f in self.chain()[1:]:
            s += f"[{f.name}: {f.minpoly_str()}]"
        return s


class BaseField(Field):
    """Q or the rational function field Q(params)."""

    _cache: dict = {}

    def __new__(cls, params=()):
        params = tuple(params)
        hit = cls._cache.get(params)
        if hit is not None:
            return hit
        self = object.__new__(cls)
        if len(set(params)) != len(params):
            raise DescriptorMismatch("parameter names must be distinct")
        self._params = params
        if params:
            self._frac = FracField(params, QQ)
            # Q[params, x] for gcds of polynomials over Q(params)
            self._xring = PolyRing(params + ("_x",), QQ)
            self.zero = self._frac.zero
            self.one = self._frac.one
        else:
            self._frac = None
            self.zero = mpq(0)
            self.one = mpq(1)
        self.add = operator.add
        self.sub = operator.sub
        self.mul = operator.mul
        self.neg = operator.neg
        cls._cache[params] = self
        return self

    @property
    def params(self):
        return self._params

    def is_zero(self, a):
        return not a

    def inv(self, a):
        if not a:
            raise DivisionByZero("division by zero")
        return self.one / a

    def div(self, a, b):
        if not b:
            raise DivisionByZero("division by zero")
        return a / b

    def poly_gcd(self, a, b):
        """Monic gcd of raw coefficient lists, via Q[params, x]; None over Q."""
        if self._frac is None:
            return None
        g = self._to_xpoly(a).gcd(self._to_xpoly(b))
        R = self._frac.ring
        coeffs = {}
        for monom, c in g.terms():
            coeffs.setdefault(monom[-1], {})[monom[:-1]] = c
        out = [self.zero] * (max(coeffs) + 1)
        for i, terms in coeffs.items():
            out[i] = self._frac.new(R.from_dict(terms), R.one)
        lc = out[-1]
        return [c / lc for c in out]

    def _to_xpoly(self, a):
        R = self._xring
        den = self._frac.ring.one
        for c in a:
            den = den.lcm(c.denom)
        terms = {}
        for i, c in enumerate(a):
            if not c:
                continue
            num = c.numer * den.exquo(c.denom)
            for monom, v in num.terms():
                terms[monom + (i,)] = v
        return R.from_dict(terms) if terms else R.zero

    def from_rational(self, q):
        q = mpq(q)
        if self._frac is None:
            return q
        return self._frac.ground_new(QQ(int(q.numerator), int(q.denominator)))

    def param_raw(self, name):
        if name not in self._params:
            raise KeyError(name)
        return self._frac.gens[self._params.index(name)]

    def rational_value(self, a):
        """The rational number ``a`` equals, or None when it is not constant."""
        if self._frac is None:
            return Fraction(int(a.numerator), int(a.denominator))
        if a.numer.is_ground and a.denom.is_ground:
            q = mpq(a.numer.LC) / mpq(a.denom.LC) if a.numer else mpq(0)
            return Fraction(int(q.numerator), int(q.denominator))
        return None

    def sqrt(self, a):
        """A square root of ``a`` in this field, or None."""
        if self._frac is None:
            if a < 0:
                return None
            n, d = int(a.numerator), int(a.denominator)
            rn, rd = isqrt(n), isqrt(d)
            if rn * rn == n and rd * rd == d:
                return mpq(rn, rd)
            return None
        if not a:
            return a
        num = _poly_sqrt(a.numer)
        den = _poly_sqrt(a.denom)
        if num is None or den is None:
            return None
        return self._frac.new(num, den)

    def trace(self, a):
        return a

    def to_str(self, a) -> str:
        if self._frac is None:
            return _fmt_rational(a)
        num = _fmt_poly(a.numer, self._params)
        if a.denom == a.denom.ring.one:
            return num
        den = _fmt_poly(a.denom, self._params)
        if _is_atomic(num):
            out = num
        else:
            out = f"({num})"
        if _is_atomic(den) and "/" not in den and "*" not in den:
            return f"{out}/{den}"
        return f"{out}/({den})"

    def coordinates(self, a):
        """Yield (key, value) pairs of Q-coordinates, relative to the caller's
        common denominator handled by :func:`rational_coordinates`."""
        raise NotImplementedError

    def minpoly_str(self):
        return ""


class ExtensionField(Field):
    """parent[y]/(minpoly), minpoly monic of degree >= 2."""

    _cache: dict = {}

    def __new__(cls, parent: Field, name: str, minpoly: tuple, asserted: bool):
        key = (parent, name, minpoly)
        hit = cls._cache.get(key)
        if hit is not None:
            return hit
        self = object.__new__(cls)
        self.parent = parent
        self.name = name
        self.minpoly = minpoly  # raws of parent, low -> high, monic
        self.degree = len(minpoly) - 1
        self.asserted = asserted
        P = parent
        self.zero = (P.zero,) * self.degree
        self.one = (P.one,) + (P.zero,) * (self.degree - 1)
        cls._cache[key] = self
        return self

    def generator_raw(self):
        P = self.parent
        return (P.zero, P.one) + (P.zero,) * (self.degree - 2)

    def add(self, a, b):
        add = self.parent.add
        return tuple(add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        sub = self.parent.sub
        return tuple(sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        neg = self.parent.neg
        return tuple(neg(x) for x in a)

    def is_zero(self, a):
        isz = self.parent.is_zero
        return all(isz(x) for x in a)

    def _reduce(self, c):
        P, m, d = self.parent, self.minpoly, self.degree
        c = list(c)
        for k in range(len(c) - 1, d - 1, -1):
            t = c[k]
            if P.is_zero(t):
                continue
            for j in range(d):
                c[k - d + j] = P.sub(c[k - d + j], P.mul(t, m[j]))
        c = c[:d]
        c += [P.zero] * (d - len(c))
        return tuple(c)

    def mul(self, a, b):
        P = self.parent
        d = self.degree
        out = [P.zero] * (2 * d - 1)
        for i, x in enumerate(a):
            if P.is_zero(x):
                continue
            for j, y in enumerate(b):
                if P.is_zero(y):
                    continue
                out[i + j] = P.add(out[i + j], P.mul(x, y))
        return self._reduce(out)

    def poly_gcd(self, a, b):
        """Monic gcd over a tower above Q(params); None over number fields.

        Coefficients from the parent are handled there.  Otherwise a
        primitive remainder sequence strips the Q[params]-content at each
        step, which keeps the rational functions from growing.
        """
        if self.base._frac is None:
            return None
        P = self.parent
        if all(P.is_zero(x) for c in list(a) + list(b) for x in c[1:]):
            g = rp.gcd(P, [c[0] for c in a], [c[0] for c in b])
            return [self.from_parent(c) for c in g]
        r0, r1 = self._primitive(a), self._primitive(b)
        if len(r0) < len(r1):
            r0, r1 = r1, r0
        while r1:
            r0, r1 = r1, self._primitive(self._prem(r0, r1))
        return rp.monic(self, r0)

    def _prem(self, a, b):
        r = list(a)
        db = len(b) - 1
        lb = b[-1]
        while r and len(r) - 1 >= db:
            k = len(r) - 1 - db
            lr = r[-1]
            r = [self.mul(lb, c) for c in r]
            for j in range(db + 1):
                r[k + j] = self.sub(r[k + j], self.mul(lr, b[j]))
            r = rp.strip(self, r[:-1])
        return r

    def _primitive(self, a):
        """a divided by the gcd of its Q[params] coefficients."""
        entries = [e for c in a for e in _base_raws(self, c) if e]
        if not entries:
            return list(a)
        num, den = entries[0].numer, entries[0].denom
        for e in entries[1:]:
            num = num.gcd(e.numer)
            den = den.lcm(e.denom)
        frac = self.base._frac
        inv = frac.new(den, num)
        return [_scale_base(self, c, inv) for c in a]

    def scale(self, a, c):
        """Multiply by a raw value of the parent field."""
        mul = self.parent.mul
        return tuple(mul(x, c) for x in a)

    def inv(self, a):
        P = self.parent
        pa = rp.strip(P, a)
        if not pa:
            raise DivisionByZero("division by zero")
        g, s, _ = rp.xgcd(P, pa, list(self.minpoly))
        if len(g) != 1:
            raise Reducible(
                f"minimal polynomial of {self.name} has a nontrivial factor"
            )
        return self._reduce(s) if len(s) > self.degree else tuple(
            list(s) + [P.zero] * (self.degree - len(s))
        )

    def from_parent(self, c):
        return (c,) + (self.parent.zero,) * (self.degree - 1)

    def rational_value(self, a):
        P = self.parent
        if any(not P.is_zero(x) for x in a[1:]):
            return None
        return P.rational_value(a[0])

    def trace(self, a):
        """Trace down to the parent level."""
        P, d = self.parent, self.degree
        m = self.minpoly
        # power sums of the roots by Newton's identities
        s = [P.from_int(d)]
        for k in range(1, d):
            acc = P.mul(P.from_int(k), m[d - k])
            for j in range(1, k):
                acc = P.add(acc, P.mul(m[d - j], s[k - j]))
            s.append(P.neg(acc))
        out = P.zero
        for k, c in enumerate(a):
            out = P.add(out, P.mul(c, s[k]))
        return out

    def sqrt(self, a):
        if self.degree != 2:
            return None
        P = self.parent
        p, q = self.minpoly[1], self.minpoly[0]
        half = P.from_rational(mpq(1, 2))
        disc = P.sub(P.mul(p, p), P.mul(P.from_int(4), q))
        # a + b*y = A + B*w with w = 2y + p and w^2 = disc
        A = P.sub(a[0], P.mul(P.mul(a[1], p), half))
        B = P.mul(a[1], half)

        def back(c, dd):
            # c + dd*w = (c + dd*p) + 2*dd*y
            return (P.add(c, P.mul(dd, p)), P.mul(P.from_int(2), dd))

        if P.is_zero(B):
            r = P.sqrt(A)
            if r is not None:
                return back(r, P.zero)
            r = P.sqrt(P.div(A, disc))
            if r is not None:
                return back(P.zero, r)
            return None
        n = P.sqrt(P.sub(P.mul(A, A), P.mul(P.mul(B, B), disc)))
        if n is None:
            return None
        for cand in (P.add(A, n), P.sub(A, n)):
            c = P.sqrt(P.mul(cand, half))
            if c is not None and not P.is_zero(c):
                return back(c, P.div(B, P.mul(P.from_int(2), c)))
        return None

    def to_str(self, a) -> str:
        P = self.parent
        terms = []
        for k, c in enumerate(a):
            if P.is_zero(c):
                continue
            cs = P.to_str(c)
            mono = "" if k == 0 else (self.name if k == 1 else f"{self.name}^{k}")
            if not mono:
                terms.append(cs)
            elif cs == "1":
                terms.append(mono)
            elif cs == "-1":
                terms.append("-" + mono)
            elif _is_atomic(cs):
                terms.append(f"{cs}*{mono}")
            else:
                terms.append(f"({cs})*{mono}")
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out

    def minpoly_str(self):
        from .univar import UPoly  # local import to avoid a cycle

        return UPoly(self.parent, self.minpoly).to_str("y")


# --- constructors ----------------------------------------------------------

def _base_raws(field, raw):
    if field.parent is None:
        return [raw]
    return [e for x in raw for e in _base_raws(field.parent, x)]


def _scale_base(field, raw, c):
    if field.parent is None:
        return field.mul(raw, c)
    return tuple(_scale_base(field.parent, x, c) for x in raw)


def rational_field(params=()) -> BaseField:
    """Q (no parameters) or Q(params)."""
    return BaseField(tuple(params))


def adjoin_root(field: Field, minpoly, name: str, *, assume_irreducible=False) -> ExtensionField:
    """Adjoin a root ``name`` of ``minpoly`` (a UPoly or a raw list, monic).

    Irreducibility is decided for degree <= 2.  Higher degrees must be
    asserted by the caller via ``assume_irreducible``; squarefreeness is
    always verified.
    """
    from .univar import UPoly

    if isinstance(minpoly, UPoly):
        if minpoly.field is not field:
            minpoly = minpoly.lift(field)
        coeffs = list(minpoly.c)
    else:
        _num = (int, Fraction, type(mpq(0)))
        coeffs = rp.strip(field, [field.from_rational(c) if isinstance(c, _num) else c for c in minpoly])
    if not coeffs or not field.is_one(coeffs[-1]):
        raise Reducible("minimal polynomial must be monic")
    if name in field.names() or name in ("x", "z", "eta", "D", "TH"):
        raise DescriptorMismatch(f"name {name!r} already in use or reserved")
    d = len(coeffs) - 1
    if d < 1:
        raise Reducible("minimal polynomial must have positive degree")
    if d == 1:
        raise Reducible("a degree-1 polynomial has its root in the field already")
    g = rp.gcd(field, coeffs, rp.deriv(field, coeffs))
    if len(g) > 1:
        raise NotSquarefree("minimal polynomial is not squarefree")
    asserted = False
    if d == 2:
        p, q = coeffs[1], coeffs[0]
        disc = field.sub(field.mul(p, p), field.mul(field.from_int(4), q))
        if field.sqrt(disc) is not None:
            raise Reducible("quadratic has a root in the field")
    else:
        if not assume_irreducible:
            raise Reducible(
                "irreducibility of degree >= 3 must be asserted by the caller"
            )
        asserted = True
    return ExtensionField(field, name, tuple(coeffs), asserted)


def common_field(a: Field, b: Field) -> Field:
    if a is b:
        return a
    if a.is_ancestor_of(b):
        return b
    if b.is_ancestor_of(a):
        return a
    raise DescriptorMismatch(f"incompatible fields {a.describe()} and {b.describe()}")


# --- Scalar ------------------------------------------------------------------

class Scalar:
    """An element of a tower field."""

    __slots__ = ("field", "raw")

    def __init__(self, field: Field, raw):
        self.field = field
        self.raw = raw

    @staticmethod
    def coerce(value, field: Field) -> "Scalar":
        if isinstance(value, Scalar):
            if value.field is field:
                return value
            return Scalar(field, field.lift_raw(value.raw, value.field))
        if isinstance(value, (int, Fraction)) or type(value) is type(mpq(0)):
            return Scalar(field, field.from_rational(value))
        raise TypeError(f"cannot coerce {type(value).__name__} to a Scalar")

    def _pair(self, other):
        if isinstance(other, Scalar):
            F = common_field(self.field, other.field)
            return F, Scalar.coerce(self, F).raw, Scalar.coerce(other, F).raw
        if isinstance(other, (int, Fraction)) or type(other) is type(mpq(0)):
            return self.field, self.raw, self.field.from_rational(other)
        return None

    def __add__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        F, a, b = p
        return Scalar(F, F.add(a, b))

    __radd__ = __add__

    def __sub__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        F, a, b = p
        return Scalar(F, F.sub(a, b))

    def __rsub__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        F, a, b = p
        return Scalar(F, F.sub(b, a))

    def __mul__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        F, a, b = p
        return Scalar(F, F.mul(a, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        F, a, b = p
        return Scalar(F, F.div(a, b))

    def __rtruediv__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        F, a, b = p
        return Scalar(F, F.div(b, a))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.raw))

    def __pos__(self):
        return self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        return Scalar(self.field, self.field.pow(self.raw, n))

    def inverse(self):
        return Scalar(self.field, self.field.inv(self.raw))

    def is_zero(self):
        return self.field.is_zero(self.raw)

    def __bool__(self):
        return not self.is_zero()

    def _lowered(self):
        F, r = self.field, self.raw
        while F.parent is not None:
            P = F.parent
            if all(P.is_zero(c) for c in r[1:]):
                F, r = P, r[0]
            else:
                break
        return F, r

    def __eq__(self, other):
        p = None
        try:
            p = self._pair(other)
        except DescriptorMismatch:
            return False
        if p is None:
            return NotImplemented
        _, a, b = p
        return a == b

    def __hash__(self):
        F, r = self._lowered()
        if F.parent is None:
            q = F.rational_value(r)
            if q is not None:
                return hash(q)
        return hash((id(F), r))

    def rational(self):
        """The Fraction this scalar equals, or None."""
        F, r = self._lowered()
        if F.parent is not None:
            return None
        return F.rational_value(r)

    def is_rational(self):
        return self.rational() is not None

    def sqrt(self):
        r = self.field.sqrt(self.raw)
        return None if r is None else Scalar(self.field, r)

    def lift(self, field: Field) -> "Scalar":
        return Scalar.coerce(self, field)

    def trace(self) -> "Scalar":
        F = self.field
        if F.parent is None:
            return self
        return Scalar(F.parent, F.trace(self.raw))

    def coordinates(self) -> dict:
        """Q-linear coordinates keyed by (generator exponents, parameter
        monomial), scaled by a common positive denominator.

        Returns ``(denominator_poly_key, coords)``; mainly for tests.
        """
        return rational_coordinates([self])[0]

    def __str__(self):
        return self.field.to_str(self.raw)

    def __repr__(self):
        return f"Scalar({self})"


def is_rational_integer(a: Scalar):
    """``("yes", n)`` when ``a`` is the integer ``n``, else ``("no", None)``."""
    q = a.rational()
    if q is not None and q.denominator == 1:
        return ("yes", int(q))
    return ("no", None)


# --- Q-linear coordinates -------------------------------------------------------

def _flatten(field: Field, raw, prefix=()):
    """Yield (generator-exponent tuple, base raw) over the tower basis."""
    if field.parent is None:
        yield prefix, raw
        return
    for k, c in enumerate(raw):
        yield from _flatten(field.parent, c, (k,) + prefix)


def rational_coordinates(values):
    """Express several Scalars of one field as vectors over Q.

    All values are put over one common parameter denominator so that a
    Q-linear relation among the values is exactly a relation among the
    returned coordinate dictionaries.
    """
    if not values:
        return []
    F = values[0].field
    for v in values[1:]:
        F = common_field(F, v.field)
    vals = [Scalar.coerce(v, F) for v in values]
    base = F.base
    flat = [list(_flatten(F, v.raw)) for v in vals]
    if base._frac is None:
        out = []
        for entries in flat:
            d = {}
            for key, q in entries:
                if q:
                    d[(key, ())] = Fraction(int(q.numerator), int(q.denominator))
            out.append(d)
        return out
    ring = base._frac.ring
    den = ring.one
    for entries in flat:
        for _, c in entries:
            if c:
                den = den.lcm(c.denom)
    out = []
    for entries in flat:
        d = {}
        for key, c in entries:
            if not c:
                continue
            num = c.numer * den.exquo(c.denom)
            for mono, coeff in num.terms():
                q = mpq(coeff)
                d[(key, mono)] = Fraction(int(q.numerator), int(q.denominator))
        out.append(d)
    return out


# --- specialization ----------------------------------------------------------

class SpecializationMap:
    """A ring homomorphism from ``source`` to ``target`` fixing Q.

    ``images`` sends parameter names (and, optionally, generator names) of
    the source to Scalars of the target.  Generators without an explicit
    image go to the target generator of the same name.
    """

    def __init__(self, source: Field, target: Field, images: dict):
        self.source = source
        self.target = target
        self.images = {}
        for name in source.params:
            if name in images:
                self.images[name] = Scalar.coerce(images[name], target)
            elif name in target.params:
                self.images[name] = target.param(name)
            else:
                raise DescriptorMismatch(f"no image for parameter {name!r}")
        for f in source.chain()[1:]:
            if f.name in images:
                self.images[f.name] = Scalar.coerce(images[f.name], target)
            else:
                try:
                    self.images[f.name] = target.named(f.name)
                except KeyError:
                    raise DescriptorMismatch(f"no image for generator {f.name!r}") from None
        self._pcache = {}
        # generator images must be roots of the specialized minimal polynomials
        for f in source.chain()[1:]:
            img = self.images[f.name]
            acc = Scalar(target, target.zero)
            for c in reversed(f.minpoly):
                acc = acc * img + Scalar(target, self._apply(f.parent, c))
            if not acc.is_zero():
                raise DescriptorMismatch(
                    f"image of {f.name} is not a root of its minimal polynomial"
                )

    def _poly_image(self, poly):
        T = self.target
        acc = T.zero
        params = self.source.params
        for mono, coeff in poly.terms():
            term = T.from_rational(mpq(coeff))
            for name, e in zip(params, mono):
                if e:
                    key = (name, e)
                    p = self._pcache.get(key)
                    if p is None:
                        p = T.pow(self.images[name].raw, e)
                        self._pcache[key] = p
                    term = T.mul(term, p)
            acc = T.add(acc, term)
        return acc

    def _apply(self, field: Field, raw):
        T = self.target
        if field.parent is None:
            if field._frac is None:
                return T.from_rational(raw)
            den = self._poly_image(raw.denom)
            if T.is_zero(den):
                raise DenominatorVanishes("a denominator specializes to zero")
            return T.div(self._poly_image(raw.numer), den)
        g = self.images[field.name].raw
        acc = T.zero
        for c in reversed(raw):
            acc = T.add(T.mul(acc, g), self._apply(field.parent, c))
        return acc

    def __call__(self, a: Scalar) -> Scalar:
        a = Scalar.coerce(a, self.source) if a.field is not self.source else a
        return Scalar(self.target, self._apply(self.source, a.raw))


def specialize_tower(source: Field, images: dict, target_base: Field | None = None) -> SpecializationMap:
    """Specialize the parameters named in ``images`` and rebuild the tower.

    Extension levels are re-adjoined over ``target_base`` (default: Q with
    the remaining parameters) using their specialized minimal polynomials;
    a level whose name already exists in ``target_base`` is reused.  Raises
    ``Reducible`` when a specialized quadratic level splits.
    """
    keep = tuple(p for p in source.params if p not in images)
    T = target_base if target_base is not None else rational_field(keep)
    chain = source.chain()
    level = chain[0]
    m = SpecializationMap(level, T, {k: v for k, v in images.items() if k in level.params})
    for f in chain[1:]:
        if f.name in T.names():
            T_next = T
        else:
            mp = [m(Scalar(f.parent, c)).lift(T).raw for c in f.minpoly]
            T_next = adjoin_root(T, mp, f.name, assume_irreducible=f.degree >= 3)
        imgs = {k: Scalar.coerce(v, T_next) for k, v in m.images.items()}
        m = SpecializationMap(f, T_next, imgs)
        T = T_next
    return m


def specialize_scalar(m: SpecializationMap, a: Scalar) -> Scalar:
    return m(a)


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    if a.field is not b.field:
        raise DescriptorMismatch("scalars live in different fields")
    return {"add": operator.add, "sub": operator.sub,
            "mul": operator.mul, "div": operator.truediv}[op](a, b)


# --- formatting helpers ----------------------------------------------------

def _fmt_rational(q) -> str:
    n, d = int(q.numerator), int(q.denominator)
    return str(n) if d == 1 else f"{n}/{d}"


def _fmt_poly(poly, names) -> str:
    terms = sorted(poly.terms(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))
    if not terms:
        return "0"
    parts = []
    for mono, coeff in terms:
        q = mpq(coeff)
        factors = []
        for name, e in zip(names, mono):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        m = "*".join(factors)
        if not m:
            parts.append(_fmt_rational(q))
        elif q == 1:
            parts.append(m)
        elif q == -1:
            parts.append("-" + m)
        else:
            parts.append(f"{_fmt_rational(q)}*{m}")
    out = parts[0]
    for t in parts[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


def _is_atomic(s: str) -> bool:
    """True when ``s`` needs no parentheses as a factor."""
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in "+-" and i > 0:
            return False
    return True


def _poly_sqrt(p):
    if p.is_ground:
        q = mpq(p.LC)
        r = BaseField(()).sqrt(q)
        if r is None:
            return None
        return p.ring.ground_new(QQ(int(r.numerator), int(r.denominator)))
    c, facs = p.sqf_list()
    r = BaseField(()).sqrt(mpq(c))
    if r is None:
        return None
    out = p.ring.ground_new(QQ(int(r.numerator), int(r.denominator)))
    for g, e in facs:
        if e % 2:
            return None
        out = out * g ** (e // 2)
    if out * out != p:
        out = -out
        if out * out != p:
            return None
    return out
