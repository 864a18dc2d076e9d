"""Linear differential operators in delta = d/dx or theta = x d/dx, and matrix systems.

Operators carry a tag, ``"delta"`` or ``"theta"``; multiplication needs
equal tags and :meth:`DiffOperator.convert` moves between them.  Matrices
are generic over differential-field elements (``RatF`` or elements of a
quadratic function field), which only need ring operations, division and
``derivative()``.
"""

from __future__ import annotations

from itertools import combinations
from math import comb

from .errors import BadDimensions, NoCyclicVectorFound, NotMonic, Singular, ZeroOperator
from .fields import Field, Scalar, common_field
from .linalg import field_nullspace
from .univar import INFINITY, LinePoint, RatF, UPoly

__all__ = [
    "DiffOperator",
    "RatMatrix",
    "op_mul",
    "op_convert",
    "transport",
    "shift",
    "right_divide",
    "twist",
    "companion",
    "exterior_power_system",
    "cyclic_scalarize",
    "gauge_transform",
    "wronskian",
    "polynomial_solutions",
    "proto_degree_bound",
    "riccati_residual",
]


def _derive(tag, b: RatF) -> RatF:
    d = b.derivative()
    return d * RatF.x(b.field) if tag == "theta" else d


class DiffOperator:
    """sum_i coeffs[i] * g^i with g = delta or theta; coefficients are RatF."""

    __slots__ = ("tag", "coeffs", "_field")

    def __init__(self, coeffs, tag: str = "delta", field: Field | None = None):
        if tag not in ("delta", "theta"):
            raise ValueError("tag must be 'delta' or 'theta'")
        cs = [RatF.coerce(c, field) for c in coeffs]
        F = field
        for c in cs:
            F = c.field if F is None else common_field(F, c.field)
        if F is None:
            raise ValueError("the zero operator needs an explicit field")
        cs = [c.lift(F) for c in cs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.tag = tag
        self.coeffs = tuple(cs)
        self._field = F

    # -- constructors -----------------------------------------------------------------
    @classmethod
    def generator(cls, field: Field, tag: str = "delta") -> "DiffOperator":
        return cls([RatF.const(field, 0), RatF.const(field, 1)], tag)

    @classmethod
    def scalar(cls, r, tag: str = "delta", field: Field | None = None) -> "DiffOperator":
        return cls([RatF.coerce(r, field)], tag)

    @property
    def field(self) -> Field:
        return self._field

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> RatF:
        if not self.coeffs:
            raise ZeroOperator("zero operator has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int) -> RatF:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return RatF.const(self.field, 0)

    def lift(self, field: Field) -> "DiffOperator":
        return DiffOperator([c.lift(field) for c in self.coeffs], self.tag, field)

    def map_coeffs(self, fn) -> "DiffOperator":
        return DiffOperator([fn(c) for c in self.coeffs], self.tag, self.field)

    def monic(self) -> "DiffOperator":
        inv = self.lc.inverse()
        return DiffOperator([c * inv for c in self.coeffs], self.tag)

    # -- ring structure ------------------------------------------------------------------
    def _as_op(self, other):
        if isinstance(other, DiffOperator):
            if other.tag != self.tag:
                raise ValueError("operators with different tags; convert first")
            return other
        if isinstance(other, (RatF, UPoly, Scalar, int)) or hasattr(other, "numerator"):
            return DiffOperator([RatF.coerce(other, self.field)], self.tag)
        return None

    def __add__(self, other):
        o = self._as_op(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        F = common_field(self.field, o.field)
        return DiffOperator([self.coeff(i) + o.coeff(i) for i in range(n)], self.tag, F)

    __radd__ = __add__

    def __neg__(self):
        return DiffOperator([-c for c in self.coeffs], self.tag, self.field)

    def __sub__(self, other):
        o = self._as_op(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._as_op(other)
        if o is None:
            return NotImplemented
        return op_mul(self, o)

    def __rmul__(self, other):
        o = self._as_op(other)
        if o is None:
            return NotImplemented
        return op_mul(o, self)

    def __truediv__(self, other):
        r = RatF.coerce(other, self.field)
        inv = r.inverse()
        return DiffOperator([c * inv for c in self.coeffs], self.tag)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative operator power")
        out = DiffOperator([RatF.const(self.field, 1)], self.tag)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        if self.tag != other.tag or len(self.coeffs) != len(other.coeffs):
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.tag, self.coeffs))

    def convert(self, tag: str) -> "DiffOperator":
        return op_convert(self, tag)

    def apply(self, f):
        """L(f) for f a RatF or a function-field element."""
        out = f * 0
        g = f
        for i, c in enumerate(self.coeffs):
            if i:
                g = g.derivative()
                if self.tag == "theta":
                    g = g * RatF.x(c.field)
            if not c.is_zero():
                out = out + g * c
        return out

    def to_str(self) -> str:
        sym = "D" if self.tag == "delta" else "TH"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            mono = "" if i == 0 else (sym if i == 1 else f"{sym}^{i}")
            cs = c.to_str()
            if not mono:
                terms.append(cs)
            elif cs == "1":
                terms.append(mono)
            elif cs == "-1":
                terms.append("-" + mono)
            elif "+" in cs or "-" in cs[1:]:
                terms.append(f"({cs})*{mono}")
            else:
                terms.append(f"{cs}*{mono}")
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"DiffOperator({self})"


def op_mul(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    if a.tag != b.tag:
        raise ValueError("operators with different tags; convert first")
    if a.is_zero() or b.is_zero():
        return DiffOperator([], a.tag, common_field(a.field, b.field))
    F = common_field(a.field, b.field)
    a, b = a.lift(F), b.lift(F)
    n = a.order + b.order + 1
    out = [RatF.const(F, 0) for _ in range(n)]
    # derivatives of b's coefficients, cached by depth
    derivs = [list(b.coeffs)]
    for i, ai in enumerate(a.coeffs):
        if ai.is_zero():
            continue
        while len(derivs) <= i:
            derivs.append([_derive(a.tag, c) for c in derivs[-1]])
        for k in range(i + 1):
            ck = comb(i, k)
            for j, bj in enumerate(derivs[k]):
                if bj.is_zero():
                    continue
                out[i - k + j] = out[i - k + j] + ai * bj * ck
    return DiffOperator(out, a.tag)


def op_convert(a: DiffOperator, tag: str) -> DiffOperator:
    if a.tag == tag or a.is_zero():
        return DiffOperator(a.coeffs, tag, a.field)
    F = a.field
    x = RatF.x(F)
    if tag == "theta":
        # delta = (1/x) theta
        g = DiffOperator([RatF.const(F, 0), x.inverse()], "theta")
    else:
        # theta = x delta
        g = DiffOperator([RatF.const(F, 0), x], "delta")
    out = DiffOperator([], tag, F)
    power = DiffOperator([RatF.const(F, 1)], tag)
    for i, c in enumerate(a.coeffs):
        if i:
            power = power * g
        if not c.is_zero():
            out = out + DiffOperator([c], tag) * power
    return out


def transport(p: LinePoint, L: DiffOperator) -> DiffOperator:
    """The automorphism l_p: x -> x + p (finite) or x -> 1/x, delta -> -x^2 delta."""
    if p.is_infinite:
        if L.tag == "theta":
            # theta -> -theta
            return DiffOperator(
                [c.at_inverse() * (-1 if i % 2 else 1) for i, c in enumerate(L.coeffs)],
                "theta",
            )
        return transport(p, L.convert("theta")).convert("delta")
    F = common_field(L.field, p.value.field)
    M = L.lift(F).convert("delta")
    out = DiffOperator([c.shift(p.value) for c in M.coeffs], "delta")
    return out.convert(L.tag)


def shift(L: DiffOperator, e) -> DiffOperator:
    """S_e(L) = L(theta + e) for a theta-form operator and e in K(x)."""
    if L.tag != "theta":
        raise ValueError("shift needs a theta-form operator")
    e = RatF.coerce(e, L.field) if not isinstance(e, RatF) else e
    F = common_field(L.field, e.field)
    L = L.lift(F)
    g = DiffOperator([e.lift(F), RatF.const(F, 1)], "theta")
    out = DiffOperator([], "theta", F)
    power = DiffOperator([RatF.const(F, 1)], "theta")
    for i, c in enumerate(L.coeffs):
        if i:
            power = power * g
        if not c.is_zero():
            out = out + DiffOperator([c], "theta") * power
    return out


def twist(L: DiffOperator, w) -> DiffOperator:
    """L(delta + w)."""
    if L.tag != "delta":
        raise ValueError("twist needs a delta-form operator")
    w = RatF.coerce(w, L.field) if not isinstance(w, RatF) else w
    F = common_field(L.field, w.field)
    L = L.lift(F)
    g = DiffOperator([w.lift(F), RatF.const(F, 1)], "delta")
    out = DiffOperator([], "delta", F)
    power = DiffOperator([RatF.const(F, 1)], "delta")
    for i, c in enumerate(L.coeffs):
        if i:
            power = power * g
        if not c.is_zero():
            out = out + DiffOperator([c], "delta") * power
    return out


def right_divide(L: DiffOperator, u) -> tuple:
    """(Q, r) with L = Q (delta - u) + r and r of order 0."""
    if L.tag != "delta":
        raise ValueError("right_divide needs a delta-form operator")
    u = RatF.coerce(u, L.field) if not isinstance(u, RatF) else u
    F = common_field(L.field, u.field)
    rem = L.lift(F)
    d = DiffOperator([-u.lift(F), RatF.const(F, 1)], "delta")
    q_coeffs = [RatF.const(F, 0) for _ in range(max(L.order, 1))]
    while rem.order >= 1:
        n = rem.order
        term = DiffOperator([RatF.const(F, 0)] * (n - 1) + [rem.lc], "delta")
        q_coeffs[n - 1] = q_coeffs[n - 1] + rem.lc
        rem = rem - term * d
    r = rem.coeff(0) if not rem.is_zero() else RatF.const(F, 0)
    return DiffOperator(q_coeffs, "delta"), r


def riccati_residual(L: DiffOperator, u) -> RatF:
    """L applied to exp(int u), divided by exp(int u): sum_i a_i R_i with
    R_0 = 1, R_{i+1} = R_i' + u R_i."""
    L = L.convert("delta")
    u = u if isinstance(u, RatF) else RatF.coerce(u, L.field)
    F = common_field(L.field, u.field)
    L, u = L.lift(F), u.lift(F)
    R = RatF.const(F, 1)
    out = RatF.const(u.field, 0)
    for i, c in enumerate(L.coeffs):
        if i:
            R = R.derivative() + u * R
        out = out + c * R
    return out


# --- matrices ---------------------------------------------------------------------------

class RatMatrix:
    """Rectangular matrix of differential-field elements."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = [list(r) for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise BadDimensions("matrix rows must be nonempty and of equal length")
        self.rows = rows

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0])

    def _zero(self):
        return self.rows[0][0] * 0

    def _one(self):
        return self.rows[0][0] * 0 + 1

    @classmethod
    def identity(cls, n: int, like) -> "RatMatrix":
        z, o = like * 0, like * 0 + 1
        return cls([[o if i == j else z for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __add__(self, other):
        return RatMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return RatMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return RatMatrix([[-a for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, RatMatrix):
            n, m = self.shape
            m2, p = other.shape
            if m != m2:
                raise BadDimensions("incompatible matrix shapes")
            out = []
            for i in range(n):
                row = []
                for j in range(p):
                    acc = self._zero()
                    for k in range(m):
                        a, b = self.rows[i][k], other.rows[k][j]
                        if a and b:
                            acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return RatMatrix(out)
        return RatMatrix([[a * other for a in r] for r in self.rows])

    def __eq__(self, other):
        if not isinstance(other, RatMatrix) or self.shape != other.shape:
            return False
        return all(a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    def derivative(self) -> "RatMatrix":
        return RatMatrix([[a.derivative() for a in r] for r in self.rows])

    def transpose(self) -> "RatMatrix":
        return RatMatrix([list(c) for c in zip(*self.rows)])

    def trace(self):
        acc = self._zero()
        for i in range(min(self.shape)):
            acc = acc + self.rows[i][i]
        return acc

    def det(self):
        n, m = self.shape
        if n != m:
            raise BadDimensions("determinant of a non-square matrix")
        a = [list(r) for r in self.rows]
        det = self._one()
        for col in range(n):
            piv = next((i for i in range(col, n) if a[i][col]), None)
            if piv is None:
                return self._zero()
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                det = -det
            p = a[col][col]
            det = det * p
            for i in range(col + 1, n):
                if a[i][col]:
                    f = a[i][col] / p
                    a[i] = [x - f * y for x, y in zip(a[i], a[col])]
        return det

    def inverse(self) -> "RatMatrix":
        n, m = self.shape
        if n != m:
            raise BadDimensions("inverse of a non-square matrix")
        z, o = self._zero(), self._one()
        a = [list(r) + [o if i == j else z for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((i for i in range(col, n) if a[i][col]), None)
            if piv is None:
                raise Singular("matrix is singular")
            a[col], a[piv] = a[piv], a[col]
            p = a[col][col]
            a[col] = [v / p for v in a[col]]
            for i in range(n):
                if i != col and a[i][col]:
                    f = a[i][col]
                    a[i] = [v - f * w for v, w in zip(a[i], a[col])]
        return RatMatrix([r[n:] for r in a])

    def map(self, fn) -> "RatMatrix":
        return RatMatrix([[fn(a) for a in r] for r in self.rows])

    def to_lists(self, fmt=str):
        return [[fmt(a) for a in r] for r in self.rows]

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(a) for a in r) + "]" for r in self.rows) + "]"

    def __repr__(self):
        return f"RatMatrix({self})"


def companion(L: DiffOperator) -> RatMatrix:
    """Companion matrix: superdiagonal ones, last row -lambda_0 .. -lambda_{mu-1}."""
    if L.tag != "delta":
        raise ValueError("companion needs a delta-form operator")
    if L.lc != 1:
        raise NotMonic("companion needs a monic operator")
    mu = L.order
    F = L.field
    z, o = RatF.const(F, 0), RatF.const(F, 1)
    rows = [[o if j == i + 1 else z for j in range(mu)] for i in range(mu - 1)]
    rows.append([-L.coeff(j) for j in range(mu)])
    return RatMatrix(rows)


def _perm_sign(seq) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def exterior_power_system(A: RatMatrix, s: int) -> RatMatrix:
    """Matrix of delta on the s x s minors of a fundamental matrix of delta Y = A Y."""
    n, m = A.shape
    if n != m or not 1 <= s <= n:
        raise BadDimensions("need a square matrix and 1 <= s <= size")
    subsets = list(combinations(range(n), s))
    index = {I: k for k, I in enumerate(subsets)}
    z = A._zero()
    B = [[z for _ in subsets] for _ in subsets]
    for I in subsets:
        r = index[I]
        for pos, i in enumerate(I):
            for k in range(n):
                a = A.rows[i][k]
                if not a:
                    continue
                if k == i:
                    B[r][r] = B[r][r] + a
                    continue
                if k in I:
                    continue
                J = list(I)
                J[pos] = k
                sign = _perm_sign(J)
                c = index[tuple(sorted(J))]
                B[r][c] = B[r][c] + a * sign
    return RatMatrix(B)


def gauge_transform(A: RatMatrix, g: RatMatrix) -> RatMatrix:
    """delta(g^-1) g + g^-1 A g."""
    gi = g.inverse()
    return gi.derivative() * g + gi * A * g


def _cyclic_candidates(n: int, field: Field):
    x = RatF.x(field)
    z, o = RatF.const(field, 0), RatF.const(field, 1)
    for i in range(n):
        yield [o if j == i else z for j in range(n)]
    yield [x**j for j in range(n)]
    yield [(x + 1) ** j for j in range(n)]


def cyclic_scalarize(A: RatMatrix) -> tuple:
    """(L, T) with delta(T^-1) T + T^-1 A T the companion matrix of L."""
    n, m = A.shape
    if n != m:
        raise BadDimensions("cyclic_scalarize needs a square matrix")
    F = A.rows[0][0].field
    for c0 in _cyclic_candidates(n, F):
        cs = [c0]
        for _ in range(n):
            prev = cs[-1]
            nxt = []
            for j in range(n):
                acc = prev[j].derivative()
                for k in range(n):
                    if prev[k] and A.rows[k][j]:
                        acc = acc + prev[k] * A.rows[k][j]
                nxt.append(acc)
            cs.append(nxt)
        M = RatMatrix(cs[:n])
        if not M.det():
            continue
        T = M.inverse()
        lam = RatMatrix([cs[n]]) * T
        L = DiffOperator([-v for v in lam.rows[0]] + [RatF.const(F, 1)], "delta")
        if gauge_transform(A, T) != companion(L):
            raise NoCyclicVectorFound("internal check of the transformation failed")
        return L, T
    raise NoCyclicVectorFound("no candidate vector was cyclic")


def wronskian(elems):
    if not elems:
        raise ValueError("wronskian of an empty list")
    rows = [list(elems)]
    for _ in range(len(elems) - 1):
        rows.append([e.derivative() for e in rows[-1]])
    return RatMatrix(rows).det()


def polynomial_solutions(L: DiffOperator, degbound: int) -> list:
    """Basis of {P : L(P) = 0, deg P <= degbound}, one polynomial per degree."""
    if degbound < 0:
        raise ValueError("degbound must be >= 0")
    L = L.convert("delta")
    F = L.field
    x = UPoly.x(F)
    images = [L.apply(RatF(x**k)) for k in range(degbound + 1)]
    den = UPoly.one(F)
    for im in images:
        if im:
            den = (den * im.den).exquo(den.gcd(im.den))
    nums = [(im * RatF(den)).num if im else UPoly(F) for im in images]
    height = max((p.deg for p in nums), default=-1) + 1
    rows = [[p.c[i] if i < len(p.c) else F.zero for p in nums] for i in range(height)]
    basis = field_nullspace(F, rows, degbound + 1) if rows else [
        [F.one if i == j else F.zero for i in range(degbound + 1)] for j in range(degbound + 1)
    ]
    # echelon by degree: distinct degrees, monic
    reduced = []
    work = [p for p in (UPoly(F, v) for v in basis) if p]
    while work:
        work.sort(key=lambda p: -p.deg)
        top = work.pop(0).monic()
        reduced.append(top)
        work = [p - top * p.coeff(top.deg) if p.deg == top.deg else p for p in work]
        work = [p for p in work if p]
    reduced.sort(key=lambda p: p.deg)
    return reduced


def proto_degree_bound(n: int) -> int:
    """(4n)^(3n^2)."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")
    return (4 * n) ** (3 * n * n)
