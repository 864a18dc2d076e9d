"""The quartic model z^2 = f(x) as a Weierstrass curve, and principal divisors.

With X = x + a3/4 the quartic becomes X^4 + p X^2 + q X + r.  The functions

    U = 2 X^2 + p/3 - 2 z,    V = -4 X^3 - 2 p X - q + 4 X z

satisfy V^2 = U^3 + A U + B with A = -p^2/3 - 4r and B = 2p^3/27 - 8pr/3 + q^2.
P1 (z ~ -x^2) goes to the neutral element and P2 (z ~ +x^2) to (-2p/3, q).
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import NotPrincipal, PointNotOnCurve, UnsupportedDivisor
from ..fields import Field, Scalar
from ..univar import RatF, UPoly
from .elliptic import EllCurve, EllPoint, ell_add
from .places import Divisor, Place, _inf_expansion, _root_field, divisor, infinite_places
from .quadfield import QuadField

__all__ = ["WeierstrassMap", "quartic_to_weierstrass", "class_of_divisor", "principal_function"]


def _lower(s: Scalar, K: Field) -> Scalar:
    """A scalar known to lie in K, re-expressed over K."""
    F, r = s._lowered()
    if F is not K and not F.is_ancestor_of(K):
        raise ValueError(f"{s} does not lie in {K.describe()}")
    return Scalar.coerce(Scalar(F, r), K)


class WeierstrassMap:
    """Isomorphism between the quartic model of F and a short Weierstrass curve."""

    def __init__(self, F: QuadField):
        F.check_genus_one()
        self.F = F
        K = F.base
        self.K = K
        f = F.f
        self.shift = f.coeff(3) / 4
        g = f.shift(-self.shift)  # g(X) = f(X - a3/4)
        self.p, self.q, self.r = g.coeff(2), g.coeff(1), g.coeff(0)
        p, q, r = self.p, self.q, self.r
        A = -(p * p) / 3 - 4 * r
        B = 2 * p**3 / 27 - 8 * p * r / 3 + q * q
        self.curve = EllCurve(A, B, K)
        X = F.x() + self.shift
        z = F.z()
        self.U = 2 * X * X + p / 3 - 2 * z
        self.V = -4 * X * X * X - 2 * p * X - q + 4 * X * z

    def __repr__(self):
        return f"WeierstrassMap({self.curve})"

    # -- points over an extension of K ----------------------------------------------
    def coordinates_to_point(self, x0: Scalar, z0: Scalar, curve: EllCurve | None = None) -> EllPoint:
        C = curve or self.curve
        X0 = x0 + self.shift
        u_raw = 2 * (X0 * X0 - z0)
        return EllPoint(C, Scalar.coerce(u_raw + self.p / 3, C.field), Scalar.coerce(-(2 * (u_raw + self.p) * X0 + self.q), C.field))

    def point_to_coordinates(self, P: EllPoint):
        """(x, z) of the finite place over P, or the sign of the infinite place."""
        if P.is_zero():
            return ("inf", -1)
        u_raw = P.u - self.p / 3
        if (u_raw + self.p).is_zero():
            if P.v == self.q:
                return ("inf", 1)
            X = (self.p * self.p / 4 - self.r) / self.q
            z = X * X + self.p / 2
        else:
            X = -(P.v + self.q) / (2 * (u_raw + self.p))
            z = X * X - u_raw / 2
        return ("finite", X - self.shift, z)

    # -- rational places --------------------------------------------------------------
    def place_to_point(self, P: Place) -> EllPoint:
        if P.kind == "inf":
            return self.curve.O if P.sign < 0 else self.curve.point(-2 * self.p / 3, self.q)
        if P.degree != 1:
            raise UnsupportedDivisor(f"place {P} has degree {P.degree}")
        _, x0, z0 = P.residue_field()
        return self.coordinates_to_point(_lower(x0, self.K), _lower(z0, self.K))

    def point_to_place(self, Q: EllPoint) -> Place:
        if not self.curve.contains(Q):
            raise PointNotOnCurve(f"{Q} is not on {self.curve}")
        c = self.point_to_coordinates(Q)
        P1, P2 = infinite_places(self.F)
        if c[0] == "inf":
            return P1 if c[1] < 0 else P2
        _, x0, z0 = c
        K = self.K
        psi = (Scalar.coerce(-x0, K).raw, K.one)
        fk = tuple(self.F.f.c)
        if z0.is_zero():
            return Place("ramified", K, psi, f=fk)
        return Place("split", K, psi, Scalar.coerce(z0, K).raw, f=fk)

    # -- places of degree 2 -------------------------------------------------------------
    def _conjugate_sum(self, P: Place) -> EllPoint:
        """phi(P) + phi(P^sigma) for a place whose residue field is quadratic over K."""
        L, x0, z0 = P.residue_field()
        if L.parent is not self.K or L.degree != 2:
            raise UnsupportedDivisor(f"place {P} of degree {P.degree}")
        CL = self.curve.lift(L)
        Q = self.coordinates_to_point(x0, z0, CL)
        m1 = L.minpoly[1]
        K = self.K

        def conj(s):
            c0, c1 = s.raw
            return Scalar(L, (K.sub(c0, K.mul(c1, m1)), K.neg(c1)))

        Qc = EllPoint(CL, conj(Q.u), conj(Q.v))
        S = ell_add(CL, Q, Qc)
        if S.is_zero():
            return self.curve.O
        return EllPoint(self.curve, _lower(S.u, K), _lower(S.v, K))


def quartic_to_weierstrass(F: QuadField):
    """(curve, map) for F = K(x, z), z^2 = f with f a monic squarefree quartic."""
    W = WeierstrassMap(F)
    return W.curve, W


def _block_terms(W: WeierstrassMap, P: Place, n: int):
    """Rewrite n*P for a place of degree > 1.

    Returns (h, k): n*P = (h) + k*(P1 + P2) + (points handled elsewhere),
    so its class is k*phi(P2).  Raises UnsupportedDivisor otherwise.
    """
    F = W.F
    psi = P.psi_poly
    d = psi.deg
    if P.kind in ("inert", "fiber"):
        return RatF(psi) ** n, n * d
    if P.kind == "ramified":
        if psi == F.f:
            return F.z() ** n, 2 * n
        if n % 2 == 0:
            return RatF(psi) ** (n // 2), (n // 2) * d
    raise UnsupportedDivisor(f"place {P} of degree {P.degree} with coefficient {n}")


def class_of_divisor(W: WeierstrassMap, D: Divisor) -> EllPoint:
    """Image of a degree-0 divisor in the group of the Weierstrass curve."""
    if D.degree != 0:
        raise ValueError("divisor of nonzero degree")
    C = W.curve
    out = C.O
    P2 = W.place_to_point(infinite_places(W.F)[1])
    for P, n in D.items():
        if P.degree == 1:
            out = ell_add(C, out, W.place_to_point(P) * n)
            continue
        try:
            _, k = _block_terms(W, P, n)
            out = ell_add(C, out, P2 * k)
        except UnsupportedDivisor:
            out = ell_add(C, out, W._conjugate_sum(P) * n)
    return out


def _normalize(F, h):
    """Scale h so its leading coefficient at the reference place is 1."""
    if F.genus == 0:
        return h / (h.num.lc / h.den.lc)
    K = F.base
    hi = 0
    while True:
        lo, cs = _inf_expansion(F, h, -1, hi)
        for c in cs:
            if not K.is_zero(c):
                return h / Scalar(K, c)
        hi = 2 * hi + 4


def principal_function(F, D: Divisor):
    """An h in F with (h) = D, normalized to leading coefficient 1 at P1 (or at oo)."""
    if D.degree != 0:
        raise NotPrincipal(f"divisor of degree {D.degree}")
    if F.genus == 0:
        h = RatF.const(F.base, 1)
        for P, n in D.items():
            if P.kind == "point":
                h = h * RatF(P.psi_poly) ** n
        if divisor(F, h) != D:
            raise NotPrincipal("genus-0 divisor does not match")
        return h
    W = WeierstrassMap(F)
    C = W.curve
    h = F.one()
    pts = []
    P2pt = W.place_to_point(infinite_places(F)[1])
    for P, n in D.items():
        if P.kind == "inf" and P.sign < 0:
            continue
        if P.degree == 1:
            pts.append((W.place_to_point(P), n))
            continue
        g, k = _block_terms(W, P, n)
        h = h * g
        pts.append((P2pt, k))
    # Miller: div(h_m) = sum n_i [(S_i) - (O)] - [(T) - (O)]
    T = C.O
    for S, n in pts:
        if S.is_zero():
            continue
        step = S if n > 0 else -S
        for _ in range(abs(n)):
            h = h * _miller_factor(W, T, step)
            T = ell_add(C, T, step)
            if n < 0:
                h = h / (W.U - S.u)
    if not T.is_zero():
        raise NotPrincipal(f"divisor class is the point {T}, not O")
    h = _normalize(F, h)
    got = divisor(F, h)
    if got != D:
        raise AssertionError(f"principal function check failed: {got} != {D}")
    return h


def _miller_factor(W: WeierstrassMap, T: EllPoint, S: EllPoint):
    """l/v with div = (T) + (S) - (T+S) - (O)."""
    C = W.curve
    if T.is_zero() or S.is_zero():
        return 1
    if T.u == S.u and (T.v + S.v).is_zero():
        return W.U - T.u
    if T.u == S.u:
        lam = (3 * T.u * T.u + C.a) / (2 * T.v)
    else:
        lam = (S.v - T.v) / (S.u - T.u)
    line = W.V - T.v - lam * (W.U - T.u)
    R = ell_add(C, T, S)
    return line / (W.U - R.u)
