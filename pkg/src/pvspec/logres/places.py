"""Places, principal divisors and residues of differentials g dx.

Genus 0 (K(x)): a place is a monic irreducible polynomial or infinity.

Genus 1 (K(x, z), z^2 = f with f a monic squarefree quartic): above a
monic irreducible psi of K[x] sit

* one ramified place when psi divides f,
* two split places (theta, +-z0) when f(theta) is a square in K(theta),
* one inert place of degree 2 deg(psi) otherwise,

and above infinity the two places P1, P2 where z = -x^2 + ... and
z = +x^2 + ... respectively.  When the square-root test is out of reach
(residue field of degree >= 3), the whole fibre is kept as a single
"fiber" block: valuations are still meaningful there, residues are not.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..errors import PrecisionExhausted, UnsupportedDivisor, ZeroFunction
from ..fields import Field, Scalar, adjoin_root
from ..univar import INFINITY, LinePoint, RatF, UPoly, factor, local_expand, residue_at
from .quadfield import QuadElem, QuadField, RationalFunctionField

__all__ = [
    "Place",
    "Divisor",
    "places_above",
    "infinite_places",
    "places_and_valuation",
    "divisor",
    "valuation",
    "residue_of_form",
    "pole_places",
    "trace_to_base",
    "residue_sum",
]

_KIND_ORDER = {"infinity": 0, "inf": 0, "point": 1, "ramified": 1, "split": 2, "inert": 3, "fiber": 4}


def _fresh(F: Field, stem: str) -> str:
    names = F.names()
    if stem not in names:
        return stem
    k = 1
    while f"{stem}{k}" in names:
        k += 1
    return f"{stem}{k}"


@lru_cache(maxsize=None)
def _root_field(base: Field, psi: tuple):
    """(L, theta) with L = K[y]/psi and theta the class of y."""
    if len(psi) == 2:
        return base, Scalar(base, base.neg(psi[0]))
    L = adjoin_root(base, list(psi), _fresh(base, "xi"), assume_irreducible=len(psi) > 3)
    return L, L.gen()


@lru_cache(maxsize=None)
def _inert_field(base: Field, psi: tuple, f: tuple):
    L, theta = _root_field(base, psi)
    ft = UPoly(base, f)(theta)
    M = adjoin_root(L, [(-ft).raw, L.zero, L.one], _fresh(L, "zeta"))
    return M, Scalar.coerce(theta, M), M.gen()


@dataclass(frozen=True)
class Place:
    """A place of K(x) or of K(x, z).

    ``kind`` is one of ``infinity`` / ``point`` (genus 0) or ``inf``,
    ``ramified``, ``split``, ``inert``, ``fiber`` (genus 1).  ``psi`` holds
    the raw coefficients of the monic irreducible polynomial below the
    place; ``zraw`` the value of z in the residue field at split places;
    ``sign`` is -1 for P1 and +1 for P2.
    """

    kind: str
    base: Field
    psi: tuple = ()
    zraw: object = None
    sign: int = 0
    f: tuple = ()

    @property
    def degree(self) -> int:
        if self.kind in ("inf", "infinity"):
            return 1
        d = len(self.psi) - 1
        return 2 * d if self.kind in ("inert", "fiber") else d

    @property
    def psi_poly(self) -> UPoly:
        return UPoly(self.base, list(self.psi))

    @property
    def is_infinite(self) -> bool:
        return self.kind in ("inf", "infinity")

    def residue_field(self):
        """(L, x-value, z-value); z-value is None in genus 0."""
        if self.is_infinite:
            raise ValueError("infinite places have no finite coordinates")
        if self.kind == "fiber":
            raise UnsupportedDivisor("no residue field for an undecided fibre")
        if self.kind == "inert":
            return _inert_field(self.base, self.psi, self.f)
        L, theta = _root_field(self.base, self.psi)
        if self.kind == "point":
            return L, theta, None
        if self.kind == "ramified":
            return L, theta, Scalar(L, L.zero)
        return L, theta, Scalar(L, self.zraw)

    def sort_key(self):
        return (_KIND_ORDER[self.kind], self.sign, len(self.psi), self.label())

    def label(self) -> str:
        if self.kind == "infinity":
            return "oo"
        if self.kind == "inf":
            return "P1" if self.sign < 0 else "P2"
        if self.kind == "fiber":
            return f"fibre[{self.psi_poly.to_str()}]"
        L, theta, zv = self.residue_field()
        xs = str(theta) if len(self.psi) == 2 else f"root of {self.psi_poly.to_str()}"
        if self.kind == "point":
            return f"x={xs}"
        if self.kind == "ramified":
            return f"(x={xs}, z=0)"
        if self.kind == "inert":
            return f"(x={xs}, z={zv})"
        return f"(x={xs}, z={zv})"

    def __str__(self):
        return self.label()

    def __repr__(self):
        return f"Place({self.label()})"


class Divisor:
    """A finite formal sum of places with integer coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        self._c = {p: int(n) for p, n in (coeffs or {}).items() if n}

    def items(self):
        return sorted(self._c.items(), key=lambda kv: kv[0].sort_key())

    def support(self):
        return [p for p, _ in self.items()]

    def coefficient(self, P: Place) -> int:
        return self._c.get(P, 0)

    def __getitem__(self, P):
        return self.coefficient(P)

    @property
    def degree(self) -> int:
        return sum(n * p.degree for p, n in self._c.items())

    def __add__(self, other: "Divisor") -> "Divisor":
        out = dict(self._c)
        for p, n in other._c.items():
            out[p] = out.get(p, 0) + n
        return Divisor(out)

    def __neg__(self):
        return Divisor({p: -n for p, n in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k: int):
        return Divisor({p: k * n for p, n in self._c.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Divisor) and self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def is_zero(self) -> bool:
        return not self._c

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for p, n in self.items():
            parts.append(f"{n}*[{p.label()}]")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Divisor({self})"


# --- enumeration ----------------------------------------------------------------

def infinite_places(F):
    if F.genus == 0:
        return [Place("infinity", F.base)]
    return [Place("inf", F.base, sign=-1, f=tuple(F.f.c)), Place("inf", F.base, sign=1, f=tuple(F.f.c))]


def _ord(p: UPoly, psi: UPoly) -> int:
    k = 0
    while p.deg >= psi.deg:
        q, r = divmod(p, psi)
        if r:
            break
        p, k = q, k + 1
    return k


def places_above(F, psi: UPoly, verified=True, known_z=()):
    """The places of F over the zero of the monic polynomial ``psi``.

    ``known_z`` may supply z-values (raws in K[y]/psi) already known to
    satisfy z^2 = f(theta); they settle the split/inert question when the
    square-root test is unavailable.
    """
    base = F.base
    key = tuple(psi.c)
    if F.genus == 0:
        return [Place("point", base, key)]
    fk = tuple(F.f.c)
    if not verified:
        return [Place("fiber", base, key, f=fk)]
    if not (F.f % psi):
        return [Place("ramified", base, key, f=fk)]
    L, theta = _root_field(base, key)
    z0 = None
    for zr in known_z:
        z0 = Scalar(L, zr)
        break
    if z0 is None:
        ft = F.f(theta)
        z0 = ft.sqrt()
        if z0 is None:
            if L.parent is None or L.degree <= 2:
                return [Place("inert", base, key, f=fk)]
            return [Place("fiber", base, key, f=fk)]
    out = [Place("split", base, key, z0.raw, f=fk), Place("split", base, key, (-z0).raw, f=fk)]
    return sorted(out, key=lambda p: p.sort_key())


# --- valuations ----------------------------------------------------------------

def _coerce(F, g):
    g = F.coerce(g)
    if not g:
        raise ZeroFunction("the zero function has no divisor")
    return g


def _sqrt_series(F: Field, c, n):
    """First n coefficients of sqrt(c0 + c1 t + ...) with c0 = 1."""
    c = list(c) + [F.zero] * max(0, n - len(c))
    s = [F.one]
    half = F.inv(F.from_int(2))
    for k in range(1, n):
        acc = c[k]
        for j in range(1, k):
            acc = F.sub(acc, F.mul(s[j], s[k - j]))
        s.append(F.mul(acc, half))
    return s


def _inf_sqrt(F: QuadField, n):
    """Coefficients S_0..S_{n-1} of S(t) = sqrt(t^4 f(1/t))."""
    K = F.base
    rev = list(reversed(F.f.c))  # 1, a3, a2, a1, a0
    return _sqrt_series(K, rev, n)


def _laurent(u: RatF, p: LinePoint, hi: int):
    """(ell, [coefficients as raws]) of u at p up to exponent ``hi``."""
    if not u:
        return None
    ell = local_expand(u, p, 1).ell
    if hi < ell:
        return ell, []
    s = local_expand(u, p, hi - ell + 1)
    return ell, [c.raw for c in s.coeffs]


def _inf_expansion(F: QuadField, g: QuadElem, sign: int, hi: int):
    """Coefficients of g at P_sign in t = 1/x, from exponent lo to ``hi``.

    Returns (lo, raws).  z = sign * t^-2 * S(t).
    """
    K = F.base
    la = _laurent(g.a, INFINITY, hi)
    lb = _laurent(g.b, INFINITY, hi + 2)
    los = []
    if la:
        los.append(la[0])
    if lb:
        los.append(lb[0] - 2)
    lo = min(los)
    n = hi - lo + 1
    out = [K.zero] * max(n, 0)
    if la:
        for k, c in enumerate(la[1]):
            e = la[0] + k
            if lo <= e <= hi:
                out[e - lo] = K.add(out[e - lo], c)
    if lb:
        S = _inf_sqrt(F, hi - lb[0] + 3)
        sg = K.from_int(sign)
        for k, c in enumerate(lb[1]):
            for j, sj in enumerate(S):
                e = lb[0] + k - 2 + j
                if e > hi:
                    break
                if e >= lo:
                    out[e - lo] = K.add(out[e - lo], K.mul(sg, K.mul(c, sj)))
    return lo, out


def _z_series(P: Place, n: int):
    """Coefficients z_0..z_{n-1} of z in s = x - theta at a split or inert place."""
    L, theta, z0 = P.residue_field()
    fs = UPoly(P.base, list(P.f)).lift(L).shift(theta)
    Fn = list(fs.c) + [L.zero] * n
    z = [z0.raw]
    inv2z0 = L.inv(L.mul(L.from_int(2), z0.raw))
    for k in range(1, n):
        acc = Fn[k]
        for j in range(1, k):
            acc = L.sub(acc, L.mul(z[j], z[k - j]))
        z.append(L.mul(acc, inv2z0))
    return L, theta, z


def _split_expansion(P: Place, g: QuadElem, hi: int):
    L, theta, _ = P.residue_field()
    pt = LinePoint(theta)
    a, b = g.a.lift(L), g.b.lift(L)
    la = _laurent(a, pt, hi)
    lb = _laurent(b, pt, hi)
    lo = min(x[0] for x in (la, lb) if x)
    out = [L.zero] * max(hi - lo + 1, 0)
    if la:
        for k, c in enumerate(la[1]):
            e = la[0] + k
            out[e - lo] = L.add(out[e - lo], c)
    if lb:
        _, _, z = _z_series(P, hi - lb[0] + 1)
        for k, c in enumerate(lb[1]):
            for j in range(len(z)):
                e = lb[0] + k + j
                if e > hi:
                    break
                out[e - lo] = L.add(out[e - lo], L.mul(c, z[j]))
    return L, lo, out


def _first_nonzero(F: Field, lo, coeffs):
    for k, c in enumerate(coeffs):
        if not F.is_zero(c):
            return lo + k
    return None


def _ratf_ord(u: RatF, psi: UPoly) -> int:
    return _ord(u.num, psi) - _ord(u.den, psi)


def valuation(F, g, P: Place) -> int:
    """nu_P(g)."""
    g = _coerce(F, g)
    if F.genus == 0:
        if P.kind == "infinity":
            return g.den.deg - g.num.deg
        return _ratf_ord(g, P.psi_poly)
    if P.kind == "inf":
        # nu_P(g) + nu_P(conj g) = val_oo(N(g)), nu_P(conj g) >= m
        N = g.norm()
        m = min(x for x in ((g.a.den.deg - g.a.num.deg) if g.a else None,
                            (g.b.den.deg - g.b.num.deg - 2) if g.b else None) if x is not None)
        hi = (N.den.deg - N.num.deg) - m
        lo, cs = _inf_expansion(F, g, P.sign, hi)
        v = _first_nonzero(F.base, lo, cs)
        if v is None:
            raise PrecisionExhausted("no nonzero term within the valuation bound")
        return v
    psi = P.psi_poly
    if P.kind == "ramified":
        vals = []
        if g.a:
            vals.append(2 * _ratf_ord(g.a, psi))
        if g.b:
            vals.append(2 * _ratf_ord(g.b, psi) + 1)
        return min(vals)
    N = g.norm()
    vN = _ratf_ord(N, psi)
    if P.kind in ("inert", "fiber"):
        if vN % 2:
            raise UnsupportedDivisor("fibre block with odd norm valuation")
        return vN // 2
    m = min(_ratf_ord(x, psi) for x in (g.a, g.b) if x)
    L, lo, cs = _split_expansion(P, g, vN - m)
    v = _first_nonzero(L, lo, cs)
    if v is None:
        raise PrecisionExhausted("no nonzero term within the valuation bound")
    return v


def _pullback(F, r: RatF, out: dict, known: dict):
    """Add the divisor of r in K(x) pulled back to F."""
    for poly, sign in ((r.num, 1), (r.den, -1)):
        if poly.deg < 1:
            continue
        _, facs = factor(poly)
        for fac in facs:
            n = sign * fac.multiplicity
            places = places_above(F, fac.poly, fac.verified, known.get(tuple(fac.poly.c), ()))
            for P in places:
                w = 2 * n if P.kind == "ramified" else n
                out[P] = out.get(P, 0) + w
    vinf = r.den.deg - r.num.deg
    if vinf:
        for P in infinite_places(F):
            out[P] = out.get(P, 0) + vinf


def places_and_valuation(F, g) -> Divisor:
    """The principal divisor (g), degree checked."""
    g = _coerce(F, g)
    out = {}
    if F.genus == 0:
        _pullback(F, g, out, {})
        D = Divisor(out)
    else:
        D = _quad_divisor(F, g, out)
    if D.degree != 0:
        raise AssertionError(f"principal divisor of nonzero degree {D.degree}: {D}")
    return D


divisor = places_and_valuation


def _quad_divisor(F: QuadField, g: QuadElem, out: dict) -> Divisor:
    K = F.base
    if not g.b:
        _pullback(F, g.a, out, {})
        return Divisor(out)
    if not g.a:
        _pullback(F, g.b, out, {})
        _, facs = factor(F.f)
        for fac in facs:
            for P in places_above(F, fac.poly, fac.verified):
                out[P] = out.get(P, 0) + 1
        for P in infinite_places(F):
            out[P] = out.get(P, 0) - 2
        return Divisor(out)
    Dn = g.a.den * g.b.den // g.a.den.gcd(g.b.den)
    A = (g.a * Dn).num
    B = (g.b * Dn).num
    G = A.gcd(B)
    A1, B1 = A.exquo(G), B.exquo(G)
    Np = A1 * A1 - B1 * B1 * F.f
    known = {}
    if Np.deg >= 1:
        _, facs = factor(Np)
        for fac in facs:
            psi = fac.poly
            if not (F.f % psi):
                P = Place("ramified", K, tuple(psi.c), f=tuple(F.f.c))
                v = min(2 * _ord(A1, psi) if A1 else 10**9, 2 * _ord(B1, psi) + 1)
                out[P] = out.get(P, 0) + v
                continue
            if not fac.verified:
                raise UnsupportedDivisor(f"zeros over an unresolved block {psi.to_str()}")
            L, theta = _root_field(K, tuple(psi.c))
            z0 = -A1(theta) / B1(theta)
            P = Place("split", K, tuple(psi.c), z0.raw, f=tuple(F.f.c))
            out[P] = out.get(P, 0) + fac.multiplicity
            known.setdefault(tuple(psi.c), []).append(z0.raw)
    # infinite places: nu_P1 + nu_P2 = -deg N'
    total = -Np.deg
    M = max(A1.deg if A1 else -(10**9), B1.deg + 2)
    h = F.elem(RatF(A1), RatF(B1))
    lo, cs = _inf_expansion(F, h, 1, total + M)
    v2 = _first_nonzero(K, lo, cs)
    if v2 is None:
        raise PrecisionExhausted("no nonzero term at infinity")
    P1, P2 = infinite_places(F)
    out[P2] = out.get(P2, 0) + v2
    out[P1] = out.get(P1, 0) + total - v2
    _pullback(F, RatF(G, Dn), out, known)
    return Divisor(out)


# --- residues --------------------------------------------------------------------

def residue_of_form(F, g, P: Place) -> Scalar:
    """res_P(g dx), an element of the residue field of P."""
    g = F.coerce(g)
    K = F.base
    if F.genus == 0:
        if P.kind == "infinity":
            return residue_at(g, INFINITY) if g else Scalar(K, K.zero)
        L, theta, _ = P.residue_field()
        if not g:
            return Scalar(L, L.zero)
        return residue_at(g.lift(L), LinePoint(theta))
    if P.kind == "inf":
        ra = residue_at(g.a, INFINITY) if g.a else Scalar(K, K.zero)
        if not g.b:
            return ra
        lb = _laurent(g.b, INFINITY, 3)
        if lb[0] > 3:
            return ra
        S = _inf_sqrt(F, 4 - lb[0])
        acc = K.zero
        for k, c in enumerate(lb[1]):
            acc = K.add(acc, K.mul(c, S[3 - lb[0] - k]))
        return ra - Scalar(K, K.mul(K.from_int(P.sign), acc))
    if P.kind == "fiber":
        if not g:
            return Scalar(K, K.zero)
        if valuation(F, g, P) >= 0:
            return Scalar(K, K.zero)
        raise UnsupportedDivisor(f"residue at an undecided fibre over {P.psi_poly.to_str()}")
    L, theta, _ = P.residue_field()
    if not g:
        return Scalar(L, L.zero)
    if P.kind == "ramified":
        if not g.a:
            return Scalar(L, L.zero)
        return residue_at(g.a.lift(L), LinePoint(theta)) * 2
    L, lo, cs = _split_expansion(P, g, -1)
    if lo > -1:
        return Scalar(L, L.zero)
    return Scalar(L, cs[-1])


def trace_to_base(v: Scalar, base: Field) -> Scalar:
    """Trace of v down to ``base`` (an ancestor of v's field)."""
    while v.field is not base:
        if v.field.parent is None:
            raise ValueError("base is not below the scalar's field")
        v = v.trace()
    return v


def pole_places(F, g):
    """Places where g dx may have a pole: over the denominators and at infinity."""
    g = F.coerce(g)
    if F.genus == 0:
        out = []
        if g:
            if g.den.deg >= 1:
                _, facs = factor(g.den)
                for fac in facs:
                    out.extend(places_above(F, fac.poly, fac.verified))
            if g.den.deg - g.num.deg < 2:
                out.extend(infinite_places(F))
        return out
    dens = [x.den for x in (g.a, g.b) if x]
    den = UPoly.one(F.base)
    for d in dens:
        den = den * d // den.gcd(d)
    out = []
    if den.deg >= 1:
        _, facs = factor(den)
        for fac in facs:
            out.extend(places_above(F, fac.poly, fac.verified))
    out.extend(infinite_places(F))
    return out


def residue_sum(F, g, places=None) -> Scalar:
    """Sum over ``places`` (default: the pole places) of the traced residues."""
    places = pole_places(F, g) if places is None else places
    acc = Scalar(F.base, F.base.zero)
    for P in places:
        acc = acc + trace_to_base(residue_of_form(F, g, P), F.base)
    return acc
