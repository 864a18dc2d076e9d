"""Local data of differential operators and the exponential bound.

Sign convention for exponents: ``e`` is reported as a generalized exponent
at ``p`` when the slope-0 Newton polynomial of ``L(theta - e)``, computed
for the operator transported to 0, has 0 as a root.  With this choice the
Bessel operator has exponents ``i/x - 1/2`` and ``-i/x - 1/2`` at infinity,
and the principal parts below are the true leading behaviour of
logarithmic derivatives of solutions::

    pp(e, p)   = -e(x - p) / (x - p)      (p finite)
    pp(e, oo)  =  e(1/x) / x

where ``e(y) = sum_j e_j y^(-j)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product
from math import comb

from .diffop import (
    DiffOperator,
    RatMatrix,
    cyclic_scalarize,
    exterior_power_system,
    polynomial_solutions,
    right_divide,
    shift,
    transport,
    twist,
)
from .errors import CapExceeded, NeedsHigherExtension, ZeroOperator
from .fields import Field, Scalar, adjoin_root, common_field, is_rational_integer
from .univar import (
    INFINITY,
    LinePoint,
    RatF,
    UPoly,
    factor,
    local_expand,
    ord_at,
    residue_at,
    val_at,
)

__all__ = [
    "GenExp",
    "PrincipalPart",
    "ExpBoundReport",
    "NO_EXPONENTIAL_POSSIBLE",
    "newton_polynomial_slope0",
    "generalized_exponents",
    "principal_parts",
    "exp_bound",
    "exponential_solutions",
    "relation_degree_bound",
    "RelationBoundReport",
]

NO_EXPONENTIAL_POSSIBLE = "NoExponentialPossible"


@dataclass(frozen=True)
class GenExp:
    """e = sum_j coeffs[j] * x^(-j) at ``point`` with its multiplicity."""

    coeffs: tuple
    multiplicity: int
    point: LinePoint

    @property
    def field(self) -> Field:
        return self.coeffs[0].field

    def as_ratf(self, field: Field | None = None) -> RatF:
        F = field or self.field
        x_inv = RatF.x(F).inverse()
        out = RatF.const(F, 0)
        for j, c in enumerate(self.coeffs):
            out = out + x_inv**j * c
        return out

    def lift(self, field: Field) -> "GenExp":
        return GenExp(tuple(c.lift(field) for c in self.coeffs), self.multiplicity, self.point)

    def to_str(self) -> str:
        """Laurent-polynomial form, e.g. ``i/x - 1/2``."""
        terms = []
        for j in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[j]
            if c.is_zero():
                continue
            cs = str(c)
            if j == 0:
                terms.append(cs)
                continue
            mono = "x" if j == 1 else f"x^{j}"
            if "+" in cs or "-" in cs[1:] or "/" in cs:
                cs = f"({cs})"
            terms.append(f"{cs}/{mono}")
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out

    def __str__(self):
        return self.to_str()


@dataclass(frozen=True)
class PrincipalPart:
    point: LinePoint
    exponent: GenExp
    value: RatF
    residue: Scalar
    order: int


# --- Newton data at 0 ---------------------------------------------------------------

def _zero_point(F: Field) -> LinePoint:
    return LinePoint(Scalar(F, F.zero))


def _newton_points(M: DiffOperator):
    """{i: (valuation at 0, leading coefficient)} for nonzero coefficients."""
    if M.is_zero():
        raise ZeroOperator("zero operator has no Newton data")
    zero = _zero_point(M.field)
    pts = {}
    for i, c in enumerate(M.coeffs):
        if c:
            v = val_at(c, zero)
            pts[i] = (v, local_expand(c, zero, 1).coeff(v))
    return pts


def _edge_poly(F: Field, pts, slope: int):
    """Edge polynomial of the given slope, or None if no edge has it."""
    level = min(v - slope * i for i, (v, _) in pts.items())
    on = [i for i, (v, _) in pts.items() if v - slope * i == level]
    if slope and len(on) < 2:
        return None, level
    raws = [F.zero] * (max(on) + 1)
    for i in on:
        raws[i] = pts[i][1].lift(F).raw
    return UPoly(F, raws), level


def newton_polynomial_slope0(L: DiffOperator) -> tuple:
    """(N(T), level) for a theta-form operator at 0."""
    if L.tag != "theta":
        raise ValueError("newton_polynomial_slope0 needs a theta-form operator")
    pts = _newton_points(L)
    return _edge_poly(L.field, pts, 0)


# --- root finding with automatic quadratic adjunction -----------------------------------

class _Tower:
    """The field that grows as quadratic roots are adjoined."""

    def __init__(self, field: Field):
        self.field = field

    def _fresh(self, stem: str) -> str:
        names = self.field.names()
        if stem not in names and stem not in ("x", "z", "eta", "D", "TH"):
            return stem
        k = 2
        while f"{stem}_{k}" in names:
            k += 1
        return f"{stem}_{k}"

    def _name_for(self, disc: Scalar):
        q = disc.rational()
        if q is None:
            k = 1
            while f"r{k}" in self.field.names():
                k += 1
            return None, f"r{k}"
        # squarefree part of the rational discriminant
        n = int(q.numerator) * int(q.denominator)
        sign = -1 if n < 0 else 1
        n = abs(n)
        d, p = 1, 2
        while p * p <= n:
            while n % (p * p) == 0:
                n //= p * p
            if n % p == 0:
                d *= p
                n //= p
            p += 1
        d = sign * d * n
        if d == -1:
            return d, self._fresh("i")
        return d, self._fresh(f"sqrt{d}" if d > 0 else f"sqrtm{-d}")

    def adjoin_quadratic(self, q: UPoly):
        F = self.field
        q = q.lift(F).monic()
        disc = q.coeff(1) ** 2 - q.coeff(0) * 4
        d, name = self._name_for(disc)
        if d is None:
            self.field = adjoin_root(F, q, name)
        else:
            self.field = adjoin_root(F, [F.from_int(-d), F.zero, F.one], name)

    def roots(self, poly: UPoly, completed):
        """[(root, multiplicity)] of poly, adjoining quadratic roots as needed."""
        while True:
            p = poly.lift(self.field)
            _, facs = factor(p)
            pending = [f for f in facs if f.poly.deg >= 2]
            if not pending:
                return [(-f.poly.coeff(0), f.multiplicity) for f in facs]
            big = [f.poly for f in pending if f.poly.deg > 2 or not f.verified]
            if big:
                raise NeedsHigherExtension(
                    "an edge polynomial has an irreducible factor of degree >= 3",
                    factors=big,
                    completed=completed,
                )
            self.adjoin_quadratic(pending[0].poly)


# --- generalized exponents ---------------------------------------------------------------

def _local_theta(L: DiffOperator, p: LinePoint) -> DiffOperator:
    if p.is_infinite:
        return transport(INFINITY, L.convert("theta"))
    return transport(p, L.convert("delta")).convert("theta")


def _internal_exponents(M: DiffOperator, tower: _Tower, completed):
    """[(internal e as {power: Scalar}, multiplicity)] for theta-form M at 0."""
    out = []

    def recurse(op, terms, smax):
        pts = _newton_points(op)
        for s in range(smax - 1, 0, -1):
            edge, _ = _edge_poly(op.field, pts, s)
            if edge is None:
                continue
            for c, _ in tower.roots(edge, completed):
                if c.is_zero():
                    continue
                F = tower.field
                shifted = shift(op.lift(F), RatF.x(F) ** (-s) * c)
                recurse(shifted, {**terms, s: c}, s)
        N, _ = _edge_poly(op.field, pts, 0)
        for c, mult in tower.roots(N, completed):
            out.append(({**terms, 0: c}, mult))

    pts = _newton_points(M)
    vs = [v for v, _ in pts.values()]
    recurse(M, {}, max(vs) - min(vs) + 1)
    return out


def _exponent_multiplicity(M: DiffOperator, e: RatF) -> int:
    """Multiplicity of 0 in the slope-0 Newton polynomial of M(theta - e)."""
    N, _ = newton_polynomial_slope0(shift(M.lift(e.field), -e))
    k = 0
    while k <= N.deg and N.coeff(k).is_zero():
        k += 1
    return k


def _build_exponents(M, internal, tower, p):
    F = tower.field
    out = []
    for terms, mult in internal:
        top = max(terms)
        coeffs = tuple(-(terms.get(j, Scalar(F, F.zero)).lift(F)) for j in range(top + 1))
        while len(coeffs) > 1 and coeffs[-1].is_zero():
            coeffs = coeffs[:-1]
        e = GenExp(coeffs, mult, p)
        check = _exponent_multiplicity(M, e.as_ratf(F))
        if check != mult:
            raise AssertionError(f"multiplicity check failed for {e}: {check} != {mult}")
        out.append(e)
    out.sort(key=lambda g: g.to_str())
    return out


def generalized_exponents(L: DiffOperator, p: LinePoint, *, field: Field | None = None) -> list:
    """Unramified generalized exponents of L at p, with multiplicities.

    Quadratic roots of edge polynomials are adjoined automatically; every
    returned exponent lives over the final field.
    """
    tower = _Tower(field or L.field)
    if p.value is not None:
        tower.field = common_field(tower.field, p.value.field)
    M = _local_theta(L.lift(tower.field), p)
    internal = _internal_exponents(M, tower, [])
    exps = _build_exponents(M, internal, tower, p)
    return [g.lift(tower.field) for g in exps]


# --- principal parts and the exponential bound ---------------------------------------------

def _pp_value(e: GenExp, p: LinePoint, F: Field) -> RatF:
    x = RatF.x(F)
    if p.is_infinite:
        v = RatF.const(F, 0)
        for j, c in enumerate(e.coeffs):
            v = v + x**j * c.lift(F)
        return v / x
    y = x - p.value.lift(F)
    v = RatF.const(F, 0)
    for j, c in enumerate(e.coeffs):
        v = v + y ** (-j) * c.lift(F)
    return -v / y


def principal_part(e: GenExp, field: Field | None = None) -> PrincipalPart:
    F = field or e.field
    p = e.point
    if p.value is not None:
        F = common_field(F, p.value.field)
        p = LinePoint(p.value.lift(F))
    v = _pp_value(e, p, F)
    return PrincipalPart(p, e.lift(F), v, residue_at(v, p), ord_at(v, p))


def principal_parts(L: DiffOperator, p: LinePoint, *, field: Field | None = None) -> list:
    exps = generalized_exponents(L, p, field=field)
    F = exps[0].field if exps else (field or L.field)
    return [principal_part(e, F) for e in exps]


@dataclass
class ExpBoundReport:
    operator: DiffOperator
    field: Field
    singular_points: list  # finite LinePoints
    exponents: dict  # LinePoint -> [GenExp]
    principal_parts: dict  # LinePoint -> [PrincipalPart]
    phi_image: list  # Scalars
    phi_integers: list  # ints
    bound: object  # int or NO_EXPONENTIAL_POSSIBLE
    order_terms: dict = dc_field(default_factory=dict)  # LinePoint -> int

    @property
    def points(self) -> list:
        return list(self.singular_points) + [INFINITY]

    def recompute_bound(self):
        if any(not self.principal_parts[p] for p in self.points):
            return NO_EXPONENTIAL_POSSIBLE
        total = sum(max(h.order for h in self.principal_parts[p]) for p in self.points)
        return total + max([0] + self.phi_integers)


def singular_points(L: DiffOperator) -> tuple:
    """(finite poles of the monic delta-form coefficients, field holding them)."""
    tower = _Tower(L.field)
    return _singular_points(L, tower), tower.field


def _singular_points(L: DiffOperator, tower: _Tower) -> list:
    M = L.convert("delta").monic()
    den = UPoly.one(M.field)
    for c in M.coeffs:
        den = (den * c.den).exquo(den.gcd(c.den))
    pts = [LinePoint(r) for r, _ in tower.roots(den, [])] if den.deg > 0 else []
    F = tower.field
    pts = [LinePoint(p.value.lift(F)) for p in pts]
    pts.sort(key=lambda p: str(p.value))
    return pts


def exp_bound(L: DiffOperator) -> ExpBoundReport:
    """Exponential bound N(L) with every ingredient recorded."""
    L = L.convert("delta")
    tower = _Tower(L.field)
    sing = _singular_points(L, tower)
    points = sing + [INFINITY]
    exps = {}
    for p in points:
        M = _local_theta(L.lift(tower.field), p)
        internal = _internal_exponents(M, tower, exps)
        exps[p] = _build_exponents(M, internal, tower, p)
    F = tower.field
    sing = [LinePoint(p.value.lift(F)) for p in sing]
    points = sing + [INFINITY]
    exps = {q: [g.lift(F) for g in exps[p]] for p, q in zip(list(exps), points)}
    pps = {p: [principal_part(e, F) for e in exps[p]] for p in points}
    phi = []
    for combo in product(*(pps[p] for p in points)):
        val = -sum((h.residue for h in combo), Scalar(F, F.zero))
        if val not in phi:
            phi.append(val)
    ints = sorted({n for v in phi for ok, n in [is_rational_integer(v)] if ok == "yes"})
    report = ExpBoundReport(L, F, sing, exps, pps, phi, ints, None)
    report.bound = report.recompute_bound()
    report.order_terms = {p: max((h.order for h in pps[p]), default=None) for p in points}
    return report


def exponential_solutions(L: DiffOperator, report: ExpBoundReport | None = None) -> list:
    """Logarithmic derivatives u of exponential solutions, one per
    polynomial-solution basis element of each admissible twist."""
    report = report or exp_bound(L)
    if report.bound == NO_EXPONENTIAL_POSSIBLE:
        return []
    F = report.field
    L = L.convert("delta").lift(F)
    points = report.points
    found = []
    for combo in product(*(report.principal_parts[p] for p in points)):
        phi = -sum((h.residue for h in combo), Scalar(F, F.zero))
        ok, d = is_rational_integer(phi)
        if ok != "yes" or d < 0:
            continue
        w = RatF.const(F, 0)
        for h in combo:
            # at infinity only the polynomial part enters; its x^-1 term is
            # accounted for by the finite parts and deg P
            w = w + (RatF(h.value.polynomial_part()) if h.point.is_infinite else h.value)
        for P in polynomial_solutions(twist(L, w), d):
            Pr = RatF(P)
            u = Pr.derivative() / Pr + w
            if u in found:
                continue
            _, rem = right_divide(L, u)
            if rem:
                raise AssertionError(f"candidate {u} failed the right-division check")
            if u.deg > report.bound:
                raise AssertionError(f"deg({u}) exceeds the bound {report.bound}")
            found.append(u)
    found.sort(key=lambda u: (u.deg, u.to_str()))
    return found


# --- relation degree bound -------------------------------------------------------------------

@dataclass
class RelationBoundReport:
    value: int
    # per s: (mu, deg T_s, N(L_s), contribution)
    terms: list


def _matrix_degree(T: RatMatrix) -> int:
    return max(max(a.deg for a in row) for row in T.rows)


def relation_degree_bound(A: RatMatrix, cap: int = 20, *, detailed: bool = False):
    """max over s of 2 mu deg(T_s) + mu (mu - 1) N(L_s), mu = binom(nu, s)."""
    nu, m = A.shape
    if nu != m:
        raise ValueError("relation_degree_bound needs a square matrix")
    for s in range(1, nu + 1):
        if comb(nu, s) > cap:
            raise CapExceeded(f"binom({nu}, {s}) = {comb(nu, s)} exceeds the cap {cap}")
    terms = []
    best = 0
    for s in range(1, nu + 1):
        mu = comb(nu, s)
        B = exterior_power_system(A, s)
        Ls, Ts = cyclic_scalarize(B)
        degT = max(_matrix_degree(Ts), 0)
        N = exp_bound(Ls).bound
        value = 2 * mu * degT
        if N != NO_EXPONENTIAL_POSSIBLE:
            value += mu * (mu - 1) * N
        terms.append((s, mu, degT, N, value))
        best = max(best, value)
    return RelationBoundReport(best, terms) if detailed else best
