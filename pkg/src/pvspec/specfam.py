"""Parametric families and what happens to them under specialization."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .diffop import DiffOperator, RatMatrix
from .errors import (
    DegenerateCurve,
    DenominatorVanishes,
    LeadingCoefficientVanishes,
    NotGenusOne,
    PvspecError,
)
from .fields import Scalar, SpecializationMap, rational_coordinates
from .linalg import ZLattice, hnf, relation_lattice_from_coords
from .logres import (
    EllCurve,
    EllPoint,
    QuadElem,
    QuadField,
    RationalFunctionField,
    log_independent,
    torsion_order,
)
from .univar import RatF, UPoly

__all__ = [
    "specialize_upoly",
    "specialize_ratf",
    "specialize_operator",
    "specialize_matrix",
    "specialize_element",
    "specialize_function_field",
    "AdditiveGroupSpec",
    "RelationLattice",
    "relation_lattice",
    "AdOpenResult",
    "ad_open_member",
    "JacCondition",
    "JacResult",
    "jac_condition_eval",
    "Family",
    "FamilyVerdict",
    "family_logindep_check",
]


# --- coefficientwise specialization --------------------------------------------------

def specialize_upoly(m: SpecializationMap, p: UPoly, keep_degree: bool = False) -> UPoly:
    out = UPoly(m.target, [m(Scalar.coerce(Scalar(p.field, c), m.source)).raw for c in p.c])
    if keep_degree and out.deg != p.deg:
        raise LeadingCoefficientVanishes(f"leading coefficient of {p.to_str()} specializes to 0")
    return out


def specialize_ratf(m: SpecializationMap, u: RatF) -> RatF:
    den = specialize_upoly(m, u.den)
    if not den:
        raise DenominatorVanishes(f"denominator {u.den.to_str()} specializes to 0")
    return RatF(specialize_upoly(m, u.num), den)


def specialize_operator(m: SpecializationMap, L: DiffOperator) -> DiffOperator:
    coeffs = [specialize_ratf(m, c) for c in L.coeffs]
    if not coeffs[-1]:
        raise LeadingCoefficientVanishes("leading coefficient of the operator specializes to 0")
    return DiffOperator(coeffs, L.tag, field=m.target)


def specialize_matrix(m: SpecializationMap, A: RatMatrix, target=None) -> RatMatrix:
    return A.map(lambda e: specialize_element(m, e, target))


def specialize_function_field(m: SpecializationMap, F):
    """The specialized function field; the quartic must stay squarefree."""
    if F.genus == 0:
        return RationalFunctionField(m.target)
    f = specialize_upoly(m, F.f, keep_degree=True)
    Fc = QuadField(f, F.name)
    Fc.check_genus_one()
    return Fc


def specialize_element(m: SpecializationMap, g, target=None):
    if isinstance(g, QuadElem):
        T = target or specialize_function_field(m, g.parent)
        return QuadElem(T, specialize_ratf(m, g.a), specialize_ratf(m, g.b))
    if isinstance(g, RatF):
        return specialize_ratf(m, g)
    if isinstance(g, UPoly):
        return specialize_upoly(m, g)
    if isinstance(g, Scalar):
        return m(g)
    raise TypeError(f"cannot specialize {type(g).__name__}")


# --- additive groups and their relations -------------------------------------------

@dataclass(frozen=True)
class AdditiveGroupSpec:
    """A finitely generated additive group of parameter-ring elements."""

    generators: tuple

    def __post_init__(self):
        if not self.generators:
            raise ValueError("an additive group needs at least one generator")


@dataclass(frozen=True)
class RelationLattice:
    lattice: ZLattice

    @property
    def basis(self):
        return self.lattice.basis

    def same_span(self, other: "RelationLattice") -> bool:
        return self.lattice.same_span(other.lattice)

    def __str__(self):
        return str(self.lattice)


def relation_lattice(values) -> RelationLattice:
    """Integer vectors n with sum n_i v_i = 0."""
    if not values:
        raise ValueError("relation_lattice needs at least one value")
    return RelationLattice(relation_lattice_from_coords(rational_coordinates(list(values))))


@dataclass(frozen=True)
class AdOpenResult:
    member: bool
    witness: tuple | None
    before: RelationLattice
    after: RelationLattice
    values: tuple

    def __str__(self):
        if self.member:
            return "member"
        return "not_member, witness (" + ", ".join(map(str, self.witness)) + ")"


def ad_open_member(gamma: AdditiveGroupSpec, m: SpecializationMap) -> AdOpenResult:
    """Is the specialization injective on gamma?"""
    gens = [Scalar.coerce(g, m.source) for g in gamma.generators]
    values = [m(g) for g in gens]
    before = relation_lattice(gens)
    after = relation_lattice(values)
    if after.same_span(before):
        return AdOpenResult(True, None, before, after, tuple(values))
    witness = None
    for row in hnf(list(after.basis)):
        if len(hnf(list(before.basis) + [row])) > before.lattice.rank:
            witness = tuple(row)
            break
    return AdOpenResult(False, witness, before, after, tuple(values))


# --- Jacobian torsion conditions ---------------------------------------------------

@dataclass(frozen=True)
class JacCondition:
    """The point (u, v) of v^2 = u^3 + a u + b must not be torsion."""

    a: Scalar
    b: Scalar
    u: Scalar
    v: Scalar


@dataclass(frozen=True)
class JacResult:
    status: str  # "satisfied" | "violated" | "inconclusive"
    order: int | None
    torsion: object
    curve: str

    def __str__(self):
        if self.status == "violated":
            return f"violated(order {self.order})"
        return self.status


def jac_condition_eval(cond: JacCondition, m: SpecializationMap, bound: int | None = None) -> JacResult:
    C = EllCurve(m(cond.a), m(cond.b), m.target)
    P = C.point(m(cond.u), m(cond.v))
    t = torsion_order(C, P, bound)
    status = {"non_torsion": "satisfied", "order": "violated", "inconclusive": "inconclusive"}[t.status]
    return JacResult(status, t.order, t, str(C))


# --- end-to-end family check --------------------------------------------------------

@dataclass
class Family:
    """A family of forms f_i over K(x) or K(x, z) with parameters in K."""

    field: object  # RationalFunctionField or QuadField over the parametric base
    functions: list
    gamma: AdditiveGroupSpec | None = None
    jac: JacCondition | None = None
    nondegenerate: list = dc_field(default_factory=list)  # Scalars that must not vanish


@dataclass
class FamilyVerdict:
    point: dict
    nondegenerate: list = dc_field(default_factory=list)  # (expression, value, ok)
    ad_open: AdOpenResult | None = None
    jac: JacResult | None = None
    verdict: str = "inconclusive"
    certificate_d: tuple | None = None
    certificate_h: str | None = None
    Z1: str = ""
    Z2: str = ""
    flags: list = dc_field(default_factory=list)
    provenance: list = dc_field(default_factory=list)
    sufficient_conditions_hold: bool = False

    def to_record(self) -> dict:
        return {
            "point": self.point,
            "nondegenerate": [{"value": str(v), "ok": ok, "expr": e} for e, v, ok in self.nondegenerate],
            "ad_open": None if self.ad_open is None else str(self.ad_open),
            "ad_open_values": None if self.ad_open is None else [str(v) for v in self.ad_open.values],
            "jac": None if self.jac is None else str(self.jac),
            "verdict": self.verdict,
            "certificate": None if self.certificate_d is None else {"d": list(self.certificate_d), "h": self.certificate_h},
            "Z1": self.Z1,
            "Z2": self.Z2,
            "flags": list(self.flags),
            "provenance": list(self.provenance),
        }


def family_logindep_check(family: Family, m: SpecializationMap, torsion_bound: int | None = None,
                          point_label: dict | None = None) -> FamilyVerdict:
    """Nondegeneracy, the ad-open and Jacobian shortcuts, then the direct decision."""
    label = point_label or {k: str(v) for k, v in m.images.items() if k in m.source.params}
    out = FamilyVerdict(point=label)
    for expr in family.nondegenerate:
        try:
            val = m(Scalar.coerce(expr, m.source))
        except DenominatorVanishes:
            val = None
        ok = val is not None and not val.is_zero()
        out.nondegenerate.append((str(expr), val, ok))
        if not ok:
            out.verdict = "DegenerateCurve"
            out.provenance.append(f"nondegeneracy: {expr} vanishes at the point")
            return out
    out.provenance.append("nondegeneracy: all declared polynomials are nonzero")
    if family.gamma is not None:
        out.ad_open = ad_open_member(family.gamma, m)
        out.provenance.append(f"ad-open membership: {out.ad_open}")
    if family.jac is not None:
        try:
            out.jac = jac_condition_eval(family.jac, m, torsion_bound)
            out.provenance.append(f"Jacobian condition: {out.jac} ({out.jac.torsion})")
        except DegenerateCurve as exc:
            out.verdict = "DegenerateCurve"
            out.provenance.append(f"Jacobian condition: {exc}")
            return out
    try:
        Fc = specialize_function_field(m, family.field)
    except (NotGenusOne, LeadingCoefficientVanishes) as exc:
        out.verdict = "DegenerateCurve"
        out.provenance.append(f"specialized curve: {exc}")
        return out
    try:
        fs = [specialize_element(m, g, Fc) for g in family.functions]
        rep = log_independent(Fc, fs, torsion_bound=torsion_bound)
    except PvspecError as exc:
        out.flags.append(type(exc).__name__)
        out.provenance.append(f"direct decision failed: {exc}")
        return out
    out.Z1 = str(rep.Z1)
    out.Z2 = "undecided" if rep.Z2 is None else str(rep.Z2)
    out.flags.extend(rep.flags)
    out.verdict = rep.verdict
    if rep.verdict == "dependent":
        out.certificate_d = rep.certificate_d
        out.certificate_h = str(rep.certificate_h)
    out.provenance.append(f"residue lattices: Z1 = {out.Z1}, Z2 = {out.Z2}")
    out.provenance.append(f"logarithmic independence by residues: {rep.verdict}")
    out.sufficient_conditions_hold = bool(
        out.ad_open is not None and out.ad_open.member and out.jac is not None and out.jac.status == "satisfied"
    )
    if rep.verdict == "dependent" and out.sufficient_conditions_hold:
        raise AssertionError("sufficient conditions for independence hold at a dependent point")
    return out
