"""Residue lattices and the logarithmic-independence decision.

For f_1..f_s in F, Z1 collects the integer vectors d for which every
residue of (sum d_i f_i) dx is an integer, and Z2 those whose residue
divisor is principal.  Z2 = 0 means independence; otherwise each basis
vector e_l of Z2 gives a function h_l and the form

    omega_l = (h_l'/h_l - sum_i e_{i,l} f_i) dx,

and the f_i are dependent exactly when the omega_l are Z-linearly dependent.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product

from ..errors import PolesNotCovered, UnsupportedDivisor
from ..fields import Scalar, rational_coordinates
from ..linalg import ZLattice, hnf, integer_kernel, primitive, rational_nullspace
from ..univar import RatF, UPoly
from .elliptic import TorsionResult, torsion_order
from .places import Divisor, Place, pole_places, residue_of_form
from .quadfield import QuadElem
from .weierstrass import WeierstrassMap, class_of_divisor, principal_function

__all__ = [
    "ZLatticesResult",
    "z_lattices",
    "LogIndepReport",
    "log_independent",
    "log_derivative",
    "residue_divisor",
    "character_logderivs",
    "verify_certificate",
]

# largest box enumerated when several torsion classes interact
_BOX_LIMIT = 20000


def log_derivative(h):
    return h.derivative() / h


@dataclass
class ZLatticesResult:
    places: list
    residues: dict  # Place -> [res_P(f_i dx)]
    Z1: ZLattice
    Z2: ZLattice | None
    status: str = "ok"  # "ok" | "TorsionInconclusive" | "UnsupportedDivisor"
    detail: str = ""
    classes: list = dc_field(default_factory=list)
    torsion: list = dc_field(default_factory=list)
    curve: object = None


def _collect_places(F, fs):
    seen = {}
    for g in fs:
        for P in pole_places(F, g):
            seen.setdefault(P, None)
    return sorted(seen, key=lambda P: P.sort_key())


def residue_divisor(places, residues, d) -> Divisor:
    """sum_P (sum_i d_i res_P(f_i dx)) P; the coefficients must be integers."""
    out = {}
    for P in places:
        acc = Scalar.coerce(0, residues[P][0].field)
        for r, c in zip(residues[P], d):
            if c:
                acc = acc + r * c
        q = acc.rational()
        if q is None or q.denominator != 1:
            raise ValueError(f"non-integral residue {acc} at {P}")
        if q:
            out[P] = int(q)
    return Divisor(out)


def z_lattices(F, fs, places=None, torsion_bound=None) -> ZLatticesResult:
    """Z1 and Z2 for the forms f_i dx over the place set ``places``."""
    fs = [F.coerce(g) for g in fs]
    s = len(fs)
    needed = _collect_places(F, fs)
    if places is None:
        places = needed
    else:
        places = sorted(set(places), key=lambda P: P.sort_key())
    residues = {}
    for P in set(needed) | set(places):
        residues[P] = [residue_of_form(F, g, P) for g in fs]
    missing = [P for P in needed if P not in places and any(not r.is_zero() for r in residues[P])]
    if missing:
        raise PolesNotCovered("residues at places outside the given set: " + ", ".join(map(str, missing)))
    residues = {P: residues[P] for P in places}

    # unknowns: d_1..d_s, then n_P for each place
    m = len(places)
    rows = []
    for k, P in enumerate(places):
        coords = rational_coordinates(list(residues[P]) + [Scalar.coerce(1, residues[P][0].field)])
        keys = sorted({key for c in coords for key in c}, key=repr)
        for key in keys:
            row = [Fraction(0)] * (s + m)
            for i in range(s):
                row[i] = coords[i].get(key, Fraction(0))
            row[s + k] = -coords[s].get(key, Fraction(0))
            rows.append(row)
    rows.append([Fraction(0)] * s + [Fraction(P.degree) for P in places])
    int_rows = [primitive(r) if any(r) else [0] * (s + m) for r in rows]
    kernel = integer_kernel(int_rows, s + m)
    Z1 = ZLattice.from_rows([v[:s] for v in kernel], s)
    res = ZLatticesResult(places, residues, Z1, None)
    if F.genus == 0 or Z1.is_zero():
        res.Z2 = Z1 if F.genus == 0 else ZLattice.zero(s)
        return res

    W = WeierstrassMap(F)
    res.curve = W.curve
    try:
        classes = [class_of_divisor(W, residue_divisor(places, residues, e)) for e in Z1.basis]
    except UnsupportedDivisor as exc:
        res.status, res.detail = "UnsupportedDivisor", str(exc)
        return res
    res.classes = classes
    tors = [torsion_order(W.curve, c, torsion_bound) for c in classes]
    res.torsion = tors
    basis = [list(e) for e in Z1.basis]
    free = [i for i, t in enumerate(tors) if t.status == "non_torsion"]
    undecided = [i for i, t in enumerate(tors) if t.status == "inconclusive"]
    if undecided or len(free) > 1:
        bad = classes[(undecided or free)[0]]
        res.status = "TorsionInconclusive"
        res.detail = f"cannot decide relations involving the point {bad}"
        return res
    # a single non-torsion class cannot enter any relation; the rest are torsion
    tors_idx = [i for i in range(len(basis)) if i not in free]
    orders = [tors[i].order for i in tors_idx]
    rel = []
    for i, n in zip(tors_idx, orders):
        rel.append([n if j == i else 0 for j in range(len(basis))])
    box = 1
    for n in orders:
        box *= n
    if len(tors_idx) > 1:
        if box > _BOX_LIMIT:
            res.status = "TorsionInconclusive"
            res.detail = f"relation search box of size {box} exceeds {_BOX_LIMIT}"
            return res
        C = W.curve
        for ms in product(*[range(n) for n in orders]):
            if not any(ms):
                continue
            acc = C.O
            for i, mi in zip(tors_idx, ms):
                acc = acc + classes[i] * mi
            if acc.is_zero():
                rel.append([ms[tors_idx.index(j)] if j in tors_idx else 0 for j in range(len(basis))])
    rel = hnf(rel) if rel else []
    Z2rows = []
    for r in rel:
        v = [0] * s
        for c, e in zip(r, basis):
            if c:
                v = [a + c * b for a, b in zip(v, e)]
        Z2rows.append(v)
    res.Z2 = ZLattice.from_rows(Z2rows, s) if Z2rows else ZLattice.zero(s)
    return res


@dataclass
class LogIndepReport:
    places: list
    residues: dict
    Z1: ZLattice
    Z2: ZLattice | None
    verdict: str  # "independent" | "dependent" | "inconclusive"
    flags: list = dc_field(default_factory=list)
    functions: list = dc_field(default_factory=list)  # h_l
    forms: list = dc_field(default_factory=list)  # omega_l
    certificate_d: tuple | None = None
    certificate_h: object = None
    torsion: list = dc_field(default_factory=list)
    detail: str = ""

    def residue_matrix(self):
        return [[str(r) for r in self.residues[P]] for P in self.places]


def _coefficient_vectors(F, elems):
    """Q-coordinates of field elements, jointly scaled."""
    parts = []
    for g in elems:
        if F.genus == 0:
            parts.append([g])
        else:
            parts.append([g.a, g.b])
    nparts = len(parts[0])
    dens = []
    for j in range(nparts):
        den = UPoly.one(F.base)
        for p in parts:
            if p[j]:
                den = den * p[j].den // den.gcd(p[j].den)
        dens.append(den)
    scalars = []
    index = []
    for li, p in enumerate(parts):
        for j in range(nparts):
            num = (p[j] * RatF(dens[j])).num if p[j] else UPoly(F.base, [])
            for k, c in enumerate(num.c):
                scalars.append(Scalar(F.base, c))
                index.append((li, j, k))
    vecs = [dict() for _ in elems]
    if not scalars:
        return vecs
    for (li, j, k), coords in zip(index, rational_coordinates(scalars)):
        for key, q in coords.items():
            vecs[li][(j, k, key)] = q
    return vecs


def log_independent(F, fs, places=None, torsion_bound=None) -> LogIndepReport:
    """Decide whether f_1..f_s admit sum d_i f_i = h'/h with d != 0."""
    fs = [F.coerce(g) for g in fs]
    z = z_lattices(F, fs, places, torsion_bound)
    rep = LogIndepReport(z.places, z.residues, z.Z1, z.Z2, "inconclusive", torsion=z.torsion)
    if z.Z2 is None:
        rep.flags.append(z.status)
        rep.detail = z.detail
        return rep
    if z.Z2.is_zero():
        rep.verdict = "independent"
        return rep
    for e in z.Z2.basis:
        D = residue_divisor(z.places, z.residues, e)
        h = principal_function(F, D)
        combo = sum((g * c for g, c in zip(fs, e) if c), F.coerce(0))
        rep.functions.append(h)
        rep.forms.append(log_derivative(h) - combo)
    vecs = _coefficient_vectors(F, rep.forms)
    keys = sorted({k for v in vecs for k in v}, key=repr)
    rows = [[v.get(k, Fraction(0)) for v in vecs] for k in keys]
    null = rational_nullspace(rows, len(vecs)) if keys else [[Fraction(int(i == j)) for i in range(len(vecs))] for j in range(len(vecs))]
    if not null:
        rep.verdict = "independent"
        return rep
    c = primitive(null[0])
    d = [0] * len(fs)
    h = F.coerce(1)
    for cl, e, hl in zip(c, z.Z2.basis, rep.functions):
        if cl:
            d = [a + cl * b for a, b in zip(d, e)]
            h = h * hl**cl
    if all(v <= 0 for v in d):
        d = [-v for v in d]
        h = h ** -1
    combo = sum((g * ci for g, ci in zip(fs, d) if ci), F.coerce(0))
    if log_derivative(h) != combo:
        raise AssertionError("dependence certificate failed to verify")
    rep.verdict = "dependent"
    rep.certificate_d = tuple(d)
    rep.certificate_h = h
    return rep


def verify_certificate(F, fs, d, h) -> bool:
    """sum d_i f_i == h'/h exactly."""
    fs = [F.coerce(g) for g in fs]
    h = F.coerce(h)
    combo = sum((g * c for g, c in zip(fs, d) if c), F.coerce(0))
    return log_derivative(h) == combo


# --- characters --------------------------------------------------------------------

def _gradient_at_identity(lift, n):
    """{(i, j): d chi / d X_ij (I)} as Fractions."""
    if isinstance(lift, dict):
        return {k: Fraction(v) for k, v in lift.items() if v}
    if isinstance(lift, str) and lift == "det":
        return {(i, i): Fraction(1) for i in range(n)}
    import sympy

    expr = sympy.sympify(lift) if isinstance(lift, str) else lift
    syms = {(i, j): sympy.Symbol(f"X{i + 1}{j + 1}") for i in range(n) for j in range(n)}
    at_id = {s: (1 if i == j else 0) for (i, j), s in syms.items()}
    out = {}
    for key, s in syms.items():
        v = sympy.Rational(sympy.diff(expr, s).subs(at_id))
        if v:
            out[key] = Fraction(int(v.p), int(v.q))
    return out


def character_logderivs(A, g, lifts):
    """f_l = sum_ij dchi_l/dX_ij(I) * (gauge-transformed A)_ij for each lift."""
    from ..diffop import gauge_transform

    G = gauge_transform(A, g)
    n = G.shape[0]
    zero = G[0, 0] * 0
    out = []
    for lift in lifts:
        acc = zero
        for (i, j), c in _gradient_at_identity(lift, n).items():
            acc = acc + G[i, j] * c
        out.append(acc)
    return out
