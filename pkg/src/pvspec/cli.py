"""Command-line front end.

Every subcommand prints a human-readable report, or one JSON object per
line with ``--json``.  Exit status is 0 on success and 1 on any error; the
error line names the failing operation's error class.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import diffop, expdata
from .diffop import DiffOperator, RatMatrix
from .errors import ParseError, PvspecError
from .fields import Scalar, SpecializationMap
from .logres import (
    QuadElem,
    character_logderivs,
    log_independent,
    pole_places,
    residue_of_form,
    residue_sum,
)
from .parse import Context, build_context, parse, to_text
from .specfam import (
    AdditiveGroupSpec,
    Family,
    JacCondition,
    ad_open_member,
    family_logindep_check,
    jac_condition_eval,
    specialize_element,
    specialize_function_field,
)
from .univar import INFINITY, LinePoint, RatF

__all__ = ["main", "run"]


class CliError(Exception):
    pass


# --- field setup --------------------------------------------------------------------

def _split_list(items):
    out = []
    for it in items or ():
        out.extend(p.strip() for p in it.split(",") if p.strip())
    return out


def _parse_subst(items):
    pairs = []
    for part in _split_list(items):
        if "=" not in part:
            raise ParseError("substitution must read name=value", part, 0)
        k, v = part.split("=", 1)
        pairs.append((k.strip(), v.strip()))
    return pairs


def _parse_lets(items):
    out = []
    for it in items or ():
        if "=" not in it:
            raise ParseError("let binding must read name=expression", it, 0)
        k, v = it.split("=", 1)
        out.append((k.strip(), v.strip()))
    return out


def _default_lets(args, params):
    lets = _parse_lets(args.let)
    if not lets and args.quartic and "b" in params:
        # the running example: eta = (x - b)/z and the function b = eta^2
        lets = [("eta", "(x-b)/z"), ("b", "eta^2")]
    return lets


def _params(args):
    names = _split_list(args.param)
    for k, _ in _parse_subst(args.subst):
        if k not in names:
            names.append(k)
    return names


def _contexts(args):
    """(parametric context, specialized context or None, SpecializationMap or None)."""
    params = _params(args)
    lets = _default_lets(args, params)
    ctx = build_context(params, args.adjoin or (), args.quartic, lets)
    subst = _parse_subst(args.subst)
    if not subst:
        return ctx, None, None
    keep = [p for p in params if p not in dict(subst)]
    tctx = build_context(keep, args.adjoin or ())
    images = {k: parse(v, tctx) for k, v in subst}
    for k, v in images.items():
        if not isinstance(v, Scalar):
            raise ParseError(f"value for {k} must be a constant", v.to_str(), 0)
    m = SpecializationMap(ctx.field, tctx.field, images)
    quad = specialize_function_field(m, ctx.quad) if ctx.quad is not None else None
    sctx = Context(tctx.field, quad, {})
    for name, val in ctx.lets.items():
        sctx.lets[name] = _specialize_value(m, val, sctx)
    return ctx, sctx, m


def _specialize_value(m, v, sctx):
    if isinstance(v, DiffOperator):
        from .specfam import specialize_operator

        return specialize_operator(m, v)
    return specialize_element(m, v, sctx.quad)


def _value(text, args):
    """Parse in the parametric context and specialize when --subst is given."""
    ctx, sctx, m = _contexts(args)
    if m is None:
        return parse(text, ctx), ctx
    return parse(text, sctx), sctx


def _operator(text, args):
    v, ctx = _value(text, args)
    if not isinstance(v, DiffOperator):
        v = DiffOperator.scalar(v if isinstance(v, RatF) else RatF.const(ctx.field, v), "delta", ctx.field)
    return v, ctx


def _point(text, ctx):
    if text in ("oo", "inf", "infinity"):
        return INFINITY
    v = parse(text, ctx)
    if not isinstance(v, Scalar):
        raise ParseError("a point must be a constant or 'oo'", text, 0)
    return LinePoint(v)


def _matrix(text, ctx):
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"matrix must be a JSON list of lists of expressions: {e.msg}", text, e.pos) from None
    out = []
    for r in rows:
        row = []
        for e in r:
            v = parse(str(e), ctx)
            if isinstance(v, Scalar):
                v = RatF.const(ctx.field, v)
            if isinstance(v, RatF) and ctx.quad is not None:
                v = ctx.quad.coerce(v)
            row.append(v)
        out.append(row)
    return RatMatrix(out)


# --- reports ------------------------------------------------------------------------

def _pt(p: LinePoint) -> str:
    return "oo" if p.is_infinite else str(p.value)


def cmd_genexp(args):
    L, ctx = _operator(args.operator, args)
    if args.point:
        points = [_point(args.point, ctx)]
    else:
        pts, _ = expdata.singular_points(L)
        points = list(pts) + [INFINITY]
    out = {"operator": L.to_str(), "points": []}
    for p in points:
        exps = expdata.generalized_exponents(L, p)
        out["points"].append({
            "point": _pt(p),
            "exponents": [{"e": e.to_str(), "coefficients": [str(c) for c in e.coeffs], "multiplicity": e.multiplicity} for e in exps],
            "total_multiplicity": sum(e.multiplicity for e in exps),
            "order": L.order,
        })
    text = [f"operator: {out['operator']}"]
    for rec in out["points"]:
        text.append(f"at {rec['point']}: " + ", ".join(f"{e['e']} (mult {e['multiplicity']})" for e in rec["exponents"]))
    return out, text


def _bound_record(rep):
    return {
        "operator": rep.operator.to_str(),
        "field": rep.field.describe(),
        "singular_points": [_pt(p) for p in rep.singular_points],
        "exponents": {_pt(p): [e.to_str() for e in rep.exponents[p]] for p in rep.points},
        "principal_parts": {
            _pt(p): [{"pp": h.value.to_str(), "residue": str(h.residue), "order": h.order} for h in rep.principal_parts[p]]
            for p in rep.points
        },
        "phi_image": [str(v) for v in rep.phi_image],
        "phi_integers": list(rep.phi_integers),
        "N": _bound(rep.bound),
    }


def cmd_expbound(args):
    L, _ = _operator(args.operator, args)
    rep = expdata.exp_bound(L)
    rec = _bound_record(rep)
    text = [f"operator: {rec['operator']}", f"field: {rec['field']}",
            "singular points: " + (", ".join(rec["singular_points"]) or "none")]
    for p, pps in rec["principal_parts"].items():
        text.append(f"PP at {p}: " + (", ".join(h["pp"] for h in pps) or "empty"))
    text.append("Phi image: " + ", ".join(rec["phi_image"]))
    text.append(f"N(L) = {rec['N']}")
    return rec, text


def _bound(n):
    return n if isinstance(n, int) else str(n)


def cmd_expsols(args):
    L, _ = _operator(args.operator, args)
    rep = expdata.exp_bound(L)
    sols = expdata.exponential_solutions(L, rep)
    rec = {"operator": L.to_str(), "N": _bound(rep.bound), "solutions": [u.to_str() for u in sols]}
    return rec, [f"N(L) = {rep.bound}", "exponential solutions u (D - u right factors):"] + [f"  {s}" for s in rec["solutions"]] + ([] if sols else ["  none"])


def cmd_residues(args):
    g, ctx = _value(args.expr, args)
    F = ctx.function_field
    g = F.coerce(g)
    rows = []
    for P in pole_places(F, g):
        r = residue_of_form(F, g, P)
        rows.append({"place": P.label(), "degree": P.degree, "residue": str(r)})
    total = residue_sum(F, g)
    rec = {"function": to_text(g), "residues": rows, "sum_of_traces": str(total)}
    text = [f"g = {rec['function']}"] + [f"res at {r['place']}: {r['residue']}" for r in rows] + [f"sum of traced residues: {total}"]
    return rec, text


def _logindep_record(rep):
    return {
        "verdict": rep.verdict,
        "places": [P.label() for P in rep.places],
        "residues": rep.residue_matrix(),
        "Z1": [list(r) for r in rep.Z1.basis],
        "Z2": None if rep.Z2 is None else [list(r) for r in rep.Z2.basis],
        "torsion": [str(t) for t in rep.torsion],
        "certificate": None if rep.certificate_d is None else {
            "d": list(rep.certificate_d),
            "h": _elem_pair(rep.certificate_h),
        },
        "flags": list(rep.flags),
        "detail": rep.detail,
    }


def _elem_pair(h):
    if isinstance(h, QuadElem):
        return [h.a.to_str(), h.b.to_str()]
    return [h.to_str(), "0"]


def cmd_logindep(args):
    vals = []
    ctx = None
    for t in args.functions:
        v, ctx = _value(t, args)
        vals.append(v)
    F = ctx.function_field
    rep = log_independent(F, [F.coerce(v) for v in vals], torsion_bound=args.torsion_bound)
    rec = _logindep_record(rep)
    text = [f"places: {', '.join(rec['places'])}"]
    for P, row in zip(rec["places"], rec["residues"]):
        text.append(f"  res at {P}: " + ", ".join(row))
    text.append(f"Z1 = {rep.Z1}")
    text.append(f"Z2 = {'undecided' if rep.Z2 is None else rep.Z2}")
    if rep.torsion:
        text.append("torsion: " + "; ".join(rec["torsion"]))
    text.append(f"verdict: {rep.verdict}")
    if rep.certificate_d is not None:
        text.append(f"certificate d = {rep.certificate_d}, h = {rep.certificate_h}")
    if rep.flags:
        text.append(f"flags: {', '.join(rep.flags)} {rep.detail}")
    return rec, text


def _require_subst(m):
    if m is None:
        raise CliError("this command needs --subst")


def cmd_adopen(args):
    ctx, sctx, m = _contexts(args)
    _require_subst(m)
    gens = [parse(t, ctx) for t in args.generators]
    for g in gens:
        if not isinstance(g, Scalar):
            raise ParseError("generators must be constants", to_text(g), 0)
    res = ad_open_member(AdditiveGroupSpec(tuple(gens)), m)
    rec = {"member": res.member, "witness": None if res.witness is None else list(res.witness),
           "values": [str(v) for v in res.values]}
    return rec, [f"specialized generators: {', '.join(rec['values'])}", str(res)]


def cmd_jac(args):
    ctx, sctx, m = _contexts(args)
    _require_subst(m)
    a, b, u, v = (parse(t, ctx) for t in (args.a, args.b, args.u, args.v))
    res = jac_condition_eval(JacCondition(a, b, u, v), m, args.torsion_bound)
    rec = {"status": res.status, "order": res.order, "curve": res.curve, "method": res.torsion.method}
    return rec, [f"curve: {res.curve}", f"{res} ({res.torsion.method})"]


def cmd_gauge(args):
    ctx, sctx, m = _contexts(args)
    c = sctx or ctx
    A = _matrix(args.matrix, c)
    g = _matrix(args.g, c) if args.g else RatMatrix.identity(A.shape[0], A[0, 0] * 0 + 1)
    G = diffop.gauge_transform(A, g)
    rec = {"gauge": G.to_lists(to_text)}
    text = ["gauge transform: " + str(G.to_lists(to_text))]
    if args.lift:
        fs = character_logderivs(A, g, args.lift)
        rec["logderivs"] = [to_text(f) for f in fs]
        text += [f"f_{i + 1} = {s}" for i, s in enumerate(rec["logderivs"])]
    return rec, text


def cmd_relbound(args):
    ctx, sctx, m = _contexts(args)
    c = sctx or ctx
    if args.operator:
        L = parse(args.operator, c)
        A = diffop.companion(L.monic() if L.lc != 1 else L)
    else:
        A = _matrix(args.matrix, c)
    rep = expdata.relation_degree_bound(A, cap=args.cap, detailed=True)
    rec = {"N": rep.value, "terms": [{"s": s, "binom": mu, "deg_T": dT, "N_Ls": str(N), "value": v} for s, mu, dT, N, v in rep.terms]}
    return rec, [f"relation degree bound: {rep.value}"] + [f"  s={t['s']}: C={t['binom']}, deg T={t['deg_T']}, N(L_s)={t['N_Ls']} -> {t['value']}" for t in rec["terms"]]


def cmd_dn(args):
    v = diffop.proto_degree_bound(args.n)
    return {"n": args.n, "d": v}, [str(v)]


def cmd_verify(args):
    lhs, ctx = _value(args.lhs, args)
    rhs, _ = _value(args.rhs, args)
    from .parse import _binary

    diff = _binary("-", lhs, rhs, ctx)
    ok = diff.is_zero()
    rec = {"lhs": to_text(lhs), "rhs": to_text(rhs), "equal": bool(ok)}
    return rec, [f"lhs = {rec['lhs']}", f"rhs = {rec['rhs']}", "identity holds" if ok else "identity FAILS"]


# --- family files ---------------------------------------------------------------------

def _family_point(p):
    """(substitution pairs, extra adjunctions) from a point entry.

    A point is "a=1,b=0", {"a": "1", "b": "0"} or
    {"subst": <either form>, "adjoin": ["t^3-2 as t"]}.
    """
    if isinstance(p, str):
        return _parse_subst([p]), []
    if "subst" in p:
        pairs, _ = _family_point(p["subst"])
        return pairs, list(p.get("adjoin", []))
    return [(k, str(v)) for k, v in p.items()], []


def load_family(spec: dict):
    """(Family, parametric context, points, parameter names) from a family file."""
    params = list(spec.get("params", []))
    ctx = build_context(params, spec.get("adjoin", []), spec.get("quartic"),
                        [tuple(kv) for kv in spec.get("let", [])])
    F = ctx.function_field
    funcs = [F.coerce(parse(t, ctx)) for t in spec.get("functions", [])]
    gamma = None
    if spec.get("gamma"):
        gamma = AdditiveGroupSpec(tuple(Scalar.coerce(parse(t, ctx), ctx.field) for t in spec["gamma"]))
    jac = None
    if spec.get("jac"):
        j = spec["jac"]
        jac = JacCondition(*(Scalar.coerce(parse(j[k], ctx), ctx.field) for k in ("a", "b", "u", "v")))
    nondeg = [parse(t, ctx) for t in spec.get("nondegenerate", [])]
    points = [_family_point(p) for p in spec.get("points", [])]
    return Family(F, funcs, gamma, jac, nondeg), ctx, points, params


def cmd_family_check(args):
    with open(args.file) as fh:
        spec = json.load(fh)
    fam, ctx, points, params = load_family(spec)
    records = []
    text = []
    for pairs, extra in points:
        keys = dict(pairs)
        keep = [p for p in params if p not in keys]
        label = {k: v for k, v in pairs}
        try:
            tctx = build_context(keep, list(spec.get("adjoin", [])) + extra)
            images = {k: parse(v, tctx) for k, v in pairs}
            m = SpecializationMap(ctx.field, tctx.field, images)
            rec = family_logindep_check(fam, m, args.torsion_bound, label).to_record()
        except PvspecError as exc:
            rec = {"point": label, "verdict": type(exc).__name__, "error": str(exc)}
        records.append(rec)
        cert = rec.get("certificate")
        text.append(f"{label}: {rec['verdict']}" + (f" d={cert['d']}" if cert else ""))
        text.extend(f"    {step}" for step in rec.get("provenance", []))
    return records, text


# --- argument parsing -------------------------------------------------------------------

def _field_flags(p):
    p.add_argument("--param", action="append", help="parameter name(s), comma separated")
    p.add_argument("--adjoin", action="append", help='"<poly> as <name>": adjoin a root')
    p.add_argument("--quartic", help="work in K(x, z) with z^2 = the given quartic")
    p.add_argument("--subst", action="append", help='"name=value,...": specialize parameters')
    p.add_argument("--let", action="append", help='"name=expr": bind a name (evaluated in order)')
    p.add_argument("--json", action="store_true", help="emit JSON")
    p.add_argument("--torsion-bound", type=int, default=None, help="multiple-search bound for torsion")


def build_parser():
    ap = argparse.ArgumentParser(prog="pvspec", description="Exact tools for linear differential operators, residues and specializations.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, helptext):
        p = sub.add_parser(name, help=helptext)
        _field_flags(p)
        p.set_defaults(func=fn)
        return p

    p = add("genexp", cmd_genexp, "generalized exponents")
    p.add_argument("operator")
    p.add_argument("--point", help="a constant or 'oo' (default: all singular points and oo)")
    add("expbound", cmd_expbound, "exponential bound N(L)").add_argument("operator")
    add("expsols", cmd_expsols, "exponential solutions").add_argument("operator")
    add("residues", cmd_residues, "residues of g dx").add_argument("expr")
    add("logindep", cmd_logindep, "logarithmic independence").add_argument("functions", nargs="+")
    add("adopen", cmd_adopen, "ad-open membership").add_argument("generators", nargs="+")
    p = add("jac", cmd_jac, "non-torsion condition on v^2 = u^3 + a u + b")
    for k in ("a", "b", "u", "v"):
        p.add_argument(k)
    add("family-check", cmd_family_check, "run a family file").add_argument("file")
    p = add("gauge", cmd_gauge, "gauge transform and character log-derivatives")
    p.add_argument("matrix", help="JSON list of lists of expressions")
    p.add_argument("--g", help="gauge matrix (default identity)")
    p.add_argument("--lift", action="append", help='"det", a polynomial in X11, X12, ...')
    p = add("relbound", cmd_relbound, "relation degree bound")
    p.add_argument("matrix", nargs="?", help="JSON list of lists of expressions")
    p.add_argument("--operator", help="use the companion matrix of this operator")
    p.add_argument("--cap", type=int, default=20)
    p = add("dn", cmd_dn, "the prototype degree bound (4n)^(3n^2)")
    p.add_argument("n", type=int)
    p = add("verify", cmd_verify, "check an identity lhs = rhs")
    p.add_argument("lhs")
    p.add_argument("rhs")
    return ap


def run(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        rec, text = args.func(args)
    except ParseError as e:
        print(f"error: ParseError: {e}", file=err)
        return 1
    except PvspecError as e:
        print(f"error: {type(e).__name__}: {e}", file=err)
        return 1
    except CliError as e:
        print(f"error: {e}", file=err)
        return 1
    if args.json:
        records = rec if isinstance(rec, list) else [rec]
        for r in records:
            print(json.dumps(r, sort_keys=True), file=out)
    else:
        print("\n".join(text), file=out)
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
