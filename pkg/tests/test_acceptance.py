"""Acceptance criteria 1-11, each reported as a single pass/fail line.

Run with ``pytest tests/test_acceptance.py -v``; the per-criterion lines are
repeated in an "acceptance criteria" section of the terminal summary.
"""

from fractions import Fraction
from itertools import product

import pytest

import test_diffop as diffop_suite
import test_fields as fields_suite
import test_logres as logres_suite
import test_specfam as specfam_suite
from helpers import Q, QA, QAB, QI, QS, bessel
from pvspec.diffop import (
    DiffOperator,
    RatMatrix,
    companion,
    cyclic_scalarize,
    exterior_power_system,
    gauge_transform,
    proto_degree_bound,
    riccati_residual,
    right_divide,
)
from pvspec.expdata import (
    NO_EXPONENTIAL_POSSIBLE,
    exp_bound,
    exponential_solutions,
    generalized_exponents,
    relation_degree_bound,
)
from pvspec.fields import Scalar, SpecializationMap
from pvspec.linalg import field_det
from pvspec.logres import (
    EllCurve,
    QuadField,
    WeierstrassMap,
    character_logderivs,
    infinite_places,
    log_independent,
    pole_places,
    residue_of_form,
    torsion_order,
    verify_certificate,
)
from pvspec.parse import build_context, parse
from pvspec.specfam import AdditiveGroupSpec, ad_open_member
from pvspec.univar import INFINITY, LinePoint, RatF, UPoly, resultant


@pytest.fixture
def report(request, capsys):
    """report(n, title, checks): print one line, then fail if any check is false."""

    def _report(n, title, checks):
        failed = [label for label, ok in checks if not ok]
        line = f"criterion {n:2d}: {'PASS' if not failed else 'FAIL'}  {title}"
        if failed:
            line += "  [failed: " + "; ".join(failed) + "]"
        lines = request.config.__dict__.setdefault("_acceptance_lines", {})
        lines[n] = line
        with capsys.disabled():
            print("\n" + line)
        assert not failed, line

    return _report


def _exps(L, p):
    return sorted((e.to_str(), e.multiplicity) for e in generalized_exponents(L, p))


def _zero(F):
    return LinePoint(Scalar.coerce(0, F))


# --- 1. Bessel local data ----------------------------------------------------------

def test_criterion_01_bessel_local_data(report):
    L = bessel(QA, QA.param("a"))
    L0 = bessel(Q, Scalar.coerce(0, Q))
    report(1, "Bessel generalized exponents at 0 and infinity", [
        ("{a, -a} at 0", _exps(L, _zero(QA)) == [("-a", 1), ("a", 1)]),
        ("{i/x - 1/2, -i/x - 1/2} at infinity", _exps(L, INFINITY) == [("-i/x - 1/2", 1), ("i/x - 1/2", 1)]),
        ("alpha = 0: exponent 0 twice", _exps(L0, _zero(Q)) == [("0", 2)]),
    ])


# --- 2. exponential bound ------------------------------------------------------------

def test_criterion_02_exponential_bound(report):
    checks = [("symbolic alpha: N(L) = 1", exp_bound(bessel(QA, QA.param("a"))).bound == 1)]
    for alpha, expected in [(Fraction(1, 3), 1), (Fraction(5, 2), 3), (Fraction(7, 2), 4)]:
        got = exp_bound(bessel(Q, Scalar.coerce(alpha, Q))).bound
        checks.append((f"alpha = {alpha}: N(L) = {expected} (got {got})", got == expected))
    report(2, "N(L) for Bessel operators", checks)


# --- 3. exponential solutions --------------------------------------------------------

def _brute_force(L, values, coefficients):
    """All u = p + q/x with p, q from small sets such that L = Q (D - u)."""
    F = L.field
    x = RatF.x(F)
    hits = set()
    for p, q in product(values, coefficients):
        u = RatF.const(F, p) + x.inverse() * q
        if not right_divide(L, u)[1]:
            hits.add(u)
    return hits


def test_criterion_03_exponential_solutions(report):
    third = bessel(Q, Scalar.coerce(Fraction(1, 3), Q))
    half = bessel(Q, Scalar.coerce(Fraction(1, 2), Q))
    sols_third = exponential_solutions(third)
    sols_half = exponential_solutions(half)
    F = sols_half[0].field if sols_half else QI
    i, x = F.named("i"), RatF.x(F)
    expected = {RatF.const(F, i) - 1 / (2 * x), RatF.const(F, -i) - 1 / (2 * x)}
    Lh = half.lift(F)
    certified = all(not right_divide(Lh, u)[1] and riccati_residual(Lh, u).is_zero() for u in sols_half)

    small = [Scalar.coerce(c, F) + i * d for c in (-1, 0, 1) for d in (-1, 0, 1)]
    brute_half = _brute_force(Lh, small, [Scalar.coerce(Fraction(n, 2), F) for n in range(-3, 4)])
    brute_third = _brute_force(third.lift(F), small, [Scalar.coerce(Fraction(n, 6), F) for n in range(-6, 7)])

    D = DiffOperator.generator(Q)
    report(3, "exponential solutions of Bessel and of D^2", [
        ("alpha = 1/3: none", sols_third == []),
        ("alpha = 1/3: brute force finds none", brute_third == set()),
        ("alpha = 1/2: exactly {+-i - 1/(2x)}", set(sols_half) == expected and len(sols_half) == 2),
        ("alpha = 1/2: zero remainders and Riccati residuals", certified),
        ("alpha = 1/2: brute force agrees", brute_half == expected),
        ("D^2: {0, 1/x}", [u.to_str() for u in exponential_solutions(D * D)] == ["0", "1/x"]),
    ])


# --- 4. gauge transform and characters ---------------------------------------------

def _gauge_case(ctx, a, b):
    P = lambda t: ctx.quad.coerce(parse(t.replace("A", f"({a})").replace("B", f"({b})"), ctx))
    A = RatMatrix([
        [P("0"), P("1")],
        [P("A + diff(B) - B^2 - diff(A)*B/(2*A)"), P("2*B + diff(A)/(2*A)")],
    ])
    g = RatMatrix([[P("1"), P("1")], [P("B + eta"), P("B - eta")]])
    target = RatMatrix([[P("B + eta"), P("0")], [P("0"), P("B - eta")]])
    chars = character_logderivs(A, g, ["X11", "X22"])
    return gauge_transform(A, g) == target, chars == [P("B + eta"), P("B - eta")]


def test_criterion_04_gauge_and_characters(report):
    running = build_context(["a", "b"], [], "x^4+x+a", [("eta", "(x-b)/z")])
    other = build_context([], [], "x^4-2*x^2+3*x+1", [("eta", "z")])
    g1, c1 = _gauge_case(running, "eta^2", "eta^2")
    g2, c2 = _gauge_case(other, "eta^2", "x^2+1")
    report(4, "gauge transform is diag(b + eta, b - eta)", [
        ("running example: gauge", g1),
        ("running example: characters", c1),
        ("eta = z, b = x^2 + 1: gauge", g2),
        ("eta = z, b = x^2 + 1: characters", c2),
    ])


# --- 5. elliptic residues ------------------------------------------------------------

def test_criterion_05_elliptic_residues(report):
    a, b = QAB.param("a"), QAB.param("b")
    x = UPoly.x(QAB)
    f = x**4 + x + a
    F = QuadField(f)
    eta = (F.x() - b) / F.z()
    P1, P2 = infinite_places(F)
    ram = [P for P in pole_places(F, eta * eta) if P.kind == "ramified"]
    P = ram[0]
    L, theta, _ = P.residue_field()
    r = residue_of_form(F, eta * eta, P)
    disc = 256 * a**3 - 27
    fb2 = resultant(f, (x - UPoly.const(QAB, b)) ** 2)
    res_ff = resultant(f, f.derivative())
    # product over the conjugates of theta = norm of r/2, via the multiplication matrix
    half = r / 2
    norm = Scalar(QAB, field_det(QAB, [list((half * theta**k).raw) for k in range(4)]))
    report(5, "residues of eta dx and eta^2 dx on z^2 = x^4 + x + a", [
        ("res at P1 = 1", residue_of_form(F, eta, P1) == Scalar.coerce(1, QAB)),
        ("res at P2 = -1", residue_of_form(F, eta, P2) == Scalar.coerce(-1, QAB)),
        ("one ramified pole place of degree 4", len(ram) == 1 and P.degree == 4),
        ("res = 2(theta - b)^2/(4 theta^3 + 1)", r == 2 * (theta - b.lift(L)) ** 2 / (4 * theta**3 + 1)),
        ("Res(f, (x - b)^2) = f(b)^2", fb2 == (b**4 + b + a) ** 2),
        ("Res(f, f') = 256a^3 - 27", res_ff == disc),
        ("product of (theta_i - b)^2/(4 theta_i^3 + 1) = (b^4 + b + a)^2/(256a^3 - 27)",
         norm == (b**4 + b + a) ** 2 / disc and norm == fb2 / res_ff),
    ])


# --- 6. quartic to Weierstrass ------------------------------------------------------

def test_criterion_06_weierstrass(report):
    a = QA.param("a")
    x = UPoly.x(QA)
    F = QuadField(x**4 + x + a)
    W = WeierstrassMap(F)
    C = W.curve
    P1, P2 = infinite_places(F)
    identity = (W.V * W.V - (W.U**3 + W.U * C.a + C.b)).is_zero()
    # places over the multiples 2..6 of (0, 1), then the same at a = 1 and a = -5/8
    round_trips = []
    for Wk in [W] + [WeierstrassMap(QuadField(UPoly.x(Q) ** 4 + UPoly.x(Q) + c)) for c in (1, Fraction(-5, 8))]:
        pt = Wk.place_to_point(infinite_places(Wk.F)[1])
        acc = pt
        for _ in range(5):
            acc = acc + pt
            if acc.is_zero():
                break
            place = Wk.point_to_place(acc)
            back = Wk.place_to_point(place)
            on_curve = True
            if not place.is_infinite:
                _, x0, z0 = place.residue_field()
                on_curve = z0 * z0 == Wk.F.f(x0)
            round_trips.append(back == acc and on_curve)
    report(6, "x^4 + x + a maps to v^2 = u^3 - 4au + 1", [
        ("curve coefficients (-4a, 1)", C.a == -4 * a and C.b == Scalar.coerce(1, QA)),
        ("V^2 = U^3 - 4aU + 1 in the function field", identity),
        ("P1 -> O", W.place_to_point(P1).is_zero()),
        ("P2 -> (0, 1)", W.place_to_point(P2) == C.point(0, 1)),
        (f"place/point round trips ({len(round_trips)})", all(round_trips) and len(round_trips) >= 10),
    ])


# --- 7. the explicit dependent specialization -----------------------------------------

def _curve_context(beta):
    return build_context([], ["s^2+3 as s", "i^2+1 as i"], "x^4+x-(1+s)/4",
                         [("eta", f"(x-({beta}))/z"), ("bb", "eta^2"), ("r3", "-i*s")])


EXPLICIT_H = (
    "((2*x^4-x^2+x)*r3 + i*(2*x^4+4*x^3+x^2+x+1))"
    " + ((2*x^2-1)*r3 + i*(2*x^2+4*x+1))*z"
)


def _dependence(beta):
    ctx = _curve_context(beta)
    F = ctx.quad
    fs = [F.coerce(parse("bb + eta", ctx)), F.coerce(parse("bb - eta", ctx))]
    rep = log_independent(F, fs)
    explicit_ok = verify_certificate(F, fs, (2, -2), parse(EXPLICIT_H, ctx))
    return rep, explicit_ok, F, fs


def test_criterion_07_dependent_specialization(report):
    s = QS.gen()
    alpha, beta = -(1 + s) / 4, -(1 + s) / 8
    rep, explicit_ok, F, fs = _dependence("-(1+s)/8")
    cert_ok = rep.verdict == "dependent" and verify_certificate(F, fs, rep.certificate_d, rep.certificate_h)
    flipped, flipped_explicit_ok, _, _ = _dependence("(1+s)/8")
    C = EllCurve(1 + s, Scalar.coerce(1, QS), QS)
    report(7, "explicit dependent specialization at alpha = -(1+s)/4, beta = -(1+s)/8, s^2 = -3", [
        ("256 alpha^3 - 27 = 5", 256 * alpha**3 - 27 == Scalar.coerce(5, QS)),
        ("(beta^4 + beta + alpha)^2 = 37249 (s + 1)^2 / 262144",
         (beta**4 + beta + alpha) ** 2 == 37249 * (s + 1) ** 2 / 262144),
        ("torsion order of (0, 1) is 4", torsion_order(C, C.point(0, 1)).order == 4),
        (f"log_independent is dependent with d = (2, -2) (got {rep.verdict}, Z2 = {rep.Z2};"
         f" with beta = +(1+s)/8: {flipped.verdict}, d = {flipped.certificate_d})",
         cert_ok and rep.certificate_d in ((2, -2), (-2, 2))),
        (f"the explicit h passes the verifier (with beta = +(1+s)/8: {flipped_explicit_ok})", explicit_ok),
    ])


# --- 8. ad-open membership ------------------------------------------------------------

def test_criterion_08_ad_open(report):
    K = QAB
    a, b = K.param("a"), K.param("b")
    gamma = AdditiveGroupSpec(((b**4 + b + a) ** 2, 256 * a**3 - 27))
    s = QS.gen()
    at_c = ad_open_member(gamma, SpecializationMap(K, QS, {"a": -(1 + s) / 4, "b": -(1 + s) / 8}))
    at_10 = ad_open_member(gamma, SpecializationMap(K, Q, {"a": 1, "b": 0}))
    witness_ok = False
    if not at_10.member:
        w = at_10.witness
        after = sum((v * k for v, k in zip(at_10.values, w)), Scalar.coerce(0, Q))
        before = sum((g * k for g, k in zip(gamma.generators, w)), Scalar.coerce(0, K))
        witness_ok = after.is_zero() and not before.is_zero()
    brute_ok = True
    try:
        specfam_suite.test_ad_open_matches_brute_force()
    except AssertionError:
        brute_ok = False
    report(8, "ad-open membership of the running Gamma", [
        ("c is a member", at_c.member),
        (f"(1, 0) is not a member (witness {at_10.witness})", not at_10.member and witness_ok),
        ("100 random generator sets agree with brute force", brute_ok),
    ])


# --- 9. property suites ------------------------------------------------------------------

def test_criterion_09_property_suites(report):
    suites = [
        ("residue sum zero, 200 rational forms", logres_suite.test_residue_sum_zero_genus0),
        ("residue sum zero, 50 genus-1 forms", logres_suite.test_residue_sum_zero_genus1),
        ("right division round trip, 200 pairs", diffop_suite.test_right_division_round_trip),
        ("group law, 100 triples", logres_suite.test_group_law_axioms),
        ("principal_function round trip, 100 divisors", logres_suite.test_principal_function_round_trip),
        ("field axioms, 500 triples", fields_suite.test_field_axioms),
    ]
    checks = []
    for label, fn in suites:
        try:
            fn()
            checks.append((label, True))
        except AssertionError:
            checks.append((label, False))
    report(9, "randomized property suites", checks)


# --- 10. degree-bound pipeline ----------------------------------------------------------

def _reverify(A, rep):
    for s, mu, degT, N, value in rep.terms:
        Ls, Ts = cyclic_scalarize(exterior_power_system(A, s))
        if max(max(max(e.deg for e in row) for row in Ts.rows), 0) != degT:
            return False
        if exp_bound(Ls).bound != N:
            return False
        extra = 0 if N == NO_EXPONENTIAL_POSSIBLE else mu * (mu - 1) * N
        if value != 2 * mu * degT + extra:
            return False
    return rep.value == max(t[-1] for t in rep.terms)


def test_criterion_10_degree_bound(report):
    x = RatF.x(Q)
    D = DiffOperator.generator(Q)
    order_one = [relation_degree_bound(companion(L)) for L in (D, D - 1, D - DiffOperator.scalar(1 / x))]
    checks = [("nu = 1 cases give 0", order_one == [0, 0, 0])]
    for alpha in (Fraction(1, 3), Fraction(1, 2)):
        A = companion(bessel(Q, Scalar.coerce(alpha, Q)))
        first = relation_degree_bound(A, detailed=True)
        second = relation_degree_bound(companion(bessel(Q, Scalar.coerce(alpha, Q))), detailed=True)
        checks.append((f"Bessel alpha = {alpha}: value {first.value} reproduced", first == second))
        checks.append((f"Bessel alpha = {alpha}: sub-reports re-verified", _reverify(A, first)))
    report(10, "relation degree bound pipeline", checks)


# --- 11. prototype bound ----------------------------------------------------------------

def test_criterion_11_prototype_bound(report):
    report(11, "d(1) = 64 and d(2) = 8^12", [
        ("d(1) = 64", proto_degree_bound(1) == 64),
        ("d(2) = 8^12", proto_degree_bound(2) == 8**12),
    ])


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
