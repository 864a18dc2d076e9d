import pytest
from hypothesis import given, settings, strategies as st

from pvspec.diffop import DiffOperator
from pvspec.errors import ParseError
from pvspec.logres import QuadElem
from pvspec.parse import build_context, parse, parse_poly, to_text
from pvspec.univar import RatF

CTX = build_context(["a", "b"], ["s^2+3 as s"], "x^4+x+a", [("eta", "(x-b)/z"), ("bb", "eta^2")])
PLAIN = build_context(["a"])
# random round trips stay in towers where gcds are cheap
CURVE = build_context([], ["s^2+3 as s"], "x^4+x+1", [("eta", "(x-s)/z")])
PARAM = build_context(["a", "b"], ["s^2+3 as s"])

CURVE_ATOMS = ["x", "s", "1", "2", "3/4", "eta", "z", "(x-1)", "(1+s)"]
PARAM_ATOMS = ["x", "a", "b", "s", "1", "3/4", "(x-1)", "(a+s)"]


@st.composite
def expressions(draw, atoms, depth=3):
    if depth == 0 or draw(st.integers(0, 3)) == 0:
        return draw(st.sampled_from(atoms))
    op = draw(st.sampled_from(["+", "-", "*", "/", "^", "diff", "neg"]))
    left = draw(expressions(atoms, depth - 1))
    if op == "^":
        return f"({left})^{draw(st.integers(0, 3))}"
    if op == "diff":
        return f"diff({left})"
    if op == "neg":
        return f"-({left})"
    right = draw(expressions(atoms, depth - 1))
    if op == "/":
        right = f"({right} + x^3 + 7)"
    return f"({left}){op}({right})"


@settings(max_examples=60)
@given(expressions(CURVE_ATOMS))
def test_print_parse_round_trip_on_curve(text):
    v = parse(text, CURVE)
    assert parse(to_text(v), CURVE) == v


@settings(max_examples=40)
@given(expressions(PARAM_ATOMS, depth=2))
def test_print_parse_round_trip_parametric(text):
    v = parse(text, PARAM)
    assert parse(to_text(v), PARAM) == v


@pytest.mark.parametrize("text", ["bb+eta", "bb-eta", "eta/(x-b)", "diff(eta)*z"])
def test_running_example_round_trip(text):
    v = parse(text, CTX)
    assert parse(to_text(v), CTX) == v


@pytest.mark.parametrize(
    "text",
    ["D^2+(1/x)*D+1-(a/x)^2", "TH^2 + x^2 - a^2", "D*x", "x*D", "(1/(3*x))*TH"],
)
def test_operator_round_trip(text):
    v = parse(text, CTX)
    assert isinstance(v, DiffOperator)
    assert parse(to_text(v), CTX) == v


def test_types_and_identities():
    assert isinstance(parse("bb+eta", CTX), QuadElem)
    assert isinstance(parse("x^2/(x-a)", PLAIN), RatF)
    assert parse("D*x", CTX) == parse("x*D + 1", CTX)
    assert parse("logd(x^2-1)", CTX) == parse("2*x/(x^2-1)", CTX)
    assert parse("z^2", CTX) == parse("x^4+x+a", CTX)
    assert parse("s^2", CTX) == parse("-3", CTX)
    assert parse("2**3", PLAIN) == parse("8", PLAIN)


def test_parse_poly():
    p = parse_poly("t^3 - a*t + 1", "t", PLAIN.field)
    assert p.deg == 3


@pytest.mark.parametrize(
    "text, line, col",
    [("x +* 2", 1, 4), ("(x", 1, 3), ("foo", 1, 1), ("x^(1/2)", 1, 3), ("D^-1", 1, 3), ("1/0", 1, 2), ("x\n + $", 2, 4)],
)
def test_parse_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as exc:
        parse(text, CTX)
    assert f"line {line}, column {col}" in str(exc.value)


def test_z_needs_a_quartic():
    with pytest.raises(ParseError):
        parse("z + 1", PLAIN)


def test_reserved_names():
    with pytest.raises(ParseError):
        build_context([], ["t^2+1 as x"])
    with pytest.raises(ParseError):
        build_context([], [], None, [("D", "x")])
