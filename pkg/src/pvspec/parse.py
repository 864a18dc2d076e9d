"""One grammar for scalars, rational functions, operators and elements of K(x, z).

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" unary)?          # integer exponents only
    atom   := NUMBER | NAME | "(" expr ")" | NAME "(" expr ")"

Reserved names: ``x``, ``z`` (with a quartic), ``D`` (d/dx) and ``TH``
(x d/dx).  Functions: ``diff(e)`` and ``logd(e) = diff(e)/e``.  Other names
are parameters, adjoined generators, or ``let`` bindings such as ``eta``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .diffop import DiffOperator
from .errors import DescriptorMismatch, ParseError, PvspecError
from .fields import Field, Scalar, adjoin_root, rational_field
from .logres.quadfield import QuadElem, QuadField, RationalFunctionField
from .univar import RatF, UPoly

__all__ = ["Context", "parse", "parse_poly", "build_context", "to_text"]

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^(),]))")
RESERVED = ("x", "z", "D", "TH")


@dataclass
class Context:
    """Names visible to the parser."""

    field: Field
    quad: QuadField | None = None
    lets: dict = dc_field(default_factory=dict)

    @property
    def function_field(self):
        return self.quad if self.quad is not None else RationalFunctionField(self.field)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", text, bad)
        start = m.start(m.lastindex)
        kind = ("num", "name", "op")[m.lastindex - 1]
        val = m.group(m.lastindex)
        out.append((kind, "^" if val == "**" else val, start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


# --- value algebra -----------------------------------------------------------------

def _rank(v):
    if isinstance(v, Scalar):
        return 0
    if isinstance(v, RatF):
        return 1
    if isinstance(v, QuadElem):
        return 2
    if isinstance(v, DiffOperator):
        return 3
    raise TypeError(type(v).__name__)


def _promote(v, rank, ctx: Context, tag="delta"):
    r = _rank(v)
    if r == rank:
        return v
    if r == 0:
        v = RatF.const(ctx.field, v)
        r = 1
    if rank == 1:
        return v
    if rank == 2:
        if ctx.quad is None:
            raise DescriptorMismatch("z needs a quartic")
        return ctx.quad.coerce(v)
    if r == 2:
        if v.b:
            raise DescriptorMismatch("operators with coefficients involving z are not supported")
        v = v.a
    return DiffOperator.scalar(v, tag, ctx.field)


def _binary(op, a, b, ctx: Context):
    ra, rb = _rank(a), _rank(b)
    rank = max(ra, rb)
    tag = a.tag if ra == 3 else (b.tag if rb == 3 else "delta")
    if ra == 3 and rb == 3 and a.tag != b.tag:
        b = b.convert(a.tag)
    if op == "/" and rb == 3:
        raise ParseError("cannot divide by an operator")
    if op == "/" and ra == 3:
        b = _promote(b, 1, ctx) if rb < 2 else b
        if isinstance(b, QuadElem):
            raise DescriptorMismatch("operators with coefficients involving z are not supported")
        return a / b
    a, b = _promote(a, rank, ctx, tag), _promote(b, rank, ctx, tag)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    return a / b


def _derivative(v, ctx):
    if isinstance(v, Scalar):
        return Scalar.coerce(0, ctx.field)
    if isinstance(v, DiffOperator):
        raise ParseError("diff() of an operator")
    return v.derivative()


class _Parser:
    def __init__(self, text: str, ctx: Context):
        self.text = text
        self.ctx = ctx
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, val=None):
        t = self.toks[self.i]
        if val is not None and t[1] != val:
            raise ParseError(f"expected {val!r}, found {t[1] or 'end of input'!r}", self.text, t[2])
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def run(self):
        v = self.expr()
        t = self.peek()
        if t[0] != "end":
            self.fail(f"unexpected {t[1]!r}")
        return v

    def _apply(self, op, a, b, tok):
        try:
            return _binary(op, a, b, self.ctx)
        except ParseError as e:
            raise ParseError(str(e).split(" (line")[0], self.text, tok[2]) from None
        except ZeroDivisionError:
            raise ParseError("division by zero", self.text, tok[2]) from None

    def expr(self):
        v = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            tok = self.take()
            v = self._apply(tok[1], v, self.term(), tok)
        return v

    def term(self):
        v = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            tok = self.take()
            v = self._apply(tok[1], v, self.unary(), tok)
        return v

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] in ("+", "-"):
            self.take()
            v = self.unary()
            return v if t[1] == "+" else -v
        return self.power()

    def power(self):
        base = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            et = self.peek()
            e = self.unary()
            n = e.rational() if isinstance(e, Scalar) else None
            if n is None or n.denominator != 1:
                self.fail("exponent must be an integer constant", et)
            n = int(n)
            if isinstance(base, DiffOperator):
                if n < 0:
                    self.fail("negative power of an operator", et)
                return base**n
            if isinstance(base, Scalar) and n < 0 and base.is_zero():
                self.fail("division by zero", et)
            try:
                return base**n
            except ZeroDivisionError:
                self.fail("division by zero", et)
        return base

    def atom(self):
        t = self.take()
        kind, val, pos = t
        ctx = self.ctx
        if kind == "num":
            return Scalar.coerce(Fraction(val), ctx.field)
        if kind == "op" and val == "(":
            v = self.expr()
            self.take(")")
            return v
        if kind == "name":
            if self.peek()[1] == "(" and val in ("diff", "logd"):
                self.take("(")
                arg = self.expr()
                self.take(")")
                d = _derivative(arg, ctx)
                if val == "diff":
                    return d
                if arg.is_zero():
                    self.fail("logd of zero", t)
                return _binary("/", d, arg, ctx)
            if val in ctx.lets:
                return ctx.lets[val]
            if val == "x":
                return RatF.x(ctx.field)
            if val == "z":
                if ctx.quad is None:
                    self.fail("z is only available with a quartic", t)
                return ctx.quad.z()
            if val == "D":
                return DiffOperator.generator(ctx.field, "delta")
            if val == "TH":
                return DiffOperator.generator(ctx.field, "theta")
            try:
                return ctx.field.named(val)
            except KeyError:
                self.fail(f"unknown name {val!r}", t)
        if kind == "end":
            self.fail("unexpected end of input", t)
        self.fail(f"unexpected {val!r}", t)


def parse(text: str, ctx: Context):
    """Parse ``text`` to a Scalar, RatF, QuadElem or DiffOperator."""
    try:
        return _Parser(text, ctx).run()
    except ParseError:
        raise
    except PvspecError as e:
        raise ParseError(f"{type(e).__name__}: {e}", text, 0) from None


def parse_poly(text: str, var: str, field: Field) -> UPoly:
    """A polynomial in the variable ``var`` with coefficients in ``field``."""
    ctx = Context(field, None, {var: RatF.x(field)} if var != "x" else {})
    v = parse(text, ctx)
    if isinstance(v, Scalar):
        v = RatF.const(field, v)
    if not isinstance(v, RatF) or not v.is_poly():
        raise ParseError(f"{text!r} is not a polynomial in {var}", text, 0)
    return v.num


def build_context(params=(), adjoin=(), quartic: str | None = None, lets=(), base: Field | None = None) -> Context:
    """Set up Q(params), adjoin roots ("poly as name"), the quartic and let bindings."""
    K = base if base is not None else rational_field(tuple(params))
    for spec in adjoin:
        m = re.fullmatch(r"\s*(.+?)\s+as\s+([A-Za-z_][A-Za-z_0-9]*)\s*", spec)
        if not m:
            raise ParseError("adjunction must read '<poly> as <name>'", spec, 0)
        poly, name = m.group(1), m.group(2)
        if name in RESERVED:
            raise ParseError(f"{name!r} is reserved", spec, m.start(2))
        p = parse_poly(poly, name, K)
        lc = p.lc
        K = adjoin_root(K, p * lc.inverse() if lc != 1 else p, name, assume_irreducible=p.deg >= 3)
    quad = QuadField(parse_poly(quartic, "x", K)) if quartic else None
    ctx = Context(K, quad, {})
    for name, text in lets:
        if name in RESERVED:
            raise ParseError(f"{name!r} is reserved", text, 0)
        ctx.lets[name] = parse(text, ctx)
    return ctx


def to_text(v) -> str:
    """Printer whose output parses back to an equal value."""
    if isinstance(v, (Scalar,)):
        return str(v)
    return v.to_str()
