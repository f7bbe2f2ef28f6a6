"""Line-oriented text formats: map specifications and polynomial generators.

Map files::

    # ordered pairs
    orbit y arity 2
    xrows 1
    image y(1,2) = x[1,1] x[1,2]

Polynomials use ``name(i,..)`` for unlabelled variables, ``name[l,..,j]``
for labelled ones (last entry is the index), ``^`` for powers and optional
``*`` between factors, e.g. ``3/2*x[1,1]^2 - y(2,1)``.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from typing import Iterator, NamedTuple

from .poly import Polynomial
from .symmetry import Monomial, OrbitSpec, RingSignature, Variable
from .toric import ImageTooWide, MonomialMapSpec, NotEquivariant, validate_map


class ParseError(ValueError):
    """Malformed input; carries 1-based ``line`` and ``column``."""

    def __init__(self, msg, line=None, column=None):
        where = "" if line is None else "line %d, column %d: " % (line, column or 1)
        super().__init__(where + msg)
        self.line = line
        self.column = column


class SemanticError(ValueError):
    def __init__(self, msg, line=None):
        super().__init__(msg if line is None else "line %d: %s" % (line, msg))
        self.line = line


class Token(NamedTuple):
    kind: str
    text: str
    col: int


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9']*)|(?P<op>[()\[\],^*/+\-=]))")


def tokenize(text: str, line: int = 1) -> list:
    out = []
    pos = 0
    n = len(text.rstrip())
    while pos < n:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ParseError("unexpected character %r" % text[col - 1], line, col)
        kind = m.lastgroup
        out.append(Token(kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    return out


class _Cursor:
    def __init__(self, tokens, line, text):
        self.toks = tokens
        self.i = 0
        self.line = line
        self.end_col = len(text.rstrip()) + 1

    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def next(self):
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of line", self.line, self.end_col)
        self.i += 1
        return t

    def expect(self, text=None, kind=None):
        t = self.next()
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            raise ParseError("expected %s, found %r" % (repr(text) if text else kind, t.text), self.line, t.col)
        return t

    def accept(self, text):
        t = self.peek()
        if t is not None and t.text == text:
            self.i += 1
            return t
        return None

    def done(self):
        return self.i >= len(self.toks)

    def int(self):
        return int(self.expect(kind="num").text)


def _int_list(cur: _Cursor, close: str) -> tuple:
    vals = [cur.int()]
    while cur.accept(","):
        vals.append(cur.int())
    cur.expect(close)
    return tuple(vals)


def _factor(cur: _Cursor):
    name = cur.expect(kind="name")
    if cur.accept("("):
        var = Variable(name.text, (), _int_list(cur, ")"))
    elif cur.accept("["):
        vals = _int_list(cur, "]")
        var = Variable(name.text, vals[:-1], vals[-1:])
    else:
        var = Variable(name.text, (), ())
    if any(i < 1 for i in var.indices + var.labels):
        raise ParseError("indices are 1-based", cur.line, name.col)
    if len(set(var.indices)) != len(var.indices):
        raise ParseError("repeated index in %s" % (var,), cur.line, name.col)
    e = 1
    if cur.accept("^"):
        e = cur.int()
        if e < 1:
            raise ParseError("exponent must be positive", cur.line, name.col)
    return var, e


def _monomial(cur: _Cursor, stop=("+", "-")) -> Monomial:
    acc: dict = {}
    while True:
        var, e = _factor(cur)
        acc[var] = acc.get(var, 0) + e
        cur.accept("*")
        t = cur.peek()
        if t is None or t.text in stop or t.kind != "name":
            return Monomial(acc)


def _term(cur: _Cursor):
    coef = Fraction(1)
    t = cur.peek()
    if t is not None and t.kind == "num":
        num = int(cur.next().text)
        den = 1
        if cur.accept("/"):
            den = cur.int()
            if den == 0:
                raise ParseError("zero denominator", cur.line, t.col)
        coef = Fraction(num, den)
        if not cur.accept("*"):
            nxt = cur.peek()
            if nxt is None or nxt.kind != "name":
                return coef, Monomial()
    return coef, _monomial(cur)


def parse_polynomial(text: str, line: int = 1) -> Polynomial:
    cur = _Cursor(tokenize(text, line), line, text)
    if cur.done():
        raise ParseError("empty polynomial", line, 1)
    terms = []
    sign = -1 if cur.accept("-") else 1
    if sign == 1:
        cur.accept("+")
    while True:
        c, m = _term(cur)
        terms.append((m, sign * c))
        if cur.done():
            break
        t = cur.next()
        if t.text not in "+-":
            raise ParseError("expected '+' or '-', found %r" % t.text, line, t.col)
        sign = 1 if t.text == "+" else -1
    return Polynomial(terms)


def _lines(text: str) -> Iterator:
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if body.strip():
            yield no, body


def parse_generators(text: str) -> list:
    """One polynomial per non-blank line; ``#`` starts a comment."""
    return [parse_polynomial(body, no) for no, body in _lines(text)]


def parse_map_file(text: str) -> MonomialMapSpec:
    orbits: dict = {}
    order: list = []
    images: dict = {}
    xrows = None
    for no, body in _lines(text):
        cur = _Cursor(tokenize(body, no), no, body)
        kw = cur.expect(kind="name")
        if kw.text == "orbit":
            name = cur.expect(kind="name")
            cur.expect("arity")
            k = cur.int()
            sym = cur.accept("symmetric") is not None
            if not cur.done():
                t = cur.peek()
                raise ParseError("unexpected %r" % t.text, no, t.col)
            if name.text in orbits:
                raise SemanticError("orbit %s declared twice" % name.text, no)
            if k < 1:
                raise SemanticError("arity must be at least 1", no)
            orbits[name.text] = OrbitSpec.symmetric(name.text, k) if sym else OrbitSpec(name.text, k)
            order.append(name.text)
        elif kw.text == "xrows":
            if xrows is not None:
                raise SemanticError("xrows given twice", no)
            xrows = cur.int()
            if not cur.done():
                t = cur.peek()
                raise ParseError("unexpected %r" % t.text, no, t.col)
        elif kw.text == "image":
            name = cur.expect(kind="name")
            cur.expect("(")
            idx = _int_list(cur, ")")
            cur.expect("=")
            if name.text not in orbits:
                raise SemanticError("image for undeclared orbit %s" % name.text, no)
            o = orbits[name.text]
            if idx != tuple(range(1, o.arity + 1)):
                raise SemanticError("image must be given for the representative %s(%s)"
                                    % (o.name, ",".join(map(str, range(1, o.arity + 1)))), no)
            if name.text in images:
                raise SemanticError("image of %s given twice" % name.text, no)
            if cur.done():
                raise ParseError("image needs at least one factor", no, cur.end_col)
            acc: dict = {}
            while not cur.done():
                t = cur.peek()
                var, e = _factor(cur)
                if var.orbit != "x" or len(var.labels) != 1:
                    raise ParseError("image factors must look like x[r,j]", no, t.col)
                acc[var] = acc.get(var, 0) + e
                cur.accept("*")
            images[name.text] = (Monomial(acc), no)
        else:
            raise ParseError("unknown statement %r" % kw.text, no, kw.col)
    if not orbits:
        raise SemanticError("no orbit declared")
    if xrows is None:
        raise SemanticError("missing xrows declaration")
    for n in order:
        if n not in images:
            raise SemanticError("no image given for orbit %s" % n)
    spec = MonomialMapSpec(RingSignature(tuple(orbits[n] for n in order), "Y-ring"), xrows,
                           {n: images[n][0] for n in order})
    try:
        validate_map(spec)
    except (NotEquivariant, ImageTooWide, ValueError) as exc:
        raise SemanticError(str(exc)) from exc
    return spec


def format_map_spec(spec: MonomialMapSpec) -> str:
    lines = []
    for o in spec.domain.orbits:
        if o.is_trivial:
            lines.append("orbit %s arity %d" % (o.name, o.arity))
        elif o.stabilizer == frozenset(itertools.permutations(range(o.arity))):
            lines.append("orbit %s arity %d symmetric" % (o.name, o.arity))
        else:
            raise ValueError("orbit %s: only trivial or full stabilizers are expressible" % o.name)
    lines.append("xrows %d" % spec.xrows)
    for o in spec.domain.orbits:
        img = spec.images[o.name]
        factors = " ".join(str(v) if e == 1 else "%s^%d" % (v, e) for v, e in img.items)
        lines.append("image %s(%s) = %s" % (o.name, ",".join(map(str, range(1, o.arity + 1))), factors))
    return "\n".join(lines) + "\n"
