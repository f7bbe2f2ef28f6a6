from fractions import Fraction

import pytest

from incgb.parsing import (ParseError, SemanticError, format_map_spec, parse_generators, parse_map_file,
                           parse_polynomial, tokenize)
from incgb.poly import Polynomial
from incgb.symmetry import Monomial, Variable, x, y


def test_parse_polynomial_forms():
    f = parse_polynomial("3/2*x[1,1]^2 - y(2,1) + 4")
    assert f.coefficient(Monomial.var(x(1, 1), 2)) == Fraction(3, 2)
    assert f.coefficient(Monomial.var(y(2, 1))) == -1
    assert f.coefficient(Monomial()) == 4
    assert parse_polynomial("x[1,1] x[1,2]") == parse_polynomial("x[1,2]*x[1,1]")
    assert parse_polynomial("-t") == -Polynomial.variable(Variable("t", (), ()))
    assert parse_polynomial("x[1,1] - x[1,1]") == Polynomial()


def test_roundtrip_through_rendering():
    for text in ["x[1,2] - x[1,1]^2", "y(1,3)*y(3,2) - 2*y(1,2)", "1/3*x[2,4] + 7"]:
        f = parse_polynomial(text)
        assert parse_polynomial(str(f)) == f


@pytest.mark.parametrize("text,col", [
    ("x[1,1] +", 9),
    ("x[1,1] $ 2", 8),
    ("x[0,1]", 1),
    ("y(1,1)", 1),
    ("2/0", 1),
    ("x[1,1] ) 2", 8),
])
def test_parse_errors_carry_position(text, col):
    with pytest.raises(ParseError) as exc:
        parse_polynomial(text, line=3)
    assert exc.value.line == 3 and exc.value.column == col


def test_parse_generators_skips_comments():
    gens = parse_generators("# header\nx[1,1] + x[1,2]\n\n  # note\nx[1,1]^2 - 1  # trailing\n")
    assert len(gens) == 2
    with pytest.raises(ParseError) as exc:
        parse_generators("x[1,1]\nx[1,\n")
    assert exc.value.line == 2


def test_tokenize():
    toks = tokenize("y(1,2)^3")
    assert [t.text for t in toks] == ["y", "(", "1", ",", "2", ")", "^", "3"]
    assert toks[0].col == 1 and toks[-1].col == 8


ORDERED = "orbit y arity 2\nxrows 1\nimage y(1,2) = x[1,1] x[1,2]\n"


def test_parse_map_file():
    s = parse_map_file(ORDERED)
    assert s.xrows == 1 and s.domain.orbits[0].arity == 2
    assert s.image_of(y(3, 1)) == Monomial([(x(1, 1), 1), (x(1, 3), 1)])
    assert parse_map_file(format_map_spec(s)).images == s.images
    sym = parse_map_file(ORDERED.replace("arity 2", "arity 2 symmetric"))
    assert not sym.domain.orbits[0].is_trivial
    assert format_map_spec(parse_map_file(format_map_spec(sym))) == format_map_spec(sym)


@pytest.mark.parametrize("text,kind", [
    ("orbit y arity 2 symmetric\nxrows 1\nimage y(1,2) = x[1,1]^2 x[1,2]\n", SemanticError),
    ("orbit y arity 1\nxrows 1\nimage y(1) = x[1,2]\n", SemanticError),
    ("orbit y arity 1\nxrows 1\nimage y(2) = x[1,2]\n", SemanticError),
    ("orbit y arity 1\nimage y(1) = x[1,1]\n", SemanticError),
    ("orbit y arity 1\nxrows 1\n", SemanticError),
    ("orbit y arity 0\nxrows 1\n", SemanticError),
    ("orbit x arity 1\nxrows 1\nimage x(1) = x[1,1]\n", SemanticError),
    ("orbit y arity 1\nxrows 1\nimage y(1) = x[3,1]\n", SemanticError),
    ("orbit y arity 1\nxrows 1\nimage y(1) = w[1,1]\n", ParseError),
    ("orbit y arity 1\nxrows 1\nimage y(1) =\n", ParseError),
    ("orbit y arity one\n", ParseError),
    ("frobnicate\n", ParseError),
])
def test_map_file_errors(text, kind):
    with pytest.raises(kind):
        parse_map_file(text)


def test_semantic_error_names_line():
    with pytest.raises(SemanticError) as exc:
        parse_map_file("orbit y arity 1\nxrows 1\nxrows 2\n")
    assert exc.value.line == 3 and "line 3" in str(exc.value)
