from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from germflow import FormalSeries, GermMap, VectorFieldGerm, root_of_unity
from germflow.expr import (
    BinOp,
    ExpIPi,
    Imag,
    Neg,
    Num,
    ParseError,
    Pow,
    Root,
    Tuple,
    Var,
    Zeta,
    lower,
    parse_germ,
    render,
)

F = Fraction


def lowered(text, order=6, kind="germ"):
    return lower(parse_germ(text), order, kind)


class TestParse:
    def test_precedence(self):
        assert parse_germ("z + 2*z^3") == BinOp("+", Var("z"), BinOp("*", Num(F(2)), Pow(Var("z"), 3)))

    def test_leading_fraction(self):
        assert parse_germ("1/2*z") == BinOp("*", Num(F(1, 2)), Var("z"))
        assert parse_germ("z/2/3") == BinOp("/", BinOp("/", Var("z"), Num(F(2))), Num(F(3)))

    def test_constants(self):
        assert parse_germ("exp(i*pi/3)") == ExpIPi(F(1, 3))
        assert parse_germ("exp(-i*pi*2/5)") == ExpIPi(F(-2, 5))
        assert parse_germ("zeta(7)") == Zeta(7)
        assert parse_germ("root(3, 1/2)") == Root(3, F(1, 2))
        assert parse_germ("i") == Imag()

    def test_tuple(self):
        node = parse_germ("(x1 + x2^2, x2/3)")
        assert isinstance(node, Tuple) and len(node.items) == 2

    def test_unary_minus(self):
        assert parse_germ("-z^2") == Neg(Pow(Var("z"), 2))

    def test_bytes_input(self):
        assert parse_germ(b"z") == Var("z")

    @pytest.mark.parametrize(
        "text, offset",
        [
            ("z + ", 4),
            ("z + $", 4),
            ("z + w", 4),
            ("exp(pi)", 4),
            ("zeta(0)", 5),
            ("z^x", 2),
            ("(z, z", 5),
            ("z )", 2),
            ("1/0*z", 0),
            ("é + z", 0),
            ("z + é", 4),
        ],
    )
    def test_error_offsets(self, text, offset):
        with pytest.raises(ParseError) as info:
            parse_germ(text)
        assert info.value.offset == offset

    def test_offset_counts_bytes(self):
        # 'é' is two bytes in UTF-8
        with pytest.raises(ParseError) as info:
            parse_germ("zé")
        assert info.value.offset == 1
        with pytest.raises(ParseError) as info:
            parse_germ("(éé")
        assert info.value.offset == 1


class TestLower:
    def test_one_variable(self):
        u = lowered("exp(i*pi/2)*z + z^5", 6)
        assert isinstance(u, GermMap)
        assert u[0].coefficient((1,)) == root_of_unity(4, 1)
        assert u[0].coefficient((5,)) == 1

    def test_truncates(self):
        assert lowered("z + z^9", 4)[0] == FormalSeries.variable(1, 0, 4)

    def test_numbered_variables(self):
        u = lowered("(x1/2 + x2^2, x2/3)", 4)
        assert u[0].coefficient((1, 0)) == F(1, 2)
        assert u[0].coefficient((0, 2)) == 1

    def test_xy(self):
        u = lowered("(x + y^2, y)", 4)
        assert u.nvars == 2

    def test_zbar_pair(self):
        u = lowered("zeta(6)*z + (z - zbar)^3", 4)
        assert u.nvars == 2 and len(u) == 2
        assert u[1].coefficient((0, 1)) == root_of_unity(6, 5)
        # the conjugate of (z - zbar)^3 is (zbar - z)^3
        assert u[1].coefficient((0, 3)) == 1 and u[0].coefficient((3, 0)) == 1

    def test_zbar_rules(self):
        with pytest.raises(ParseError):
            lowered("(z, zbar)")
        with pytest.raises(ParseError):
            lowered("zbar + x")

    def test_constant_term_rejected(self):
        with pytest.raises(ParseError, match="constant"):
            lowered("1 + z")

    def test_non_constant_division(self):
        with pytest.raises(ParseError):
            lowered("z/z")

    def test_mixed_variables(self):
        with pytest.raises(ParseError):
            lowered("x + y")

    def test_vector_field(self):
        v = lowered("z^2", 5, kind="field")
        assert isinstance(v, VectorFieldGerm)

    def test_root_constant(self):
        u = lowered("root(2, 1/4)*z", 3)
        assert u[0].coefficient((1,)) ** 2 == F(1, 4)


def _leaves():
    return st.one_of(
        st.sampled_from([Var("z")]),
        st.builds(Num, st.fractions(min_value=0, max_value=50, max_denominator=9)),
        st.just(Imag()),
        st.builds(Zeta, st.integers(1, 24)),
        st.builds(ExpIPi, st.fractions(min_value=-3, max_value=3, max_denominator=12)),
        st.builds(Root, st.integers(1, 5), st.fractions(min_value=F(1, 9), max_value=20, max_denominator=9)),
    )


def _extend(children):
    return st.one_of(
        st.builds(Neg, children),
        st.builds(BinOp, st.sampled_from("+-*/"), children, children),
        st.builds(Pow, children, st.integers(0, 9)),
    )


exprs = st.recursive(_leaves(), _extend, max_leaves=12)
germ_asts = st.one_of(exprs, st.lists(exprs, min_size=2, max_size=3).map(lambda xs: Tuple(tuple(xs))))


@given(germ_asts)
@settings(max_examples=500)
def test_render_parse_round_trip(node):
    assert parse_germ(render(node)) == node


@given(exprs)
@settings(max_examples=200)
def test_render_is_stable(node):
    text = render(node)
    assert render(parse_germ(text)) == text
