import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diagfreg import PolyRing, frobenius_power
from diagfreg.polynomial import ParseError, format_tensor

R3 = PolyRing(3, ("x", "y", "z"))


@st.composite
def polys(draw, ring=R3):
    terms = draw(
        st.dictionaries(
            st.tuples(*[st.integers(0, 3)] * ring.nvars), st.integers(0, ring.p - 1), max_size=5
        )
    )
    return ring.from_dict(terms)


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == R3.zero()
    assert f * R3.one() == f


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_frobenius_is_additive(f, g):
    # (f + g)^p = f^p + g^p in characteristic p
    assert (f + g) ** 3 == f**3 + g**3
    assert frobenius_power(f, 1) == f**3


@settings(max_examples=40, deadline=None)
@given(polys())
def test_print_parse_round_trip(f):
    assert R3.parse(str(f)) == f


def test_coefficients_reduce_mod_p():
    assert str(R3.parse("4*x - 2*y + 6")) == "x + y"


@pytest.mark.parametrize(
    "text, offset",
    [("x + w", 4), ("x +* y", 3), ("(x + y", 6), ("x $ y", 2)],
)
def test_parse_errors_carry_offsets(text, offset):
    with pytest.raises(ParseError) as info:
        R3.parse(text)
    assert info.value.offset == offset


def test_tensor_ring_names_and_formatting():
    S = PolyRing.segre_ambient(5, 1, 1)
    T = S.tensor_power(2)
    assert T.names[:4] == ("x0_1", "x1_1", "y0_1", "y1_1")
    assert T.n_factors == 2
    f = T.parse("y0_1*x1_2*y1_2")
    assert format_tensor(f) == "y0 ⊗ x1*y1"
    assert format_tensor(T.parse("x0_2")) == "1 ⊗ x0"


def test_total_degree_and_monomial_queries():
    f = R3.parse("x^2*y + z")
    assert f.total_degree() == 3
    assert not f.is_monomial()
    assert R3.parse("2*x*y").monic() == R3.parse("x*y")
