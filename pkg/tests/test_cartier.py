import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diagfreg import (
    CartierMap,
    IdealHandle,
    PolyRing,
    cartier_apply,
    cartier_compose,
    frob_decompose,
    frobenius_power,
    frobenius_trace,
    ideal_compatible,
    right_multiply,
)
from diagfreg.cartier import CapExceeded, compatibility_witness

from conftest import random_poly
from oracles import key_reduction_instance


@pytest.mark.parametrize("a, q, mu, alpha", [(7, 5, 1, 2), (4, 5, 0, 4), (9, 4, 2, 1)])
def test_frob_decompose(a, q, mu, alpha):
    p, e = {5: (5, 1), 4: (2, 2)}[q]
    d = frob_decompose((a,), e, p)
    assert (d.mu, d.alpha) == ((mu,), (alpha,))
    assert d.reconstruct() == (a,)


@pytest.mark.parametrize(
    "text, expected", [("x*y", "1"), ("x", "0"), ("x^3*y", "x"), ("x*y + x^3*y^3 + x^2*y", "1 + x*y")]
)
def test_trace_p2(text, expected):
    ring = PolyRing(2, ("x", "y"))
    assert frobenius_trace(ring.parse(text), 1) == ring.parse(expected)


def test_trace_projects_box_onto_top_monomial():
    ring = PolyRing(3, ("x", "y"))
    for a in product(range(9), repeat=2):
        img = frobenius_trace(ring.monomial(a), 2)
        assert img == (ring.one() if a == (8, 8) else ring.zero())


def test_canonical_example_and_simple_maps():
    S = PolyRing.segre_ambient(2, 1, 1)
    assert cartier_apply(CartierMap(1, S.parse("x1*y1")), S.parse("x0*y0")) == S.one()
    R1 = PolyRing(3, ("x",))
    assert cartier_apply(CartierMap(1, R1.one()), R1.one()) == R1.zero()
    assert cartier_apply(CartierMap(1, R1.parse("x^2")), R1.one()) == R1.one()


def test_composition_examples():
    R1 = PolyRing(2, ("x",))
    theta = cartier_compose(CartierMap(1, R1.one()), CartierMap(1, R1.parse("x")))
    assert (theta.e, theta.g) == (2, R1.parse("x"))
    assert cartier_apply(theta, R1.parse("x^2")) == R1.one()
    R2 = PolyRing(2, ("x", "y"))
    m = CartierMap(1, R2.parse("x")) * CartierMap(1, R2.parse("y"))
    assert (m.e, m.g) == (2, R2.parse("x^2*y"))
    tr = cartier_compose(CartierMap(2, R2.one()), CartierMap(1, R2.one()))
    assert (tr.e, tr.g) == (3, R2.one())


@pytest.mark.parametrize("p", [2, 3])
def test_composition_contract_exhaustive(p):
    ring = PolyRing(p, ("x", "y"))
    rng = random.Random(p)
    maps = [CartierMap(rng.randint(1, 2), random_poly(ring, rng, 3, 3) or ring.one()) for _ in range(4)]
    q = p
    for phi in maps:
        for psi in maps:
            comp = cartier_compose(phi, psi)
            for a in product(range(2 * q + 1), repeat=2):
                if sum(a) > 2 * q:
                    continue
                f = ring.monomial(a)
                assert cartier_apply(comp, f) == cartier_apply(phi, cartier_apply(psi, f))


def test_right_multiply():
    ring = PolyRing(2, ("x",))
    m = CartierMap(1, ring.parse("x"))
    assert right_multiply(m, ring.one()) == m
    m2 = right_multiply(m, ring.parse("x"))
    assert m2.g == ring.parse("x^2")
    assert cartier_apply(m2, ring.one()) == ring.zero()
    with pytest.raises(ValueError):
        right_multiply(m, ring.zero())


def test_zero_premultiplier_rejected():
    ring = PolyRing(2, ("x",))
    with pytest.raises(ValueError):
        CartierMap(1, ring.zero())
    with pytest.raises(ValueError):
        CartierMap(0, ring.one())


R3 = PolyRing(3, ("x", "y"))
small_polys = st.dictionaries(
    st.tuples(st.integers(0, 5), st.integers(0, 5)), st.integers(1, 2), max_size=4
).map(R3.from_dict)


@settings(max_examples=50, deadline=None)
@given(small_polys, small_polys, small_polys, st.integers(1, 2))
def test_p_inverse_linearity(g, h, f, e):
    if not g:
        return
    m = CartierMap(e, g)
    assert cartier_apply(m, frobenius_power(h, e) * f) == h * cartier_apply(m, f)
    assert cartier_apply(m, f + h) == cartier_apply(m, f) + cartier_apply(m, h)


@settings(max_examples=50, deadline=None)
@given(small_polys, st.integers(1, 2))
def test_trace_splits_frobenius(f, e):
    q = 3**e
    assert frobenius_trace(frobenius_power(f, e) * R3.monomial((q - 1, q - 1)), e) == f


def brute_compatible(m, I):
    ring = m.ring
    for g in I.generators:
        for alpha in product(range(m.q), repeat=ring.nvars):
            if not I.contains(cartier_apply(m, ring.monomial(alpha) * g)):
                return False
    return True


def test_ideal_compatibility_examples():
    ring = PolyRing(2, ("x", "y"))
    I = IdealHandle.parse(ring, ["x"])
    assert ideal_compatible(CartierMap(1, ring.parse("x")), I)
    assert not ideal_compatible(CartierMap(1, ring.one()), I)
    elem, img = compatibility_witness(CartierMap(1, ring.one()), I)
    assert cartier_apply(CartierMap(1, ring.one()), elem) == img == ring.one()
    assert ideal_compatible(CartierMap(1, ring.one()), IdealHandle(ring, []))


def test_compatibility_agrees_with_enumeration():
    rng = random.Random(11)
    for _ in range(40):
        p = rng.choice([2, 3])
        ring = PolyRing(p, ("x", "y"))
        m = CartierMap(rng.randint(1, 2), random_poly(ring, rng, 3, 4) or ring.one())
        I = IdealHandle(ring, [random_poly(ring, rng, 2, 2) for _ in range(rng.randint(1, 2))])
        if I.is_zero():
            continue
        assert ideal_compatible(m, I) == brute_compatible(m, I)


def test_compatibility_cap():
    ring = PolyRing(2, ("x", "y"))
    with pytest.raises(CapExceeded):
        ideal_compatible(CartierMap(1, ring.parse("x + y + 1")), IdealHandle.parse(ring, ["x + y"]), cap=2)


@pytest.mark.parametrize("p", [2, 3])
def test_key_reduction_composition(p):
    rng = random.Random(100 + p)
    for _ in range(60):
        phi, psi, f, m, e, d = key_reduction_instance(rng, p)
        assert cartier_apply(phi, f) == f.ring.one()
        theta = cartier_compose(phi, right_multiply(psi, f ** (p**d - 1)))
        assert theta.e == e + d
        assert cartier_apply(theta, f**m) == f.ring.one()
