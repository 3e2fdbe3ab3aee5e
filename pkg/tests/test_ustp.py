import pytest

from diagfreg import IdealHandle, ideal_containment
from diagfreg.ustp import (
    Inconclusive,
    PrimeSpec,
    QuotientRingSpec,
    ordinary_power,
    symbolic_membership_oracle,
    symbolic_power,
    ustp_containment_report,
)

CONE = QuotientRingSpec.segre(3, 1, 1)
S = CONE.ring


def prime(gens, s, height=2):
    return PrimeSpec(tuple(S.parse(g) for g in gens), height, S.parse(s))


RULING = prime(("a", "b"), "c*d", height=1)
LINE = prime(("a", "b", "c"), "d")


def test_cone_presentation():
    assert [str(g) for g in CONE.relations] == ["2*b*c + a*d"]
    assert len(QuotientRingSpec.segre(2, 1, 2).relations) == 3


@pytest.mark.parametrize("P", [RULING, LINE])
def test_symbolic_power_first_is_prime(P):
    assert symbolic_power(P, 1, CONE).same_ideal(CONE.extend(P.ideal()))


def test_symbolic_square_of_ruling_contains_ordinary():
    sym = symbolic_power(prime(("a", "b"), "d"), 2, CONE)
    assert ideal_containment(ordinary_power(RULING, 2, CONE), sym)


def test_symbolic_square_is_strictly_bigger_for_height_two_prime():
    sym = symbolic_power(LINE, 2, CONE)
    a = S.parse("a")
    assert sym.contains(a) and not ordinary_power(LINE, 2, CONE).contains(a)
    assert symbolic_membership_oracle(a, LINE, 2, CONE) is True


@pytest.mark.parametrize("P", [RULING, LINE])
def test_symbolic_powers_descend_and_contain_ordinary(P):
    prev = None
    for m in range(1, 5):
        sym = symbolic_power(P, m, CONE)
        assert ideal_containment(ordinary_power(P, m, CONE), sym)
        if prev is not None:
            assert ideal_containment(sym, prev)
        prev = sym


def test_maximal_ideal_symbolic_equals_ordinary():
    # at the origin of the affine line the maximal ideal is its own symbolic power
    ring = QuotientRingSpec(S, (S.parse("b"), S.parse("c"), S.parse("d")))
    P = PrimeSpec((S.parse("a"),), 1, S.parse("a + 1"))
    for m in range(1, 4):
        assert symbolic_power(P, m, ring).same_ideal(ordinary_power(P, m, ring))


def test_oracle_examples():
    assert symbolic_membership_oracle(S.parse("a^2"), RULING, 2, CONE) is True
    assert symbolic_membership_oracle(S.parse("a*d"), RULING, 1, CONE) is True
    assert symbolic_membership_oracle(S.one(), RULING, 1, CONE, witness_degree=4) is Inconclusive
    with pytest.raises(TypeError):
        bool(Inconclusive)


def test_prime_validation():
    with pytest.raises(ValueError):
        symbolic_power(prime(("a", "b"), "a*c"), 2, CONE)
    with pytest.raises(ValueError):
        symbolic_power(prime(("a*d - b*c",), "a"), 2, CONE)
    with pytest.raises(ValueError):
        symbolic_power(RULING, 0, CONE)
    with pytest.raises(ValueError):
        QuotientRingSpec(S, (S.one(),))


@pytest.mark.parametrize("P", [RULING, LINE])
def test_containment_report(P):
    rep = ustp_containment_report(CONE, P, 2, 3, oracle_degree=6)
    assert rep.verdict == "pass"
    assert [e.n for e in rep.entries] == [1, 2, 3]
    assert all(e.oracle_confirmed == e.symbolic_generators for e in rep.entries)
    assert any("saturating element" in c for c in rep.caveats)


def test_containment_report_detects_failure():
    # h = 1 is too small for the height-two prime: a ∈ P^(2) \ P^2
    rep = ustp_containment_report(CONE, LINE, 1, 2)
    assert rep.verdict == "fail"
    assert rep.entries[1].counterexample is not None
