"""Test ideals tau(a^t) of polynomial rings via ascending trace-image chains,
plus the arithmetic and containment checks built on them."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional, Union

from diagfreg.cartier import DEFAULT_CAP, cartier_apply, check_cap, frobenius_trace, residue_pieces
from diagfreg.groebner import IdealHandle, ideal_containment, ideal_power
from diagfreg.polynomial import Polynomial

log = logging.getLogger(__name__)


class ChainError(AssertionError):
    """A trace-image chain failed to ascend."""


@dataclass(frozen=True, order=True)
class RationalExponent:
    """A nonnegative exact rational t = numerator / denominator in lowest terms."""

    numerator: int
    denominator: int = 1

    def __post_init__(self):
        if self.denominator < 1:
            raise ValueError("denominator must be >= 1")
        if self.numerator < 0:
            raise ValueError("exponent must be nonnegative")
        g = math.gcd(self.numerator, self.denominator)
        if g > 1:
            object.__setattr__(self, "numerator", self.numerator // g)
            object.__setattr__(self, "denominator", self.denominator // g)

    @classmethod
    def of(cls, t: Union["RationalExponent", Fraction, int, str]) -> "RationalExponent":
        if isinstance(t, RationalExponent):
            return t
        f = Fraction(t)
        return cls(f.numerator, f.denominator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def ceil_times(self, k: int) -> int:
        """ceil(t * k)."""
        return -((-self.numerator * k) // self.denominator)

    def __add__(self, other):
        return RationalExponent.of(self.value + RationalExponent.of(other).value)

    def __mul__(self, other):
        return RationalExponent.of(self.value * RationalExponent.of(other).value)

    def __str__(self):
        return str(self.value)


@dataclass
class TestIdealResult:
    ideal: IdealHandle
    stabilized_at_e: Optional[int]
    chain: list = field(default_factory=list)
    flags: list = field(default_factory=list)

    __test__ = False  # not a pytest class

    @property
    def stabilized(self) -> bool:
        return self.stabilized_at_e is not None


def _minimize(ring, gens: list) -> list:
    """Drop monomial generators divisible by another generator."""
    mons = sorted((g for g in gens if g.is_monomial()), key=lambda g: g.total_degree())
    keep = []
    for m in mons:
        (e,) = m.terms
        if not any(all(a <= b for a, b in zip(next(iter(k.terms)), e)) for k in keep):
            keep.append(m.monic())
    return keep + [g for g in gens if not g.is_monomial()]


def trace_image_ideal(e: int, J: IdealHandle, cap: int = DEFAULT_CAP) -> IdealHandle:
    """The ideal Phi^e(F^e_* J), generated by the trace images of x^alpha g
    over generators g of J and alpha in [0, q-1]^N.

    The images are read off by grouping each generator's terms by residue
    class, which gives exactly the nonzero ones without enumerating alpha.
    """
    if e < 1:
        raise ValueError("e must be >= 1")
    ring = J.ring
    if ring.n_factors != 1:
        raise ValueError("trace images are computed in a polynomial ring, not a tensor power")
    check_cap(sum(len(g.terms) for g in J.generators), cap, "trace-image terms")
    gens = []
    for g in J.generators:
        gens.extend(residue_pieces(g, e).values())
    return IdealHandle(ring, _minimize(ring, gens), J.order)


def trace_image_ideal_bruteforce(e: int, J: IdealHandle, cap: int = DEFAULT_CAP) -> IdealHandle:
    """Same ideal as :func:`trace_image_ideal`, by enumerating every alpha."""
    ring = J.ring
    q = ring.p**e
    check_cap(q**ring.nvars * len(J.generators), cap, "trace-image spanning set")
    gens = []
    for g in J.generators:
        for alpha in product(range(q), repeat=ring.nvars):
            img = frobenius_trace(ring.monomial(alpha) * g, e)
            if img:
                gens.append(img)
    return IdealHandle(ring, gens, J.order)


def _power(a: IdealHandle, k: int) -> IdealHandle:
    if k == 0:
        return IdealHandle(a.ring, [a.ring.one()], a.order)
    return ideal_power(a, k, prune_monomials=True)


def test_ideal_bms(a: IdealHandle, t, e_max: int, cap: int = DEFAULT_CAP) -> TestIdealResult:
    """tau(a^t) as the limit of chain[e] = Phi^e(F^e_* a^ceil(t p^e)).

    The chain is ascending because ceil(t p^(e+1)) <= p ceil(t p^e); a
    descent is raised as :class:`ChainError`.  The result is the first level
    equal to its successor, or the last level with ``stabilized_at_e`` None.
    """
    if e_max < 1:
        raise ValueError("e_max must be >= 1")
    if a.is_zero():
        raise ValueError("the ideal must contain a nonzero element")
    t = RationalExponent.of(t)
    p = a.ring.p
    flags = []
    if t.denominator % p == 0:
        flags.append("p-divides-denominator")
    chain = []
    for e in range(1, e_max + 1):
        level = trace_image_ideal(e, _power(a, t.ceil_times(p**e)), cap)
        if chain:
            if not ideal_containment(chain[-1], level):
                raise ChainError(f"trace-image chain descends at e={e}")
            if level.same_ideal(chain[-1]):
                chain.append(level)
                return TestIdealResult(chain[-2], e - 1, chain, flags)
        chain.append(level)
    flags.append("unstabilized")
    return TestIdealResult(chain[-1], None, chain, flags)


def ceiling_identity_check(m: int, t, q: int) -> bool:
    """ceil(m t (q-1)) <= m ceil(t (q-1)) <= ceil(m t (q-1)) + m."""
    if m < 1 or q < 2:
        raise ValueError("need m >= 1 and q >= 2")
    t = RationalExponent.of(t)
    lo = t.ceil_times(m * (q - 1))
    mid = m * t.ceil_times(q - 1)
    return lo <= mid <= lo + m


def subadditivity_check(a: IdealHandle, t, n: int, e_max: int) -> Optional[bool]:
    """tau(a^(t n)) ⊆ tau(a^t)^n in a polynomial ring.

    None means inconclusive: one of the chains did not stabilize by e_max.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    t = RationalExponent.of(t)
    lhs = test_ideal_bms(a, t * n, e_max)
    rhs = test_ideal_bms(a, t, e_max)
    if not (lhs.stabilized and rhs.stabilized):
        return None
    return ideal_containment(lhs.ideal, _power(rhs.ideal, n))


def briancon_skoda_check(q_ideal: IdealHandle, h: int, e_max: int) -> Optional[bool]:
    """tau(q^h) ⊆ q for an ideal q with at most h generators.

    Every chain level lies inside the limit, so a level escaping q is a
    definite failure; an unstabilized chain that stays inside q is
    inconclusive (None).
    """
    if len(q_ideal.generators) > h:
        raise ValueError(f"ideal has {len(q_ideal.generators)} generators, more than h = {h}")
    res = test_ideal_bms(q_ideal, h, e_max)
    if any(not ideal_containment(level, q_ideal) for level in res.chain):
        return False
    return True if res.stabilized else None


def dn_truncated_test_ideal(ctx, n: int, e: int, a: IdealHandle, t, cap: int = DEFAULT_CAP) -> IdealHandle:
    """One level of the diagonal test-ideal chain: the ideal generated by
    phi(F^e_*(c u)) for phi in a basis of the liftable maps at level e (with
    premultiplier exponents in [0, q-1]), u a generator of a^ceil(t(q-1)),
    and c running over module generators of F^e_* R (monomials x^alpha of
    the box for a polynomial ring).

    This is a fixed-e lower approximation of the diagonal test ideal, not
    its limit.  With a Segre context the result is returned as an ideal of
    the ambient ring; for elements of R, membership in it agrees with
    membership in the corresponding ideal of R.
    """
    from diagfreg.diagonal import dn_solution_space
    from diagfreg.segre import segre_module_generators

    t = RationalExponent.of(t)
    ring = a.ring
    q = ring.p**e
    if ctx is not None:
        ctx = ctx.with_e(e)
        mults = [ring.monomial(gen.underlying(q)) for gen in segre_module_generators(ctx, max(ctx.r, ctx.s), require_large_q=False)]
    else:
        check_cap(q**ring.nvars, cap, "multiplier box")
        mults = [ring.monomial(al) for al in product(range(q), repeat=ring.nvars)]
    maps = [w.induced for w in dn_solution_space(ring, n, e, ctx=ctx)]
    us = _power(a, t.ceil_times(q - 1)).generators
    check_cap(len(maps) * len(us) * len(mults), cap, "truncated test-ideal spanning set")
    gens = []
    for phi in maps:
        for u in us:
            for c in mults:
                img = cartier_apply(phi, c * u)
                if img:
                    gens.append(img)
    return IdealHandle(ring, _minimize(ring, gens), a.order)
