"""Symbolic powers of named primes in quotient rings S/I and the uniform
containments P^(h n) ⊆ P^n.

A prime P of R = S/I is given by ambient generators; all ideals of R are
handled through their preimages in S (ambient generators plus I).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from diagfreg.groebner import IdealHandle, colon_saturation, ideal_containment, ideal_power
from diagfreg.polynomial import Polynomial, PolyRing
from diagfreg.segre import compositions


class _InconclusiveType:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self):
        raise TypeError("Inconclusive has no truth value; compare with `is Inconclusive`")

    def __repr__(self):
        return "Inconclusive"


#: Returned by the element oracle when its search bounds are exhausted.
Inconclusive = _InconclusiveType()


@dataclass(frozen=True)
class QuotientRingSpec:
    """R = S/I."""

    ring: PolyRing
    relations: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple(self.relations))
        if self.ideal().is_unit():
            raise ValueError("the quotient ideal is the unit ideal")

    @classmethod
    def segre(cls, p: int, r: int, s: int, names: Optional[Sequence[str]] = None) -> "QuotientRingSpec":
        """The cone over P^r x P^s as S/I_2 of the generic (r+1)x(s+1) matrix,
        variables z_ij named row-major (a, b, c, d for r = s = 1)."""
        count = (r + 1) * (s + 1)
        if names is None:
            names = "abcd" if count == 4 else [f"z{i}{j}" for i in range(r + 1) for j in range(s + 1)]
        ring = PolyRing(p, tuple(names))
        z = [[ring.gens()[i * (s + 1) + j] for j in range(s + 1)] for i in range(r + 1)]
        minors = []
        for i in range(r + 1):
            for k in range(i + 1, r + 1):
                for j in range(s + 1):
                    for l in range(j + 1, s + 1):
                        minors.append(z[i][j] * z[k][l] - z[i][l] * z[k][j])
        return cls(ring, tuple(minors))

    @property
    def p(self) -> int:
        return self.ring.p

    def ideal(self) -> IdealHandle:
        return IdealHandle(self.ring, list(self.relations))

    def extend(self, J: IdealHandle) -> IdealHandle:
        """Preimage in S of the ideal J R."""
        return J.with_generators(self.relations)


@dataclass(frozen=True)
class PrimeSpec:
    """A prime P of R with caller-supplied height and saturating element s.

    (P^m + I : s^∞) equals P^(m) when s lies in every associated prime of
    P^m other than P; that certificate is the caller's and is carried in
    ``notes``.
    """

    generators: tuple
    height: int
    s: Polynomial
    notes: str = ""

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if not self.generators:
            raise ValueError("a prime needs generators")
        if self.height < 0:
            raise ValueError("height must be nonnegative")

    @property
    def ring(self) -> PolyRing:
        return self.s.ring

    def ideal(self) -> IdealHandle:
        return IdealHandle(self.ring, list(self.generators))

    def validate(self, quotient: QuotientRingSpec):
        full = quotient.extend(self.ideal())
        if full.contains(self.s):
            raise ValueError(f"saturating element {self.s} lies in P")
        if full.same_ideal(quotient.ideal()):
            raise ValueError("P is the zero ideal of the quotient")
        if full.is_unit():
            raise ValueError("P is the unit ideal")


def ordinary_power(P: PrimeSpec, m: int, ring: QuotientRingSpec) -> IdealHandle:
    """Preimage of P^m R, i.e. P^m + I."""
    return ring.extend(ideal_power(P.ideal(), m, prune_monomials=True))


def symbolic_power(P: PrimeSpec, m: int, ring: QuotientRingSpec) -> IdealHandle:
    """(P^m + I : s^∞), contained in the preimage of P^(m) since s ∉ P, and
    equal to it under the s-certificate."""
    if m < 1:
        raise ValueError("m must be >= 1")
    P.validate(ring)
    sat = colon_saturation(ordinary_power(P, m, ring), P.s)
    return IdealHandle(ring.ring, sat.basis, sat.order)


def _monomials_up_to(ring: PolyRing, degree: int):
    for d in range(degree + 1):
        for exp in compositions(d, ring.nvars):
            yield ring.monomial(exp)


def symbolic_membership_oracle(
    f: Polynomial,
    P: PrimeSpec,
    m: int,
    ring: QuotientRingSpec,
    witness_degree: int = 6,
    power_cap: int = 64,
):
    """Look for a monomial w ∉ P of degree <= witness_degree with
    w f ∈ P^m + I.  Finding one proves f ∈ P^(m); otherwise the answer is
    :data:`Inconclusive`, never a proof of non-membership.

    At most ``power_cap`` candidate witnesses are tested.
    """
    Pm = ordinary_power(P, m, ring)
    Pfull = ring.extend(P.ideal())
    tried = 0
    for w in _monomials_up_to(ring.ring, witness_degree):
        if Pfull.contains(w):
            continue
        tried += 1
        if tried > power_cap:
            break
        if Pm.contains(w * f):
            return True
    return Inconclusive


@dataclass
class ContainmentEntry:
    n: int
    verdict: str  # pass | fail | inconclusive
    symbolic_generators: int
    ordinary_generators: int
    seconds: float
    oracle_confirmed: Optional[int] = None
    counterexample: Optional[str] = None


@dataclass
class ContainmentReport:
    h: int
    entries: list = field(default_factory=list)
    caveats: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        vs = {e.verdict for e in self.entries}
        if "fail" in vs:
            return "fail"
        if "inconclusive" in vs:
            return "inconclusive"
        return "pass"


def ustp_containment_report(
    ring: QuotientRingSpec,
    P: PrimeSpec,
    h: int,
    n_max: int,
    oracle_degree: Optional[int] = None,
) -> ContainmentReport:
    """For n = 1..n_max check P^(h n) ⊆ P^n independently at each n.

    With ``oracle_degree`` set, every generator of each symbolic power is
    cross-confirmed by :func:`symbolic_membership_oracle`; an unconfirmed
    generator makes that n inconclusive.
    """
    if h < 1:
        raise ValueError("h must be >= 1")
    P.validate(ring)
    report = ContainmentReport(h)
    report.caveats.append(
        f"symbolic powers computed as (P^m + I : ({P.s})^∞); equality with P^(m) rests on "
        "the saturating element lying in every embedded associated prime"
        + (f" ({P.notes})" if P.notes else "")
    )
    report.caveats.append("primality of P and its height are supplied by the caller, not verified")
    for n in range(1, n_max + 1):
        t0 = time.perf_counter()
        sym = symbolic_power(P, h * n, ring)
        target = ordinary_power(P, n, ring)
        bad = next((g for g in sym.generators if not target.contains(g)), None)
        entry = ContainmentEntry(
            n,
            "pass" if bad is None else "fail",
            len(sym.generators),
            len(target.generators),
            0.0,
            counterexample=None if bad is None else str(bad),
        )
        if oracle_degree is not None:
            confirmed = 0
            for g in sym.generators:
                if symbolic_membership_oracle(g, P, h * n, ring, oracle_degree) is True:
                    confirmed += 1
            entry.oracle_confirmed = confirmed
            if confirmed < len(sym.generators) and entry.verdict == "pass":
                entry.verdict = "inconclusive"
        entry.seconds = time.perf_counter() - t0
        report.entries.append(entry)
    return report
