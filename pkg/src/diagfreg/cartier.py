"""p^{-e}-linear maps on polynomial rings.

Every map F^e_* S -> S on a polynomial ring S is the Frobenius trace
precomposed with multiplication by some g in S, so a map is stored as the
pair (e, g).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from diagfreg.groebner import IdealHandle
from diagfreg.polynomial import Polynomial, frobenius_power

#: Refuse exhaustive enumerations larger than this many elements.
DEFAULT_CAP = 10**6


class CapExceeded(RuntimeError):
    """An exhaustive enumeration would exceed the configured cap."""


def check_cap(count: int, cap: int, what: str):
    if count > cap:
        raise CapExceeded(f"{what}: {count} elements exceeds cap {cap}")


@dataclass(frozen=True)
class FrobDecomp:
    """Per-variable Euclidean division a = mu*q + alpha, 0 <= alpha < q."""

    mu: tuple
    alpha: tuple
    e: int
    q: int

    def reconstruct(self) -> tuple:
        return tuple(m * self.q + a for m, a in zip(self.mu, self.alpha))


def frob_decompose(a, e: int, p: int) -> FrobDecomp:
    if e < 1:
        raise ValueError("Frobenius level e must be >= 1")
    q = p**e
    a = tuple(a)
    return FrobDecomp(tuple(x // q for x in a), tuple(x % q for x in a), e, q)


def frobenius_trace(f: Polynomial, e: int) -> Polynomial:
    """The trace map on F^e_* S: a term c*x^a survives as c*x^mu exactly
    when every residue alpha equals q-1, where a = mu*q + alpha."""
    if e < 1:
        raise ValueError("Frobenius level e must be >= 1")
    q = f.ring.p**e
    top = q - 1
    out = {}
    for a, c in f.terms.items():
        if all(x % q == top for x in a):
            out[tuple(x // q for x in a)] = c
    return Polynomial(f.ring, out)


@dataclass(frozen=True)
class CartierMap:
    """The map F^e_* f -> Phi^e(F^e_*(g f)) on the ring of ``g``."""

    e: int
    g: Polynomial

    def __post_init__(self):
        if self.e < 1:
            raise ValueError("Cartier maps need e >= 1")
        if not self.g:
            raise ValueError("the premultiplier g must be nonzero")

    @property
    def ring(self):
        return self.g.ring

    @property
    def q(self) -> int:
        return self.ring.p**self.e

    def __call__(self, f: Polynomial) -> Polynomial:
        return cartier_apply(self, f)

    def __mul__(self, other: "CartierMap") -> "CartierMap":
        return cartier_compose(self, other)

    def __str__(self):
        return f"Phi^{self.e}·({self.g})"


def cartier_apply(m: CartierMap, f: Polynomial) -> Polynomial:
    return frobenius_trace(m.g * f, m.e)


def cartier_compose(phi: CartierMap, psi: CartierMap) -> CartierMap:
    """phi · psi = phi ∘ F^e_* psi, which is (e + d, phi.g^(p^d) · psi.g)."""
    if phi.ring != psi.ring:
        raise ValueError("maps live on different rings")
    return CartierMap(phi.e + psi.e, frobenius_power(phi.g, psi.e) * psi.g)


def right_multiply(m: CartierMap, r: Polynomial) -> CartierMap:
    """(m · r)(-) = m(F^e_* r · -)."""
    if not r:
        raise ValueError("right multiplication by zero gives the zero map")
    return CartierMap(m.e, m.g * r)


def residue_box(nvars: int, q: int):
    return product(range(q), repeat=nvars)


def residue_pieces(h: Polynomial, e: int) -> dict:
    """Map beta -> Phi^e(F^e_*(x^(q-1-beta) h)) for the residues beta that
    occur in h.  These are all the nonzero trace images of the multiples
    x^alpha h with alpha in [0, q-1]^N: the image is nonzero only when
    alpha = q-1-beta for a residue beta of some term of h."""
    q = h.ring.p**e
    groups: dict = {}
    for exp, c in h.terms.items():
        res = tuple(x % q for x in exp)
        groups.setdefault(res, {})[tuple(x // q for x in exp)] = c
    return {beta: Polynomial(h.ring, d) for beta, d in groups.items()}


def ideal_compatible(m: CartierMap, I: IdealHandle, cap: int = DEFAULT_CAP) -> bool:
    """True iff m(F^e_* I) ⊆ I.

    F^e_* I is spanned over S by x^alpha * g_i with alpha in [0, q-1]^N and
    g_i the generators of I, so checking those images is complete.  Their
    nonzero images are read off from the residue classes of g * g_i.
    """
    return compatibility_witness(m, I, cap) is None


def compatibility_witness(m: CartierMap, I: IdealHandle, cap: int = DEFAULT_CAP):
    """First spanning element x^alpha * g_i whose image leaves I, as the
    pair (element, image), or None when m is compatible with I."""
    if I.is_zero():
        return None
    ring = m.ring
    q = m.q
    check_cap(sum(len(m.g.terms) * len(g.terms) for g in I.generators), cap, "compatibility products")
    for g in I.generators:
        for beta, img in sorted(residue_pieces(m.g * g, m.e).items()):
            if not I.contains(img):
                alpha = tuple(q - 1 - b for b in beta)
                return ring.monomial(alpha) * g, img
    return None
