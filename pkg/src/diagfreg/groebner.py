"""Buchberger Groebner bases over F_p and the ideal operations built on them.

Quotient rings S/I are never modelled directly: callers add the generators
of I to every ideal and work in the ambient polynomial ring.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from heapq import heapify, heappop, heappush
from itertools import combinations_with_replacement
from operator import add, sub
from typing import Callable, Iterable, Optional, Sequence

from diagfreg.fields import inv_mod
from diagfreg.polynomial import Polynomial, PolyRing

log = logging.getLogger(__name__)

#: Re-check every S-polynomial of every emitted basis.  Tests rely on this
#: staying on; it roughly doubles the cost of a basis computation.
VERIFY_BASES = True

#: Running counts of post-checked bases (``verified``) and failures.
VERIFY_STATS = {"verified": 0, "failed": 0}


class GroebnerError(AssertionError):
    """An emitted basis failed the Buchberger criterion."""


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order on exponent tuples.

    ``kind`` is ``"lex"``, ``"grevlex"`` or ``"elim"``; ``priority`` lists
    variable indices from most to least significant (default: ring order).
    ``elim`` is the block order that compares the first ``block`` variables
    of the priority list by grevlex and breaks ties by grevlex on the rest.
    """

    kind: str = "grevlex"
    priority: Optional[tuple] = None
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "elim"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def key(self, nvars: int) -> Callable:
        """Flat integer-tuple sort key; larger key = larger monomial."""
        perm = tuple(self.priority) if self.priority is not None else tuple(range(nvars))
        if sorted(perm) != list(range(nvars)):
            raise ValueError("priority must be a permutation of the variables")
        identity = perm == tuple(range(nvars))
        if self.kind == "lex":
            if identity:
                return lambda e: e
            return lambda e: tuple(e[i] for i in perm)
        if self.kind == "grevlex":
            rev = perm[::-1]
            return lambda e: (sum(e),) + tuple(-e[i] for i in rev)
        head, tail = perm[: self.block], perm[self.block:]
        rh, rt = head[::-1], tail[::-1]
        return lambda e: (
            (sum(e[i] for i in head),)
            + tuple(-e[i] for i in rh)
            + (sum(e[i] for i in tail),)
            + tuple(-e[i] for i in rt)
        )


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


# ---------------------------------------------------------------------------
# raw engine: polynomials are dicts {exp: coeff}; basis elements are
# (lead, tail) with monic lead and tail sorted descending.


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(map(max, a, b))


def _coprime(a, b) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


class _Engine:
    def __init__(self, p: int, key: Callable):
        self.p = p
        self.key = key
        self._neg = {}

    def negkey(self, e):
        k = self._neg.get(e)
        if k is None:
            k = tuple(-x for x in self.key(e))
            self._neg[e] = k
        return k

    def lead(self, f: dict):
        return max(f, key=self.key)

    def to_elem(self, f: dict):
        """Make monic and split into (lead, sorted tail)."""
        lead = self.lead(f)
        inv = inv_mod(f[lead], self.p)
        p = self.p
        tail = sorted(
            ((e, c * inv % p) for e, c in f.items() if e != lead),
            key=lambda t: self.key(t[0]),
            reverse=True,
        )
        return lead, tail

    def to_dict(self, elem) -> dict:
        lead, tail = elem
        d = dict(tail)
        d[lead] = 1
        return d

    def normal_form(self, f: dict, basis: Sequence) -> dict:
        """Full reduction of f modulo the monic elements of ``basis``."""
        p = self.p
        f = dict(f)
        negkey = self.negkey
        heap = [(negkey(e), e) for e in f]
        heapify(heap)
        rem = {}
        while heap:
            _, e = heappop(heap)
            c = f.pop(e, None)
            if c is None:
                continue
            for lead, tail in basis:
                if _divides(lead, e):
                    break
            else:
                rem[e] = c
                continue
            shift = tuple(map(sub, e, lead))
            for te, tc in tail:
                ne = tuple(map(add, te, shift))
                old = f.get(ne)
                if old is None:
                    v = -c * tc % p
                    if v:
                        f[ne] = v
                        heappush(heap, (negkey(ne), ne))
                else:
                    v = (old - c * tc) % p
                    if v:
                        f[ne] = v
                    else:
                        del f[ne]
        return rem

    def spoly(self, a, b) -> dict:
        (la, ta), (lb, tb) = a, b
        l = _lcm(la, lb)
        sa = tuple(map(sub, l, la))
        sb = tuple(map(sub, l, lb))
        p = self.p
        out = {}
        for e, c in ta:
            ne = tuple(map(add, e, sa))
            out[ne] = (out.get(ne, 0) + c) % p
        for e, c in tb:
            ne = tuple(map(add, e, sb))
            out[ne] = (out.get(ne, 0) - c) % p
        return {e: c for e, c in out.items() if c}

    def buchberger(self, gens: Iterable[dict]) -> list:
        """Reduced Groebner basis (list of (lead, tail)) of the ideal."""
        polys: list = []  # (lead, tail)
        sugar: list = []
        active: list = []
        pairs: list = []

        def update(h: int):
            nonlocal active, pairs
            lh = polys[h][0]
            cands = list(active)
            kept = []
            while cands:
                g1 = cands.pop(0)
                l1 = _lcm(lh, polys[g1][0])
                if _coprime(lh, polys[g1][0]):
                    kept.append(g1)
                    continue
                if any(_divides(_lcm(lh, polys[g2][0]), l1) for g2 in cands) or any(
                    _divides(_lcm(lh, polys[g2][0]), l1) for g2 in kept
                ):
                    continue
                kept.append(g1)
            new_pairs = [(h, g) for g in kept if not _coprime(lh, polys[g][0])]
            survivors = []
            for g1, g2 in pairs:
                l = _lcm(polys[g1][0], polys[g2][0])
                if (
                    _divides(lh, l)
                    and _lcm(polys[g1][0], lh) != l
                    and _lcm(polys[g2][0], lh) != l
                ):
                    continue
                survivors.append((g1, g2))
            pairs = survivors + new_pairs
            active = [g for g in active if not _divides(lh, polys[g][0])] + [h]

        def add_poly(f: dict, sug: int):
            polys.append(self.to_elem(f))
            sugar.append(sug)
            update(len(polys) - 1)

        inputs = [f for f in gens if f]
        inputs.sort(key=lambda f: self.key(self.lead(f)))
        for f in inputs:
            cur = [polys[g] for g in active]
            r = self.normal_form(f, cur)
            if r:
                add_poly(r, max(sum(e) for e in f))

        while pairs:
            best = None
            for idx, (i, j) in enumerate(pairs):
                l = _lcm(polys[i][0], polys[j][0])
                dl = sum(l)
                sug = max(sugar[i] + dl - sum(polys[i][0]), sugar[j] + dl - sum(polys[j][0]))
                rank = (sug, self.key(l))
                if best is None or rank < best[0]:
                    best = (rank, idx)
            (sug, _), idx = best
            i, j = pairs.pop(idx)
            s = self.spoly(polys[i], polys[j])
            if not s:
                continue
            r = self.normal_form(s, [polys[g] for g in active])
            if r:
                add_poly(r, sug)

        basis = [polys[g] for g in active]
        # minimalise, then interreduce tails
        basis.sort(key=lambda el: self.key(el[0]))
        minimal = []
        for el in basis:
            if not any(_divides(m[0], el[0]) for m in minimal):
                minimal = [m for m in minimal if not _divides(el[0], m[0])] + [el]
        reduced = []
        for i, el in enumerate(minimal):
            others = minimal[:i] + minimal[i + 1:]
            tail = self.normal_form(dict(el[1]), others)
            reduced.append(self.to_elem({**tail, el[0]: 1}))
        reduced.sort(key=lambda el: self.key(el[0]))
        return reduced

    def verify(self, basis: Sequence) -> bool:
        """Buchberger criterion: every S-polynomial reduces to zero.  Pairs
        with coprime leading monomials are skipped (first criterion)."""
        ok = self._verify(basis)
        VERIFY_STATS["verified" if ok else "failed"] += 1
        return ok

    def _verify(self, basis: Sequence) -> bool:
        for a in range(len(basis)):
            for b in range(a + 1, len(basis)):
                if _coprime(basis[a][0], basis[b][0]):
                    continue
                s = self.spoly(basis[a], basis[b])
                if s and self.normal_form(s, basis):
                    return False
        return True


# ---------------------------------------------------------------------------
# public API


class IdealHandle:
    """An ideal of a polynomial ring given by generators, with a lazily
    computed reduced Groebner basis for a fixed monomial order."""

    def __init__(self, ring: PolyRing, generators: Iterable[Polynomial], order: MonomialOrder = GREVLEX):
        self.ring = ring
        gens = []
        seen = set()
        for g in generators:
            if g.ring != ring:
                raise ValueError("generator lives in a different ring")
            if g and g not in seen:
                seen.add(g)
                gens.append(g)
        self.generators = gens
        self.order = order
        self._elems = None
        self._engine = _Engine(ring.p, order.key(ring.nvars))

    @classmethod
    def parse(cls, ring: PolyRing, texts: Iterable[str], order: MonomialOrder = GREVLEX) -> "IdealHandle":
        return cls(ring, [ring.parse(t) for t in texts], order)

    def _basis_elems(self):
        if self._elems is None:
            eng = self._engine
            elems = eng.buchberger(g.terms for g in self.generators)
            if VERIFY_BASES and not eng.verify(elems):
                raise GroebnerError(f"emitted basis fails the Buchberger criterion: {elems}")
            self._elems = elems
        return self._elems

    @property
    def basis(self) -> list:
        eng = self._engine
        return [Polynomial(self.ring, eng.to_dict(el)) for el in self._basis_elems()]

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise ValueError("polynomial lives in a different ring")
        return Polynomial(self.ring, self._engine.normal_form(f.terms, self._basis_elems()))

    def contains(self, f: Polynomial) -> bool:
        return not self.normal_form(f).terms

    def is_unit(self) -> bool:
        return self.contains(self.ring.one())

    def is_zero(self) -> bool:
        return not self.generators

    def __add__(self, other: "IdealHandle") -> "IdealHandle":
        return IdealHandle(self.ring, self.generators + other.generators, self.order)

    def __mul__(self, other: "IdealHandle") -> "IdealHandle":
        return IdealHandle(
            self.ring, [f * g for f in self.generators for g in other.generators], self.order
        )

    def with_generators(self, extra: Iterable[Polynomial]) -> "IdealHandle":
        return IdealHandle(self.ring, list(self.generators) + list(extra), self.order)

    def same_ideal(self, other: "IdealHandle") -> bool:
        if self.order == other.order and self.ring == other.ring:
            return [f.terms for f in self.basis] == [f.terms for f in other.basis]
        return ideal_containment(self, other) and ideal_containment(other, self)

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"IdealHandle(({gens}), p={self.ring.p})"


def groebner_basis(I: IdealHandle) -> list:
    """Reduced, monic Groebner basis of I for ``I.order``; zero ideal -> []."""
    return I.basis


def ideal_membership(f: Polynomial, I: IdealHandle) -> bool:
    return I.contains(f)


def ideal_containment(I: IdealHandle, J: IdealHandle) -> bool:
    """True iff every generator of I lies in J."""
    if I.ring != J.ring:
        raise ValueError("ideals live in different rings")
    return all(J.contains(g) for g in I.generators)


def _monomial_only(gens) -> bool:
    return all(g.is_monomial() for g in gens)


def _minimal_monomials(gens: list) -> list:
    exps = sorted({next(iter(g.terms)) for g in gens}, key=sum)
    keep = []
    for e in exps:
        if not any(_divides(k, e) for k in keep):
            keep.append(e)
    ring = gens[0].ring
    return [ring.monomial(e) for e in keep]


def ideal_power(I: IdealHandle, m: int, prune_monomials: bool = False) -> IdealHandle:
    """I^m generated by all m-fold products of the generators of I.

    With ``prune_monomials`` and a monomial ideal, non-minimal products are
    dropped (same ideal, far fewer generators for large m).
    """
    if m < 1:
        raise ValueError("power must be >= 1")
    gens = I.generators
    if not gens:
        return IdealHandle(I.ring, [], I.order)
    powers = [[I.ring.one()] for _ in gens]
    for i, g in enumerate(gens):
        for _ in range(m):
            powers[i].append(powers[i][-1] * g)
    out = []
    for combo in combinations_with_replacement(range(len(gens)), m):
        counts = [0] * len(gens)
        for i in combo:
            counts[i] += 1
        prod = I.ring.one()
        for i, c in enumerate(counts):
            if c:
                prod = prod * powers[i][c]
        out.append(prod)
    if prune_monomials and _monomial_only(out):
        out = _minimal_monomials(out)
    return IdealHandle(I.ring, out, I.order)


def divide_exact(h: Polynomial, f: Polynomial) -> Polynomial:
    """The quotient h / f, which must be exact."""
    ring = h.ring
    eng = _Engine(ring.p, GREVLEX.key(ring.nvars))
    lf = eng.lead(f.terms)
    inv = inv_mod(f.terms[lf], ring.p)
    rem = dict(h.terms)
    quot = {}
    p = ring.p
    while rem:
        lr = eng.lead(rem)
        if not _divides(lf, lr):
            raise ArithmeticError(f"{f} does not divide {h}")
        shift = tuple(map(sub, lr, lf))
        c = rem[lr] * inv % p
        quot[shift] = c
        for e, fc in f.terms.items():
            ne = tuple(map(add, e, shift))
            v = (rem.get(ne, 0) - c * fc) % p
            if v:
                rem[ne] = v
            else:
                rem.pop(ne, None)
    return Polynomial(ring, quot)


def intersect_principal(I: IdealHandle, f: Polynomial) -> list:
    """Generators of I ∩ (f), via elimination of an auxiliary variable t
    from t*I + (1 - t)*f.  The auxiliary ring never leaves this function."""
    ring = I.ring
    big = ring.extend(["_t"], front=True)
    lift = lambda g: g.map_exponents(big, lambda e: (0,) + e)  # noqa: E731
    t = big.var("_t")
    gens = [t * lift(g) for g in I.generators] + [(1 - t) * lift(f)]
    elim = MonomialOrder("elim", block=1)
    eng = _Engine(ring.p, elim.key(big.nvars))
    elems = eng.buchberger(g.terms for g in gens)
    if VERIFY_BASES and not eng.verify(elems):
        raise GroebnerError("elimination basis fails the Buchberger criterion")
    out = []
    for el in elems:
        if el[0][0] == 0:
            d = eng.to_dict(el)
            out.append(Polynomial(ring, {e[1:]: c for e, c in d.items()}))
    return out


def colon(I: IdealHandle, f: Polynomial) -> IdealHandle:
    """(I : f) = (I ∩ (f)) / f."""
    if not f:
        raise ValueError("colon by the zero polynomial")
    if I.is_zero():
        return IdealHandle(I.ring, [], I.order)
    gens = [divide_exact(h, f) for h in intersect_principal(I, f)]
    return IdealHandle(I.ring, gens, I.order)


def colon_saturation(I: IdealHandle, f: Polynomial, max_iter: int = 64) -> IdealHandle:
    """(I : f^∞) by iterating J -> (J : f) until a fixed point.

    The loop stops only after one colon step returns the same ideal, which
    certifies stabilisation.
    """
    if not f:
        raise ValueError("saturation by the zero polynomial")
    J = IdealHandle(I.ring, I.basis, I.order)
    for _ in range(max_iter):
        nxt = colon(J, f)
        nxt = IdealHandle(I.ring, nxt.basis, I.order)
        if nxt.same_ideal(J):
            return nxt
        J = nxt
    raise RuntimeError(f"saturation did not stabilise within {max_iter} colon steps")
