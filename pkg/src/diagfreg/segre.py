"""The Segre product R = k[x0..xr] # k[y0..ys] inside S = k[x0..xr, y0..ys].

R is the span of the monomials whose x-degree equals their y-degree.  All
elements of R are stored as ambient polynomials of S.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterator, Optional

from diagfreg.cartier import CartierMap, frobenius_trace
from diagfreg.polynomial import Polynomial, PolyRing


def compositions(total: int, parts: int) -> Iterator[tuple]:
    """All tuples of ``parts`` nonnegative ints summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def bounded_compositions(total: int, parts: int, bound: int) -> Iterator[tuple]:
    """Compositions of ``total`` with every part in [0, bound]."""
    for c in compositions(total, parts):
        if max(c, default=0) <= bound:
            yield c


@dataclass(frozen=True)
class SegreContext:
    r: int
    s: int
    p: int
    e: int = 1

    def __post_init__(self):
        if self.r < 1 or self.s < 1:
            raise ValueError("Segre blocks need r, s >= 1")
        if self.e < 1:
            raise ValueError("Frobenius level e must be >= 1")
        PolyRing(self.p, ("_",))  # validates p

    @property
    def q(self) -> int:
        return self.p**self.e

    @cached_property
    def ring(self) -> PolyRing:
        return PolyRing.segre_ambient(self.p, self.r, self.s)

    @property
    def nx(self) -> int:
        return self.r + 1

    @property
    def ny(self) -> int:
        return self.s + 1

    def with_e(self, e: int) -> "SegreContext":
        return SegreContext(self.r, self.s, self.p, e)

    def split(self, exp) -> tuple:
        """(x-exponents, y-exponents) of an ambient exponent vector."""
        return tuple(exp[: self.nx]), tuple(exp[self.nx:])

    def large_q(self) -> bool:
        return self.q > max(self.r + 1, self.s + 1)


def x_minus_y_degree(ctx: SegreContext, exp) -> int:
    xs, ys = ctx.split(exp)
    return sum(xs) - sum(ys)


def segre_membership(f: Polynomial, ctx: Optional[SegreContext] = None) -> bool:
    """True iff every monomial of f has equal total x- and y-degree."""
    ring = f.ring
    if ring.n_factors != 1:
        raise ValueError("segre_membership expects an element of the single-factor ring S")
    for exp in f.terms:
        xd = sum(k for v, k in zip(ring.varids, exp) if v.block == "X")
        yd = sum(k for v, k in zip(ring.varids, exp) if v.block == "Y")
        if xd != yd:
            return False
    return True


def canonical_multiplier_exponent(ctx: SegreContext) -> tuple:
    q = ctx.q
    xs = (q - 2,) + (q - 1,) * ctx.r
    ys = (q - 2,) + (q - 1,) * ctx.s
    return xs + ys


def canonical_splitting(ctx: SegreContext) -> CartierMap:
    """Phi^e · x0^(q-2) x1^(q-1)..xr^(q-1) y0^(q-2) y1^(q-1)..ys^(q-1).

    Sends F^e_* x0*y0 to 1.  For r != s the multiplier is not balanced, but
    the map still carries F^e_* R into R (see trace_restriction_check).
    """
    if ctx.q < 2:
        raise ValueError("need q >= 2")
    return CartierMap(ctx.e, ctx.ring.monomial(canonical_multiplier_exponent(ctx)))


def balanced_monomials(ctx: SegreContext, degree: int) -> Iterator[tuple]:
    """Exponents of monomials of R of degree ``degree`` (x-degree = y-degree
    = degree, i.e. products of ``degree`` generators x_i*y_j)."""
    for xs in compositions(degree, ctx.nx):
        for ys in compositions(degree, ctx.ny):
            yield xs + ys


@dataclass
class RestrictionReport:
    passed: bool
    checked: int
    counterexample: Optional[tuple] = None
    image: Optional[Polynomial] = None


def trace_restriction_check(
    ctx: SegreContext, degree_bound: int, multiplier: Optional[Polynomial] = None
) -> RestrictionReport:
    """Check that Phi^e(F^e_*(g m)) lies in R for every monomial m of R of
    degree <= degree_bound, where g is ``multiplier`` (default 1)."""
    ring = ctx.ring
    g = multiplier if multiplier is not None else ring.one()
    checked = 0
    for d in range(degree_bound + 1):
        for exp in balanced_monomials(ctx, d):
            img = frobenius_trace(g * ring.monomial(exp), ctx.e)
            checked += 1
            if img and not segre_membership(img):
                return RestrictionReport(False, checked, exp, img)
    return RestrictionReport(True, checked)


@dataclass(frozen=True)
class SegreGenerator:
    """rho · F^e_*(x^alpha y^beta) generating F^e_* R over R.

    ``side`` names the block ``rho`` lives in: ``XSurplus`` when
    |beta| - |alpha| = q*deg(rho) > 0 (rho is an x-monomial), ``YSurplus``
    when |alpha| - |beta| = q*deg(rho) > 0, ``Balanced`` when |alpha| = |beta|.
    """

    side: str
    rho: tuple
    alpha: tuple
    beta: tuple

    def residue(self) -> tuple:
        return self.alpha + self.beta

    def underlying(self, q: int) -> tuple:
        """Exponent of rho^q x^alpha y^beta, the monomial under F^e_*."""
        return tuple(r * q + a for r, a in zip(self.rho, self.residue()))

    def outer_degree(self) -> int:
        return sum(self.rho)


class PreconditionError(ValueError):
    pass


def segre_module_generators(
    ctx: SegreContext, degree_bound: int, require_large_q: bool = True
) -> list:
    """Generators of F^e_* R as an R-module whose outer monomial rho has
    degree <= degree_bound.

    The generating set is finite: deg(rho) never exceeds max(r, s).  With
    ``require_large_q`` the call insists on q > max(r+1, s+1).
    """
    if require_large_q and not ctx.large_q():
        raise PreconditionError(
            f"q = {ctx.q} must exceed max(r+1, s+1) = {max(ctx.r, ctx.s) + 1}"
        )
    q = ctx.q
    out = []
    for alpha in product(range(q), repeat=ctx.nx):
        for beta in product(range(q), repeat=ctx.ny):
            diff = sum(beta) - sum(alpha)
            if diff % q:
                continue
            deg = abs(diff) // q
            if deg > degree_bound:
                continue
            if diff == 0:
                out.append(SegreGenerator("Balanced", (0,) * (ctx.nx + ctx.ny), alpha, beta))
            elif diff > 0:
                for xs in compositions(deg, ctx.nx):
                    out.append(SegreGenerator("XSurplus", xs + (0,) * ctx.ny, alpha, beta))
            else:
                for ys in compositions(deg, ctx.ny):
                    out.append(SegreGenerator("YSurplus", (0,) * ctx.nx + ys, alpha, beta))
    return out


def factor_through_generators(ctx: SegreContext, exp) -> tuple:
    """Write the balanced monomial x^a y^b as (R-monomial) * rho^q x^alpha y^beta
    by the three cases mu = nu, mu > nu, mu < nu.  Returns (coefficient exponent, SegreGenerator)."""
    q = ctx.q
    exp = tuple(exp)
    if x_minus_y_degree(ctx, exp) != 0:
        raise ValueError("monomial is not in R")
    mu_v = [k // q for k in exp]
    res = tuple(k % q for k in exp)
    alpha, beta = res[: ctx.nx], res[ctx.nx:]
    mu, nu = sum(mu_v[: ctx.nx]), sum(mu_v[ctx.nx:])
    rho = [0] * len(exp)
    if mu > nu:
        need = mu - nu
        for i in range(ctx.nx):
            take = min(need, mu_v[i])
            rho[i] = take
            need -= take
        side = "XSurplus"
    elif nu > mu:
        need = nu - mu
        for j in range(ctx.nx, len(exp)):
            take = min(need, mu_v[j])
            rho[j] = take
            need -= take
        side = "YSurplus"
    else:
        side = "Balanced"
    coef = tuple(m - r for m, r in zip(mu_v, rho))
    return coef, SegreGenerator(side, tuple(rho), alpha, beta)
