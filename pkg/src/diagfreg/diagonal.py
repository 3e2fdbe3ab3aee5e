"""Tensor powers S^{⊗n}, the diagonal ideal, and liftings of Cartier maps
along the multiplication map Delta_n: S^{⊗n} -> S.

Two routes to a lifting live here:

* the closed-form lifting of the canonical Segre splitting, built basis
  element by basis element (:func:`lift_basis_image`), and
* a linear-algebra search (:func:`dn_membership`,
  :func:`dn_regularity_witness`) for a premultiplier G on S^{⊗n} whose map
  Phi^e·G is compatible with the diagonal ideal and induces a given map.

The search uses a grading: if Phi^e·g with g of multidegree c lifts at all,
it lifts to some Phi^e·G with G homogeneous of Delta-multidegree
c + (n-1)(q-1) in every variable, because every constraint is homogeneous
for the multidegree that collapses the tensor factors.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from math import comb, prod
from typing import Iterable, Optional, Sequence

import numpy as np

from diagfreg.cartier import (
    DEFAULT_CAP,
    CapExceeded,
    CartierMap,
    cartier_apply,
    check_cap,
    frobenius_trace,
    ideal_compatible,
)
from diagfreg.groebner import IdealHandle
from diagfreg.linalg import FpMatrix, solve_linear
from diagfreg.polynomial import Polynomial, PolyRing, frobenius_power
from diagfreg.segre import (
    PreconditionError,
    SegreContext,
    canonical_splitting,
    compositions,
    segre_module_generators,
    balanced_monomials,
)

log = logging.getLogger(__name__)

#: Default cap on the number of unknowns in a lifting search.
DEFAULT_UNKNOWN_CAP = 10**4


# ---------------------------------------------------------------------------
# tensor bookkeeping


@dataclass(frozen=True)
class Tensor:
    """S and its n-th tensor power T, with the index maps between them."""

    base: PolyRing
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")

    @cached_property
    def ring(self) -> PolyRing:
        return self.base.tensor_power(self.n)

    @property
    def N(self) -> int:
        return self.base.nvars

    def embed_exp(self, k: int, exp) -> tuple:
        """Exponent of varpi_k(x^exp): the copy of x^exp in factor k (1-based)."""
        out = [0] * (self.N * self.n)
        out[(k - 1) * self.N : k * self.N] = exp
        return tuple(out)

    def factor_exp(self, exp, k: int) -> tuple:
        return tuple(exp[(k - 1) * self.N : k * self.N])

    def delta_exp(self, exp) -> tuple:
        N = self.N
        return tuple(sum(exp[k * N + v] for k in range(self.n)) for v in range(N))

    def embed(self, k: int, f: Polynomial) -> Polynomial:
        return f.map_exponents(self.ring, lambda e: self.embed_exp(k, e))

    def delta(self, F: Polynomial) -> Polynomial:
        return F.map_exponents(self.base, self.delta_exp)


def base_ring_of(T: PolyRing) -> PolyRing:
    """Recover S from S^{⊗n} built by :meth:`PolyRing.tensor_power`."""
    idx = [i for i, v in enumerate(T.varids) if v.factor == 1]
    names = tuple(T.names[i].rsplit("_", 1)[0] for i in idx)
    return PolyRing(T.p, names, tuple(T.varids[i] for i in idx))


def diagonal_ideal(base: PolyRing, n: int) -> IdealHandle:
    """The kernel of Delta_n, generated by v_1 - v_k for every variable v
    of S and k = 2..n."""
    if n < 2:
        raise ValueError("the diagonal ideal needs n >= 2")
    ten = Tensor(base, n)
    T = ten.ring
    gens = []
    for v in range(ten.N):
        unit = [0] * ten.N
        unit[v] = 1
        for k in range(2, n + 1):
            gens.append(T.monomial(ten.embed_exp(1, unit)) - T.monomial(ten.embed_exp(k, unit)))
    return IdealHandle(T, gens)


def delta_eval(F: Polynomial) -> Polynomial:
    """Delta_n: collapse the factor index, x_{i,k} -> x_i."""
    base = base_ring_of(F.ring)
    return Tensor(base, F.ring.n_factors).delta(F)


# ---------------------------------------------------------------------------
# the closed-form lifting of the canonical splitting


def upsilon(x: int, q: int) -> int:
    return x // q


@dataclass(frozen=True)
class BasisExponent:
    """Exponents a[k][i], b[k][j] in [0, q-1] of the basis element
    F^e_* prod_k x_k^{a_k} y_k^{b_k} of F^e_* S^{⊗n} (k is 0-based here)."""

    a: tuple
    b: tuple
    q: int

    def __post_init__(self):
        if len(self.a) != len(self.b) or not self.a:
            raise ValueError("a and b need one row per tensor factor")
        for row in self.a + self.b:
            if any(not 0 <= v < self.q for v in row):
                raise ValueError(f"basis exponents must lie in [0, {self.q - 1}]")

    @property
    def n(self) -> int:
        return len(self.a)

    @cached_property
    def a_k(self) -> tuple:
        return tuple(sum(row) for row in self.a)

    @cached_property
    def b_k(self) -> tuple:
        return tuple(sum(row) for row in self.b)

    @cached_property
    def col_a(self) -> tuple:
        """sum_k a_{i,k} for each i."""
        return tuple(map(sum, zip(*self.a)))

    @cached_property
    def col_b(self) -> tuple:
        return tuple(map(sum, zip(*self.b)))

    def to_exp(self) -> tuple:
        out = []
        for ra, rb in zip(self.a, self.b):
            out.extend(ra)
            out.extend(rb)
        return tuple(out)

    @classmethod
    def from_exp(cls, exp, ctx: SegreContext, n: int) -> "BasisExponent":
        N = ctx.nx + ctx.ny
        a, b = [], []
        for k in range(n):
            chunk = exp[k * N : (k + 1) * N]
            a.append(tuple(chunk[: ctx.nx]))
            b.append(tuple(chunk[ctx.nx :]))
        return cls(tuple(a), tuple(b), ctx.q)

    def differences_divisible(self) -> bool:
        return all((bk - ak) % self.q == 0 for ak, bk in zip(self.a_k, self.b_k))


def all_basis_exponents(ctx: SegreContext, n: int):
    N = ctx.nx + ctx.ny
    for exp in product(range(ctx.q), repeat=N * n):
        yield BasisExponent.from_exp(exp, ctx, n)


def lala_check(b: BasisExponent) -> bool:
    """Index-0 column sums are 1 mod q, every other column sum is 0 mod q."""
    q = b.q
    if b.col_a[0] % q != 1 % q or b.col_b[0] % q != 1 % q:
        return False
    return all(v % q == 0 for v in b.col_a[1:]) and all(v % q == 0 for v in b.col_b[1:])


def psi_exponent(b: BasisExponent) -> Optional[tuple]:
    if not lala_check(b):
        return None
    q = b.q
    return tuple(upsilon(v, q) for v in b.col_a) + tuple(upsilon(v, q) for v in b.col_b)


def psi_eval(b: BasisExponent, ctx: SegreContext) -> Polynomial:
    """phi_e(F^e_* Delta_n(basis element)) in closed form."""
    exp = psi_exponent(b)
    if exp is None:
        return ctx.ring.zero()
    return ctx.ring.monomial(exp)


@dataclass
class LiftImage:
    value: Polynomial
    case: str  # "LalaFail", "FactorImbalance" or "MainCase"
    g_factors: tuple = ()
    f_factors: tuple = ()
    residual: Optional[tuple] = None
    residual_factor: Optional[int] = None


class ExtractionError(AssertionError):
    """The greedy factor extraction ran out of variables."""


def _take(avail: list, need: int) -> tuple:
    """Remove ``need`` units from ``avail`` lowest index first."""
    out = [0] * len(avail)
    for i in range(len(avail)):
        t = min(need, avail[i])
        out[i] = t
        avail[i] -= t
        need -= t
    if need:
        raise ExtractionError("not enough variables left to extract")
    return tuple(out)


def lift_basis_image(
    b: BasisExponent, ctx: SegreContext, residual_factor: Optional[int] = None
) -> LiftImage:
    """Value of the lifting of the canonical splitting on one basis element.

    Factors are extracted lowest variable index first.  The leftover
    monomial goes to ``residual_factor`` (1-based, default: the last
    factor n).
    """
    n = b.n
    ten = Tensor(ctx.ring, n)
    T = ten.ring
    if residual_factor is None:
        residual_factor = n
    if not 1 <= residual_factor <= n:
        raise ValueError("residual_factor must be in 1..n")
    psi = psi_exponent(b)
    if psi is None:
        return LiftImage(T.zero(), "LalaFail")
    if not b.differences_divisible():
        return LiftImage(T.monomial(ten.embed_exp(1, psi)), "FactorImbalance")
    q = b.q
    xs = list(psi[: ctx.nx])
    ys = list(psi[ctx.nx :])
    exp = [0] * T.nvars
    g_factors, f_factors = [], []
    for k in range(1, n + 1):
        d = b.b_k[k - 1] - b.a_k[k - 1]
        if d >= 0:
            g = _take(ys, d // q)
            g_factors.append(g)
            f_factors.append((0,) * ctx.nx)
            local = (0,) * ctx.nx + g
        else:
            f = _take(xs, (-d) // q)
            f_factors.append(f)
            g_factors.append((0,) * ctx.ny)
            local = f + (0,) * ctx.ny
        for i, v in enumerate(ten.embed_exp(k, local)):
            exp[i] += v
    residual = tuple(xs) + tuple(ys)
    for i, v in enumerate(ten.embed_exp(residual_factor, residual)):
        exp[i] += v
    return LiftImage(
        T.monomial(exp), "MainCase", tuple(g_factors), tuple(f_factors), residual, residual_factor
    )


def balance_identity_check(b: BasisExponent) -> bool:
    """Evaluate both sides of the balance identity and the two
    enough-variables inequalities for a grid satisfying their hypotheses."""
    if not lala_check(b) or not b.differences_divisible():
        raise PreconditionError("grid must satisfy the congruence condition and b_k ≡ a_k mod q")
    q = b.q
    ups_b = sum(upsilon(v, q) for v in b.col_b)
    ups_a = sum(upsilon(v, q) for v in b.col_a)
    lhs = sum(bk - ak for ak, bk in zip(b.a_k, b.b_k))
    mu_plus = sum((bk - ak) // q for ak, bk in zip(b.a_k, b.b_k) if bk >= ak)
    nu_plus = sum((ak - bk) // q for ak, bk in zip(b.a_k, b.b_k) if bk < ak)
    ok = lhs == q * (ups_b - ups_a) and ups_b >= mu_plus and ups_a >= nu_plus
    if not ok:
        log.error("balance identity violated on grid %s", b)
    return ok


def factor_imbalance(exp, ctx: SegreContext, n: int) -> tuple:
    """Per-factor (y-degree - x-degree) of a tensor exponent."""
    N = ctx.nx + ctx.ny
    out = []
    for k in range(n):
        chunk = exp[k * N : (k + 1) * N]
        out.append(sum(chunk[ctx.nx :]) - sum(chunk[: ctx.nx]))
    return tuple(out)


@dataclass
class LiftReport:
    passed: bool
    basis_checked: int = 0
    generators_checked: int = 0
    case_counts: dict = field(default_factory=dict)
    counterexample: Optional[dict] = None


def lift_table(ctx: SegreContext, n: int, residual_factor: Optional[int] = None, cap: int = DEFAULT_CAP) -> dict:
    """Lift values for every basis exponent, keyed by tensor exponent."""
    N = ctx.nx + ctx.ny
    check_cap(ctx.q ** (N * n), cap, "basis of F^e_* S^{⊗n}")
    return {
        b.to_exp(): lift_basis_image(b, ctx, residual_factor) for b in all_basis_exponents(ctx, n)
    }


def assembled_lift(F: Polynomial, table: dict, q: int) -> Polynomial:
    """Apply the lifting defined by ``table`` to an arbitrary F:
    x^(q*delta + alpha) -> x^delta * value(alpha)."""
    T = F.ring
    out = T.zero()
    for exp, c in F.terms.items():
        val = table[tuple(x % q for x in exp)].value
        if val:
            out = out + T.monomial([x // q for x in exp], c) * val
    return out


def _outer_parts(ctx: SegreContext, degree_bound: int, strict: bool):
    """Per-factor pieces (outer exponent, residue exponent): a Segre module
    generator times a monomial of R, outer degree <= degree_bound."""
    gens = segre_module_generators(ctx, degree_bound, require_large_q=strict)
    pieces = []
    for g in gens:
        for d in range((degree_bound - g.outer_degree()) // 2 + 1):
            for c in balanced_monomials(ctx, d):
                outer = tuple(x + y for x, y in zip(g.rho, c))
                pieces.append((outer, g.residue()))
    return pieces


def verify_lift(
    ctx: SegreContext,
    n: int,
    degree_bound: int,
    residual_factor: Optional[int] = None,
    cap: int = DEFAULT_CAP,
) -> LiftReport:
    """Exhaustively check the closed-form lifting.

    (1) Delta_n(lift(b)) = psi(b) = phi_e(F^e_* Delta_n(b)) for every basis
        exponent b, the last equality recomputed through the trace map.
    (2) Every element (generator tensor) * (monomial of R^{⊗n}) of outer
        degree <= degree_bound is sent into R^{⊗n}.
    """
    N = ctx.nx + ctx.ny
    check_cap(ctx.q ** (N * n), cap, "basis of F^e_* S^{⊗n}")
    ten = Tensor(ctx.ring, n)
    T = ten.ring
    phi = canonical_splitting(ctx)
    table = {}
    report = LiftReport(True)
    for b in all_basis_exponents(ctx, n):
        img = lift_basis_image(b, ctx, residual_factor)
        table[b.to_exp()] = img
        report.case_counts[img.case] = report.case_counts.get(img.case, 0) + 1
        psi = psi_eval(b, ctx)
        via_trace = cartier_apply(phi, ctx.ring.monomial(ten.delta_exp(b.to_exp())))
        if ten.delta(img.value) != psi or psi != via_trace:
            report.passed = False
            report.counterexample = {
                "basis": b.to_exp(), "lift": str(img.value), "psi": str(psi), "trace": str(via_trace)
            }
            return report
        if img.case == "MainCase":
            (vexp,) = img.value.terms
            want = tuple((bk - ak) // ctx.q for ak, bk in zip(b.a_k, b.b_k))
            if factor_imbalance(vexp, ctx, n) != want:
                report.passed = False
                report.counterexample = {"basis": b.to_exp(), "lift": str(img.value), "imbalance": want}
                return report
        report.basis_checked += 1
    if n == 1 or degree_bound < 0:
        return report
    pieces = _outer_parts(ctx, degree_bound, strict=False)
    q = ctx.q

    def combos(k, budget):
        if k == n:
            yield (), ()
            return
        for outer, res in pieces:
            d = sum(outer)
            if d > budget:
                continue
            for o_rest, r_rest in combos(k + 1, budget - d):
                yield outer + o_rest, res + r_rest

    for outer, res in combos(0, degree_bound):
        report.generators_checked += 1
        val = table[res].value
        if not val:
            continue
        (vexp,) = val.terms
        image = tuple(o + v for o, v in zip(outer, vexp))
        if any(factor_imbalance(image, ctx, n)):
            report.passed = False
            element = tuple(o * q + r for o, r in zip(outer, res))
            report.counterexample = {
                "element": str(T.monomial(element)), "image": str(T.monomial(image))
            }
            return report
    return report


# ---------------------------------------------------------------------------
# linear-algebra search for liftings


@dataclass
class LiftSystem:
    """Unknown coefficients of G, indexed by tensor exponents."""

    tensor: Tensor
    e: int
    unknowns: list
    index: dict
    rows: dict  # key -> {unknown index: coeff}
    rhs: dict  # key -> value
    excluded: int = 0

    @property
    def q(self) -> int:
        return self.tensor.base.p ** self.e

    def matrix(self):
        keys = list(self.rows.keys() | self.rhs.keys())
        p = self.tensor.base.p
        A = FpMatrix.from_sparse_rows(p, [self.rows.get(k, {}) for k in keys], len(self.unknowns))
        b = np.array([self.rhs.get(k, 0) % p for k in keys], dtype=np.int64)
        return A, b

    def polynomial(self, vec) -> Polynomial:
        T = self.tensor.ring
        return T.from_dict({self.unknowns[i]: int(c) for i, c in enumerate(vec) if c})

    def residual_ok(self, G: Polynomial) -> bool:
        """Does G satisfy every equation of the system?"""
        vec = np.zeros(len(self.unknowns), dtype=np.int64)
        for exp, c in G.terms.items():
            if exp not in self.index:
                return False
            vec[self.index[exp]] = c
        A, b = self.matrix()
        return bool(np.all((A @ vec) % A.p == b))


def _class_monomials(ten: Tensor, cls: tuple, bound: Optional[int]):
    """Tensor exponents with Delta-multidegree ``cls`` and every entry <= bound."""
    per_var = []
    for v, total in enumerate(cls):
        opts = [c for c in compositions(total, ten.n) if bound is None or max(c) <= bound]
        per_var.append(opts)
    N, n = ten.N, ten.n
    for choice in product(*per_var):
        exp = [0] * (N * n)
        for v, parts in enumerate(choice):
            for k, val in enumerate(parts):
                exp[k * N + v] = val
        yield tuple(exp)


def _restriction_violated(gamma, ten: Tensor, ctx: SegreContext, q: int) -> bool:
    """Would x^gamma in G send some generator of F^e_* R^{⊗n} out of R^{⊗n}?"""
    top = q - 1
    a = tuple((top - g) % q for g in gamma)
    ia = factor_imbalance(a, ctx, ten.n)
    if any(d % q for d in ia):
        return False
    delta = tuple((g + x - top) // q for g, x in zip(gamma, a))
    return factor_imbalance(delta, ctx, ten.n) != tuple(d // q for d in ia)


def build_lift_system(
    base: PolyRing,
    n: int,
    e: int,
    classes: Iterable[tuple],
    ctx: Optional[SegreContext] = None,
    degree_bound: Optional[int] = None,
    unknown_cap: int = DEFAULT_UNKNOWN_CAP,
) -> LiftSystem:
    """Unknowns: coefficients of G over monomials of the given Delta-classes
    (already shifted by (n-1)(q-1)).  Rows: compatibility of Phi^e·G with
    the diagonal ideal on the spanning set x^alpha * (v_1 - v_k).  With a
    Segre context, monomials of G that would break R^{⊗n} are excluded."""
    ten = Tensor(base, n)
    q = base.p**e
    top = q - 1
    classes = list(dict.fromkeys(tuple(c) for c in classes))
    est = sum(prod(comb(c + n - 1, n - 1) for c in cls) for cls in classes)
    if est > unknown_cap:
        raise CapExceeded(f"lifting search: {est} unknowns exceeds cap {unknown_cap}")
    unknowns, excluded = [], 0
    for cls in classes:
        for gamma in _class_monomials(ten, cls, degree_bound):
            if ctx is not None and _restriction_violated(gamma, ten, ctx, q):
                excluded += 1
                continue
            unknowns.append(gamma)
    index = {g: i for i, g in enumerate(unknowns)}
    rows: dict = {}
    N = ten.N
    p = base.p
    if n >= 2:
        for ui, gamma in enumerate(unknowns):
            for v in range(N):
                for k in range(2, n + 1):
                    for w, sign in ((v, 1), ((k - 1) * N + v, -1)):
                        shifted = list(gamma)
                        shifted[w] += 1
                        alpha = tuple((top - s) % q for s in shifted)
                        delta = tuple((s + a - top) // q for s, a in zip(shifted, alpha))
                        key = ("compat", alpha, v, k, ten.delta_exp(delta))
                        row = rows.setdefault(key, {})
                        row[ui] = (row.get(ui, 0) + sign) % p
    rows = {k: {i: c for i, c in r.items() if c} for k, r in rows.items()}
    rows = {k: r for k, r in rows.items() if r}
    return LiftSystem(ten, e, unknowns, index, rows, {}, excluded)


def add_induce_rows(system: LiftSystem, g: Polynomial):
    """Rows forcing the induced map on S to be Phi^e·g:
    Delta(Phi^e(G · varpi_1(x^beta))) = Phi^e(g x^beta) for beta in [0,q-1]^N."""
    ten = system.tensor
    q = system.q
    top = q - 1
    N, n = ten.N, ten.n
    for ui, gamma in enumerate(system.unknowns):
        if any((gamma[i] - top) % q for i in range(N, N * n)):
            continue
        beta = tuple((top - gamma[v]) % q for v in range(N))
        full = tuple(gamma[i] + (beta[i] if i < N else 0) for i in range(N * n))
        out = ten.delta_exp(tuple((x - top) // q for x in full))
        row = system.rows.setdefault(("induce", beta, out), {})
        row[ui] = (row.get(ui, 0) + 1) % base_p(system)
    for t in g.terms:
        beta = tuple((top - x) % q for x in t)
        img = frobenius_trace(g * ten.base.monomial(beta), system.e)
        for out, c in img.terms.items():
            system.rhs[("induce", beta, out)] = c


def add_evaluation_rows(system: LiftSystem, f: Polynomial):
    """Rows forcing Delta(Phi^e(G · varpi_1(f))) = 1."""
    ten = system.tensor
    q = system.q
    top = q - 1
    N = ten.N
    p = base_p(system)
    for ui, gamma in enumerate(system.unknowns):
        for u, c in f.terms.items():
            full = tuple(g + (u[i] if i < N else 0) for i, g in enumerate(gamma))
            if all(x % q == top for x in full):
                out = ten.delta_exp(tuple((x - top) // q for x in full))
                row = system.rows.setdefault(("eval", out), {})
                row[ui] = (row.get(ui, 0) + c) % p
    system.rhs[("eval", (0,) * N)] = 1


def base_p(system: LiftSystem) -> int:
    return system.tensor.base.p


def induced_map(G: Polynomial, ten: Tensor, e: int) -> Polynomial:
    """The premultiplier g on S of the map that Phi^e·G induces on the
    diagonal: g = sum_beta x^(q-1-beta) * Delta(Phi^e(G varpi_1 x^beta))^q."""
    base = ten.base
    q = base.p**e
    top = q - 1
    g = base.zero()
    for beta in product(range(q), repeat=ten.N):
        lifted = ten.ring.monomial(ten.embed_exp(1, beta))
        v = ten.delta(frobenius_trace(G * lifted, e))
        if v:
            g = g + base.monomial([top - b for b in beta]) * frobenius_power(v, e)
    return g


@dataclass
class DnWitness:
    """A lifting Phi^e·G on S^{⊗n} of the map ``induced`` on S."""

    lift: CartierMap
    induced: CartierMap
    n: int
    unknowns: int
    equations: int
    nullity: int
    excluded: int = 0
    system: Optional[LiftSystem] = field(default=None, repr=False)


def _default_degree_bound(g: Polynomial, n: int, q: int) -> int:
    return g.total_degree() + (n - 1) * (q - 1)


def dn_membership(
    m: CartierMap,
    n: int,
    degree_bound: Optional[int] = None,
    ctx: Optional[SegreContext] = None,
    unknown_cap: int = DEFAULT_UNKNOWN_CAP,
) -> Optional[DnWitness]:
    """Search for G with Phi^e·G compatible with the diagonal ideal of
    S^{⊗n} and inducing ``m`` on S.  With a Segre context, G must also
    carry F^e_* R^{⊗n} into R^{⊗n}, so the restriction of ``m`` to R lies
    in the diagonal Cartier algebra of R.

    Returns None when no lifting exists with G of per-variable degree
    <= degree_bound (default deg(g) + (n-1)(q-1)).  That is inconclusive,
    not a proof of non-membership.
    """
    S = m.ring
    if any(v.factor != 1 for v in S.varids):
        raise ValueError("m must be a map on a single-factor ring")
    q = m.q
    B = _default_degree_bound(m.g, n, q) if degree_bound is None else degree_bound
    if B < m.g.total_degree():
        raise ValueError("degree bound must be at least deg(g)")
    shift = (n - 1) * (q - 1)
    classes = [tuple(x + shift for x in t) for t in m.g.terms]
    system = build_lift_system(S, n, m.e, classes, ctx, B, unknown_cap)
    add_induce_rows(system, m.g)
    return _solve_witness(system, n)


def _solve_witness(system: LiftSystem, n: int) -> Optional[DnWitness]:
    if not system.unknowns:
        return None
    A, b = system.matrix()
    sol = solve_linear(A, b)
    if not sol.consistent:
        return None
    G = system.polynomial(sol.particular)
    if not G:
        return None
    ten = system.tensor
    g = induced_map(G, ten, system.e)
    if not g:
        return None
    return DnWitness(
        CartierMap(system.e, G),
        CartierMap(system.e, g),
        n,
        len(system.unknowns),
        A.rows,
        len(sol.nullspace),
        system.excluded,
        system,
    )


def dn_regularity_witness(
    f: Polynomial,
    n: int,
    e_max: int,
    ctx: Optional[SegreContext] = None,
    unknown_cap: int = DEFAULT_UNKNOWN_CAP,
):
    """Search e = 1..e_max for a map phi in the level-e diagonal Cartier
    algebra with phi(F^e_* f) = 1.  Returns (e, DnWitness) or None.

    G ranges over the Delta-classes (q-1) - u + (n-1)(q-1) for the terms
    x^u of f, the only classes that can produce the constant 1.
    """
    if not f:
        raise ValueError("f must be nonzero")
    if ctx is not None:
        from diagfreg.segre import segre_membership

        if not segre_membership(f):
            raise ValueError("f must lie in the Segre ring")
    S = f.ring
    for e in range(1, e_max + 1):
        q = S.p**e
        top = q - 1
        shift = (n - 1) * top
        classes = [
            tuple(top - x + shift for x in u) for u in f.terms if all(x <= top for x in u)
        ]
        if not classes:
            continue
        try:
            system = build_lift_system(S, n, e, classes, ctx, None, unknown_cap)
        except CapExceeded:
            log.warning("lifting search at e=%d exceeds the unknown cap; stopping", e)
            return None
        add_evaluation_rows(system, f)
        w = _solve_witness(system, n)
        if w is not None and cartier_apply(w.induced, f) == S.one():
            return e, w
    return None


def dn_solution_space(
    base: PolyRing,
    n: int,
    e: int,
    class_bound: Optional[int] = None,
    ctx: Optional[SegreContext] = None,
    unknown_cap: int = DEFAULT_UNKNOWN_CAP,
) -> list:
    """Basis of the liftable maps at level e whose premultiplier has every
    exponent <= class_bound (default q-1).  Returns a list of DnWitness
    with distinct nonzero induced maps."""
    q = base.p**e
    cb = q - 1 if class_bound is None else class_bound
    shift = (n - 1) * (q - 1)
    out = []
    seen = set()
    for c in product(range(cb + 1), repeat=base.nvars):
        system = build_lift_system(base, n, e, [tuple(x + shift for x in c)], ctx, None, unknown_cap)
        if not system.unknowns:
            continue
        A, b = system.matrix()
        sol = solve_linear(A, None)
        for vec in sol.nullspace:
            G = system.polynomial(vec)
            g = induced_map(G, system.tensor, e)
            if g and g not in seen:
                seen.add(g)
                out.append(
                    DnWitness(CartierMap(e, G), CartierMap(e, g), n, len(system.unknowns), A.rows, len(sol.nullspace))
                )
    return out


@dataclass
class WitnessCheck:
    compatible: bool
    induces: bool
    restricts: Optional[bool]
    evaluates_to_one: Optional[bool]

    @property
    def ok(self) -> bool:
        return (
            self.compatible
            and self.induces
            and self.restricts is not False
            and self.evaluates_to_one is not False
        )


def verify_witness(
    w: DnWitness,
    f: Optional[Polynomial] = None,
    ctx: Optional[SegreContext] = None,
    cap: int = DEFAULT_CAP,
) -> WitnessCheck:
    """Re-verify a lifting from scratch, without the linear system:
    diagonal-ideal compatibility by Groebner membership on the full
    spanning set, the commuting square on a basis of F^e_* S, restriction
    to R^{⊗n} on every relevant basis element, and phi(F^e_* f) = 1."""
    S = w.induced.ring
    n = w.n
    ten = Tensor(S, n)
    e = w.lift.e
    q = S.p**e
    compatible = True if n == 1 else ideal_compatible(w.lift, diagonal_ideal(S, n), cap)
    induces = True
    for beta in product(range(q), repeat=S.nvars):
        lhs = ten.delta(cartier_apply(w.lift, ten.ring.monomial(ten.embed_exp(1, beta))))
        if lhs != cartier_apply(w.induced, S.monomial(beta)):
            induces = False
            break
    restricts = None
    if ctx is not None:
        restricts = True
        check_cap(q ** (ten.N * n), cap, "basis of F^e_* S^{⊗n}")
        for alpha in product(range(q), repeat=ten.N * n):
            ia = factor_imbalance(alpha, ctx, n)
            if any(d % q for d in ia):
                continue
            img = cartier_apply(w.lift, ten.ring.monomial(alpha))
            want = tuple(d // q for d in ia)
            if any(factor_imbalance(x, ctx, n) != want for x in img.terms):
                restricts = False
                break
    evaluates = None if f is None else cartier_apply(w.induced, f) == S.one()
    return WitnessCheck(compatible, induces, restricts, evaluates)


def constructed_lift_premultiplier(ctx: SegreContext, n: int, residual_factor: Optional[int] = None) -> Polynomial:
    """G with Phi^e·G equal to the closed-form lifting:
    G = sum_alpha x^(q-1-alpha) * lift(alpha)^q."""
    ten = Tensor(ctx.ring, n)
    T = ten.ring
    q = ctx.q
    G = T.zero()
    for exp, img in lift_table(ctx, n, residual_factor).items():
        if img.value:
            G = G + T.monomial([q - 1 - a for a in exp]) * frobenius_power(img.value, ctx.e)
    return G
