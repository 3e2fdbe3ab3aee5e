from itertools import product

import pytest

from diagfreg import cartier_apply, frobenius_trace
from diagfreg.segre import (
    PreconditionError,
    SegreContext,
    balanced_monomials,
    canonical_splitting,
    factor_through_generators,
    segre_membership,
    segre_module_generators,
    trace_restriction_check,
    x_minus_y_degree,
)


@pytest.mark.parametrize(
    "text, expected", [("x0*y0", True), ("x0", False), ("x0*x1*y0^2 + x1^2*y0*y1", True), ("x0*y0 + x1", False)]
)
def test_membership(text, expected):
    ctx = SegreContext(1, 1, 2)
    assert segre_membership(ctx.ring.parse(text)) is expected


def test_canonical_splitting_examples():
    ctx = SegreContext(1, 1, 2)
    phi = canonical_splitting(ctx)
    assert str(phi.g) == "x1*y1"
    assert cartier_apply(phi, ctx.ring.parse("x0*y0")) == ctx.ring.one()
    assert str(canonical_splitting(SegreContext(1, 1, 5)).g) == "x0^3*x1^4*y0^3*y1^4"


@pytest.mark.parametrize("r, s", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_multiplier_balanced_iff_equal_blocks(r, s):
    ctx = SegreContext(r, s, 3)
    assert segre_membership(canonical_splitting(ctx).g) is (r == s)


@pytest.mark.parametrize("p, e, r, s", [(2, 1, 1, 2), (3, 1, 2, 1), (2, 2, 1, 2)])
def test_unbalanced_multiplier_still_restricts(p, e, r, s):
    ctx = SegreContext(r, s, p, e)
    report = trace_restriction_check(ctx, 5, canonical_splitting(ctx).g)
    assert report.passed, report.counterexample


@pytest.mark.parametrize("p, e", [(2, 1), (2, 2), (3, 1)])
def test_trace_restriction(p, e):
    report = trace_restriction_check(SegreContext(1, 1, p, e), 6)
    assert report.passed and report.checked == sum(len(list(balanced_monomials(SegreContext(1, 1, p), d))) for d in range(7))


def test_trace_restriction_vacuous():
    assert trace_restriction_check(SegreContext(1, 1, 2), 0).passed


def test_trace_restriction_reports_counterexample():
    ctx = SegreContext(1, 1, 2)
    # a multiplier with two more y's than x's shifts the output by one y
    report = trace_restriction_check(ctx, 3, ctx.ring.parse("y1^2"))
    assert not report.passed
    assert not segre_membership(report.image)


def test_generators_invariants():
    ctx = SegreContext(1, 1, 5)
    gens = segre_module_generators(ctx, 2)
    sides = {g.side for g in gens}
    assert sides == {"Balanced", "XSurplus", "YSurplus"}
    for g in gens:
        under = g.underlying(ctx.q)
        assert x_minus_y_degree(ctx, under) == 0
        diff = sum(g.beta) - sum(g.alpha)
        assert g.outer_degree() * ctx.q == abs(diff)
        if g.side == "XSurplus":
            assert sum(g.rho[ctx.nx:]) == 0 and diff > 0
        elif g.side == "YSurplus":
            assert sum(g.rho[: ctx.nx]) == 0 and diff < 0
        else:
            assert diff == 0 and not any(g.rho)


def test_surplus_example_generator():
    # residue x0 * y0^3*y1^3 has 5 more y's than x's: balanced by one x outside
    ctx = SegreContext(1, 1, 5)
    gens = [g for g in segre_module_generators(ctx, 1) if g.alpha == (1, 0) and g.beta == (3, 3)]
    assert {g.rho for g in gens} == {(1, 0, 0, 0), (0, 1, 0, 0)}
    assert all(g.side == "XSurplus" for g in gens)


def test_degree_zero_gives_balanced_only():
    ctx = SegreContext(1, 1, 3)
    gens = segre_module_generators(ctx, 0)
    assert all(g.side == "Balanced" for g in gens)
    assert any(not any(g.residue()) for g in gens)


def test_precondition():
    with pytest.raises(PreconditionError):
        segre_module_generators(SegreContext(1, 1, 2), 1)
    assert segre_module_generators(SegreContext(1, 1, 2), 1, require_large_q=False)


@pytest.mark.parametrize("p, e", [(3, 1), (2, 2)])
def test_generators_span_balanced_monomials(p, e):
    ctx = SegreContext(1, 1, p, e)
    emitted = set(segre_module_generators(ctx, 4))
    q = ctx.q
    for d in range(q * 2 + 1):
        for exp in balanced_monomials(ctx, d):
            coef, gen = factor_through_generators(ctx, exp)
            assert gen in emitted
            assert x_minus_y_degree(ctx, coef) == 0 and min(coef) >= 0
            assert tuple(c * q + u for c, u in zip(coef, gen.underlying(q))) == tuple(exp)
