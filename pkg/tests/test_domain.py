import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padiclt.padics import make_context, scalar_inv, scalar_mul, scalar_sub
from padiclt.divalg import div_from_scalar, div_mul, div_one, j_embed, sample_gamma, sample_obh
from padiclt.domain import (
    DomainFunc,
    NotInPError,
    Section,
    ZeroAtPrecisionError,
    contraction_profile,
    domain_const,
    domain_monomial,
    domain_var,
    fn_sequence,
    gamma_act,
    lf_diagnostic,
    lie_act,
    lie_derived_operator,
    lie_finite_difference,
    monomial_section,
    monomials,
    operator_kernel,
    p_act,
    random_domain_func,
    reach_span,
)
from padiclt.padics import frobenius

CTX2 = make_context(5, 2, 8)
CTX3 = make_context(3, 3, 8)


def test_gauss_valuation_of_generators():
    for ctx, h in ((CTX2, 2), (CTX3, 3)):
        assert domain_const(ctx, h, 4, ctx.one()).gauss_valuation() == 0
        for i in range(1, h):
            assert domain_var(ctx, h, 4, i).gauss_valuation() == h - i
    with pytest.raises(ZeroAtPrecisionError):
        DomainFunc(CTX2, 2, 4).gauss_valuation()


def test_gauss_valuation_multiplicative():
    rng = random.Random(0)
    for ctx, h in ((CTX2, 2), (CTX3, 3)):
        for _ in range(100):
            f = random_domain_func(ctx, h, 3, rng)
            g = random_domain_func(ctx, h, 3, rng)
            vf, vg = f.gauss_valuation(), g.gauss_valuation()
            if vf + vg < h * (ctx.N - 2):
                assert f.mul(g).gauss_valuation() == vf + vg


def test_identity_acts_trivially():
    rng = random.Random(1)
    for s in (-2, 0, 3):
        x = Section(random_domain_func(CTX3, 3, 5, rng), s)
        assert gamma_act(div_one(CTX3), x).eq(x)


def test_scalar_gamma_on_generator():
    rng = random.Random(2)
    lam = CTX2.random_unit(rng)
    g = div_from_scalar(lam)
    acted = gamma_act(g, domain_var(CTX2, 2, 6, 1))
    expect = domain_var(CTX2, 2, 6, 1).scale(scalar_mul(frobenius(lam), scalar_inv(lam)))
    assert acted.eq(expect)


def test_action_is_ring_homomorphism():
    # the degree budget must hold the full product: substitution of a
    # polynomial inside the budget is the exact truncation of the action
    rng = random.Random(3)
    g = sample_gamma(CTX3, 0, rng)
    dmax = 6
    f1 = DomainFunc(CTX3, 3, dmax, dict(random_domain_func(CTX3, 3, 3, rng).terms))
    f2 = DomainFunc(CTX3, 3, dmax, dict(random_domain_func(CTX3, 3, 3, rng).terms))
    assert gamma_act(g, f1.mul(f2)).eq(gamma_act(g, f1).mul(gamma_act(g, f2)))
    assert gamma_act(g, f1.add(f2)).eq(gamma_act(g, f1).add(gamma_act(g, f2)))


def test_action_law_holds_modulo_truncation_ideal():
    rng = random.Random(4)
    for ctx, h in ((CTX2, 2), (CTX3, 3)):
        for s in (-1, 0, 2):
            g1, g2 = sample_gamma(ctx, 0, rng), sample_gamma(ctx, 0, rng)
            x = Section(random_domain_func(ctx, h, 6, rng), s)
            d = gamma_act(g1, gamma_act(g2, x)).sub(gamma_act(div_mul(g1, g2), x))
            assert d.is_zero_at_precision() or d.gauss_valuation() > 6


def test_action_law_exact_in_low_degrees_at_elevated_budget():
    rng = random.Random(5)
    W = 2 * CTX2.N + 6
    for s in (-2, 0, 3):
        g1, g2 = sample_gamma(CTX2, 0, rng), sample_gamma(CTX2, 0, rng)
        f = random_domain_func(CTX2, 2, 6, rng)
        x = Section(DomainFunc(CTX2, 2, W, dict(f.terms)), s)
        d = gamma_act(g1, gamma_act(g2, x)).sub(gamma_act(div_mul(g1, g2), x))
        assert not {e for e in d.func.terms if sum(e) <= 6}


def test_norm_preserved_by_action():
    rng = random.Random(6)
    for ctx, h in ((CTX2, 2), (CTX3, 3)):
        for s in (-2, 0, 3):
            g = sample_gamma(ctx, 0, rng)
            x = Section(random_domain_func(ctx, h, 4, rng), s)
            assert gamma_act(g, x).gauss_valuation() == x.gauss_valuation()


def test_gamma_act_rejects_non_units():
    from padiclt.padics import NonUnitError
    from padiclt.divalg import div_pi
    with pytest.raises(NonUnitError):
        gamma_act(div_pi(CTX2, 1), domain_var(CTX2, 2, 4, 1))


def test_p_act_membership_and_restriction():
    rng = random.Random(7)
    g = sample_gamma(CTX3, 0, rng)
    a = j_embed(g)
    f = random_domain_func(CTX3, 3, 4, rng)
    assert p_act(a, f).eq(gamma_act(g, Section(f, 0)).func)
    bad = [row[:] for row in a]
    bad[0][1] = CTX3.one()  # top-row entry must lie in p o_h
    with pytest.raises(NotInPError):
        p_act(bad, f)


def test_lie_weights_and_nilpotent_kill():
    for s in (0, 1, 3):
        for e in monomials(3, 4):
            x = monomial_section(CTX3, 3, 6, e, s)
            assert lie_act(0, 0, x).func.eq(x.func.scale_int(s - sum(e)))
            for i in (1, 2):
                assert lie_act(i, i, x).func.eq(x.func.scale_int(e[i - 1]))
    for j in (1, 2):
        assert lie_act(0, j, monomial_section(CTX3, 3, 6, (0, 0), 4)).is_zero_at_precision()


def test_gl_bracket_on_monomials():
    ops = [(i, j) for i in range(2) for j in range(2)]
    for s in (0, 2):
        for e in monomials(2, 4):
            x = monomial_section(CTX2, 2, 6, e, s)
            for (i, j) in ops:
                for (k, l) in ops:
                    lhs = lie_act(i, j, lie_act(k, l, x)).sub(lie_act(k, l, lie_act(i, j, x)))
                    rhs = Section(DomainFunc(CTX2, 2, 6), s)
                    if j == k:
                        rhs = rhs.add(lie_act(i, l, x))
                    if l == i:
                        rhs = rhs.sub(lie_act(k, j, x))
                    assert lhs.eq(rhs)


def test_finite_difference_zero_direction_and_diagonal():
    rng = random.Random(8)
    zero_delta = sample_obh(CTX2, rng)
    zero_delta = type(zero_delta)(CTX2, tuple(CTX2.zero() for _ in range(2)))
    x = Section(random_domain_func(CTX2, 2, 4, rng), 0)
    q, d = lie_finite_difference(zero_delta, x, 2)
    assert q.is_zero_at_precision() and d.is_zero_at_precision()

    lam = CTX2.random_unit(rng)
    delta = div_from_scalar(lam)
    mat = j_embed(delta)
    x1 = Section(domain_var(CTX2, 2, 6, 1), 0)
    expect = domain_var(CTX2, 2, 6, 1).scale(scalar_sub(mat[1][1], mat[0][0]))
    assert lie_derived_operator(delta, x1).func.eq(expect)


def test_finite_difference_convergence():
    ctx = make_context(5, 2, 12)
    rng = random.Random(9)
    for _ in range(5):
        delta = sample_obh(ctx, rng)
        f = random_domain_func(ctx, 2, 4, rng)
        x = Section(DomainFunc(ctx, 2, 30, dict(f.terms)), 1)
        prev = None
        for k in (2, 3, 4, 5):
            quot, dx = lie_finite_difference(delta, x, k)
            err = quot.sub(dx)
            v = None if err.is_zero_at_precision() else err.func.gauss_valuation()
            if prev is not None and v is not None:
                assert v - prev >= 2
            if v is None:
                break
            prev = v


def test_fn_sequence_base_cases():
    rng = random.Random(10)
    hom = domain_monomial(CTX2, 2, 8, (3,), CTX2.random_unit(rng))
    rec, closed = fn_sequence(hom, 3, 1, 4)
    assert all(g.eq(hom) for g in rec + closed)
    f0 = hom.add(domain_monomial(CTX2, 2, 8, (5,), CTX2.random_unit(rng)))
    rec, closed = fn_sequence(f0, 3, 0, 0)
    assert rec[0].eq(f0) and closed[0].eq(f0)


def test_fn_sequence_matches_closed_form():
    ctx = make_context(3, 2, 8)
    rng = random.Random(11)
    for s in (-1, 0, 2):
        terms = {e: ctx.random_element(rng) for e in monomials(2, 10) if sum(e) >= 2}
        f0 = DomainFunc(ctx, 2, 10, terms)
        if not any(sum(e) == 2 for e in f0.terms):
            f0 = f0.add(domain_monomial(ctx, 2, 10, (2,), ctx.random_unit(rng)))
        rec, closed = fn_sequence(f0, 2, s, 10)
        for a, b in zip(rec, closed):
            assert a.eq(b)
        deg2 = DomainFunc(ctx, 2, 10, {e: c for e, c in f0.terms.items() if sum(e) == 2})
        assert closed[8].eq(deg2)


def test_fn_sequence_rejects_bad_input():
    f = domain_monomial(CTX2, 2, 6, (1,))
    with pytest.raises(ValueError):
        fn_sequence(f, 2, 0, 3)  # has a term below degree d


@settings(max_examples=20, derandomize=True)
@given(st.integers(0, 3), st.integers(0, 5))
def test_reach_span_of_highest_weight(s, seed):
    r = reach_span(monomial_section(CTX3, 3, 8, (0, 0), s), 8)
    assert r.monomials == set(monomials(3, s))
    assert r.dimension == math.comb(s + 2, 2)


def test_reach_span_full_cases():
    full = set(monomials(3, 8))
    assert reach_span(monomial_section(CTX3, 3, 8, (2, 1), 2), 8).monomials == full
    assert reach_span(monomial_section(CTX3, 3, 8, (1, 0), -2), 8).monomials == full


def test_operator_kernels():
    k = operator_kernel(CTX3, 3, [(0, 1), (0, 2)], 0, 8)
    assert len(k.basis) == 1 and k.basis[0].support() == {(0, 0)} and k.reliable
    nops = [(0, 1), (0, 2), (1, 2)]
    k2 = operator_kernel(CTX3, 3, nops, 3, 5, within_vs=True)
    assert len(k2.basis) == 1 and k2.basis[0].support() == {(0, 0)}
    k3 = operator_kernel(CTX3, 3, [], 0, 3)
    assert len(k3.basis) == len(monomials(3, 3))


def test_lf_diagnostic_verdicts():
    assert lf_diagnostic(monomial_section(CTX3, 3, 10, (1, 1), 3)).kind == "finite"
    v = lf_diagnostic(monomial_section(CTX3, 3, 12, (4, 0), 3))
    assert v.kind == "growing"
    c = lf_diagnostic(Section(domain_const(CTX3, 3, 10, CTX3.one()), 0))
    assert c.kind == "finite" and c.dimension == 1


def test_contraction_marker_and_bound():
    rng = random.Random(12)
    x = random_domain_func(CTX2, 2, 5, rng)
    assert contraction_profile(div_one(CTX2), x) is None
    for n in (1, 2, 3):
        for _ in range(10):
            g = sample_gamma(CTX2, n, rng)
            prof = contraction_profile(g, random_domain_func(CTX2, 2, 8, rng))
            assert prof is None or prof >= 2 * n


def test_vs_stability_support():
    rng = random.Random(13)
    for s in (0, 1, 3):
        for e in monomials(3, s):
            g = sample_gamma(CTX3, 0, rng)
            y = gamma_act(g, monomial_section(CTX3, 3, s + 2, e, s))
            assert all(sum(t) <= s for t in y.func.terms)


def test_section_json_round_trip():
    rng = random.Random(14)
    x = Section(random_domain_func(CTX3, 3, 4, rng), -1)
    d = x.to_json()
    assert d["s"] == -1 and d["h"] == 3 and d["terms"]
    assert Section.from_json(CTX3, d).eq(x)
    f = random_domain_func(CTX2, 2, 5, rng)
    assert DomainFunc.from_json(CTX2, f.to_json()).eq(f)


def test_kernel_vectors_are_annihilated():
    nops = [(0, 1), (0, 2), (1, 2)]
    k = operator_kernel(CTX3, 3, nops, 3, 5, within_vs=True)
    for f in k.basis:
        for (i, j) in nops:
            assert lie_act(i, j, Section(f, 3)).is_zero_at_precision()
