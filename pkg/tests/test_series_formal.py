import math
import random

import pytest

from padiclt.padics import make_context
from padiclt.series import (
    IntModRing,
    PrecisionLossError,
    QuotRing,
    TruncSeries,
    UnramRing,
    compose_univariate,
    reduce_mod_p,
    series_from_int_coeffs,
    series_var,
    substitute_two,
)
from padiclt.formal import (
    InconclusiveError,
    NotFrobeniusPolyError,
    WrongCardinalityError,
    check_endomorphism,
    frobenius_power_series,
    ga_module,
    gm_module,
    height,
    level_structure_check,
    logarithm,
    lt_construct,
    make_level_points,
    torsion_polynomial,
)

R = IntModRing(3, 8)


def test_derivative_and_identity_composition():
    f = series_from_int_coeffs(R, {3: 1}, 10)
    assert f.derivative().eq(series_from_int_coeffs(R, {2: 3}, 10))
    g = series_from_int_coeffs(R, {1: 1, 2: 1}, 10)
    assert compose_univariate(g, series_var(R, 1, 10, 0)).eq(g)


def test_integrate_round_trip():
    rng = random.Random(0)
    # unit-denominator-safe: support avoids exponents divisible by p, so the
    # integration denominators are units and no precision is consumed
    terms = {n: rng.randrange(1, 3 ** 8) for n in range(1, 9) if n % 3 != 0}
    f = series_from_int_coeffs(R, terms, 9)
    assert f.derivative().integrate().eq(f)


def test_integrate_raises_on_inexact_division():
    f = series_from_int_coeffs(R, {2: 1}, 5)  # X^2 -> X^3/3 not integral
    with pytest.raises(PrecisionLossError):
        f.integrate()


@pytest.mark.parametrize("p,fdict", [(2, {1: 2, 2: 1}), (2, {1: 2, 4: 1}),
                                     (3, {1: 3, 3: 1})])
def test_lubin_tate_functional_equation_and_axioms(p, fdict):
    dmax = 12
    M = lt_construct(p, fdict, dmax, 8)
    ring, F = M.ring, M.F
    # F(X, 0) = X
    assert TruncSeries(ring, 2, dmax,
                       {e: c for e, c in F.terms.items() if e[1] == 0}).eq(
        TruncSeries(ring, 2, dmax, {(1, 0): 1}))
    # commutativity
    assert F.eq(TruncSeries(ring, 2, dmax, {(e[1], e[0]): c for e, c in F.terms.items()}))
    # f commutes with F
    fs = series_from_int_coeffs(ring, fdict, dmax)
    fX = TruncSeries(ring, 2, dmax, {(e[0], 0): c for e, c in fs.terms.items()})
    fY = TruncSeries(ring, 2, dmax, {(0, e[0]): c for e, c in fs.terms.items()})
    assert compose_univariate(fs, F).eq(substitute_two(F, fX, fY))
    # [p] = f, multiplications compose
    assert M.mult(p).eq(fs)
    for a, b in [(2, 3), (-1, 2)]:
        assert compose_univariate(M.mult(a), M.mult(b)).eq(M.mult(a * b))


def test_lt_rejects_bad_frobenius_polys():
    with pytest.raises(NotFrobeniusPolyError):
        lt_construct(3, {1: 1, 3: 1}, 8, 6)       # linear term not p
    with pytest.raises(NotFrobeniusPolyError):
        lt_construct(3, {1: 3, 2: 1}, 8, 6)       # X^2 is not a p-power mod p
    with pytest.raises(NotFrobeniusPolyError):
        lt_construct(3, {1: 3, 3: 2}, 8, 6)       # reduction coefficient != 1


def test_gm_identities():
    G = gm_module(5, 12, 8)
    assert G.mult(1).eq(series_var(G.ring, 1, 12, 0))
    assert G.mult(5).eq(series_from_int_coeffs(
        G.ring, {n: math.comb(5, n) for n in range(1, 6)}, 12))
    rng = random.Random(1)
    for _ in range(5):
        a, b = rng.randrange(-9, 10), rng.randrange(-9, 10)
        assert compose_univariate(G.mult(a), G.mult(b)).eq(G.mult(a * b))


def test_logarithms():
    la = logarithm(ga_module(3, 10, 8))
    assert la.numerator.eq(series_from_int_coeffs(
        la.numerator.ring, {1: 3 ** la.denom_exp}, 10))

    G = gm_module(5, 12, 8)
    lg = logarithm(G)
    ring, d = lg.numerator.ring, lg.denom_exp
    expect = {}
    for n in range(1, 13):
        v, u = 0, n
        while u % 5 == 0:
            u //= 5
            v += 1
        expect[(n,)] = (pow(u, -1, ring.pN) * 5 ** (d - v) * (-1) ** (n + 1)) % ring.pN
    assert lg.numerator.eq(TruncSeries(ring, 1, 12, expect))

    M = lt_construct(3, {1: 3, 3: 1}, 15, 8)
    log = logarithm(M)
    num = log.numerator
    r2 = num.ring
    logX = TruncSeries(r2, 2, 15, {(e[0], 0): c for e, c in num.terms.items()})
    logY = TruncSeries(r2, 2, 15, {(0, e[0]): c for e, c in num.terms.items()})
    assert compose_univariate(num, M.F).eq(logX.add(logY))
    for a in (2, 7):
        assert compose_univariate(num, M.mult(a)).eq(num.scale_int(a))


def test_heights():
    assert height(gm_module(2, 6, 6).reduce()) == 1
    assert height(ga_module(2, 6, 6).reduce()) == math.inf
    for p, h in [(2, 2), (2, 3), (3, 2)]:
        M = lt_construct(p, {1: p, p ** h: 1}, p ** h + 2, 6)
        assert height(M.reduce()) == h
    with pytest.raises(InconclusiveError):
        height(gm_module(5, 3, 6).reduce())   # Dmax < q


def test_frobenius_endomorphism():
    for p, h in [(2, 2), (3, 2), (2, 3)]:
        ctxr = UnramRing(make_context(p, h, 1))
        red = lt_construct(p, {1: p, p ** h: 1}, p ** h + 4, 6).reduce(ctxr)
        tau = frobenius_power_series(red, 1)
        assert check_endomorphism(tau, red)
        assert frobenius_power_series(red, h).eq(red.mult(p))
    ga3 = ga_module(3, 8, 6).reduce()
    bad = TruncSeries(ga3.ring, 1, 8, {(1,): 1, (2,): 1})
    assert not check_endomorphism(bad, ga3)
    assert check_endomorphism(series_var(ga3.ring, 1, 8, 0), ga3)


def _level_ring(p, prec=6):
    M = lt_construct(p, {1: p, p: 1}, 6 * (p - 1) + 2, prec)
    tors = torsion_polynomial(M, 1)
    phi_over_x = {k - 1: v for k, v in tors.items()}
    ring = QuotRing(IntModRing(p, prec), [phi_over_x.get(k, 0) for k in range(p)])
    return M, ring


@pytest.mark.parametrize("p", [2, 3, 5])
def test_level_structure_torsion_points(p):
    M, ring = _level_ring(p)
    pts = make_level_points(M, ring, 1)
    assert level_structure_check(M, pts, 1, ring)
    assert not level_structure_check(M, [ring.zero()] * p, 1, ring)


def test_level_structure_edge_cases():
    M, ring = _level_ring(3)
    assert level_structure_check(M, [ring.zero()], 0, ring)
    with pytest.raises(WrongCardinalityError):
        level_structure_check(M, [ring.zero()] * 4, 1, ring)


def test_reduce_mod_p_into_extension():
    M = lt_construct(2, {1: 2, 4: 1}, 8, 6)
    red = reduce_mod_p(M.F, UnramRing(make_context(2, 2, 1)))
    assert all(not c.is_zero_at_precision() for c in red.terms.values())


def test_quot_ring_requires_monic_modulus():
    with pytest.raises(ValueError):
        QuotRing(IntModRing(3, 6), [1, 2])


def test_series_json():
    f = series_from_int_coeffs(R, {1: 2, 4: 5}, 6)
    d = f.to_json()
    assert d["vars"] == 1 and d["Dmax"] == 6 and [[4], 5] in d["terms"]
