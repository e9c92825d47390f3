import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padiclt.padics import (
    ContextMismatchError,
    NonUnitError,
    UnramContext,
    frobenius,
    make_context,
    scalar_add,
    scalar_arith,
    scalar_inv,
    scalar_mul,
    scalar_sub,
    valuation,
)

CTX32 = make_context(3, 2, 8)
CTX51 = make_context(5, 1, 8)


def test_degree_one_context_is_degenerate():
    assert CTX51.modulus == (0, 1)
    assert CTX51.frobenius == ((1,),)


def test_least_irreducible_quadratic_over_f2():
    # exhaustive search oracle: x^2+x+1 is the only irreducible quadratic
    ctx = make_context(2, 2, 8)
    assert ctx.modulus == (1, 1, 1)


def test_frobenius_order_and_residue_power():
    rng = random.Random(0)
    for ctx in (CTX32, make_context(5, 3, 8)):
        for _ in range(20):
            a = ctx.random_element(rng)
            b = a
            for _ in range(ctx.e):
                b = frobenius(b)
            assert b == a
            ap = a
            for _ in range(ctx.p - 1):
                ap = scalar_mul(ap, a)
            v = scalar_sub(frobenius(a), ap).valuation()
            assert v is None or v >= 1


def test_frobenius_fixes_rationals_and_is_multiplicative():
    rng = random.Random(1)
    c = CTX32.from_int(7)
    assert frobenius(c) == c
    for _ in range(100):
        a, b = CTX32.random_element(rng), CTX32.random_element(rng)
        assert frobenius(scalar_mul(a, b)) == scalar_mul(frobenius(a), frobenius(b))


coord_pairs = st.tuples(st.integers(0, 3 ** 8 - 1), st.integers(0, 3 ** 8 - 1))


@settings(max_examples=60, derandomize=True)
@given(coord_pairs, coord_pairs)
def test_ring_axioms(ca, cb):
    a = CTX32.from_coords(ca)
    b = CTX32.from_coords(cb)
    assert scalar_arith("add", a, b) == scalar_arith("add", b, a)
    assert scalar_arith("mul", a, b) == scalar_arith("mul", b, a)
    assert scalar_sub(scalar_add(a, b), b) == a


@settings(max_examples=60, derandomize=True)
@given(coord_pairs, coord_pairs, coord_pairs)
def test_mul_associative_distributive(ca, cb, cc):
    a, b, c = (CTX32.from_coords(x) for x in (ca, cb, cc))
    assert scalar_mul(scalar_mul(a, b), c) == scalar_mul(a, scalar_mul(b, c))
    assert scalar_mul(a, scalar_add(b, c)) == scalar_add(scalar_mul(a, b), scalar_mul(a, c))


def test_add_identity_and_precision_min():
    a = CTX32.from_int(17, prec=5)
    z = CTX32.zero()
    s = scalar_add(a, z)
    assert s == a and s.prec == 5


def test_geometric_series_inverse_identity():
    ctx = make_context(7, 1, 6)
    s = ctx.zero()
    for k in range(6):
        s = scalar_add(s, ctx.from_int(7 ** k))
    assert scalar_mul(ctx.from_int(1 - 7), s) == ctx.one()


def test_inverse_examples():
    rng = random.Random(2)
    assert scalar_inv(CTX32.one()) == CTX32.one()
    for _ in range(100):
        a = CTX32.random_unit(rng)
        assert scalar_mul(a, scalar_inv(a)) == CTX32.one()
        assert scalar_inv(scalar_inv(a)) == a
    with pytest.raises(NonUnitError):
        scalar_inv(CTX32.from_int(3))
    with pytest.raises(NonUnitError):
        scalar_inv(CTX32.zero())


def test_valuation_examples_and_properties():
    assert valuation(CTX51.from_int(125)) == 3
    assert valuation(CTX51.zero()) is None
    rng = random.Random(3)
    ctx = make_context(3, 2, 10)
    for _ in range(100):
        a, b = ctx.random_element(rng), ctx.random_element(rng)
        va, vb = valuation(a), valuation(b)
        if va is not None and vb is not None and va + vb < 5:
            assert valuation(scalar_mul(a, b)) == va + vb
        if va is not None and vb is not None and va != vb:
            assert valuation(scalar_add(a, b)) == min(va, vb)


def test_context_mismatch_rejected():
    with pytest.raises(ContextMismatchError):
        scalar_add(CTX32.one(), CTX51.one())


def test_reduction_idempotence():
    rng = random.Random(4)
    for _ in range(50):
        a = CTX32.random_element(rng)
        b = CTX32.from_coords(a.coords)
        assert a == b and b.coords == tuple(c % CTX32.pN for c in b.coords)


def test_context_serialization_round_trip():
    s = CTX32.to_json()
    assert UnramContext.from_json(s) == CTX32
