"""The maximal order of the invariant-1/h division algebra over Q_p.

Elements are written in the normal form lambda_0 + lambda_1*Pi + ... +
lambda_{h-1}*Pi^(h-1) with lambda_i integral over the degree-h unramified
context and the relations Pi^h = p, Pi*lam = sigma(lam)*Pi.  The embedding
j into h x h matrices is left multiplication on the right K_h-vector space
with basis {1, Pi^(h-1), ..., Pi}; the reduced norm is det(j(.)).
"""

from __future__ import annotations

import json

from .linalg import determinant, solve_unit_system
from .padics import (
    ContextMismatchError,
    NonUnitError,
    PadicScalar,
    UnramContext,
    frobenius,
    scalar_add,
    scalar_mul,
    scalar_mul_int,
    scalar_sub,
)

# Composition order of the j-homomorphism, fixed by the pre-build oracle
# (scripts/calibrate.py): "left" means j(a*b) = j(a) @ j(b).  The reversed
# order fails on random pairs.
J_COMPOSITION = "left"


class DivElem:
    """Element of o_{B_h} in Pi-normal form over a degree-h context."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: UnramContext, coeffs: tuple[PadicScalar, ...]):
        if len(coeffs) != ctx.e:
            raise ValueError(f"need h={ctx.e} coefficients, got {len(coeffs)}")
        self.ctx = ctx
        self.coeffs = coeffs

    @property
    def h(self) -> int:
        return self.ctx.e

    def __repr__(self) -> str:
        return f"DivElem({[list(c.coords) for c in self.coeffs]})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, DivElem):
            return NotImplemented
        return self.ctx.same_ring(other.ctx) and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash(tuple(c.key() for c in self.coeffs))

    def key(self) -> tuple:
        return tuple(c.key() for c in self.coeffs)

    def is_unit(self) -> bool:
        return self.coeffs[0].valuation() == 0

    def pi_valuation(self) -> int | None:
        """min_i (h*v(lambda_i) + i), the Pi-adic valuation; None if all zero."""
        h = self.h
        vals = []
        for i, c in enumerate(self.coeffs):
            v = c.valuation()
            if v is not None:
                vals.append(h * v + i)
        return min(vals) if vals else None

    def to_json(self) -> str:
        return json.dumps({"coeffs": [list(c.coords) for c in self.coeffs]})

    @staticmethod
    def from_json(ctx: UnramContext, s: str) -> "DivElem":
        d = json.loads(s)
        return DivElem(ctx, tuple(ctx.from_coords(c) for c in d["coeffs"]))


def div_one(ctx: UnramContext) -> DivElem:
    return div_from_scalar(ctx.one())


def div_from_scalar(lam: PadicScalar) -> DivElem:
    ctx = lam.ctx
    return DivElem(ctx, (lam,) + tuple(ctx.zero() for _ in range(ctx.e - 1)))


def div_pi(ctx: UnramContext, power: int = 1) -> DivElem:
    """Pi^power for 0 <= power < h."""
    coeffs = [ctx.zero()] * ctx.e
    coeffs[power] = ctx.one()
    return DivElem(ctx, tuple(coeffs))


def _check_ctx(a: DivElem, b: DivElem) -> None:
    if not a.ctx.same_ring(b.ctx):
        raise ContextMismatchError("division-algebra elements from different contexts")


def div_add(a: DivElem, b: DivElem) -> DivElem:
    _check_ctx(a, b)
    return DivElem(a.ctx, tuple(scalar_add(x, y) for x, y in zip(a.coeffs, b.coeffs)))


def div_sub(a: DivElem, b: DivElem) -> DivElem:
    _check_ctx(a, b)
    return DivElem(a.ctx, tuple(scalar_sub(x, y) for x, y in zip(a.coeffs, b.coeffs)))


def div_mul(a: DivElem, b: DivElem) -> DivElem:
    """Normal-form product via Pi^i lam = sigma^i(lam) Pi^i and Pi^h = p."""
    _check_ctx(a, b)
    ctx = a.ctx
    h = ctx.e
    out = [ctx.zero() for _ in range(h)]
    for i, ai in enumerate(a.coeffs):
        if ai.is_zero_at_precision():
            continue
        for j, bj in enumerate(b.coeffs):
            if bj.is_zero_at_precision():
                continue
            term = scalar_mul(ai, frobenius(bj, i))
            k = i + j
            if k >= h:
                term = scalar_mul_int(term, ctx.p)
                k -= h
            out[k] = scalar_add(out[k], term)
    return DivElem(ctx, tuple(out))


def div_inv(a: DivElem) -> DivElem:
    """Two-sided inverse of a unit, via the linear system x * a = 1.

    The system is linear in the coordinates of x because right
    multiplication only Frobenius-twists the known coefficients of a.
    """
    ctx = a.ctx
    h = ctx.e
    if not a.is_unit():
        raise NonUnitError("element is not in Gamma = o_{B_h}^x")
    # M[k][j] = coefficient of Pi^k in Pi^j * a restricted to x_j, i.e.
    # sigma^j(lambda_{(k-j) mod h}) times p when j > k.
    matrix = []
    for k in range(h):
        row = []
        for j in range(h):
            lam = frobenius(a.coeffs[(k - j) % h], j)
            if j > k:
                lam = scalar_mul_int(lam, ctx.p)
            row.append(lam)
        matrix.append(row)
    rhs = [ctx.one()] + [ctx.zero() for _ in range(h - 1)]
    x = solve_unit_system(matrix, rhs)
    return DivElem(ctx, tuple(x))


def j_embed(a: DivElem) -> list[list[PadicScalar]]:
    """The h x h matrix of left multiplication by `a` on {1, Pi^(h-1), ..., Pi}.

    Row 0 is (lambda_0, p*lambda_1, ..., p*lambda_{h-1}); row r >= 1 has
    sigma^r(lambda_{h-r}) in column 0, sigma^r(lambda_{c-r}) for r <= c and
    p*sigma^r(lambda_{h+c-r}) for r > c.
    """
    ctx = a.ctx
    h = ctx.e
    mat = []
    for r in range(h):
        row = []
        rr = r if r >= 1 else h
        for c in range(h):
            lam = frobenius(a.coeffs[(c - r) % h], r)
            if c >= 1 and rr > c:
                lam = scalar_mul_int(lam, ctx.p)
            row.append(lam)
        mat.append(row)
    return mat


def mat_mul(A: list[list[PadicScalar]], B: list[list[PadicScalar]]) -> list[list[PadicScalar]]:
    n = len(A)
    out = []
    for r in range(n):
        row = []
        for c in range(n):
            acc = scalar_mul(A[r][0], B[0][c])
            for k in range(1, n):
                acc = scalar_add(acc, scalar_mul(A[r][k], B[k][c]))
            row.append(acc)
        out.append(row)
    return out


def mat_eq(A: list[list[PadicScalar]], B: list[list[PadicScalar]]) -> bool:
    return all(x == y for ra, rb in zip(A, B) for x, y in zip(ra, rb))


def nrd(a: DivElem) -> PadicScalar:
    """Reduced norm as det(j(a)); lands in Z_p up to precision."""
    return determinant(j_embed(a), a.ctx)


def in_filtration(a: DivElem, n: int) -> bool:
    """Membership in Gamma_n = 1 + p^n o_{B_h} (Gamma_0 := Gamma)."""
    if n < 0:
        raise ValueError("filtration level must be >= 0")
    if n == 0:
        return a.is_unit()
    diff = div_sub(a, div_one(a.ctx))
    for c in diff.coeffs:
        v = c.valuation()
        if v is not None and v < n:
            return False
    return True


def sample_gamma(ctx: UnramContext, n: int, rng) -> DivElem:
    """Uniform element of Gamma_n mod p^N; rng is a random.Random or a seed."""
    if isinstance(rng, int):
        import random
        rng = random.Random(rng)
    h = ctx.e
    if n == 0:
        coeffs = [ctx.random_unit(rng)]
        coeffs += [ctx.random_element(rng) for _ in range(h - 1)]
        return DivElem(ctx, tuple(coeffs))
    pn = ctx.p ** n
    pN = ctx.pN
    shifted_range = ctx.p ** max(ctx.N - n, 0)

    def p_n_multiple():
        return ctx.from_coords([pn * rng.randrange(shifted_range) % pN for _ in range(ctx.e)])

    coeffs = [scalar_add(ctx.one(), p_n_multiple())]
    coeffs += [p_n_multiple() for _ in range(h - 1)]
    return DivElem(ctx, tuple(coeffs))


def sample_obh(ctx: UnramContext, rng) -> DivElem:
    """Uniform integral element (not necessarily a unit)."""
    return DivElem(ctx, tuple(ctx.random_element(rng) for _ in range(ctx.e)))
