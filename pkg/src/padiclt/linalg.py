"""Exact linear algebra over precision-tracked p-adic scalars.

Elimination pivots on minimal valuation (ties: smallest column, then row)
so that every division is by the entry of least valuation seen so far and
the absolute-precision loss is bounded by the pivot valuations.
"""

from __future__ import annotations

from dataclasses import dataclass

from .padics import (
    PadicScalar,
    UnramContext,
    scalar_add,
    scalar_inv,
    scalar_mul,
    scalar_neg,
    scalar_sub,
)


class PrecisionLossError(ArithmeticError):
    """A division consumed more p-adic precision than available."""


def _shift_down(a: PadicScalar, v: int) -> PadicScalar:
    """Exact division by p^v; requires every coordinate divisible by p^v."""
    if v == 0:
        return a
    if a.prec <= v:
        raise PrecisionLossError(f"cannot divide by p^{v} at precision {a.prec}")
    pv = a.ctx.p ** v
    if any(c % pv for c in a.coords):
        raise PrecisionLossError("entry not divisible by pivot power")
    return PadicScalar(a.ctx, tuple(c // pv for c in a.coords), a.prec - v)


def divide_by_pivot(a: PadicScalar, pivot: PadicScalar) -> PadicScalar:
    """a / pivot where v(a) >= v(pivot); loses v(pivot) digits of precision."""
    v = pivot.valuation()
    if v is None:
        raise PrecisionLossError("pivot is zero at precision")
    unit = _shift_down(pivot, v)
    return scalar_mul(_shift_down(a, v), scalar_inv(unit))


def solve_unit_system(matrix: list[list[PadicScalar]], rhs: list[PadicScalar]) -> list[PadicScalar]:
    """Solve M x = rhs for a square M invertible mod p (all pivots units)."""
    n = len(matrix)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    ctx = rhs[0].ctx
    for col in range(n):
        piv_row = None
        for r in range(col, n):
            if a[r][col].valuation() == 0:
                piv_row = r
                break
        if piv_row is None:
            raise PrecisionLossError("no unit pivot: matrix not invertible mod p")
        a[col], a[piv_row] = a[piv_row], a[col]
        inv = scalar_inv(a[col][col])
        a[col] = [scalar_mul(inv, x) for x in a[col]]
        for r in range(n):
            if r != col and not a[r][col].is_zero_at_precision():
                f = a[r][col]
                a[r] = [scalar_sub(x, scalar_mul(f, y)) for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


@dataclass
class KernelResult:
    basis: list[list[PadicScalar]]
    max_pivot_valuation: int
    reliable: bool


def kernel_basis(rows: list[list[PadicScalar]], ncols: int, ctx: UnramContext,
                 prec: int) -> KernelResult:
    """Right kernel of the matrix given by `rows` over the scalar ring.

    Pivots are chosen with minimal valuation; ties break toward the smallest
    column index (callers order columns graded-lexicographically), then the
    smallest row.  The result is flagged unreliable when a pivot's valuation
    exceeds prec/2.
    """
    a = [row[:] for row in rows]
    nrows = len(a)
    pivots: dict[int, int] = {}  # col -> row
    used_rows: set[int] = set()
    max_pivot_v = 0

    while True:
        best = None  # (val, col, row)
        for r in range(nrows):
            if r in used_rows:
                continue
            for c in range(ncols):
                if c in pivots:
                    continue
                v = a[r][c].valuation()
                if v is None:
                    continue
                if best is None or (v, c, r) < best:
                    best = (v, c, r)
        if best is None:
            break
        v, col, row = best
        max_pivot_v = max(max_pivot_v, v)
        piv = a[row][col]
        a[row] = [divide_by_pivot(x, piv) for x in a[row]]
        for r in range(nrows):
            if r != row and not a[r][col].is_zero_at_precision():
                f = a[r][col]
                a[r] = [scalar_sub(x, scalar_mul(f, y)) for x, y in zip(a[r], a[row])]
        pivots[col] = row
        used_rows.add(row)

    free_cols = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free_cols:
        vec = [ctx.zero().at_precision(prec) for _ in range(ncols)]
        vec[f] = ctx.one().at_precision(prec)
        for c, r in pivots.items():
            vec[c] = scalar_neg(a[r][f])
        basis.append(vec)
    return KernelResult(basis, max_pivot_v, max_pivot_v <= prec // 2)


def determinant(matrix: list[list[PadicScalar]], ctx: UnramContext) -> PadicScalar:
    """Division-free determinant by expansion over column subsets.

    O(2^n n) scalar operations; exact at the input precision.  Fine for the
    desk-scale h x h matrices this package manipulates.
    """
    n = len(matrix)
    prec = min(x.prec for row in matrix for x in row) if n else ctx.N
    # dp over subsets of columns: value of the minor on the first popcount(S) rows
    dp = {0: ctx.one().at_precision(prec)}
    for _ in range(n):
        ndp: dict[int, PadicScalar] = {}
        for subset, val in dp.items():
            r = bin(subset).count("1")
            count_less = 0
            for c in range(n):
                bit = 1 << c
                if subset & bit:
                    count_less += 1
                    continue
                # inserting (row r, col c) adds r - count_less inversions
                term = scalar_mul(val, matrix[r][c])
                if (r - count_less) % 2:
                    term = scalar_neg(term)
                key = subset | bit
                ndp[key] = scalar_add(ndp[key], term) if key in ndp else term
        dp = ndp
    return dp[(1 << n) - 1]
