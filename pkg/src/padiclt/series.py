"""Sparse truncated power series over exchangeable coefficient rings.

A TruncSeries stores exponent tuples -> coefficients up to a total-degree
bound Dmax; multiplication silently drops degrees beyond Dmax (the series
is a class representative mod deg Dmax+1).  Coefficient rings are small
adapter objects; the ones used here are integers mod p^N (covers Z_p and
F_p), unramified extensions via PadicScalar (covers F_{p^e}), and monic
polynomial quotients for torsion-point rings.
"""

from __future__ import annotations

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
    """Integration divided by n+1 with insufficient coefficient valuation."""


class IntModRing:
    """Z/p^N, the workhorse ring for Z_p-coefficient series (N=1 gives F_p)."""

    def __init__(self, p: int, N: int):
        self.p = p
        self.N = N
        self.pN = p ** N

    def __repr__(self):
        return f"IntModRing({self.p}^{self.N})"

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, k):
        return k % self.pN

    def add(self, a, b):
        return (a + b) % self.pN

    def sub(self, a, b):
        return (a - b) % self.pN

    def neg(self, a):
        return (-a) % self.pN

    def mul(self, a, b):
        return (a * b) % self.pN

    def mul_int(self, a, k):
        return (a * k) % self.pN

    def is_zero(self, a):
        return a % self.pN == 0

    def eq(self, a, b):
        return (a - b) % self.pN == 0

    def valuation(self, a):
        a %= self.pN
        if a == 0:
            return None
        v = 0
        while a % self.p == 0:
            a //= self.p
            v += 1
        return v

    def inv_unit(self, a):
        return pow(a, -1, self.pN)

    def divexact_int(self, a, n):
        """a / n when n = p^v * u divides a exactly mod p^N (value mod p^(N-v))."""
        v = 0
        u = n
        while u % self.p == 0:
            u //= self.p
            v += 1
        a %= self.pN
        if v:
            if a % self.p ** v:
                raise PrecisionLossError(f"coefficient not divisible by p^{v}")
            a //= self.p ** v
        modulus = self.p ** (self.N - v)
        return (a * pow(u, -1, modulus)) % modulus


class UnramRing:
    """PadicScalar coefficients over an UnramContext (N=1 gives F_{p^e})."""

    def __init__(self, ctx: UnramContext):
        self.ctx = ctx
        self.p = ctx.p
        self.N = ctx.N

    def __repr__(self):
        return f"UnramRing(p={self.p}, e={self.ctx.e}, N={self.N})"

    def zero(self):
        return self.ctx.zero()

    def one(self):
        return self.ctx.one()

    def from_int(self, k):
        return self.ctx.from_int(k)

    def add(self, a, b):
        return scalar_add(a, b)

    def sub(self, a, b):
        return scalar_sub(a, b)

    def neg(self, a):
        return scalar_neg(a)

    def mul(self, a, b):
        return scalar_mul(a, b)

    def mul_int(self, a, k):
        from .padics import scalar_mul_int
        return scalar_mul_int(a, k)

    def is_zero(self, a):
        return a.is_zero_at_precision()

    def eq(self, a, b):
        return a == b

    def valuation(self, a):
        return a.valuation()

    def inv_unit(self, a):
        return scalar_inv(a)


class QuotRing:
    """R = (Z/p^N)[x] / (Phi) for a monic Phi; elements are int tuples."""

    def __init__(self, base: IntModRing, phi: list[int]):
        if base.from_int(phi[-1]) != 1:
            raise ValueError("quotient modulus must be monic")
        self.base = base
        self.phi = [base.from_int(c) for c in phi]
        self.deg = len(phi) - 1

    def __repr__(self):
        return f"QuotRing(deg {self.deg} over {self.base!r})"

    def zero(self):
        return (0,) * self.deg

    def one(self):
        return self.from_int(1)

    def from_int(self, k):
        return (self.base.from_int(k),) + (0,) * (self.deg - 1)

    def gen(self):
        if self.deg == 1:
            # x is congruent to -phi[0]
            return (self.base.neg(self.phi[0]),)
        return (0, 1) + (0,) * (self.deg - 2)

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        prod = [0] * (2 * self.deg - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % self.base.pN
        for d in range(len(prod) - 1, self.deg - 1, -1):
            c = prod[d]
            if c:
                prod[d] = 0
                for k in range(self.deg):
                    prod[d - self.deg + k] = (prod[d - self.deg + k] - c * self.phi[k]) % self.base.pN
        return tuple(prod[: self.deg])

    def mul_int(self, a, k):
        return tuple(self.base.mul_int(x, k) for x in a)

    def is_zero(self, a):
        return all(x % self.base.pN == 0 for x in a)

    def eq(self, a, b):
        return self.is_zero(self.sub(a, b))


class TruncSeries:
    """Sparse truncated series; exponents are tuples of length nvars."""

    __slots__ = ("ring", "nvars", "dmax", "terms")

    def __init__(self, ring, nvars: int, dmax: int, terms: dict | None = None):
        self.ring = ring
        self.nvars = nvars
        self.dmax = dmax
        self.terms = {}
        if terms:
            for exp, c in terms.items():
                if sum(exp) <= dmax and not ring.is_zero(c):
                    self.terms[exp] = c

    def __repr__(self):
        items = sorted(self.terms)[:6]
        return f"TruncSeries({len(self.terms)} terms, dmax={self.dmax}, lead={items})"

    def copy(self) -> "TruncSeries":
        return TruncSeries(self.ring, self.nvars, self.dmax, dict(self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, exp: tuple):
        return self.terms.get(exp, self.ring.zero())

    def constant_term(self):
        return self.coeff((0,) * self.nvars)

    def degree_bound_terms(self):
        return sorted(self.terms.items())

    def eq(self, other: "TruncSeries") -> bool:
        keys = set(self.terms) | set(other.terms)
        return all(self.ring.eq(self.coeff(k), other.coeff(k)) for k in keys)

    def add(self, other: "TruncSeries") -> "TruncSeries":
        out = dict(self.terms)
        ring = self.ring
        for exp, c in other.terms.items():
            if exp in out:
                s = ring.add(out[exp], c)
                if ring.is_zero(s):
                    del out[exp]
                else:
                    out[exp] = s
            else:
                out[exp] = c
        return TruncSeries(ring, self.nvars, self.dmax, out)

    def sub(self, other: "TruncSeries") -> "TruncSeries":
        return self.add(other.neg())

    def neg(self) -> "TruncSeries":
        ring = self.ring
        return TruncSeries(ring, self.nvars, self.dmax,
                           {e: ring.neg(c) for e, c in self.terms.items()})

    def scale(self, c) -> "TruncSeries":
        ring = self.ring
        return TruncSeries(ring, self.nvars, self.dmax,
                           {e: ring.mul(v, c) for e, v in self.terms.items()})

    def scale_int(self, k: int) -> "TruncSeries":
        ring = self.ring
        return TruncSeries(ring, self.nvars, self.dmax,
                           {e: ring.mul_int(v, k) for e, v in self.terms.items()})

    def mul(self, other: "TruncSeries") -> "TruncSeries":
        ring = self.ring
        dmax = self.dmax
        out: dict = {}
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in other.terms.items():
                if d1 + sum(e2) > dmax:
                    continue
                exp = tuple(a + b for a, b in zip(e1, e2))
                t = ring.mul(c1, c2)
                if exp in out:
                    out[exp] = ring.add(out[exp], t)
                else:
                    out[exp] = t
        return TruncSeries(ring, self.nvars, dmax, out)

    def pow(self, k: int) -> "TruncSeries":
        result = series_const(self.ring, self.nvars, self.dmax, self.ring.one())
        base = self
        while k:
            if k & 1:
                result = result.mul(base)
            k >>= 1
            if k:
                base = base.mul(base)
        return result

    def derivative(self, var: int = 0) -> "TruncSeries":
        ring = self.ring
        out = {}
        for exp, c in self.terms.items():
            n = exp[var]
            if n:
                ne = list(exp)
                ne[var] = n - 1
                out[tuple(ne)] = ring.mul_int(c, n)
        return TruncSeries(ring, self.nvars, self.dmax, out)

    def integrate(self, var: int = 0) -> "TruncSeries":
        """Antiderivative with zero constant term; divisions must be exact."""
        ring = self.ring
        out = {}
        for exp, c in self.terms.items():
            n = exp[var]
            ne = list(exp)
            ne[var] = n + 1
            if sum(ne) > self.dmax:
                continue
            try:
                out[tuple(ne)] = ring.divexact_int(c, n + 1)
            except PrecisionLossError as exc:
                raise PrecisionLossError(
                    f"integration hit inexact division by {n + 1} at degree {sum(exp)}"
                ) from exc
        return TruncSeries(ring, self.nvars, self.dmax, out)

    def map_coefficients(self, fn, new_ring) -> "TruncSeries":
        out = {}
        for exp, c in self.terms.items():
            nc = fn(c)
            if not new_ring.is_zero(nc):
                out[exp] = nc
        return TruncSeries(new_ring, self.nvars, self.dmax, out)

    def to_json(self) -> dict:
        return {
            "vars": self.nvars,
            "Dmax": self.dmax,
            "terms": [[list(exp), coeff_repr(c)] for exp, c in sorted(self.terms.items())],
        }


def coeff_repr(c):
    if isinstance(c, int):
        return c
    if isinstance(c, PadicScalar):
        return list(c.coords)
    return list(c)


def series_const(ring, nvars: int, dmax: int, value) -> TruncSeries:
    if ring.is_zero(value):
        return TruncSeries(ring, nvars, dmax)
    return TruncSeries(ring, nvars, dmax, {(0,) * nvars: value})


def series_var(ring, nvars: int, dmax: int, var: int) -> TruncSeries:
    exp = [0] * nvars
    exp[var] = 1
    return TruncSeries(ring, nvars, dmax, {tuple(exp): ring.one()})


def series_from_int_coeffs(ring, coeffs: dict[int, int], dmax: int) -> TruncSeries:
    """One-variable series from {exponent: integer coefficient}."""
    return TruncSeries(ring, 1, dmax,
                       {(e,): ring.from_int(c) for e, c in coeffs.items()})


def compose_univariate(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    """f(g) for one-variable f and any-arity g with g(0) = 0, by Horner."""
    if not g.ring.is_zero(g.constant_term()):
        raise ValueError("substituted series must have zero constant term")
    ring = g.ring
    deg = max((e[0] for e in f.terms), default=0)
    acc = TruncSeries(ring, g.nvars, g.dmax)
    for d in range(deg, -1, -1):
        acc = acc.mul(g)
        c = f.coeff((d,))
        if not ring.is_zero(c):
            acc = acc.add(series_const(ring, g.nvars, g.dmax, c))
    return acc


def substitute_two(F: TruncSeries, u: TruncSeries, v: TruncSeries) -> TruncSeries:
    """F(u, v) for a two-variable F; u, v share arity/dmax and vanish at 0."""
    ring = u.ring
    for s in (u, v):
        if not ring.is_zero(s.constant_term()):
            raise ValueError("substituted series must have zero constant term")
    du = max((e[0] for e in F.terms), default=0)
    dv = max((e[1] for e in F.terms), default=0)
    u_pows = [series_const(ring, u.nvars, u.dmax, ring.one())]
    for _ in range(du):
        u_pows.append(u_pows[-1].mul(u))
    v_pows = [series_const(ring, v.nvars, v.dmax, ring.one())]
    for _ in range(dv):
        v_pows.append(v_pows[-1].mul(v))
    acc = TruncSeries(ring, u.nvars, u.dmax)
    for (i, j), c in F.terms.items():
        term = u_pows[i].mul(v_pows[j]).scale(c)
        acc = acc.add(term)
    return acc


def reduce_mod_p(f: TruncSeries, target_ring=None) -> TruncSeries:
    """Reduce an IntModRing series mod p, optionally into F_{p^e}."""
    ring = f.ring
    if not isinstance(ring, IntModRing):
        raise TypeError("reduce_mod_p expects IntModRing coefficients")
    new_ring = target_ring or IntModRing(ring.p, 1)
    return f.map_coefficients(new_ring.from_int, new_ring)
