"""Exact arithmetic in Z_p and its unramified extensions, tracked mod p^N.

A scalar is an element of o_e = Z_p[x]/(Phi(x)) for a monic polynomial Phi
of degree e that is irreducible mod p, stored as a coordinate vector of
length e with entries reduced mod p^N.  The absolute precision N propagates
through arithmetic by min.  The Frobenius lift sigma (the unique ring
automorphism reducing to c -> c^p on the residue field) is realized as an
e x e matrix obtained by Hensel-lifting the p-power map.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


class ContextMismatchError(ValueError):
    """Scalars from different (p, e, modulus) contexts were mixed."""


class NonUnitError(ArithmeticError):
    """Inversion was requested for a non-unit (or zero-at-precision) element."""


def _poly_mul_mod_p(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    """Product of two F_p[x] polynomials reduced mod a monic `mod`."""
    e = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for d in range(len(prod) - 1, e - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for k in range(e + 1):
                prod[d - e + k] = (prod[d - e + k] - c * mod[k]) % p
    out = prod[:e]
    out += [0] * (e - len(out))
    return out


def _poly_gcd_deg_mod_p(f: list[int], g: list[int], p: int) -> int:
    """Degree of gcd(f, g) in F_p[x] (-1 for gcd zero)."""

    def deg(h):
        for d in range(len(h) - 1, -1, -1):
            if h[d] % p:
                return d
        return -1

    f = [c % p for c in f]
    g = [c % p for c in g]
    while deg(g) >= 0:
        df, dg = deg(f), deg(g)
        if df < dg:
            f, g = g, f
            continue
        lead = (f[deg(f)] * pow(g[deg(g)], -1, p)) % p
        shift = df - dg
        for k in range(dg + 1):
            if g[k]:
                f[k + shift] = (f[k + shift] - lead * g[k]) % p
        if deg(f) < deg(g):
            f, g = g, f
    return deg(f)


def _is_irreducible_mod_p(poly: list[int], p: int) -> bool:
    """Rabin test: x^(p^e) = x mod poly and gcd(x^(p^(e/r)) - x, poly) = 1."""
    e = len(poly) - 1
    if e == 1:
        return True

    def frob_power(times: int) -> list[int]:
        # x^(p^times) mod poly by repeated p-th powering
        cur = [0, 1] + [0] * (e - 2)
        for _ in range(times):
            acc = [1] + [0] * (e - 1)
            base = cur
            n = p
            while n:
                if n & 1:
                    acc = _poly_mul_mod_p(acc, base, poly, p)
                base = _poly_mul_mod_p(base, base, poly, p)
                n >>= 1
            cur = acc
        return cur

    x = [0, 1] + [0] * (e - 2)
    if frob_power(e) != x:
        return False
    primes = set()
    n = e
    r = 2
    while r * r <= n:
        while n % r == 0:
            primes.add(r)
            n //= r
        r += 1
    if n > 1:
        primes.add(n)
    for r in primes:
        h = frob_power(e // r)
        diff = [(h[k] - x[k]) % p for k in range(e)]
        if _poly_gcd_deg_mod_p(diff, list(poly), p) != 0:
            return False
    return True


@dataclass(frozen=True)
class UnramContext:
    """Degree-e unramified extension of Q_p at absolute precision N.

    `modulus` is monic of degree e (coefficients low to high, length e+1)
    with entries in {0..p-1}; `frobenius` is the matrix of sigma in the
    basis 1, x, ..., x^(e-1), entries mod p^N, stored column-major as a
    tuple of columns.
    """

    p: int
    e: int
    N: int
    modulus: tuple[int, ...]
    frobenius: tuple[tuple[int, ...], ...]

    @property
    def pN(self) -> int:
        return self.p ** self.N

    def same_ring(self, other: "UnramContext") -> bool:
        return (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)

    def zero(self) -> "PadicScalar":
        return PadicScalar(self, (0,) * self.e, self.N)

    def one(self) -> "PadicScalar":
        return self.from_int(1)

    def gen(self) -> "PadicScalar":
        """The class of x (a generator of the residue field for e >= 2)."""
        coords = [0] * self.e
        if self.e > 1:
            coords[1] = 1
        return PadicScalar(self, tuple(coords), self.N)

    def from_int(self, k: int, prec: int | None = None) -> "PadicScalar":
        n = self.N if prec is None else prec
        coords = [k % self.p ** n] + [0] * (self.e - 1)
        return PadicScalar(self, tuple(coords), n)

    def from_coords(self, coords, prec: int | None = None) -> "PadicScalar":
        n = self.N if prec is None else prec
        pn = self.p ** n
        cs = [int(c) % pn for c in coords]
        cs += [0] * (self.e - len(cs))
        return PadicScalar(self, tuple(cs), n)

    def random_element(self, rng, prec: int | None = None) -> "PadicScalar":
        n = self.N if prec is None else prec
        pn = self.p ** n
        return PadicScalar(self, tuple(rng.randrange(pn) for _ in range(self.e)), n)

    def random_unit(self, rng) -> "PadicScalar":
        while True:
            a = self.random_element(rng)
            if a.valuation() == 0:
                return a

    def to_json(self) -> str:
        return json.dumps(
            {
                "p": self.p,
                "e": self.e,
                "N": self.N,
                "modulus": list(self.modulus),
                "frobenius": [list(col) for col in self.frobenius],
            },
            sort_keys=True,
        )

    @staticmethod
    def from_json(s: str) -> "UnramContext":
        d = json.loads(s)
        return UnramContext(
            d["p"], d["e"], d["N"],
            tuple(d["modulus"]),
            tuple(tuple(col) for col in d["frobenius"]),
        )


class PadicScalar:
    """Element of o_e reduced mod p^prec, immutable."""

    __slots__ = ("ctx", "coords", "prec")

    def __init__(self, ctx: UnramContext, coords: tuple[int, ...], prec: int):
        self.ctx = ctx
        self.coords = coords
        self.prec = prec

    def __repr__(self) -> str:
        return f"PadicScalar({list(self.coords)} mod {self.ctx.p}^{self.prec})"

    def __eq__(self, other) -> bool:
        """Equality at the minimum of the two precisions."""
        if not isinstance(other, PadicScalar):
            return NotImplemented
        if not self.ctx.same_ring(other.ctx):
            return False
        n = min(self.prec, other.prec)
        pn = self.ctx.p ** n
        return all((a - b) % pn == 0 for a, b in zip(self.coords, other.coords))

    def __hash__(self):
        return hash((self.coords, self.prec))

    def key(self) -> tuple:
        return (self.coords, self.prec)

    def at_precision(self, n: int) -> "PadicScalar":
        if n == self.prec:
            return self
        pn = self.ctx.p ** n
        return PadicScalar(self.ctx, tuple(c % pn for c in self.coords), n)

    def is_zero_at_precision(self) -> bool:
        return all(c == 0 for c in self.coords)

    def valuation(self) -> int | None:
        """min_i v_p(coords[i]), or None as the ">= prec" marker."""
        p = self.ctx.p
        best: int | None = None
        for c in self.coords:
            if c == 0:
                continue
            v = 0
            while c % p == 0:
                c //= p
                v += 1
            if best is None or v < best:
                best = v
                if best == 0:
                    return 0
        if best is None or best >= self.prec:
            return None
        return best

    def is_unit(self) -> bool:
        return self.valuation() == 0


def _check_ctx(a: PadicScalar, b: PadicScalar) -> None:
    if not a.ctx.same_ring(b.ctx):
        raise ContextMismatchError(
            f"context mismatch: (p={a.ctx.p}, e={a.ctx.e}) vs (p={b.ctx.p}, e={b.ctx.e})"
        )


def scalar_add(a: PadicScalar, b: PadicScalar) -> PadicScalar:
    _check_ctx(a, b)
    n = min(a.prec, b.prec)
    pn = a.ctx.p ** n
    return PadicScalar(a.ctx, tuple((x + y) % pn for x, y in zip(a.coords, b.coords)), n)


def scalar_sub(a: PadicScalar, b: PadicScalar) -> PadicScalar:
    _check_ctx(a, b)
    n = min(a.prec, b.prec)
    pn = a.ctx.p ** n
    return PadicScalar(a.ctx, tuple((x - y) % pn for x, y in zip(a.coords, b.coords)), n)


def scalar_neg(a: PadicScalar) -> PadicScalar:
    pn = a.ctx.p ** a.prec
    return PadicScalar(a.ctx, tuple((-x) % pn for x in a.coords), a.prec)


def _reduce_poly(prod: list[int], modulus: tuple[int, ...], e: int, pn: int) -> tuple[int, ...]:
    for d in range(len(prod) - 1, e - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for k in range(e):
                prod[d - e + k] = (prod[d - e + k] - c * modulus[k]) % pn
    return tuple(prod[:e]) if len(prod) >= e else tuple(prod + [0] * (e - len(prod)))


def scalar_mul(a: PadicScalar, b: PadicScalar) -> PadicScalar:
    _check_ctx(a, b)
    ctx = a.ctx
    n = min(a.prec, b.prec)
    pn = ctx.p ** n
    e = ctx.e
    if e == 1:
        return PadicScalar(ctx, ((a.coords[0] * b.coords[0]) % pn,), n)
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(a.coords):
        if x:
            for j, y in enumerate(b.coords):
                prod[i + j] += x * y
    return PadicScalar(ctx, _reduce_poly([c % pn for c in prod], ctx.modulus, e, pn), n)


def scalar_mul_int(a: PadicScalar, k: int) -> PadicScalar:
    pn = a.ctx.p ** a.prec
    return PadicScalar(a.ctx, tuple((c * k) % pn for c in a.coords), a.prec)


def scalar_arith(op: str, a: PadicScalar, b: PadicScalar) -> PadicScalar:
    if op == "add":
        return scalar_add(a, b)
    if op == "sub":
        return scalar_sub(a, b)
    if op == "mul":
        return scalar_mul(a, b)
    raise ValueError(f"unknown op {op!r}")


def _residue_inverse(a: PadicScalar) -> PadicScalar:
    """Inverse of the residue of `a` in F_{p^e}, via extended Euclid in F_p[x]."""
    ctx = a.ctx
    p = ctx.p
    if ctx.e == 1:
        return ctx.from_int(pow(a.coords[0] % p, -1, p), 1)

    def polydeg(f):
        for d in range(len(f) - 1, -1, -1):
            if f[d] % p:
                return d
        return -1

    r0 = [c % p for c in ctx.modulus]
    r1 = [c % p for c in a.coords]
    s0, s1 = [0], [1]
    while polydeg(r1) > 0:
        d0, d1 = polydeg(r0), polydeg(r1)
        if d0 < d1:
            r0, r1, s0, s1 = r1, r0, s1, s0
            continue
        lead = (r0[polydeg(r0)] * pow(r1[polydeg(r1)], -1, p)) % p
        shift = polydeg(r0) - polydeg(r1)
        for k in range(len(r1)):
            if r1[k]:
                r0[k + shift] = (r0[k + shift] - lead * r1[k]) % p
        s0 = s0 + [0] * (len(s1) + shift - len(s0))
        for k in range(len(s1)):
            if s1[k]:
                s0[k + shift] = (s0[k + shift] - lead * s1[k]) % p
    d = polydeg(r1)
    if d < 0:
        raise NonUnitError("zero residue has no inverse")
    c_inv = pow(r1[d], -1, p)
    inv = [(c_inv * x) % p for x in s1]
    return ctx.from_coords(inv, 1)


def scalar_inv(a: PadicScalar) -> PadicScalar:
    """Newton lift of the residue-field inverse.  Requires v(a) = 0."""
    if a.valuation() != 0:
        raise NonUnitError("cannot invert: valuation > 0 or zero at precision")
    ctx = a.ctx
    x = _residue_inverse(a)
    n = 1
    two = ctx.from_int(2, a.prec)
    while n < a.prec:
        n = min(2 * n, a.prec)
        xl = x.at_precision(n)
        al = a.at_precision(n)
        x = scalar_mul(xl, scalar_sub(two.at_precision(n), scalar_mul(al, xl)))
    return x.at_precision(a.prec)


def frobenius(a: PadicScalar, k: int = 1) -> PadicScalar:
    """sigma^k(a) via the context's Frobenius matrix."""
    ctx = a.ctx
    if ctx.e == 1:
        return a
    k %= ctx.e
    coords = a.coords
    pn = ctx.p ** a.prec
    for _ in range(k):
        out = [0] * ctx.e
        for j, cj in enumerate(coords):
            if cj:
                col = ctx.frobenius[j]
                for i in range(ctx.e):
                    out[i] += cj * col[i]
        coords = tuple(c % pn for c in out)
    return PadicScalar(ctx, coords, a.prec)


def valuation(a: PadicScalar) -> int | None:
    return a.valuation()


def _lift_root_newton(ctx_nofrob: UnramContext, start: PadicScalar) -> PadicScalar:
    """Root of the modulus congruent to `start` mod p, Hensel-lifted to full precision."""
    mod = ctx_nofrob.modulus
    e = ctx_nofrob.e

    def poly_eval(coeffs, x: PadicScalar) -> PadicScalar:
        acc = ctx_nofrob.zero().at_precision(x.prec)
        for c in reversed(coeffs):
            acc = scalar_add(scalar_mul(acc, x), ctx_nofrob.from_int(c, x.prec))
        return acc

    deriv = [mod[k] * k for k in range(1, e + 1)]
    r = start.at_precision(1)
    n = 1
    while n < ctx_nofrob.N:
        n = min(2 * n, ctx_nofrob.N)
        r = r.at_precision(n)
        fr = poly_eval(mod, r)
        dfr = poly_eval(deriv, r)
        r = scalar_sub(r, scalar_mul(fr, scalar_inv(dfr)))
    return r


def make_context(p: int, e: int, N: int) -> UnramContext:
    """Build the degree-e unramified context at precision N.

    The modulus is the irreducible monic of degree e over F_p with the least
    base-p integer encoding (degenerate case e=1: the polynomial x).  The
    Frobenius matrix is computed by Hensel-lifting the p-power map on the
    residue field.
    """
    if p < 2 or any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"p must be prime, got {p}")
    if e < 1 or N < 1:
        raise ValueError("need e >= 1 and N >= 1")

    if e == 1:
        modulus = (0, 1)  # the polynomial x
        ctx = UnramContext(p, 1, N, modulus, ((1,),))
        return ctx

    modulus = None
    for code in range(p ** e):
        coeffs = []
        c = code
        for _ in range(e):
            coeffs.append(c % p)
            c //= p
        cand = coeffs + [1]
        if _is_irreducible_mod_p(cand, p):
            modulus = tuple(cand)
            break
    assert modulus is not None  # counting argument: irreducibles always exist

    identity_cols = tuple(
        tuple(1 if i == j else 0 for i in range(e)) for j in range(e)
    )
    ctx0 = UnramContext(p, e, N, modulus, identity_cols)

    # sigma(x) is the root of the modulus congruent to x^p mod p
    xbar = ctx0.gen().at_precision(1)
    start = xbar
    for _ in range(p - 1):
        start = scalar_mul(start, xbar)
    root = _lift_root_newton(ctx0, start)

    cols = []
    power = ctx0.one()
    for _ in range(e):
        cols.append(power.coords)
        power = scalar_mul(power, root)
    return UnramContext(p, e, N, modulus, tuple(cols))
