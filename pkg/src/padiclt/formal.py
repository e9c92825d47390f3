"""One-dimensional formal Z_p-modules: Lubin-Tate laws, logarithms, heights,
endomorphism checks, and Drinfeld level structures at desk scale.

Constructions run at an internal working precision N + Dmax (each degree of
the Lubin-Tate induction divides by p*(p^(n-1)-1) exactly once), so the
returned coefficients are exact mod p^N for exact polynomial inputs.
"""

from __future__ import annotations

import math

from .series import (
    IntModRing,
    PrecisionLossError,
    QuotRing,
    TruncSeries,
    compose_univariate,
    reduce_mod_p,
    series_const,
    series_from_int_coeffs,
    series_var,
    substitute_two,
)


class NotFrobeniusPolyError(ValueError):
    """Input fails f = pX mod deg 2 or f = X^(p^j) mod p."""


class InconclusiveError(ValueError):
    """Truncation bound too small to decide the height."""


class WrongCardinalityError(ValueError):
    """Level structure handed the wrong number of points."""


def _binom_int(a: int, n: int) -> int:
    """C(a, n) for any integer a (integral for all n >= 0)."""
    if n == 0:
        return 1
    if a >= 0:
        return math.comb(a, n) if a >= n else (math.comb(a, n) if a >= 0 else 0)
    return (-1) ** n * math.comb(n - a - 1, n)


class FormalModule:
    """A commutative formal group law F with Z_p-multiplications [a].

    `F` is public at precision N; `_F_work` keeps the working-precision copy
    used to generate multiplication series without precision loss.  The
    cache of [a]-series is filled on demand (single-threaded builds; callers
    sharing a module across threads should pre-warm the cache).
    """

    def __init__(self, p: int, ring: IntModRing, F: TruncSeries, dmax: int,
                 mult_builder, frobenius_poly: dict[int, int] | None = None,
                 work_data=None):
        self.p = p
        self.ring = ring
        self.F = F
        self.dmax = dmax
        self._mult_builder = mult_builder
        self.frobenius_poly = frobenius_poly
        self._work = work_data  # (work_ring, F_work) or None
        self._mult_cache: dict[int, TruncSeries] = {}

    def mult(self, a: int) -> TruncSeries:
        """[a]_F(X) truncated to Dmax, at the module's public precision."""
        if a not in self._mult_cache:
            self._mult_cache[a] = self._mult_builder(a)
        return self._mult_cache[a]

    def work_series(self) -> tuple[IntModRing, TruncSeries]:
        if self._work is not None:
            return self._work
        return self.ring, self.F

    def reduce(self, target_ring=None) -> "FormalModule":
        """The reduction mod p (optionally into F_{p^e} via an UnramRing)."""
        new_ring = target_ring or IntModRing(self.p, 1)
        Fbar = reduce_mod_p(self.F, new_ring)

        def builder(a: int) -> TruncSeries:
            return reduce_mod_p(self.mult(a), new_ring)

        return FormalModule(self.p, new_ring, Fbar, self.dmax, builder)


def _xy_linear(ring, dmax: int) -> TruncSeries:
    return TruncSeries(ring, 2, dmax, {(1, 0): ring.one(), (0, 1): ring.one()})


def _lt_correction_step(f_series: TruncSeries, cur: TruncSeries, n: int,
                        two_var: bool, ring: IntModRing) -> TruncSeries:
    """Degree-n correction of the Lubin-Tate induction.

    For the group law (two_var): E = f(G) - G(f(X), f(Y)); for a
    multiplication series: E = f(G) - G(f(X)).  The degree-n part of E is
    divisible by p and the correction is E_n / (p^n - p).
    """
    if two_var:
        fX = TruncSeries(ring, 2, cur.dmax,
                         {(e[0], 0): c for e, c in f_series.terms.items()})
        fY = TruncSeries(ring, 2, cur.dmax,
                         {(0, e[0]): c for e, c in f_series.terms.items()})
        err = compose_univariate(f_series, cur).sub(substitute_two(cur, fX, fY))
    else:
        err = compose_univariate(f_series, cur).sub(compose_univariate(cur, f_series))
    en = {e: c for e, c in err.terms.items() if sum(e) == n}
    if not en:
        return TruncSeries(ring, cur.nvars, cur.dmax)
    denom = ring.p ** n - ring.p
    corr = {e: ring.divexact_int(c, denom) for e, c in en.items()}
    return TruncSeries(ring, cur.nvars, cur.dmax, corr)


def _check_frobenius_poly(p: int, f_coeffs: dict[int, int]) -> int:
    """Validate f = pX mod deg 2 and f = X^(p^j) mod p; return q = p^j."""
    if f_coeffs.get(0, 0) != 0 or f_coeffs.get(1, 0) != p:
        raise NotFrobeniusPolyError("need f(X) = pX mod deg 2")
    residue = {e: c % p for e, c in f_coeffs.items() if c % p}
    if len(residue) != 1:
        raise NotFrobeniusPolyError("need f(X) = X^(p^j) mod p")
    (exp, c), = residue.items()
    j = 0
    q = exp
    while q % p == 0:
        q //= p
        j += 1
    if q != 1 or j < 1 or c % p != 1:
        raise NotFrobeniusPolyError("need f(X) = X^(p^j) mod p with unit coefficient 1")
    return exp


def lt_construct(p: int, f_coeffs: dict[int, int], dmax: int, N: int = 8) -> FormalModule:
    """The unique formal group law with F = X+Y mod deg 2 commuting with f.

    Built degree by degree (the induction solving E_n/(p^n - p)); the input
    polynomial is taken with exact integer coefficients.  [p]_F equals f.
    """
    _check_frobenius_poly(p, f_coeffs)
    work = IntModRing(p, N + dmax)
    f_work = series_from_int_coeffs(work, f_coeffs, dmax)

    F = _xy_linear(work, dmax)
    for n in range(2, dmax + 1):
        F = F.add(_lt_correction_step(f_work, F, n, True, work))

    public = IntModRing(p, N)
    F_pub = F.map_coefficients(public.from_int, public)

    def builder(a: int) -> TruncSeries:
        if a == p:
            return f_work.map_coefficients(public.from_int, public)
        cur = TruncSeries(work, 1, dmax, {(1,): work.from_int(a)})
        for n in range(2, dmax + 1):
            cur = cur.add(_lt_correction_step(f_work, cur, n, False, work))
        return cur.map_coefficients(public.from_int, public)

    return FormalModule(p, public, F_pub, dmax, builder,
                        frobenius_poly=dict(f_coeffs), work_data=(work, F))


def gm_module(p: int, dmax: int, N: int = 8) -> FormalModule:
    """The multiplicative module: F = X+Y+XY, [a] = sum C(a,n) X^n."""
    ring = IntModRing(p, N)
    work = IntModRing(p, N + dmax)
    F_terms = {(1, 0): 1, (0, 1): 1, (1, 1): 1}
    F = TruncSeries(ring, 2, dmax, F_terms)
    F_work = TruncSeries(work, 2, dmax, F_terms)

    def builder(a: int) -> TruncSeries:
        return TruncSeries(ring, 1, dmax,
                           {(n,): ring.from_int(_binom_int(a, n))
                            for n in range(1, dmax + 1)})

    fp = {n: _binom_int(p, n) for n in range(1, p + 1)}
    return FormalModule(p, ring, F, dmax, builder, frobenius_poly=fp,
                        work_data=(work, F_work))


def ga_module(p: int, dmax: int, N: int = 8) -> FormalModule:
    """The additive module: F = X+Y, [a] = aX."""
    ring = IntModRing(p, N)
    work = IntModRing(p, N + dmax)

    def builder(a: int) -> TruncSeries:
        return TruncSeries(ring, 1, dmax, {(1,): ring.from_int(a)})

    return FormalModule(p, ring, _xy_linear(ring, dmax), dmax, builder,
                        frobenius_poly={1: p},
                        work_data=(work, _xy_linear(work, dmax)))


class Logarithm:
    """p^(-denom_exp) * numerator, the isomorphism to G_a over Q_p."""

    __slots__ = ("numerator", "denom_exp")

    def __init__(self, numerator: TruncSeries, denom_exp: int):
        self.numerator = numerator
        self.denom_exp = denom_exp

    def to_json(self) -> dict:
        d = self.numerator.to_json()
        d["denominator_exponent"] = self.denom_exp
        return d


def logarithm(module: FormalModule) -> Logarithm:
    """The unique phi = X mod deg 2 with d phi = F_X(0,X)^(-1) dX.

    Returned as a scaled numerator (denominator exponent max v_p(n), n up
    to Dmax) because the coefficients genuinely live in Q_p.  Raises
    PrecisionLossError if the module lacks the working margin to pay for
    the integration denominators.
    """
    ring, F = module.work_series()
    p, dmax = module.p, module.dmax
    d = 0
    n = 1
    while p ** (d + 1) <= dmax:
        d += 1
    margin = ring.N - module.ring.N
    if margin < d:
        raise PrecisionLossError(
            f"needs {d} spare digits for denominators; first exhausted at degree {p ** (margin + 1)}"
        )

    # psi = F_X(0, X); F = X + Y + ... so psi has constant term 1
    psi = TruncSeries(ring, 1, dmax,
                      {(e[1],): ring.mul_int(c, e[0])
                       for e, c in F.terms.items() if e[0] == 1})
    one = series_const(ring, 1, dmax, ring.one())
    eps = one.sub(psi)
    inv = series_const(ring, 1, dmax, ring.one())
    pw = one
    for _ in range(dmax):
        pw = pw.mul(eps)
        if pw.is_zero():
            break
        inv = inv.add(pw)

    # numerator of p^d * integral: coefficient of X^(n+1) is (p^d/(n+1)) c_n
    num_terms = {}
    for (n,), c in inv.terms.items():
        k = n + 1
        if k > dmax:
            continue
        v = 0
        u = k
        while u % p == 0:
            u //= p
            v += 1
        scaled = ring.mul_int(ring.mul(c, ring.inv_unit(ring.from_int(u))), p ** (d - v))
        num_terms[(k,)] = scaled
    num_work = TruncSeries(ring, 1, dmax, num_terms)
    public = module.ring
    return Logarithm(num_work.map_coefficients(public.from_int, public), d)


def height(module: FormalModule) -> int | float:
    """Height of a module over F_{p^e}: [p] = g(X^(q^h)) with g'(0) != 0.

    Returns math.inf when [p] vanishes up to Dmax (conclusive only relative
    to the truncation bound); raises InconclusiveError when Dmax < q or the
    lowest surviving exponent is not a q-power.
    """
    q = module.p
    if module.dmax < q:
        raise InconclusiveError(f"Dmax = {module.dmax} < q = {q} cannot see height 1")
    mp = module.mult(module.p)
    if mp.is_zero():
        return math.inf
    e0 = min(e[0] for e in mp.terms)
    h = 0
    r = e0
    while r % q == 0:
        r //= q
        h += 1
    if r != 1 or h < 1:
        raise InconclusiveError(f"lowest exponent {e0} of [p] is not a positive q-power")
    return h


def check_endomorphism(phi: TruncSeries, module: FormalModule,
                       sample_mults=(2, 3)) -> bool:
    """phi(F(X,Y)) = F(phi X, phi Y) and phi [a] = [a] phi for sampled a."""
    ring = module.ring
    if not ring.is_zero(phi.constant_term()):
        raise ValueError("endomorphisms must fix 0")
    F = module.F
    lhs = compose_univariate(phi, F)
    phiX = TruncSeries(ring, 2, F.dmax, {(e[0], 0): c for e, c in phi.terms.items()})
    phiY = TruncSeries(ring, 2, F.dmax, {(0, e[0]): c for e, c in phi.terms.items()})
    rhs = substitute_two(F, phiX, phiY)
    if not lhs.eq(rhs):
        return False
    for a in sample_mults:
        ma = module.mult(a)
        if not compose_univariate(phi, ma).eq(compose_univariate(ma, phi)):
            return False
    return True


def frobenius_power_series(module: FormalModule, power: int = 1) -> TruncSeries:
    """X^(q^power) over the module's ring (q = p)."""
    exp = module.p ** power
    ring = module.ring
    if exp > module.dmax:
        raise InconclusiveError(f"X^{exp} exceeds Dmax = {module.dmax}")
    return TruncSeries(ring, 1, module.dmax, {(exp,): ring.one()})


def torsion_polynomial(module: FormalModule, m: int) -> dict[int, int]:
    """[p^m](X) as an exact integer polynomial (the m-fold composite of f)."""
    if module.frobenius_poly is None:
        raise ValueError("module has no exact [p] polynomial")
    cur = {1: 1}
    for _ in range(m):
        cur = _poly_compose_int(cur, module.frobenius_poly)
    return cur


def _poly_mul_int(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _poly_compose_int(outer: dict[int, int], inner: dict[int, int]) -> dict[int, int]:
    deg = max(outer, default=0)
    acc: dict[int, int] = {}
    for d in range(deg, -1, -1):
        acc = _poly_mul_int(acc, inner) if acc else {}
        c = outer.get(d, 0)
        if c:
            acc[0] = acc.get(0, 0) + c
            if acc[0] == 0:
                del acc[0]
    return acc


def eval_series_in_quot(series: TruncSeries, x, ring: QuotRing):
    """Horner evaluation of a one-variable series at a quotient-ring element."""
    deg = max((e[0] for e in series.terms), default=0)
    acc = ring.zero()
    for d in range(deg, 0, -1):
        acc = ring.mul(acc, x)
        c = series.coeff((d,))
        acc = ring.add(acc, (c if isinstance(c, tuple) else ring.from_int(c)))
    acc = ring.mul(acc, x)
    c0 = series.coeff((0,))
    return ring.add(acc, c0 if isinstance(c0, tuple) else ring.from_int(c0))


def eval_two_var_in_quot(series: TruncSeries, x, y, ring: QuotRing):
    dx = max((e[0] for e in series.terms), default=0)
    dy = max((e[1] for e in series.terms), default=0)
    xp = [ring.one()]
    for _ in range(dx):
        xp.append(ring.mul(xp[-1], x))
    yp = [ring.one()]
    for _ in range(dy):
        yp.append(ring.mul(yp[-1], y))
    acc = ring.zero()
    for (i, j), c in series.terms.items():
        term = ring.mul(xp[i], yp[j])
        acc = ring.add(acc, ring.mul_int(term, c) if isinstance(c, int) else ring.mul(term, c))
    return acc


def make_level_points(module: FormalModule, ring: QuotRing, m: int) -> list:
    """phi(a/p^m) := [a]_F(xbar) of the tautological root, a = 0..p^m-1."""
    xbar = ring.gen()
    pts = []
    for a in range(module.p ** m):
        if a == 0:
            pts.append(ring.zero())
        else:
            pts.append(eval_series_in_quot(module.mult(a), xbar, ring))
    return pts


def _polyring_divmod(dividend: list, divisor: list, ring: QuotRing):
    """Long division in R[T] for a monic divisor; returns (quotient, remainder)."""
    rem = list(dividend)
    dd, dv = len(rem) - 1, len(divisor) - 1
    quot = [ring.zero()] * max(dd - dv + 1, 0)
    for k in range(dd - dv, -1, -1):
        c = rem[k + dv]
        if ring.is_zero(c):
            continue
        quot[k] = c
        for j in range(dv + 1):
            rem[k + j] = ring.sub(rem[k + j], ring.mul(c, divisor[j]))
    while len(rem) > 1 and ring.is_zero(rem[-1]):
        rem.pop()
    return quot, rem


def level_structure_check(module: FormalModule, points: list, m: int,
                          ring: QuotRing) -> bool:
    """Drinfeld condition at desk scale (h = 1): the product of (T - phi(a))
    over a in p^(-m)Z/Z divides [p^m](T) in R[T], and phi is additive for
    the group law.
    """
    pm = module.p ** m
    if len(points) != pm:
        raise WrongCardinalityError(f"expected {pm} points, got {len(points)}")
    if m == 0:
        return ring.is_zero(points[0])

    # additivity: phi(a + b) = F(phi(a), phi(b))
    for a in range(pm):
        for b in range(pm):
            lhs = points[(a + b) % pm]
            rhs = eval_two_var_in_quot(module.F, points[a], points[b], ring)
            if not ring.eq(lhs, rhs):
                return False

    # divisibility: prod (T - phi(a)) | [p^m](T)
    prod = [ring.one()]
    for a in range(pm):
        neg = ring.neg(points[a])
        prod = [ring.zero()] + prod
        for k in range(len(prod) - 1):
            prod[k] = ring.add(prod[k], ring.mul(prod[k + 1], neg))
    torsion = torsion_polynomial(module, m)
    deg = max(torsion)
    dividend = [ring.from_int(torsion.get(k, 0)) for k in range(deg + 1)]
    _, rem = _polyring_divmod(dividend, prod, ring)
    return len(rem) == 1 and ring.is_zero(rem[0])
