"""Exact rational numerics: intervals, certified products, family evaluators.

Everything here computes with exact rationals; "numeric" only means the
symbols have been bound to rational values.  Infinite objects come back as
intervals whose error terms follow from elementary estimates:

  * product remainders:  |prod_{k>=K}(1 - a q^k) - 1| <= u/(1-u)
    with u = |a| q^K / (1-q) < 1   (since e^u <= 1/(1-u));
  * geometric tails with exact closed forms for sum (d+1)^p rho^d, p <= 2.

The family evaluators sum the defining formulas literally (with the
(q;q)_{n-k} reading, see qident.families) and therefore give a route into
every polynomial family that is independent of the symbolic constructors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .algebra import Q
from .errors import DivisionByZero, TailNotBounded


def _q(v) -> "Q":
    return v if isinstance(v, int) else Q(v)


@dataclass(frozen=True)
class RatInterval:
    lo: "Q"
    hi: "Q"

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("interval endpoints out of order")

    @staticmethod
    def point(v) -> "RatInterval":
        v = Q(v)
        return RatInterval(v, v)

    @staticmethod
    def center(c, r) -> "RatInterval":
        c, r = Q(c), Q(r)
        return RatInterval(c - r, c + r)

    def __add__(self, other):
        return RatInterval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other):
        return RatInterval(self.lo - other.hi, self.hi - other.lo)

    def __neg__(self):
        return RatInterval(-self.hi, -self.lo)

    def __mul__(self, other):
        cands = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return RatInterval(min(cands), max(cands))

    def recip(self):
        if self.lo <= 0 <= self.hi:
            raise DivisionByZero("interval reciprocal across zero")
        return RatInterval(1 / self.hi, 1 / self.lo)

    def mid(self):
        return (self.lo + self.hi) / 2

    def half(self):
        return (self.hi - self.lo) / 2

    def abs_max(self):
        return max(abs(self.lo), abs(self.hi))


# ---------------------------------------------------------------------------
# certified infinite products and Euler-type sums


def qpoch_finite_num(a, qv, n: int):
    a, qv = _q(a), _q(qv)
    out = Q(1)
    if n >= 0:
        for k in range(n):
            out *= 1 - a * qv ** k
        return out
    for k in range(-n):
        f = 1 - a * qv ** (n + k)
        if f == 0:
            raise DivisionByZero("negative pochhammer index hit a zero factor")
        out /= f
    return out


def qpoch_inf_interval(a, qv, eps) -> RatInterval:
    """(a;q)_oo as an interval of absolute width <= 2*eps."""
    a, qv, eps = _q(a), _q(qv), _q(eps)
    if not (0 < qv < 1):
        raise ValueError("need 0 < q < 1")
    partial = Q(1)
    K = 0
    step = 16
    while True:
        for _ in range(step):
            partial *= 1 - a * qv ** K
            K += 1
        u = abs(a) * qv ** K / (1 - qv)
        if u < 1:
            r = u / (1 - u)
            err = abs(partial) * r
            if err <= eps:
                return RatInterval.center(partial, err)
        if K > 4096:
            raise TailNotBounded("infinite product would not certify")
        step *= 2


def euler_sum_upper(w, qv):
    """Upper bound for sum_k w^k/(q;q)_k, needs 0 <= w < 1."""
    w, qv = _q(w), _q(qv)
    if not 0 <= w < 1:
        raise ValueError("euler_sum_upper needs 0 <= w < 1")
    total = Q(1)
    term = Q(1)
    k = 0
    while True:
        k += 1
        term *= w / (1 - qv ** k)
        total += term
        r = w / (1 - qv ** (k + 1))
        if r < 1 and k >= 8:
            return total + term * r / (1 - r)
        if k > 2048:
            raise TailNotBounded("euler sum upper bound did not certify")


def poch_abs_upper(c, qv):
    """Upper bound for prod_{j>=0} (1 + |c| q^j)."""
    c, qv = abs(_q(c)), _q(qv)
    out = Q(1)
    K = 32
    for j in range(K):
        out *= 1 + c * qv ** j
    u = c * qv ** K / (1 - qv)
    if u >= 1:
        raise TailNotBounded("product bound needs smaller base")
    return out / (1 - u)


def qfac_inf_lower(qv):
    """Lower bound for (q;q)_oo (positive for 0<q<1)."""
    iv = qpoch_inf_interval(qv, qv, Q(1, 10 ** 8))
    if iv.lo <= 0:
        raise TailNotBounded("(q;q)_oo lower bound not positive")
    return iv.lo


# exact tails of sum_{d>D} (d+1)^p rho^d for p = 0,1,2


def geom_tail(rho, D: int):
    rho = _q(rho)
    if not 0 <= rho < 1:
        raise ValueError("geometric tail needs 0 <= rho < 1")
    return rho ** (D + 1) / (1 - rho)


def geom_tail_linear(rho, D: int):
    rho = _q(rho)
    if not 0 <= rho < 1:
        raise ValueError("geometric tail needs 0 <= rho < 1")
    return rho ** (D + 1) * ((D + 2) / (1 - rho) + rho / (1 - rho) ** 2)


def geom_tail_quadratic(rho, D: int):
    rho = _q(rho)
    if not 0 <= rho < 1:
        raise ValueError("geometric tail needs 0 <= rho < 1")
    one = 1 - rho
    return rho ** (D + 1) * (
        (D + 2) ** 2 / one
        + 2 * (D + 2) * rho / one ** 2
        + rho * (1 + rho) / one ** 3
    )


def geom_tail_cubic(rho, D: int):
    """Exact sum_{d>D} (d+1)^3 rho^d via sum_j (D+2+j)^3 rho^j."""
    rho = _q(rho)
    if not 0 <= rho < 1:
        raise ValueError("geometric tail needs 0 <= rho < 1")
    one = 1 - rho
    c = D + 2
    s1 = rho / one ** 2
    s2 = rho * (1 + rho) / one ** 3
    s3 = rho * (1 + 4 * rho + rho ** 2) / one ** 4
    return rho ** (D + 1) * (c ** 3 / one + 3 * c ** 2 * s1 + 3 * c * s2 + s3)


def prodratio_coeff_bounds(anum, bden, qv):
    """Geometric envelope (M, rho) for the coefficients of (az;q)_oo/(bz;q)_oo.

    The coefficients obey g_0 = 1, g_i (1-q^i) = (b - a q^{i-1}) g_{i-1}, so
    |g_i/g_{i-1}| <= (|b| + |a| q^{i-1})/(1-q^i), which decreases in i toward
    |b|.  rho sits a little above that limit (and may exceed 1 when |b| >= 1;
    callers decide what ratio they can absorb).  Exact rationals with
    |g_i| <= M rho^i for every i >= 0.
    """
    a, b, qv = _q(anum), _q(bden), _q(qv)
    target = abs(b) + max(abs(b), Q(1)) / 32
    j = 1
    while (abs(b) + abs(a) * qv ** (j - 1)) / (1 - qv ** j) > target:
        j += 1
        if j > 512:
            raise TailNotBounded("coefficient envelope did not settle")
    j0 = j + 8
    rho = (abs(b) + abs(a) * qv ** (j0 - 1)) / (1 - qv ** j0)
    if rho == 0:
        return Q(1), Q(0)
    g = Q(1)
    M = Q(1)
    for i in range(1, j0 + 1):
        g *= (b - a * qv ** (i - 1)) / (1 - qv ** i)
        M = max(M, abs(g) / rho ** i)
    return M, rho


def conv_family_bound(qv, abase, b, first, second):
    """Geometric envelope (M, rho) with |FAM_D| <= M (D+1) rho^D.

    FAM_D/(q;q)_D is the convolution of beta_j = (-1)^j q^C(j,2) [abase j] b^j
    (ratio b(abase - q^{j-1})/(1-q^j)) with sigma_m = p_m(first, second)/(q;q)_m
    (ratio (first - second q^{m-1})/(1-q^m)); both ratios follow from the
    product definitions, so the bound is independent of any series identity.
    """
    qv = _q(qv)
    b, abase, first, second = _q(b), _q(abase), _q(first), _q(second)
    if b == 0:
        Mb, rb = Q(1), Q(0)  # beta_j vanishes for j >= 1
    else:
        j = 1
        while abs(b) * (abs(abase) + qv ** (j - 1)) / (1 - qv ** j) >= 1:
            j += 1
            if j > 256:
                raise TailNotBounded("family binomial envelope stuck above 1")
        j0 = j + 24
        rb = abs(b) * (abs(abase) + qv ** (j0 - 1)) / (1 - qv ** j0)
        beta = Q(1)
        Mb = Q(1)
        for i in range(1, j0 + 1):
            beta *= b * (abase - qv ** (i - 1)) / (1 - qv ** i)
            Mb = max(Mb, abs(beta) / rb ** i if rb else abs(beta))
    m = 1
    while (abs(first) + abs(second) * qv ** (m - 1)) / (1 - qv ** m) >= 1:
        m += 1
        if m > 256:
            raise TailNotBounded("family cauchy envelope stuck above 1")
    m0 = m + 24
    rs = (abs(first) + abs(second) * qv ** (m0 - 1)) / (1 - qv ** m0)
    sig = Q(1)
    Ms = Q(1)
    for i in range(1, m0 + 1):
        sig *= (first - second * qv ** (i - 1)) / (1 - qv ** i)
        Ms = max(Ms, abs(sig) / rs ** i if rs else abs(sig))
    rho = max(rb, rs)
    if rho >= 1:
        raise TailNotBounded("family envelope ratio not below 1")
    return Mb * Ms, rho


def empirical_tail(abs_terms: Sequence, window: int = 10, rho_cap=Q(3, 4)):
    """Geometric tail from an observed ratio window; None when not certified.

    The last `window` consecutive term ratios must all be <= rho_cap; the
    returned bound inflates the worst observed ratio halfway to 1.  This is
    an empirical certificate (the true terms could in principle misbehave
    beyond the window), used only where no a-priori bound is derivable.
    """
    if len(abs_terms) < window + 1:
        return None
    tail_terms = abs_terms[-(window + 1):]
    worst = Q(0)
    for prev, cur in zip(tail_terms, tail_terms[1:]):
        if prev == 0:
            return Q(0) if all(t == 0 for t in tail_terms) else None
        ratio = cur / prev
        if ratio > rho_cap:
            return None
        worst = max(worst, ratio)
    rho = (1 + worst) / 2
    return abs_terms[-1] * rho / (1 - rho)


# ---------------------------------------------------------------------------
# numeric family evaluators (literal definition sums)


class NumContext:
    """Caches powers of q and (q;q)_n values for one rational q."""

    def __init__(self, qv):
        self.q = _q(qv)
        self._qq = [Q(1)]
        self._qpow = {0: Q(1), 1: self.q}

    def qpow(self, j: int):
        hit = self._qpow.get(j)
        if hit is None:
            hit = self.q ** j
            self._qpow[j] = hit
        return hit

    def qq(self, n: int):
        while len(self._qq) <= n:
            k = len(self._qq)
            self._qq.append(self._qq[-1] * (1 - self.qpow(k)))
        return self._qq[n]


def binom2(n: int) -> int:
    return n * (n - 1) // 2


def qbinom_gen_num(ctx: NumContext, abase, k: int):
    """[.. k]_q with binomial base q^{..} bound to the rational abase."""
    out = Q(1)
    for j in range(k):
        out *= abase - ctx.qpow(j)
    return out * (-1) ** k / (ctx.qpow(binom2(k)) * ctx.qq(k))


def qbinom_int_num(ctx: NumContext, n: int, k: int):
    if k < 0 or k > n:
        return Q(0)
    return ctx.qq(n) / (ctx.qq(k) * ctx.qq(n - k))


def cauchy_p_num(ctx: NumContext, x, y, n: int):
    out = Q(1)
    for j in range(n):
        out *= x - ctx.qpow(j) * y
    return out


def cigler_C3_num(ctx: NumContext, A, x, y, b, n: int):
    total = Q(0)
    for k in range(n + 1):
        term = (-1) ** k * ctx.qpow(binom2(k)) * qbinom_gen_num(ctx, A, k)
        term *= b ** k * ctx.qq(n) / ctx.qq(n - k)
        total += term * cauchy_p_num(ctx, x, y, n - k)
    return total


def cigler_D3_num(ctx: NumContext, A, x, y, b, n: int):
    total = Q(0)
    for k in range(n + 1):
        term = ctx.qpow(binom2(k)) * qbinom_gen_num(ctx, A, k)
        term *= b ** k * ctx.qq(n) / ctx.qq(n - k)
        term *= (-1) ** (n + k) / ctx.qpow(binom2(n))
        total += term * cauchy_p_num(ctx, y, x, n - k)
    return total


def caoniu_C_num(ctx: NumContext, abase, x, b, n: int):
    """Bivariate C_n; abase is the binomial base (A q^n for superscript alpha)."""
    total = Q(0)
    for k in range(n + 1):
        term = (-1) ** k * ctx.qpow(binom2(k)) * qbinom_gen_num(ctx, abase, k)
        term *= b ** k * ctx.qq(n) / ctx.qq(n - k)
        total += term * x ** (n - k)
    return total


def caoniu_D_num(ctx: NumContext, abase, x, b, n: int):
    total = Q(0)
    for k in range(n + 1):
        term = qbinom_gen_num(ctx, abase, k) * b ** k * ctx.qq(n) / ctx.qq(n - k)
        e = k * k - n * k
        term *= ctx.qpow(e) if e >= 0 else 1 / ctx.qpow(-e)
        total += term * x ** (n - k)
    return total


def hahn_phi_num(ctx: NumContext, a, x, n: int):
    total = Q(0)
    poch = Q(1)
    for k in range(n + 1):
        if k:
            poch *= 1 - a * ctx.qpow(k - 1)
        total += qbinom_int_num(ctx, n, k) * poch * x ** k
    return total


def hahn_psi_num(ctx: NumContext, a, x, n: int):
    total = Q(0)
    for k in range(n + 1):
        poch = Q(1)
        for j in range(k):
            e = 1 - k + j
            poch *= 1 - a * (ctx.qpow(e) if e >= 0 else 1 / ctx.qpow(-e))
        e = k * (k - n)
        tw = ctx.qpow(e) if e >= 0 else 1 / ctx.qpow(-e)
        total += qbinom_int_num(ctx, n, k) * tw * poch * x ** k
    return total


def qlaguerre_L_num(ctx: NumContext, A, x, n: int):
    pref = Q(1)
    for j in range(n):
        pref *= 1 - A * ctx.qpow(1 + j)
    pref /= ctx.qq(n)
    total = Q(0)
    for k in range(n + 1):
        num = ctx.qpow(binom2(k)) * qpoch_finite_num(1 / ctx.qpow(n), ctx.q, k)
        den = qpoch_finite_num(A * ctx.q, ctx.q, k) * ctx.qq(k)
        total += num / den * (x * A * ctx.qpow(n + 1)) ** k
    return pref * total


def cigler_l_num(ctx: NumContext, A, x, n: int):
    total = Q(0)
    for k in range(n + 1):
        term = qbinom_gen_num(ctx, A * ctx.qpow(n), n - k)
        term *= ctx.qq(n) / ctx.qq(k)
        term *= (-1) ** k * ctx.qpow(binom2(n - k))
        total += term * x ** (n - k)
    return total / (ctx.qpow(n * n) * A ** n)
