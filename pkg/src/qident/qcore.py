"""q-Pochhammer products, q-binomial coefficients, basic hypergeometric sums.

Conventions used throughout:

  (a;q)_n      = prod_{k=0}^{n-1} (1 - a q^k),   (a;q)_0 = 1
  (a;q)_{-n}   = 1 / (a q^{-n}; q)_n
  (a;q)_oo     = sum_k (-1)^k q^C(k,2) a^k / (q;q)_k          (Euler)
  1/(a;q)_oo   = sum_k a^k / (q;q)_k                          (Euler)
  [n k]_q      = Gaussian binomial (polynomial in q)
  [alpha k]_q  = prod_{j<k} (A - q^j) * (-1)^k q^{-C(k,2)} / (q;q)_k, A = q^alpha

A real exponent alpha never appears directly: the invertible symbol A (or B)
stands for q^alpha, so every shifted exponent q^{alpha+m} is the monomial
A*q^m and all arithmetic stays in the Laurent polynomial ring.

The series-valued functions return TruncSeries whose coefficients share one
(q;q)_N denominator object, which keeps coefficient addition on the fast
same-denominator path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .algebra import (
    DEFAULT_REGISTRY,
    MultiPoly,
    Q,
    RatFunc,
    SymbolRegistry,
    TruncSeries,
    qnum,
)
from .errors import (
    DivisionByZero,
    MissingExpansionVar,
    NotFormallySummable,
    TailNotBounded,
)


def binom2(n: int) -> int:
    """C(n, 2), valid for any integer n."""
    return n * (n - 1) // 2


def mono_rf(reg: SymbolRegistry, coeff, exps: dict) -> RatFunc:
    """Monomial as RatFunc with denominator 1 (negative exps on q/A/B fine)."""
    return RatFunc(MultiPoly.monomial(reg, coeff, exps), reg.one_poly)


# ---------------------------------------------------------------------------
# finite products


def qpoch_finite(reg: SymbolRegistry, a: RatFunc, n: int) -> RatFunc:
    """(a;q)_n for any integer n."""
    if n == 0:
        return reg.one_ratfunc
    if n < 0:
        shifted = a * mono_rf(reg, 1, {"q": n})
        return reg.one_ratfunc / qpoch_finite(reg, shifted, -n)
    out = reg.one_ratfunc
    for k in range(n):
        out = out * (reg.one_ratfunc - a * mono_rf(reg, 1, {"q": k}))
    return out


def qpoch_finite_poly(reg: SymbolRegistry, coeff, exps: dict, n: int) -> MultiPoly:
    """(m;q)_n where m = coeff * monomial(exps); stays a polynomial (n >= 0)."""
    if n < 0:
        raise ValueError("qpoch_finite_poly needs n >= 0")
    out = reg.one_poly
    for k in range(n):
        e = dict(exps)
        e["q"] = e.get("q", 0) + k
        out = out - out.mul_monomial(qnum(coeff), e)
    return out


# ---------------------------------------------------------------------------
# shared-denominator (q;q) tables

_QQ_CACHE: dict = {}


def qq_table(reg: SymbolRegistry, N: int):
    """Return (den, R) with den = (q;q)_N and R[k] = (q^{k+1};q)_{N-k}.

    den is R[0]; all series built at order N divide by this one object so
    coefficient sums stay on the shared-denominator fast path.
    """
    key = (id(reg), N)
    hit = _QQ_CACHE.get(key)
    if hit is not None:
        return hit
    R = [reg.one_poly] * (N + 1)
    for k in range(N - 1, -1, -1):
        f = reg.one_poly - MultiPoly.monomial(reg, 1, {"q": k + 1})
        R[k] = f * R[k + 1]
    result = (R[0], R)
    _QQ_CACHE[key] = result
    return result


def qfac_poly(reg: SymbolRegistry, n: int) -> MultiPoly:
    """(q;q)_n as a MultiPoly."""
    den, _ = qq_table(reg, n)
    return den


# ---------------------------------------------------------------------------
# infinite products as truncated series


def qpoch_infinite(
    reg: SymbolRegistry,
    coeff: RatFunc,
    var: Optional[str],
    order: int,
    power: int = 1,
) -> TruncSeries:
    """(coeff * var**power; q)_oo as a TruncSeries in var."""
    if var is None:
        raise MissingExpansionVar("infinite product needs an expansion variable")
    if power < 1:
        raise ValueError("power must be >= 1")
    K = order // power
    den, R = qq_table(reg, K)
    shared = coeff.den.is_one()
    cnum = coeff.num
    coeffs = {}
    cpow = reg.one_poly
    dpow = reg.one_poly
    for k in range(K + 1):
        if k:
            cpow = cpow * cnum
            if not shared:
                dpow = dpow * coeff.den
        if cpow.is_zero():
            break
        num = (R[k] * cpow).mul_monomial((-1) ** k, {"q": binom2(k)})
        d = den if shared else den * dpow
        coeffs[(k * power,)] = RatFunc(num, d)
    return TruncSeries(reg, (var,), order, coeffs)


def qpoch_infinite_recip(
    reg: SymbolRegistry,
    coeff: RatFunc,
    var: Optional[str],
    order: int,
    power: int = 1,
) -> TruncSeries:
    """1 / (coeff * var**power; q)_oo via the Euler expansion."""
    if var is None:
        raise MissingExpansionVar("infinite product needs an expansion variable")
    if power < 1:
        raise ValueError("power must be >= 1")
    K = order // power
    den, R = qq_table(reg, K)
    shared = coeff.den.is_one()
    cnum = coeff.num
    coeffs = {}
    cpow = reg.one_poly
    dpow = reg.one_poly
    for k in range(K + 1):
        if k:
            cpow = cpow * cnum
            if not shared:
                dpow = dpow * coeff.den
        if cpow.is_zero():
            break
        d = den if shared else den * dpow
        coeffs[(k * power,)] = RatFunc(R[k] * cpow, d)
    return TruncSeries(reg, (var,), order, coeffs)


def qpoch_real_exponent(
    reg: SymbolRegistry,
    coeff: RatFunc,
    var: Optional[str],
    order: int,
    apow: RatFunc,
) -> TruncSeries:
    """(u;q)_alpha = (u;q)_oo / (q^alpha u;q)_oo with u = coeff*var, apow = q^alpha."""
    top = qpoch_infinite(reg, coeff, var, order)
    bottom = qpoch_infinite_recip(reg, coeff * apow, var, order)
    return top * bottom


# ---------------------------------------------------------------------------
# q-binomial coefficients


def qbinom_int(reg: SymbolRegistry, n: int, k: int) -> MultiPoly:
    """Gaussian binomial [n k]_q as a polynomial in q."""
    if k < 0 or k > n:
        return reg.zero_poly
    k = min(k, n - k)
    cache = _QQ_CACHE.setdefault(("qbinom", id(reg)), {})
    hit = cache.get((n, k))
    if hit is not None:
        return hit
    # row recurrence [n k] = [n-1 k-1] + q^k [n-1 k]
    prev = [reg.one_poly]
    for m in range(1, n + 1):
        row = [reg.one_poly]
        top = min(k, m)
        for j in range(1, top + 1):
            left = prev[j - 1]
            right = prev[j] if j < len(prev) else None
            if right is None:
                row.append(left)
            else:
                row.append(left + right.mul_monomial(1, {"q": j}))
        prev = row
    result = prev[k]
    cache[(n, k)] = result
    return result


def qbinom_generalized(reg: SymbolRegistry, apow: RatFunc, k: int) -> RatFunc:
    """[alpha k]_q with q^alpha given as apow (normally the symbol A).

    Equals prod_{j<k} (apow - q^j) * (-1)^k q^{-C(k,2)} / (q;q)_k; for
    apow = q^n this reduces to the Gaussian binomial [n k]_q.
    """
    if k < 0:
        return reg.zero_ratfunc
    if k == 0:
        return reg.one_ratfunc
    num = reg.one_poly
    aden_one = apow.den.is_one()
    for j in range(k):
        qj = MultiPoly.monomial(reg, 1, {"q": j})
        factor = apow.num - (qj if aden_one else qj * apow.den)
        num = num * factor
    num = num.mul_monomial((-1) ** k, {"q": -binom2(k)})
    den = qfac_poly(reg, k)
    if not aden_one:
        den = den * (apow.den ** k)
    return RatFunc(num, den)


# ---------------------------------------------------------------------------
# basic hypergeometric series

# A parameter or argument is either a scalar RatFunc or ("var", coeff) for
# coeff * var with var one of the expansion variables.
Param = Union[RatFunc, tuple]


@dataclass(frozen=True)
class PhiSpec:
    """r-phi-s data: upper/lower parameter lists, argument, termination."""

    upper: tuple
    lower: tuple
    arg: Param
    terminating: Optional[int] = None  # explicit only; never inferred


def _param_vars(spec: PhiSpec):
    for p in list(spec.upper) + list(spec.lower) + [spec.arg]:
        if isinstance(p, tuple):
            yield p[0]


def phi_formal(
    reg: SymbolRegistry,
    spec: PhiSpec,
    vars: Sequence[str] = (),
    order: int = 0,
) -> TruncSeries:
    """Sum an r-phi-s series exactly into a TruncSeries.

    Terms carry the standard [(-1)^k q^C(k,2)]^(1+s-r) compensator.  The sum
    terminates either by the explicit `terminating` index or because the
    argument is linear in an expansion variable (every further term lands
    above the truncation order).  A scalar argument without the terminating
    flag cannot be summed formally.
    """
    vars = tuple(vars)
    for v in _param_vars(spec):
        if v not in vars:
            raise ValueError(f"parameter uses {v!r} outside series variables {vars}")
    extra = 1 + len(spec.lower) - len(spec.upper)
    arg_linear = isinstance(spec.arg, tuple)
    if spec.terminating is None and not arg_linear:
        raise NotFormallySummable(
            "scalar argument and no terminating index; use analytic mode"
        )
    one = reg.one_ratfunc
    term = TruncSeries.one(reg, vars, order)
    scal = one
    total = term
    k = 0
    mindeg = 0
    while True:
        k += 1
        if spec.terminating is not None:
            if k > spec.terminating:
                break
        elif mindeg + 1 > order:
            break
        qk1 = mono_rf(reg, 1, {"q": k - 1})
        for p in spec.upper:
            if isinstance(p, tuple):
                v, c = p
                factor = TruncSeries.one(reg, vars, order) - TruncSeries.const(
                    reg, vars, order, c * qk1
                ).shift(v, 1)
                term = term * factor
            elif not p.is_zero():
                scal = scal * (one - p * qk1)
        for p in spec.lower:
            if isinstance(p, tuple):
                v, c = p
                base = c * qk1
                geo = {}
                pw = one
                i = vars.index(v)
                for j in range(order + 1):
                    if j:
                        pw = pw * base
                    d = [0] * len(vars)
                    d[i] = j
                    geo[tuple(d)] = pw
                term = term * TruncSeries(reg, vars, order, geo)
            elif not p.is_zero():
                div = one - p * qk1
                if div.is_zero():
                    raise DivisionByZero(f"lower parameter hits q^{{-{k - 1}}}")
                scal = scal / div
        scal = scal / (one - mono_rf(reg, 1, {"q": k}))
        if arg_linear:
            v, c = spec.arg
            term = term.shift(v, 1)
            if not c.is_one():
                term = term.scale(c)
            mindeg += 1
        else:
            scal = scal * spec.arg
            if scal.is_zero():
                break
        if extra:
            scal = scal * mono_rf(reg, (-1) ** extra, {"q": (k - 1) * extra})
        total = total + term.scale(scal)
    return total


# ---------------------------------------------------------------------------
# numeric summation with a certified tail


def phi_numeric(
    upper: Sequence,
    lower: Sequence,
    qv,
    z,
    *,
    terminating: Optional[int] = None,
    kmax: int = 4000,
    tail_target=None,
):
    """Sum an r-phi-s series at exact rational parameters.

    Returns (partial_sum, tail_bound) as exact rationals.  For a terminating
    series the sum is exact and the tail is 0.  Otherwise terms are added
    until the uniform ratio bound

        rb(k) = |z| * q^{(k-1)*extra} * prod(1+|u| q^{k-1})
                / (prod(1-|l| q^{k-1}) * (1-q^k))

    (monotone decreasing in k for 0 < q < 1) drops below 1 and the resulting
    geometric tail |T_K| * rb/(1-rb) is below tail_target.  Raises
    TailNotBounded if kmax is reached first.
    """
    qv = Q(qv)
    z = Q(z)
    upper = [Q(u) for u in upper]
    lower = [Q(l) for l in lower]
    extra = 1 + len(lower) - len(upper)
    if not (0 < qv < 1):
        raise ValueError("phi_numeric needs 0 < q < 1")
    if terminating is None and extra < 0:
        raise TailNotBounded("r > s+1 without termination has no geometric tail")
    term = Q(1)
    total = Q(1)
    k = 0
    while True:
        k += 1
        if terminating is not None and k > terminating:
            return total, Q(0)
        if k > kmax:
            raise TailNotBounded(f"no certified tail within kmax={kmax}")
        qk1 = qv ** (k - 1)
        num = Q(1)
        for u in upper:
            num *= 1 - u * qk1
        den = 1 - qv ** k
        for l in lower:
            den *= 1 - l * qk1
        if den == 0:
            raise DivisionByZero("lower parameter equals a negative q power")
        term = term * num / den * z
        if extra:
            term *= (-qk1) ** extra
        total += term
        if terminating is not None:
            continue
        # uniform bound on |T_{j+1}/T_j| for all j >= k
        qk = qv ** k
        rb_num = abs(z) * (qk ** extra if extra > 0 else Q(1))
        ok = True
        for u in upper:
            rb_num *= 1 + abs(u) * qk
        rb_den = 1 - qv ** (k + 1)
        for l in lower:
            f = 1 - abs(l) * qk
            if f <= 0:
                ok = False
                break
            rb_den *= f
        if not ok:
            continue
        rb = rb_num / rb_den
        if rb < 1:
            tail = abs(term) * rb / (1 - rb)
            if tail_target is None or tail <= tail_target:
                return total, tail
