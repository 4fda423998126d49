"""Homogeneous q-difference operators D, theta and the series operators T, E.

    D{f}(x,y)     = [f(x, y/q) - f(qx, y)] / (x - y/q)
    theta{f}(x,y) = [f(x/q, y) - f(x, qy)] / (x/q - y)
    T(a, zD)      = sum_k (a;q)_k / (q;q)_k (zD)^k
    E(a, z theta) = sum_k (a;q)_k / (q;q)_k (-z theta)^k

D and theta are defined exactly on polynomials where the difference quotient
divides out; elsewhere they raise NotInDomain (e.g. D{x} is not polynomial).
T and E are applied to polynomials, to rational functions whose denominator
is free of the operator variables, and coefficientwise to truncated series;
the k-sum must hit an exact zero within kmax, else KMaxTooSmall.
"""

from __future__ import annotations

from typing import Optional, Union

from .algebra import (
    MultiPoly,
    RatFunc,
    SymbolRegistry,
    TruncSeries,
    poly_div_exact_in,
)
from .errors import KMaxTooSmall, NotDivisible, NotInDomain
from .qcore import mono_rf, qfac_poly


def apply_D(f: MultiPoly, x: str = "x", y: str = "y") -> MultiPoly:
    """Homogeneous q-derivative D_{xy}; exact or NotInDomain."""
    reg = f.reg
    num = f.substitute_monomials({y: (1, {"q": -1, y: 1})}) - f.substitute_monomials(
        {x: (1, {"q": 1, x: 1})}
    )
    div = MultiPoly.monomial(reg, 1, {x: 1}) - MultiPoly.monomial(
        reg, 1, {"q": -1, y: 1}
    )
    try:
        return poly_div_exact_in(num, div, x)
    except NotDivisible as exc:
        raise NotInDomain(f"D_{x}{y} difference quotient is not polynomial") from exc


def apply_theta(f: MultiPoly, x: str = "x", y: str = "y") -> MultiPoly:
    """Homogeneous operator theta_{xy}; exact or NotInDomain."""
    reg = f.reg
    num = f.substitute_monomials({x: (1, {"q": -1, x: 1})}) - f.substitute_monomials(
        {y: (1, {"q": 1, y: 1})}
    )
    div = MultiPoly.monomial(reg, 1, {"q": -1, x: 1}) - MultiPoly.monomial(
        reg, 1, {y: 1}
    )
    try:
        return poly_div_exact_in(num, div, x)
    except NotDivisible as exc:
        raise NotInDomain(
            f"theta_{x}{y} difference quotient is not polynomial"
        ) from exc


def _op_rf(f: RatFunc, op, x: str, y: str) -> RatFunc:
    """Lift D/theta to a RatFunc whose denominator avoids the operator vars."""
    if f.den.degree_in(x) != 0 or f.den.degree_in(y) != 0:
        raise NotInDomain(f"denominator involves operator variables {x},{y}")
    # a y-free, x-free denominator is a scalar for the operator
    return RatFunc(op(f.num, x, y), f.den)


def _operator_series(
    reg: SymbolRegistry,
    a: RatFunc,
    z: RatFunc,
    f,
    op,
    sign: int,
    x: str,
    y: str,
    kmax: Optional[int],
):
    """sum_k (a;q)_k/(q;q)_k (sign*z)^k op^k {f} for poly/ratfunc targets."""
    if isinstance(f, MultiPoly):
        f = RatFunc.from_poly(f)
    if kmax is None:
        kmax = f.num.degree_in(x) + f.num.degree_in(y) + 2
    one = reg.one_ratfunc
    poch = one
    zpow = one
    current = f
    total = f
    for k in range(1, kmax + 1):
        current = _op_rf(current, op, x, y)
        if current.is_zero():
            return total
        poch = poch * (one - a * mono_rf(reg, 1, {"q": k - 1}))
        zpow = zpow * z.scale(sign)
        coeff = poch / RatFunc.from_poly(qfac_poly(reg, k))
        total = total + coeff * zpow * current
    # one more application must vanish, otherwise the expansion is unfinished
    if _op_rf(current, op, x, y).is_zero():
        return total
    raise KMaxTooSmall(f"operator series not exhausted within kmax={kmax}")


def _dispatch(reg, a, z, f, op, sign, x, y, kmax):
    if isinstance(f, TruncSeries):
        coeffs = {
            d: _operator_series(reg, a, z, c, op, sign, x, y, kmax)
            for d, c in f.coeffs.items()
        }
        return TruncSeries(reg, f.vars, f.order, coeffs)
    return _operator_series(reg, a, z, f, op, sign, x, y, kmax)


def apply_T(
    reg: SymbolRegistry,
    a: RatFunc,
    z: RatFunc,
    f: Union[MultiPoly, RatFunc, TruncSeries],
    *,
    x: str = "x",
    y: str = "y",
    kmax: Optional[int] = None,
):
    """T(a, zD_{xy}) applied to f; series targets are mapped coefficientwise."""
    return _dispatch(reg, a, z, f, apply_D, 1, x, y, kmax)


def apply_E(
    reg: SymbolRegistry,
    a: RatFunc,
    z: RatFunc,
    f: Union[MultiPoly, RatFunc, TruncSeries],
    *,
    x: str = "x",
    y: str = "y",
    kmax: Optional[int] = None,
):
    """E(a, z theta_{xy}) applied to f; note the (-z theta)^k sign."""
    return _dispatch(reg, a, z, f, apply_theta, -1, x, y, kmax)
