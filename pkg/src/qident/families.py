"""Polynomial family constructors.

Every constructor returns an exact object over the default symbol set:
Cauchy products and the four Cigler/Cao-Niu extensions come out as (Laurent)
polynomials, the two q-Laguerre variants as rational functions in q and A.

The Cigler/Cao-Niu sums are built in the cancelled form

    sum_k  prod_{j<k}(A - q^j) * [n k]_q * b^k * (tail of degree n-k)

which is what the printed definitions collapse to once q^C(k,2) meets the
generalized binomial's q^{-C(k,2)}: the Gaussian [n k]_q absorbs the
(q;q)_n/((q;q)_k (q;q)_{n-k}) ratio, so no division is ever needed.  The
numeric evaluators in qident.numeric sum the definitions literally and act
as an independent route in the tests.

Note the (q;q)_{n-k} in caoniu_C / caoniu_D: with (q;q)_k in that position
the n=1 instance would be x - (1-Aq)/(1-q)*b, which contradicts both the
degree pattern and the v=0 specialization of the trivariate family; the
forms here make C_1 = x - (1-Aq)*b exactly.
"""

from __future__ import annotations

from .algebra import MultiPoly, RatFunc, SymbolRegistry
from .qcore import binom2, mono_rf, qbinom_generalized, qbinom_int, qfac_poly


def _prod_A_minus_q(reg: SymbolRegistry, k: int, aexps: dict) -> MultiPoly:
    """prod_{j<k} (Abase - q^j) with Abase the monomial given by aexps."""
    out = reg.one_poly
    for j in range(k):
        out = out * (
            MultiPoly.monomial(reg, 1, aexps) - MultiPoly.monomial(reg, 1, {"q": j})
        )
    return out


def cauchy_p(reg: SymbolRegistry, n: int, x: str = "x", y: str = "y") -> MultiPoly:
    """p_n(x,y) = (x-y)(x-qy)...(x-q^{n-1}y)."""
    out = reg.one_poly
    for j in range(n):
        out = out * (
            MultiPoly.monomial(reg, 1, {x: 1})
            - MultiPoly.monomial(reg, 1, {y: 1, "q": j})
        )
    return out


def cigler_C3(reg: SymbolRegistry, n: int, aexps: dict | None = None) -> MultiPoly:
    """Trivariate C_n^{(alpha-n)}(x,y,b); binomial base q^alpha = A."""
    aexps = {"A": 1} if aexps is None else aexps
    out = reg.zero_poly
    for k in range(n + 1):
        term = _prod_A_minus_q(reg, k, aexps) * qbinom_int(reg, n, k)
        term = term.mul_monomial(1, {"b": k})
        out = out + term * cauchy_p(reg, n - k)
    return out


def cigler_D3(reg: SymbolRegistry, n: int, aexps: dict | None = None) -> MultiPoly:
    """Trivariate D_n^{(alpha-n)}(x,y,b) = (-1)^n q^{-C(n,2)} * (C3 with p(y,x))."""
    aexps = {"A": 1} if aexps is None else aexps
    out = reg.zero_poly
    for k in range(n + 1):
        term = _prod_A_minus_q(reg, k, aexps) * qbinom_int(reg, n, k)
        term = term.mul_monomial(1, {"b": k})
        out = out + term * cauchy_p(reg, n - k, x="y", y="x")
    return out.mul_monomial((-1) ** n, {"q": -binom2(n)})


def caoniu_C(reg: SymbolRegistry, n: int, aexps: dict | None = None) -> MultiPoly:
    """Bivariate C_n^{(alpha)}(x,b); binomial base q^{n+alpha} = A*q^n."""
    aexps = {"A": 1, "q": n} if aexps is None else aexps
    out = reg.zero_poly
    for k in range(n + 1):
        term = _prod_A_minus_q(reg, k, aexps) * qbinom_int(reg, n, k)
        out = out + term.mul_monomial(1, {"b": k, "x": n - k})
    return out


def caoniu_D(reg: SymbolRegistry, n: int, aexps: dict | None = None) -> MultiPoly:
    """Bivariate D_n^{(alpha)}(x,b) with the q^{k^2-nk} twist."""
    aexps = {"A": 1, "q": n} if aexps is None else aexps
    out = reg.zero_poly
    for k in range(n + 1):
        term = _prod_A_minus_q(reg, k, aexps) * qbinom_int(reg, n, k)
        # q^{k^2-nk} times the binomial's (-1)^k q^{-C(k,2)}
        term = term.mul_monomial(
            (-1) ** k, {"b": k, "x": n - k, "q": k * k - n * k - binom2(k)}
        )
        out = out + term
    return out


def qlaguerre_L(reg: SymbolRegistry, n: int) -> RatFunc:
    """L_n^{(alpha)}(x;q) with q^alpha = A; rational in q, polynomial in x."""
    one = reg.one_ratfunc
    pref = one
    for j in range(n):
        pref = pref * (one - mono_rf(reg, 1, {"A": 1, "q": 1 + j}))
    pref = pref / RatFunc.from_poly(qfac_poly(reg, n))
    total = reg.zero_ratfunc
    term = one
    for k in range(n + 1):
        if k:
            # ratio of consecutive summands of the def00 sum
            num = one - mono_rf(reg, 1, {"q": k - 1 - n})
            den = (one - mono_rf(reg, 1, {"A": 1, "q": k})) * (
                one - mono_rf(reg, 1, {"q": k})
            )
            term = term * num / den
            term = term * mono_rf(reg, 1, {"q": k - 1, "x": 1, "A": 1})
            term = term * mono_rf(reg, 1, {"q": n + 1})
        total = total + term
    return pref * total


def cigler_l(reg: SymbolRegistry, n: int) -> RatFunc:
    """Cigler's l_n^{(alpha)}(x) with q^alpha = A (Laurent-rational in q, A)."""
    out = reg.zero_ratfunc
    qqn = RatFunc.from_poly(qfac_poly(reg, n))
    for k in range(n + 1):
        binom = qbinom_generalized(
            reg, mono_rf(reg, 1, {"A": 1, "q": n}), n - k
        )
        piece = binom * qqn / RatFunc.from_poly(qfac_poly(reg, k))
        piece = piece * mono_rf(reg, (-1) ** k, {"q": binom2(n - k), "x": n - k})
        out = out + piece
    return out * mono_rf(reg, 1, {"q": -n * n, "A": -n})


def hahn_phi(reg: SymbolRegistry, n: int) -> MultiPoly:
    """phi_n^{(a)}(x|q) = sum_k [n k]_q (a;q)_k x^k."""
    out = reg.zero_poly
    poch = reg.one_poly
    for k in range(n + 1):
        if k:
            poch = poch - poch.mul_monomial(1, {"a": 1, "q": k - 1})
        out = out + (qbinom_int(reg, n, k) * poch).mul_monomial(1, {"x": k})
    return out


def hahn_psi(reg: SymbolRegistry, n: int) -> MultiPoly:
    """psi_n^{(a)}(x|q) = sum_k [n k]_q q^{k(k-n)} (a q^{1-k};q)_k x^k."""
    out = reg.zero_poly
    for k in range(n + 1):
        poch = reg.one_poly
        for j in range(k):
            poch = poch - poch.mul_monomial(1, {"a": 1, "q": 1 - k + j})
        term = qbinom_int(reg, n, k) * poch
        out = out + term.mul_monomial(1, {"x": k, "q": k * (k - n)})
    return out
