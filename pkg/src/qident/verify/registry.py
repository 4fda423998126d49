"""The identity registry.

Each entry couples an identity's two sides: formal entries build both sides
as truncated series (or parameter-indexed rational functions) over fully
symbolic coefficients; analytic entries evaluate both sides at exact dyadic
points with certified tails.  Every entry carries domain constraints, a
seeded point sampler, and a catalog of single-symbol mutations that must
break it.

Mode policy: an identity is formal iff its closed form is formally summable
in the expansion variables (no scalar, non-terminating phi argument and no
negative powers of an expansion variable in the parameters); everything else
is analytic.  `build_registry` asserts the analytic half of that split by
running each analytic entry's phi shape through `phi_formal` and requiring
rejection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from ..algebra import Q, RatFunc, TruncSeries, series_reciprocal
from ..errors import DivisionByZero, NotFormallySummable, TailNotBounded
from ..families import cauchy_p, cigler_C3, cigler_D3, hahn_phi
from ..numeric import (
    NumContext,
    RatInterval,
    caoniu_C_num,
    cigler_C3_num,
    cigler_D3_num,
    conv_family_bound,
    euler_sum_upper,
    geom_tail,
    geom_tail_cubic,
    geom_tail_linear,
    geom_tail_quadratic,
    hahn_phi_num,
    hahn_psi_num,
    poch_abs_upper,
    prodratio_coeff_bounds,
    qfac_inf_lower,
    qpoch_finite_num,
    qpoch_inf_interval,
)
from ..operators import apply_E, apply_T
from ..qcore import (
    PhiSpec,
    binom2,
    mono_rf,
    phi_formal,
    phi_numeric,
    qbinom_generalized,
    qbinom_int,
    qfac_poly,
    qpoch_finite,
    qpoch_infinite,
    qpoch_infinite_recip,
    qpoch_real_exponent,
    qq_table,
)
from . import points as pts


# ---------------------------------------------------------------------------
# entry shape


@dataclass
class IdentityCheck:
    id: str
    anchor: str
    mode: str  # "formal" | "analytic" | "composite"
    kind: str  # "series" | "scalars" | "composite"
    expansion_vars: tuple = ()
    scalars: tuple = ()  # non-expansion symbols; the sampled mode binds these
    build: Optional[Callable] = None  # (reg, envl, envr, N) -> [(label, lhs, rhs)]
    lhs_num: Optional[Callable] = None  # (pt, opts) -> (value, tail)
    rhs_num: Optional[Callable] = None  # (pt, opts) -> (mid, halfwidth)
    sample: Optional[Callable] = None  # rng -> pt
    constraints: Optional[Callable] = None  # pt -> [violation strings]
    mutations: dict = field(default_factory=dict)  # name -> env/pt map
    phi_probe: Optional[Callable] = None  # analytic: must raise NotFormallySummable
    # sampled-mode override for entries whose build applies q-difference
    # operators: (reg, binding, N) -> [(label, [Q per degree], [Q per degree])]
    build_sampled: Optional[Callable] = None


@dataclass
class AnalyticOpts:
    eps: object
    tail_target: object
    kmax: int = 4000
    dmax: int = 800


def base_env(reg) -> dict:
    names = ("x", "y", "b", "u", "v", "z", "a", "c", "lam", "A", "B")
    return {n: reg.sym_rf(n) for n in names}


# ---------------------------------------------------------------------------
# formal building blocks


def _fam_series(reg, vals, N: int, var: str = "t") -> TruncSeries:
    """sum_n vals[n] var^n/(q;q)_n with one shared denominator object."""
    den, R = qq_table(reg, N)
    coeffs = {}
    for n, v in enumerate(vals[: N + 1]):
        if isinstance(v, RatFunc):
            if v.den.is_one():
                coeffs[(n,)] = RatFunc(v.num * R[n], den)
            else:
                coeffs[(n,)] = RatFunc(v.num * R[n], den * v.den)
        else:
            coeffs[(n,)] = RatFunc(v * R[n], den)
    return TruncSeries(reg, (var,), N, coeffs)


def _fam_series_shifted(reg, vals, N: int, s: int, var: str = "t") -> TruncSeries:
    """sum_{d>=s} vals[d] var^d/(q;q)_{d-s} (shifted index, unshifted family)."""
    den, R = qq_table(reg, N)
    coeffs = {}
    for d in range(s, N + 1):
        coeffs[(d,)] = RatFunc(vals[d] * R[d - s], den)
    return TruncSeries(reg, (var,), N, coeffs)


def _gf(reg, var: str, N: int, num=(), den=()) -> TruncSeries:
    """prod (c var;q)_oo over num divided by the same over den."""
    out = TruncSeries.one(reg, (var,), N)
    for cf in num:
        out = out * qpoch_infinite(reg, cf, var, N)
    for cf in den:
        out = out * qpoch_infinite_recip(reg, cf, var, N)
    return out


def _poch_linear_series(reg, coeff: RatFunc, var: str, n: int, N: int) -> TruncSeries:
    """(coeff var;q)_n as an exact polynomial-valued TruncSeries."""
    out = TruncSeries.one(reg, (var,), N)
    for j in range(n):
        f = TruncSeries.one(reg, (var,), N) - TruncSeries.const(
            reg, (var,), N, coeff * mono_rf(reg, 1, {"q": j})
        ).shift(var, 1)
        out = out * f
    return out


def _lam_rows(reg, N: int):
    """rows[n][j] = q-polynomial coefficient of lam^j in (lam;q)_n."""
    one = reg.one_poly
    rows = [{0: one}]
    for n in range(1, N + 1):
        prev = rows[-1]
        cur = {}
        for j, c in prev.items():
            cur[j] = cur.get(j, reg.zero_poly) + c
            shifted = c.mul_monomial(-1, {"q": n - 1})
            cur[j + 1] = cur.get(j + 1, reg.zero_poly) + shifted
        rows.append({j: c for j, c in cur.items() if not c.is_zero()})
    return rows


def _weighted_bivar_series(reg, vals, N: int) -> TruncSeries:
    """sum_n vals[n] (lam;q)_n t^n/(q;q)_n as a series in (t, lam)."""
    den, R = qq_table(reg, N)
    rows = _lam_rows(reg, N)
    coeffs = {}
    for n in range(N + 1):
        for j, c in rows[n].items():
            if n + j <= N:
                coeffs[(n, j)] = RatFunc(vals[n] * c * R[n], den)
    return TruncSeries(reg, ("t", "lam"), N, coeffs)


def _cigler_C3_vals(reg, N: int):
    return [cigler_C3(reg, n) for n in range(N + 1)]


def _cigler_D3_weighted_vals(reg, N: int):
    """(-1)^n q^C(n,2) D_n — the compensated family that actually sums."""
    return [
        cigler_D3(reg, n).mul_monomial((-1) ** n, {"q": binom2(n)})
        for n in range(N + 1)
    ]


# ---------------------------------------------------------------------------
# formal builders (one function per identity; envr feeds every RHS symbol so
# a mutated environment perturbs exactly one side)


def _b_usu(reg, envl, envr, N):
    out = []
    for n in range(N + 1):
        lhs = qpoch_finite(reg, envl["a"] * mono_rf(reg, 1, {"q": -n}), n)
        a = envr["a"]
        rhs = (
            qpoch_finite(reg, mono_rf(reg, 1, {"q": 1}) / a, n)
            * ((-a) ** n)
            * mono_rf(reg, 1, {"q": -n - binom2(n)})
        )
        out.append((f"n={n}", lhs, rhs))
    return out


def _b_qbinom(reg, envl, envr, N):
    one = reg.one_ratfunc
    out = []
    for k in range(N + 1):
        lhs = qbinom_generalized(reg, envl["A"], k)
        A = envr["A"]
        rhs = (
            qpoch_finite(reg, one / A, k)
            / RatFunc.from_poly(qfac_poly(reg, k))
            * (A ** k)
            * mono_rf(reg, (-1) ** k, {"q": -binom2(k)})
        )
        out.append((f"k={k}", lhs, rhs))
    return out


def _b_gener(reg, envl, envr, N):
    vals = [cauchy_p(reg, n) for n in range(N + 1)]
    lhs = _fam_series(reg, vals, N)
    rhs = _gf(reg, "t", N, num=(envr["y"],), den=(envr["x"],))
    return [("", lhs, rhs)]


def _b_putt(reg, envl, envr, N):
    one = reg.one_ratfunc
    lhs = phi_formal(
        reg,
        PhiSpec(upper=(envl["a"],), lower=(), arg=("t", one)),
        vars=("t",),
        order=N,
    )
    rhs = _gf(reg, "t", N, num=(envr["a"],), den=(one,))
    return [("", lhs, rhs)]


def _euler_sum(reg, N, coeff, signed: bool):
    den, R = qq_table(reg, N)
    coeffs = {}
    c = reg.one_ratfunc if coeff is None else coeff
    pw = reg.one_ratfunc
    for k in range(N + 1):
        if k:
            pw = pw * c
        w = RatFunc(pw.num * R[k], den * pw.den) if not pw.den.is_one() else RatFunc(
            pw.num * R[k], den
        )
        if signed:
            w = w * mono_rf(reg, (-1) ** k, {"q": binom2(k)})
        coeffs[(k,)] = w
    return TruncSeries(reg, ("t",), N, coeffs)


def _b_euler(reg, envl, envr, N):
    scale = envr.get("_t_scale")
    lhs = _euler_sum(reg, N, None, signed=False)
    rhs = series_reciprocal(_euler_sum(reg, N, scale, signed=True))
    return [("", lhs, rhs)]


def _b_euler_inv(reg, envl, envr, N):
    scale = envr.get("_t_scale")
    lhs = _euler_sum(reg, N, None, signed=True)
    rhs = series_reciprocal(_euler_sum(reg, N, scale, signed=False))
    return [("", lhs, rhs)]


def _b_male(reg, envl, envr, N):
    one = reg.one_ratfunc
    out = []
    for n in range(N + 1):
        a, c = envl["a"], envl["c"]
        arg = c * mono_rf(reg, 1, {"q": n}) / a
        total = one
        term = one
        for k in range(1, n + 1):
            qj = mono_rf(reg, 1, {"q": k - 1})
            term = (
                term
                * (one - mono_rf(reg, 1, {"q": -n}) * qj)
                * (one - a * qj)
                / (one - c * qj)
                / (one - mono_rf(reg, 1, {"q": k}))
                * arg
            )
            total = total + term
        ar, cr = envr["a"], envr["c"]
        rhs = qpoch_finite(reg, cr / ar, n) / qpoch_finite(reg, cr, n)
        out.append((f"n={n}", total, rhs))
    return out


def _cauchy_kernel(reg, N, num_cf, den_cf):
    return _gf(reg, "t", N, num=(num_cf,), den=(den_cf,))


def _b_tO1(reg, envl, envr, N):
    one = reg.one_ratfunc
    G = _cauchy_kernel(reg, N, envl["y"], envl["x"])
    lhs = apply_T(reg, one / envl["A"], envl["z"], G)
    rhs = _gf(
        reg,
        "t",
        N,
        num=(envr["y"], envr["z"] / envr["A"]),
        den=(envr["x"], envr["z"]),
    )
    return [("", lhs, rhs)]


def _b_tO2(reg, envl, envr, N):
    one = reg.one_ratfunc
    G = _cauchy_kernel(reg, N, envl["x"], envl["y"])
    lhs = apply_E(reg, one / envl["A"], envl["z"], G)
    rhs = _gf(
        reg,
        "t",
        N,
        num=(envr["x"], envr["z"] / envr["A"]),
        den=(envr["y"], envr["z"]),
    )
    return [("", lhs, rhs)]


_BELLA_N = 3  # bilinear kernel identities are per-degree; sweep n = 0..3


def _b_bella(reg, envl, envr, N):
    one = reg.one_ratfunc
    out = []
    for n in range(_BELLA_N + 1):
        kern = series_reciprocal(_poch_linear_series(reg, envl["y"], "s", n, N))
        kern = kern * qpoch_infinite(reg, envl["y"], "s", N)
        kern = kern * qpoch_infinite_recip(reg, envl["x"], "s", N)
        kern = kern.scale(RatFunc.from_poly(cauchy_p(reg, n)))
        lhs = apply_T(reg, one / envl["A"], envl["b"], kern).shift("s", n)
        A, b, x, y = envr["A"], envr["b"], envr["x"], envr["y"]
        rhs = _gf(reg, "s", N, num=(y, b / A), den=(x, b))
        rhs = rhs * phi_formal(
            reg,
            PhiSpec(
                upper=(mono_rf(reg, 1, {"q": -n}), ("s", x), ("s", b)),
                lower=(("s", y), ("s", b / A)),
                arg=mono_rf(reg, 1, {"q": 1}),
                terminating=n,
            ),
            vars=("s",),
            order=N,
        )
        out.append((f"n={n}", lhs, rhs))
    return out


def _b_tbella(reg, envl, envr, N):
    one = reg.one_ratfunc
    out = []
    for n in range(_BELLA_N + 1):
        kern = series_reciprocal(_poch_linear_series(reg, envl["x"], "s", n, N))
        kern = kern * qpoch_infinite(reg, envl["x"], "s", N)
        kern = kern * qpoch_infinite_recip(reg, envl["y"], "s", N)
        kern = kern.scale(RatFunc.from_poly(cauchy_p(reg, n, x="y", y="x")))
        lhs = apply_E(reg, one / envl["A"], envl["b"], kern).shift("s", n)
        A, b, x, y = envr["A"], envr["b"], envr["x"], envr["y"]
        rhs = _gf(reg, "s", N, num=(x, b / A), den=(y, b))
        rhs = rhs * phi_formal(
            reg,
            PhiSpec(
                upper=(mono_rf(reg, 1, {"q": -n}), ("s", y), ("s", b)),
                lower=(("s", x), ("s", b / A)),
                arg=mono_rf(reg, 1, {"q": 1}),
                terminating=n,
            ),
            vars=("s",),
            order=N,
        )
        out.append((f"n={n}", lhs, rhs))
    return out


# The sampled mode evaluates the four operator-built identities on plain
# rational coefficient lists: with every scalar bound, the q-difference
# operators only ever move (x, y) along the q-power ladder of the sample
# point, so "apply T/E" becomes difference-quotient arithmetic on a
# triangular grid of series evaluations -- no symbolic x, y at all.


def _qfac_vals(q0, N: int) -> list:
    out = [Q(1)]
    for k in range(1, N + 1):
        out.append(out[-1] * (1 - q0**k))
    return out


def _list_mul(a: list, b: list, N: int) -> list:
    out = [Q(0)] * (N + 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j in range(N + 1 - i):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def _list_recip(a: list, N: int) -> list:
    if a[0] == 0:
        raise DivisionByZero("series reciprocal needs a nonzero constant term")
    r = [Q(0)] * (N + 1)
    r[0] = Q(1) / a[0]
    for d in range(1, N + 1):
        s = Q(0)
        for i in range(1, d + 1):
            if a[i]:
                s += a[i] * r[d - i]
        r[d] = -s / a[0]
    return r


def _poch_fin_vals(c, q0, n: int, N: int) -> list:
    """(c t; q0)_n coefficient list."""
    out = [Q(0)] * (N + 1)
    out[0] = Q(1)
    for i in range(n):
        f = c * q0**i
        for d in range(min(i, N - 1), -1, -1):
            out[d + 1] -= out[d] * f
    return out


def _gf_vals(q0, N: int, qf, num=(), den=()) -> list:
    """prod (c t;q0)_oo over num divided by the same over den, as a list."""
    out = [Q(0)] * (N + 1)
    out[0] = Q(1)
    for c in num:
        fac = [(-1) ** k * q0 ** binom2(k) * c**k / qf[k] for k in range(N + 1)]
        out = _list_mul(out, fac, N)
    for c in den:
        fac = [c**k / qf[k] for k in range(N + 1)]
        out = _list_mul(out, fac, N)
    return out


def _phi_term_vals(q0, N: int, s: int, ups, los, qf) -> list:
    """Terminating r+1 phi r: sum_k (q^-s;q)_k q^k/(q;q)_k with t-linear
    upper params `ups` and lower params `los`, as a t-coefficient list."""
    total = [Q(0)] * (N + 1)
    cterm = Q(1)
    for k in range(s + 1):
        if k:
            cterm *= (1 - q0 ** (k - 1 - s)) * q0 / (1 - q0**k)
        pk = [Q(0)] * (N + 1)
        pk[0] = Q(1)
        for c in ups:
            pk = _list_mul(pk, _poch_fin_vals(c, q0, k, N), N)
        for c in los:
            pk = _list_mul(pk, _list_recip(_poch_fin_vals(c, q0, k, N), N), N)
        for d in range(N + 1):
            total[d] += cterm * pk[d]
    return total


def _grid_operator_values(binding, series_at, N, dbound, a0, z0, theta):
    """Exact values of T(a0, z0*D){f} (or E(a0, z0*theta) with theta=True).

    `series_at(xv, yv)` returns the operand's coefficient list at one grid
    point; `dbound(d)` bounds the (x, y)-degree of the degree-d coefficient,
    which caps how many operator applications can be nonzero.
    """
    q0, x0, y0 = binding["q"], binding["x"], binding["y"]
    K = max(dbound(d) for d in range(N + 1)) + 1
    if theta:
        pts = [(i, j) for j in range(K + 1) for i in range(j - K, 1)]
    else:
        pts = [(i, j) for i in range(K + 1) for j in range(i - K, 1)]
    vals = {}
    for i, j in pts:
        vals[(i, j)] = series_at(x0 * q0**i, y0 * q0**j)
    sign = -1 if theta else 1
    out = []
    for d in range(N + 1):
        Kd = dbound(d) + 1
        cur = {p: v[d] for p, v in vals.items()}
        total = cur[(0, 0)]
        poch = Q(1)
        qfacv = Q(1)
        zpow = Q(1)
        for k in range(1, Kd + 1):
            new = {}
            for i, j in cur:
                if theta:
                    if j - i > K - k:
                        continue
                    den = x0 * q0 ** (i - 1) - y0 * q0**j
                    if den == 0:
                        raise DivisionByZero("operator grid denominator vanished")
                    new[(i, j)] = (cur[(i - 1, j)] - cur[(i, j + 1)]) / den
                else:
                    if i - j > K - k:
                        continue
                    den = x0 * q0**i - y0 * q0 ** (j - 1)
                    if den == 0:
                        raise DivisionByZero("operator grid denominator vanished")
                    new[(i, j)] = (cur[(i, j - 1)] - cur[(i + 1, j)]) / den
            cur = new
            poch = poch * (1 - a0 * q0 ** (k - 1))
            qfacv = qfacv * (1 - q0**k)
            zpow = zpow * (sign * z0)
            total = total + poch / qfacv * zpow * cur[(0, 0)]
        out.append(total)
    return out


def _sv_tO_pair(reg, binding, N, theta):
    q0, x0, y0, z0, A0 = (binding[k] for k in ("q", "x", "y", "z", "A"))
    qf = _qfac_vals(q0, N)

    def kern_at(xv, yv):
        num, den = ((xv,), (yv,)) if theta else ((yv,), (xv,))
        return _gf_vals(q0, N, qf, num=num, den=den)

    lv = _grid_operator_values(binding, kern_at, N, lambda d: d, Q(1) / A0, z0, theta)
    if theta:
        rv = _gf_vals(q0, N, qf, num=(x0, z0 / A0), den=(y0, z0))
    else:
        rv = _gf_vals(q0, N, qf, num=(y0, z0 / A0), den=(x0, z0))
    return [("", lv, rv)]


def _sv_tO1(reg, binding, N):
    return _sv_tO_pair(reg, binding, N, theta=False)


def _sv_tO2(reg, binding, N):
    return _sv_tO_pair(reg, binding, N, theta=True)


def _sv_bella_pair(reg, binding, N, theta):
    q0, x0, y0, b0, A0 = (binding[k] for k in ("q", "x", "y", "b", "A"))
    qf = _qfac_vals(q0, N)
    out = []
    for n in range(_BELLA_N + 1):

        def kern_at(xv, yv, n=n):
            rv, ov = (xv, yv) if theta else (yv, xv)
            k = _list_recip(_poch_fin_vals(rv, q0, n, N), N)
            k = _list_mul(k, _gf_vals(q0, N, qf, num=(rv,), den=(ov,)), N)
            # cauchy polynomial value p_n = prod (x - y q^i) (arguments swapped
            # for the theta variant)
            u, w = (yv, xv) if theta else (xv, yv)
            pn = Q(1)
            for i in range(n):
                pn *= u - w * q0**i
            return [c * pn for c in k]

        lv_raw = _grid_operator_values(
            binding, kern_at, N, lambda d, n=n: d + n, Q(1) / A0, b0, theta
        )
        lv = [Q(0)] * n + lv_raw[: N + 1 - n]
        if theta:
            gfn, gfd, phu, phl = x0, y0, y0, x0
        else:
            gfn, gfd, phu, phl = y0, x0, x0, y0
        rv = _gf_vals(q0, N, qf, num=(gfn, b0 / A0), den=(gfd, b0))
        phi = _phi_term_vals(q0, N, n, (phu, b0), (phl, b0 / A0), qf)
        out.append((f"n={n}", lv, _list_mul(rv, phi, N)))
    return out


def _sv_bella(reg, binding, N):
    return _sv_bella_pair(reg, binding, N, theta=False)


def _sv_tbella(reg, binding, N):
    return _sv_bella_pair(reg, binding, N, theta=True)


def _sv_fam_vals(reg, binding, N, dual):
    """Values of the trivariate family (or its compensated dual) at a point."""
    pt = {k: binding[k] for k in ("q", "x", "y", "b", "A")}
    if dual:
        q0 = binding["q"]
        return [
            cigler_D3(reg, n).evaluate(pt) * (-1) ** n * q0 ** binom2(n)
            for n in range(N + 1)
        ]
    return [cigler_C3(reg, n).evaluate(pt) for n in range(N + 1)]


def _sv_exdd_pair(reg, binding, N, dual):
    q0, x0, y0, b0, A0 = (binding[k] for k in ("q", "x", "y", "b", "A"))
    qf = _qfac_vals(q0, N)
    fam = _sv_fam_vals(reg, binding, N, dual)
    if dual:
        kern = _gf_vals(q0, N, qf, num=(b0, x0), den=(A0 * b0, y0))
        ups, los = (y0, A0 * b0), (x0, b0)
    else:
        kern = _gf_vals(q0, N, qf, num=(b0, y0), den=(A0 * b0, x0))
        ups, los = (x0, A0 * b0), (y0, b0)
    out = []
    for s in _SHIFT_SWEEP:
        lv = [Q(0)] * (N + 1)
        for d in range(s, N + 1):
            lv[d] = fam[d] / qf[d - s]
        phi = _phi_term_vals(q0, N, s, ups, los, qf)
        out.append((f"s={s}", lv, _list_mul(kern, phi, N)))
    return out


def _sv_exdddgen(reg, binding, N):
    return _sv_exdd_pair(reg, binding, N, dual=False)


def _sv_sexdddgen(reg, binding, N):
    return _sv_exdd_pair(reg, binding, N, dual=True)


def _sv_gs_pair(reg, binding, N, dual):
    """Bivariate (t, lam) comparison, one row per lam-degree."""
    q0, x0, y0, b0, A0 = (binding[k] for k in ("q", "x", "y", "b", "A"))
    qf = _qfac_vals(q0, N)
    fam = _sv_fam_vals(reg, binding, N, dual)
    if dual:
        gnum, gden = (x0, b0), (y0, A0 * b0)
        ups, los = (y0, A0 * b0), (x0, b0)
    else:
        gnum, gden = (y0, b0), (x0, A0 * b0)
        ups, los = (x0, A0 * b0), (y0, b0)
    # LHS: sum_n fam[n] (lam;q)_n t^n/(q;q)_n -- rows indexed by lam-degree
    lam_pf = [_poch_fin_vals(Q(1), q0, n, N) for n in range(N + 1)]
    lrows = []
    for j in range(N + 1):
        row = [Q(0)] * (N + 1 - j)
        for n in range(N + 1 - j):
            c = lam_pf[n][j]
            if c:
                row[n] = fam[n] * c / qf[n]
        lrows.append(row)
    # RHS: (lam;q)_oo * G(t) * phi(ups; los; arg lam)
    G = _gf_vals(q0, N, qf, num=gnum, den=gden)
    phirows = []
    for k in range(N + 1):
        pk = [Q(0)] * (N + 1)
        pk[0] = Q(1)
        for c in ups:
            pk = _list_mul(pk, _poch_fin_vals(c, q0, k, N), N)
        for c in los:
            pk = _list_mul(pk, _list_recip(_poch_fin_vals(c, q0, k, N), N), N)
        phirows.append([v / qf[k] for v in pk])
    W = [(-1) ** j * q0 ** binom2(j) / qf[j] for j in range(N + 1)]
    out = []
    for k in range(N + 1):
        row = [Q(0)] * (N + 1 - k)
        for j in range(k + 1):
            src = phirows[k - j]
            wj = W[j]
            if wj:
                for d in range(N + 1 - k):
                    if src[d]:
                        row[d] += wj * src[d]
        out.append((f"lam^{k}", lrows[k], _list_mul(G, row, N - k)))
    return out


def _sv_gs(reg, binding, N):
    return _sv_gs_pair(reg, binding, N, dual=False)


def _sv_cc1sums(reg, binding, N):
    return _sv_gs_pair(reg, binding, N, dual=True)


def _b_check1(reg, envl, envr, N):
    one = reg.one_ratfunc
    out = []
    for n in range(N + 1):
        lhs = RatFunc.from_poly(cigler_C3(reg, n))
        rhs = apply_T(
            reg,
            one / envr["A"],
            envr["b"] * envr["A"],
            RatFunc.from_poly(cauchy_p(reg, n)),
        )
        out.append((f"n={n}", lhs, rhs))
    return out


def _b_check2(reg, envl, envr, N):
    one = reg.one_ratfunc
    out = []
    for n in range(N + 1):
        lhs = RatFunc.from_poly(cigler_D3(reg, n))
        operand = RatFunc.from_poly(cauchy_p(reg, n, x="y", y="x")) * mono_rf(
            reg, (-1) ** n, {"q": -binom2(n)}
        )
        rhs = apply_E(reg, one / envr["A"], envr["b"] * envr["A"], operand)
        out.append((f"n={n}", lhs, rhs))
    return out


_SHIFT_SWEEP = (0, 1, 2, 3)


def _b_exdddgen(reg, envl, envr, N):
    vals = _cigler_C3_vals(reg, N)
    A, b, x, y = envr["A"], envr["b"], envr["x"], envr["y"]
    kern = qpoch_real_exponent(reg, b, "t", N, A) * _gf(
        reg, "t", N, num=(y,), den=(x,)
    )
    out = []
    for s in _SHIFT_SWEEP:
        lhs = _fam_series_shifted(reg, vals, N, s)
        rhs = kern * phi_formal(
            reg,
            PhiSpec(
                upper=(mono_rf(reg, 1, {"q": -s}), ("t", x), ("t", A * b)),
                lower=(("t", y), ("t", b)),
                arg=mono_rf(reg, 1, {"q": 1}),
                terminating=s,
            ),
            vars=("t",),
            order=N,
        )
        out.append((f"s={s}", lhs, rhs))
    return out


def _b_sexdddgen(reg, envl, envr, N):
    vals = _cigler_D3_weighted_vals(reg, N)
    A, b, x, y = envr["A"], envr["b"], envr["x"], envr["y"]
    kern = qpoch_real_exponent(reg, b, "t", N, A) * _gf(
        reg, "t", N, num=(x,), den=(y,)
    )
    out = []
    for s in _SHIFT_SWEEP:
        lhs = _fam_series_shifted(reg, vals, N, s)
        rhs = kern * phi_formal(
            reg,
            PhiSpec(
                upper=(mono_rf(reg, 1, {"q": -s}), ("t", y), ("t", A * b)),
                lower=(("t", x), ("t", b)),
                arg=mono_rf(reg, 1, {"q": 1}),
                terminating=s,
            ),
            vars=("t",),
            order=N,
        )
        out.append((f"s={s}", lhs, rhs))
    return out


def _b_ler(reg, envl, envr, N):
    lhs = _fam_series(reg, _cigler_C3_vals(reg, N), N)
    A, b, x, y = envr["A"], envr["b"], envr["x"], envr["y"]
    rhs = _gf(reg, "t", N, num=(y, b), den=(x, A * b))
    return [("", lhs, rhs)]


def _b_lerr(reg, envl, envr, N):
    lhs = _fam_series(reg, _cigler_D3_weighted_vals(reg, N), N)
    A, b, x, y = envr["A"], envr["b"], envr["x"], envr["y"]
    rhs = _gf(reg, "t", N, num=(x, b), den=(y, A * b))
    return [("", lhs, rhs)]


def _bivar_rhs(reg, N, envr, num_cf, den_cf, upper_cf, lower_cf):
    """(lam;q)_oo * poch product in t * phi with argument lam."""
    one = reg.one_ratfunc
    vars2 = ("t", "lam")
    out = qpoch_infinite(reg, one, "lam", N).align(vars2)
    for cf in num_cf:
        out = out * qpoch_infinite(reg, cf, "t", N).align(vars2)
    for cf in den_cf:
        out = out * qpoch_infinite_recip(reg, cf, "t", N).align(vars2)
    phi = phi_formal(
        reg,
        PhiSpec(
            upper=(("t", upper_cf[0]), ("t", upper_cf[1]), reg.zero_ratfunc),
            lower=(("t", lower_cf[0]), ("t", lower_cf[1])),
            arg=("lam", one),
        ),
        vars=vars2,
        order=N,
    )
    return out * phi


def _b_gs(reg, envl, envr, N):
    lhs = _weighted_bivar_series(reg, _cigler_C3_vals(reg, N), N)
    A, b, x, y = envr["A"], envr["b"], envr["x"], envr["y"]
    rhs = _bivar_rhs(reg, N, envr, (y, b), (x, A * b), (x, A * b), (y, b))
    return [("", lhs, rhs)]


def _b_cc1sums(reg, envl, envr, N):
    lhs = _weighted_bivar_series(reg, _cigler_D3_weighted_vals(reg, N), N)
    A, b, x, y = envr["A"], envr["b"], envr["x"], envr["y"]
    rhs = _bivar_rhs(reg, N, envr, (x, b), (y, A * b), (y, A * b), (x, b))
    return [("", lhs, rhs)]


def _b_21sums(reg, envl, envr, N):
    one = reg.one_ratfunc
    vals = [
        RatFunc.from_poly(hahn_phi(reg, n)) * qpoch_finite(reg, envl["lam"], n)
        for n in range(N + 1)
    ]
    lhs = _fam_series(reg, vals, N)
    a, x, lam = envr["a"], envr["x"], envr["lam"]
    rhs = _gf(reg, "t", N, num=(lam,), den=(one,))
    rhs = rhs * phi_formal(
        reg,
        PhiSpec(upper=(lam, a), lower=(("t", lam),), arg=("t", x)),
        vars=("t",),
        order=N,
    )
    return [("", lhs, rhs)]


def _cumprod_polys(reg, facs):
    out = [reg.one_poly]
    for f in facs:
        out.append(out[-1] * f)
    return out


def _tails(reg, facs, m):
    """T[i] = facs[i] * facs[i+1] * ... * facs[m-1] (T[m] = 1)."""
    out = [reg.one_poly] * (m + 1)
    for i in range(m - 1, -1, -1):
        out[i] = out[i + 1] * facs[i]
    return out


def _b_2sdss(reg, envl, envr, N):
    # Parametrized with c = a*c~ so the c/a upper parameter stays polynomial
    # (the substitution is invertible on the rational-function field, so the
    # check is exactly as strong as with free c).  The scalar lower parameter
    # puts (ac~;q)_k into every coefficient denominator; generic rational
    # addition of the two right-hand factors is quadratic blowup, so both
    # sides are assembled division-free as numerators over explicit shared
    # per-degree denominators.  By the q-binomial theorem the first factor
    # has t^j coefficient (b;q)_j/(q;q)_j, and expanding 1/(bt;q)_k of the
    # second factor monomial-by-monomial gives Gaussian-binomial numerators.
    one = reg.one_ratfunc
    al, bl = envl["a"], envl["b"]
    cl = al * envl["c"]
    ar, br, ctil = envr["a"], envr["b"], envr["c"]
    cr = ar * ctil

    def fac(coeff, i):
        return (one - coeff * mono_rf(reg, 1, {"q": i})).to_poly()

    qfac = [qfac_poly(reg, k) for k in range(N + 1)]
    qf1 = [fac(one, i) for i in range(1, N + 1)]  # qf1[i-1] = 1 - q^i
    rfac = [fac(cr, i) for i in range(N)]
    pl = _cumprod_polys(reg, [fac(cl, i) for i in range(N)])  # (cl;q)_k
    pr = _cumprod_polys(reg, rfac)
    pa = _cumprod_polys(reg, [fac(al, i) for i in range(N)])
    pb = _cumprod_polys(reg, [fac(bl, i) for i in range(N)])
    pbr = _cumprod_polys(reg, [fac(br, i) for i in range(N)])
    pct = _cumprod_polys(reg, [fac(ctil, i) for i in range(N)])
    arp = [(ar**k).to_poly() for k in range(N + 1)]
    brp = [(br**k).to_poly() for k in range(N + 1)]
    qf2 = [f * f for f in qfac]

    # fnum[m] = [t^m] phi(b, c~; bt, ac~; a*t) over den (q;q)_m (cr;q)_m
    fnum = []
    for m in range(N + 1):
        TQm = _tails(reg, qf1, m)
        TPm = _tails(reg, rfac, m)
        acc = reg.one_poly if m == 0 else reg.zero_poly
        for k in range(1, m + 1):
            piece = pbr[k] * pct[k] * arp[k] * TQm[k] * TPm[k]
            piece = piece * (brp[m - k] * qbinom_int(reg, m - 1, m - k))
            acc = acc + piece.mul_monomial((-1) ** k, {"q": binom2(k)})
        fnum.append(acc)

    lcoeffs = {}
    rcoeffs = {}
    for k in range(N + 1):
        D = qf2[k] * pl[k] * pr[k]
        TQ = _tails(reg, qf1, k)  # (q;q)_k/(q;q)_i
        TP = _tails(reg, rfac, k)  # (cr;q)_k/(cr;q)_m
        acc = reg.zero_poly
        for j in range(k + 1):
            m = k - j
            acc = acc + (pbr[j] * TQ[j]) * (fnum[m] * TQ[m] * TP[m])
        rcoeffs[(k,)] = RatFunc(acc * pl[k], D)
        lcoeffs[(k,)] = RatFunc(pa[k] * pb[k] * qfac[k] * pr[k], D)
    lhs = TruncSeries(reg, ("t",), N, lcoeffs)
    rhs = TruncSeries(reg, ("t",), N, rcoeffs)
    return [("", lhs, rhs)]


# ---------------------------------------------------------------------------
# analytic building blocks


def _sum_lhs(term_fn, tail_fn, opts: AnalyticOpts):
    """Exact partial sum extended until the certified tail clears the target."""
    total = Q(0)
    terms = []
    d = 0
    while True:
        t = term_fn(d)
        terms.append(t)
        total += t
        tl = tail_fn(d, terms)
        if tl is not None and tl <= opts.tail_target:
            return total, tl
        d += 1
        if d > opts.dmax:
            raise TailNotBounded(f"no certified series tail within {opts.dmax} terms")


def _rig_tail(rho, C, power: int):
    if not 0 <= rho < 1:
        raise TailNotBounded(f"tail ratio {rho} not below 1")
    fn = (geom_tail, geom_tail_linear, geom_tail_quadratic, geom_tail_cubic)[power]

    def tail(D, terms):
        return C * fn(rho, D)

    return tail


def _prefactor_interval(qv, num, den, opts: AnalyticOpts) -> RatInterval:
    """Interval for prod (v;q)_oo over `num` divided by the same over `den`."""
    eps_each = opts.tail_target / 2 ** 24
    iv = RatInterval.point(Q(1))
    for v in num:
        iv = iv * qpoch_inf_interval(v, qv, eps_each)
    for v in den:
        iv = iv * qpoch_inf_interval(v, qv, eps_each).recip()
    return iv


def _poch_inf_abs_lower(v, qv):
    iv = qpoch_inf_interval(v, qv, Q(1, 10 ** 8))
    lo = min(abs(iv.lo), abs(iv.hi))
    if iv.lo <= 0 <= iv.hi or lo == 0:
        raise TailNotBounded("infinite product not bounded away from zero")
    return lo


def _fam_bound_consts(pt):
    lo = qfac_inf_lower(pt["q"])
    return lo


def _ladder_series_interval(
    pt,
    opts: AnalyticOpts,
    *,
    r,
    alpha,
    U,
    L,
    pref_num,
    pref_den,
    weight_fn=None,
    weight_bound=Q(1),
):
    """Certified value of prod(pref) * sum_n (alpha;q)_n r^n/(q;q)_n Phi_n w(n).

    Phi_n = sum_{k<=n} (q^{-n};q)_k prod(U;q)_k q^k / (prod(L;q)_k (q;q)_k).
    This is the power-series-in-r reading of a phi ladder whose k-ordered
    form has poles at r = q^{j+1} accumulating at the origin, so only this
    n-ordering defines a convergent sum.

    Tail: expanding each (U_p;q)_k/(L_p;q)_k through the coefficients of
    (L_p z;q)_oo/(U_p z;q)_oo turns Phi_n into sum over index vectors i of
    g-products times (q^{1+|i|-n};q)_n; the factor vanishes for |i| < n and
    has modulus <= 1 otherwise, leaving |Phi_n| <= Mhat * sum_{|i|>=n} of a
    geometric envelope -- no cancellation assumptions anywhere.
    """
    qv = pt["q"]
    lo = qfac_inf_lower(qv)
    pairs = tuple(zip(U, L))
    Mg = Q(1)
    phat = Q(1)
    rbar = Q(0)
    for u_, l_ in pairs:
        M_, r_ = prodratio_coeff_bounds(l_, u_, qv)
        Mg *= M_
        rbar = max(rbar, r_)
        phat *= poch_abs_upper(u_, qv)
        if l_ != 0:
            phat /= _poch_inf_abs_lower(l_, qv)
    u = abs(r) * rbar
    if rbar >= 1 or u >= 1:
        raise TailNotBounded("ladder series envelope ratio not below 1")
    walpha = poch_abs_upper(alpha, qv) / lo
    scale = walpha * weight_bound * phat * Mg
    one = 1 - rbar

    def series_tail(N):
        if len(pairs) == 1:
            return scale * geom_tail(u, N) / one
        return scale * (
            geom_tail_linear(u, N) / one + rbar * geom_tail(u, N) / one ** 2
        )

    ctx = NumContext(qv)
    upoch = [[Q(1)] for _ in pairs]
    lpoch = [[Q(1)] for _ in pairs]
    partial = Q(0)
    apoch = Q(1)
    rpow = Q(1)
    n = 0
    while True:
        for i, (u_, l_) in enumerate(pairs):
            upoch[i].append(upoch[i][-1] * (1 - u_ * ctx.qpow(n)))
            lpoch[i].append(lpoch[i][-1] * (1 - l_ * ctx.qpow(n)))
        qn = Q(1)
        phi = Q(0)
        for k in range(n + 1):
            if k:
                qn *= 1 - qv ** (k - 1 - n)
            term = qn * ctx.qpow(k) / ctx.qq(k)
            for i in range(len(pairs)):
                term *= upoch[i][k]
                term /= lpoch[i][k]
            phi += term
        wn = apoch * rpow / ctx.qq(n)
        if weight_fn is not None:
            wn *= weight_fn(n)
        partial += wn * phi
        tail = series_tail(n)
        if tail <= opts.tail_target:
            break
        n += 1
        if n > opts.dmax:
            raise TailNotBounded(f"no certified series tail within {opts.dmax} terms")
        apoch *= 1 - alpha * ctx.qpow(n - 1)
        rpow *= r
    iv = _prefactor_interval(qv, pref_num, pref_den, opts)
    iv = iv * RatInterval.center(partial, tail)
    return iv.mid(), iv.half()


def _psi_transform_interval(pt, opts: AnalyticOpts, num, den):
    """Certified value of the double-sum transform representative

        sum_k (1/(ax);q)_k (aq)^k/(q;q)_k
              sum_{n<=k} (q^{-k};q)_n q^{nk}/(q;q)_n P(n),

    P(n) = prod(num_i q^{1-n};q)_oo / prod(den_i q^{1-n};q)_oo.  The psi-side
    power series it replaces has terms growing like q^{-n^2/2}, so the
    identity is checked through this convergent reorganization instead.
    P follows the exact one-step recurrence P(n)/P(n-1) =
    prod(1 - num_i q^{1-n})/prod(1 - den_i q^{1-n}).
    """
    qv = pt["q"]
    a_, x_ = pt["a"], pt["x"]
    aq = a_ * qv
    ax_inv = 1 / (a_ * x_)
    lo = qfac_inf_lower(qv)
    if not 0 < aq < 1:
        raise TailNotBounded("outer ratio aq not inside (0,1)")
    P0 = _prefactor_interval(
        qv, tuple(c * qv for c in num), tuple(c * qv for c in den), opts
    )
    # uniform bound Shat >= sum_n |(q^{-k};q)_n q^{nk}/(q;q)_n| |P(n)| for all k
    n1 = 1
    dmin = min(den) if den else Q(1)
    while qv ** (n1 - 1) >= dmin / 2:
        n1 += 1
    rho1 = Q(1)
    for c in num:
        rho1 *= c + qv ** (n1 - 1)
    for c in den:
        rho1 /= c - qv ** (n1 - 1)
    m = len(num) - len(den)
    phat = P0.abs_max()
    shat = Q(0)
    scur = phat / lo
    n = 0
    Plist = [P0]
    while True:
        shat += scur
        n += 1
        if n <= n1:
            rn = Q(1)
            for c in num:
                rn *= 1 - c * qv ** (1 - n)
            for c in den:
                f = 1 - c * qv ** (1 - n)
                if f == 0:
                    raise DivisionByZero("psi transform hit a q-ladder pole")
                rn /= f
            Plist.append(Plist[-1] * RatInterval.point(rn))
            scur *= qv ** (n - 1) * abs(rn)
        else:
            # s_{j+1}/s_j = q^{j(1-m)} |R(j+1)| <= q^{j(1-m)} rho1 for j >= n1
            rr = qv ** ((n - 1) * (1 - m)) * rho1
            if rr >= 1:
                raise TailNotBounded("psi transform envelope not below 1")
            shat += scur * rr / (1 - rr)
            break
    Ca = poch_abs_upper(ax_inv, qv)

    def tail_T(K):
        return Ca * shat * geom_tail(aq, K) / lo

    total = RatInterval.point(Q(0))
    apoch = Q(1)
    aqpow = Q(1)
    ctx = NumContext(qv)
    k = 0
    while True:
        while len(Plist) <= k:
            nn = len(Plist)
            rn = Q(1)
            for c in num:
                rn *= 1 - c * qv ** (1 - nn)
            for c in den:
                f = 1 - c * qv ** (1 - nn)
                if f == 0:
                    raise DivisionByZero("psi transform hit a q-ladder pole")
                rn /= f
            Plist.append(Plist[-1] * RatInterval.point(rn))
        ak = apoch * aqpow / ctx.qq(k)
        c_kn = Q(1)
        Sk = Plist[0] * RatInterval.point(c_kn)
        for nn in range(1, k + 1):
            c_kn *= (1 - qv ** (nn - 1 - k)) * ctx.qpow(k) / (1 - qv ** nn)
            Sk = Sk + Plist[nn] * RatInterval.point(c_kn)
        total = total + Sk * RatInterval.point(ak)
        tl = tail_T(k)
        if tl <= opts.tail_target:
            break
        k += 1
        if k > opts.dmax:
            raise TailNotBounded(f"no certified transform tail within {opts.dmax} terms")
        apoch *= 1 - ax_inv * ctx.qpow(k - 1)
        aqpow *= aq
    total = total + RatInterval(-tl, tl)
    return total.mid(), total.half()


def _phi_reversed_interval(pt, opts: AnalyticOpts, uppers, lowers, arg, alternating, pref_num, pref_den):
    """Certified value of prefactors times a phi series in reversed parameters.

    Terms tau_n = [(-1)^n q^C(n,2)]^alternating prod(uppers;q)_n
    / (prod(lowers;q)_n (q;q)_n) arg^n; lowers may exceed 1, so the envelope
    waits until every l q^n < 1 before certifying a geometric tail.
    """
    qv = pt["q"]
    tau = Q(1)
    partial = Q(0)
    n = 0
    while True:
        partial += tau
        num = Q(1)
        env = abs(arg)
        ok = True
        for u_ in uppers:
            num *= 1 - u_ * qv ** n
            env *= 1 + abs(u_) * qv ** n
        den = 1 - qv ** (n + 1)
        env /= den
        for l_ in lowers:
            f = 1 - l_ * qv ** n
            if f == 0:
                raise DivisionByZero("reversed phi hit a q-ladder pole")
            den *= f
            env /= abs(f)
            if abs(l_) * qv ** n >= 1:
                ok = False
        ratio = arg * num / den
        if alternating:
            ratio *= -(qv ** n)
            env *= qv ** n
        tau *= ratio
        if ok and env < 1:
            tail = abs(tau) / (1 - env)
            if tail <= opts.tail_target:
                break
        n += 1
        if n > opts.kmax:
            raise TailNotBounded(f"no certified phi tail within {opts.kmax} terms")
    iv = _prefactor_interval(qv, pref_num, pref_den, opts)
    iv = iv * RatInterval.center(partial, tail)
    return iv.mid(), iv.half()


# --- per-identity analytic evaluators ---------------------------------------


def _exgen_lhs(pt, opts, mirror=False):
    ctx = NumContext(pt["q"])
    t, s = pt["t"], pt["s"]
    A, x, y, b = pt["A"], pt["x"], pt["y"], pt["b"]
    lo = _fam_bound_consts(pt)
    first, second = (y, x) if mirror else (x, y)
    Mc, rc = conv_family_bound(pt["q"], A, b, first, second)

    def term(d):
        if mirror:
            fam = cigler_D3_num(ctx, A, x, y, b, d) * (-1) ** d * ctx.qpow(binom2(d))
        else:
            fam = cigler_C3_num(ctx, A, x, y, b, d)
        inner = Q(0)
        for n in range(d + 1):
            inner += t ** n * s ** (d - n) / (ctx.qq(n) * ctx.qq(d - n))
        return fam * inner

    # |fam_d| <= Mc (d+1) rc^d, |inner| <= (d+1) max(|t|,|s|)^d / lo^2
    rho = rc * max(abs(t), abs(s))
    return _sum_lhs(term, _rig_tail(rho, Mc / lo ** 2, 2), opts)


def _exgen_rhs(pt, opts, mirror=False):
    t, s = pt["t"], pt["s"]
    A, x, y, b = pt["A"], pt["x"], pt["y"], pt["b"]
    if mirror:
        x, y = y, x
    return _ladder_series_interval(
        pt,
        opts,
        r=t / s,
        alpha=Q(0),
        U=(x * s, A * b * s),
        L=(y * s, b * s),
        pref_num=(y * s, b * s),
        pref_den=(x * s, A * b * s),
    )


def _gextend_lhs(pt, opts, mirror=False):
    ctx = NumContext(pt["q"])
    t, s, w = pt["t"], pt["s"], pt["w"]
    A, x, y, b = pt["A"], pt["x"], pt["y"], pt["b"]
    lo = _fam_bound_consts(pt)
    first, second = (y, x) if mirror else (x, y)
    Mc, rc = conv_family_bound(pt["q"], A, b, first, second)

    def term(d):
        if mirror:
            fam = cigler_D3_num(ctx, A, x, y, b, d) * (-1) ** d * ctx.qpow(binom2(d))
        else:
            fam = cigler_C3_num(ctx, A, x, y, b, d)
        inner = Q(0)
        for m in range(d + 1):
            for k in range(d - m + 1):
                n = d - m - k
                inner += (
                    t ** n
                    * s ** m
                    * w ** k
                    / (ctx.qq(n + m) * ctx.qq(m) * ctx.qq(k))
                )
        return fam * inner

    rho = rc * max(abs(t), abs(s), abs(w))
    return _sum_lhs(term, _rig_tail(rho, Mc / lo ** 3, 3), opts)


def _gextend_rhs(pt, opts, mirror=False):
    qv, t, s, w = pt["q"], pt["t"], pt["s"], pt["w"]
    A, x, y, b = pt["A"], pt["x"], pt["y"], pt["b"]
    if mirror:
        x, y = y, x
    z = s / t
    # inner weight: partial Euler sums E_d = sum_{m<=d} z^m/(q;q)_m
    ecache = [Q(1)]
    qqm = [Q(1)]

    def ew(d):
        while len(ecache) <= d:
            m = len(ecache)
            qqm.append(qqm[-1] * (1 - qv ** m))
            ecache.append(ecache[-1] + z ** m / qqm[-1])
        return ecache[d]

    return _ladder_series_interval(
        pt,
        opts,
        r=t / w,
        alpha=Q(0),
        U=(x * w, A * b * w),
        L=(y * w, b * w),
        pref_num=(y * w, b * w),
        pref_den=(x * w, A * b * w),
        weight_fn=ew,
        weight_bound=euler_sum_upper(abs(z), qv),
    )


def _1sums_lhs(pt, opts):
    ctx = NumContext(pt["q"])
    a, x, t = pt["a"], pt["x"], pt["t"]
    B, u, v, b = pt["B"], pt["u"], pt["v"], pt["b"]
    lo = _fam_bound_consts(pt)
    Pa = poch_abs_upper(a, pt["q"])
    Mc, rc = conv_family_bound(pt["q"], B, b, u, v)
    C = Pa * Mc / ((1 - abs(x)) * lo ** 3)

    def term(n):
        return (
            hahn_phi_num(ctx, a, x, n)
            * cigler_C3_num(ctx, B, u, v, b, n)
            * t ** n
            / ctx.qq(n)
        )

    return _sum_lhs(term, _rig_tail(rc * abs(t), C, 1), opts)


def _1sums_rhs(pt, opts):
    a, x, t = pt["a"], pt["x"], pt["t"]
    B, u, v, b = pt["B"], pt["u"], pt["v"], pt["b"]
    return _ladder_series_interval(
        pt,
        opts,
        r=x,
        alpha=a,
        U=(u * t, B * b * t),
        L=(v * t, b * t),
        pref_num=(v * t, b * t),
        pref_den=(u * t, B * b * t),
    )


def _2sums_lhs(pt, opts):
    x, t = pt["x"], pt["t"]
    B, u, v, b = pt["B"], pt["u"], pt["v"], pt["b"]
    return _psi_transform_interval(
        pt, opts, num=(u * x * t, b * x * t), den=(v * x * t, B * b * x * t)
    )


def _2sums_rhs(pt, opts):
    qv, a, x, t = pt["q"], pt["a"], pt["x"], pt["t"]
    B, u, v, b = pt["B"], pt["u"], pt["v"], pt["b"]
    return _phi_reversed_interval(
        pt,
        opts,
        uppers=(1 / (a * x), 1 / (u * x * t), 1 / (b * x * t)),
        lowers=(qv / x, 1 / (v * x * t), 1 / (B * b * x * t)),
        arg=a * u * qv / (B * v),
        alternating=True,
        pref_num=(qv / x, u * x * t * qv, b * x * t * qv),
        pref_den=(a * qv, v * x * t * qv, B * b * x * t * qv),
    )


def _1s_lhs(pt, opts):
    ctx = NumContext(pt["q"])
    a, x, t = pt["a"], pt["x"], pt["t"]
    B, u, b = pt["B"], pt["u"], pt["b"]
    lo = _fam_bound_consts(pt)
    Pa = poch_abs_upper(a, pt["q"])
    Mc, rc = conv_family_bound(pt["q"], B, b, u, Q(0))
    C = Pa * Mc / ((1 - abs(x)) * lo ** 3)

    def term(n):
        return (
            hahn_phi_num(ctx, a, x, n)
            * caoniu_C_num(ctx, B, u, b, n)
            * t ** n
            / ctx.qq(n)
        )

    return _sum_lhs(term, _rig_tail(rc * abs(t), C, 1), opts)


def _1s_rhs(pt, opts):
    a, x, t = pt["a"], pt["x"], pt["t"]
    B, u, b = pt["B"], pt["u"], pt["b"]
    return _ladder_series_interval(
        pt,
        opts,
        r=x,
        alpha=a,
        U=(u * t, B * b * t),
        L=(b * t, Q(0)),
        pref_num=(b * t,),
        pref_den=(u * t, B * b * t),
    )


def _2s_lhs(pt, opts):
    x, t = pt["x"], pt["t"]
    B, u, b = pt["B"], pt["u"], pt["b"]
    return _psi_transform_interval(
        pt, opts, num=(u * x * t, b * x * t), den=(B * b * x * t,)
    )


def _2s_rhs(pt, opts):
    qv, a, x, t = pt["q"], pt["a"], pt["x"], pt["t"]
    B, u, b = pt["B"], pt["u"], pt["b"]
    return _phi_reversed_interval(
        pt,
        opts,
        uppers=(1 / (a * x), 1 / (u * x * t), 1 / (b * x * t)),
        lowers=(qv / x, 1 / (B * b * x * t)),
        arg=a * u * x * t * qv / B,
        alternating=False,
        pref_num=(qv / x, u * x * t * qv, b * x * t * qv),
        pref_den=(a * qv, B * b * x * t * qv),
    )


_C1SUMS_TMAX = 12


def _c1sums_lhs(pt, opts):
    """Exact t-coefficients 0..TMAX of sum_n psi_n (1/lam;q)_n (lam t q)^n/(q;q)_n."""
    ctx = NumContext(pt["q"])
    a, x, lam = pt["a"], pt["x"], pt["lam"]
    base = lam * pt["q"]
    out = []
    poch = Q(1)
    for n in range(_C1SUMS_TMAX + 1):
        if n:
            poch *= 1 - ctx.qpow(n - 1) / lam
        out.append(hahn_psi_num(ctx, a, x, n) * poch * base ** n / ctx.qq(n))
    return tuple(out), Q(0)


def _c1sums_rhs(pt, opts):
    """Same t-coefficients of the closed form, expanded exactly.

    (xtq;q)_oo and 1/(lam xtq;q)_oo contribute Euler coefficients; each
    phi k-term sheds a factor t^k after clearing the t inside its lower
    parameter, leaving k geometric factors 1/(1 - lam x q^{-j} t) that are
    expanded by convolution.  Everything is a finite rational computation.
    """
    qv = pt["q"]
    ctx = NumContext(qv)
    a, x, lam = pt["a"], pt["x"], pt["lam"]
    N = _C1SUMS_TMAX
    e1 = [(-x * qv) ** m * ctx.qpow(binom2(m)) / ctx.qq(m) for m in range(N + 1)]
    e2 = [(lam * x * qv) ** m / ctx.qq(m) for m in range(N + 1)]
    pref = [sum(e1[i] * e2[m - i] for i in range(m + 1)) for m in range(N + 1)]
    phi = [Q(0)] * (N + 1)
    phi[0] = Q(1)
    basek = Q(1)
    geo = [Q(1)] + [Q(0)] * N
    for k in range(1, N + 1):
        basek *= (
            (1 - ctx.qpow(k - 1) / lam)
            * (1 - ctx.qpow(k - 1) / (a * x))
            * (a * qv)
            / (1 - ctx.qpow(k))
            * (-(lam * x) * qv ** (1 - k))
        )
        r = lam * x * qv ** (1 - k)
        for i in range(1, N - k + 1):
            geo[i] += r * geo[i - 1]
        for i in range(N - k + 1):
            phi[k + i] += basek * geo[i]
    out = [sum(pref[i] * phi[m - i] for i in range(m + 1)) for m in range(N + 1)]
    return tuple(out), Q(0)


def _2ss_lhs(pt, opts):
    x, t, lam = pt["x"], pt["t"], pt["lam"]
    return _psi_transform_interval(pt, opts, num=(x * t,), den=(lam * x * t,))


def _2ss_rhs(pt, opts):
    qv, a, x, lam, t = pt["q"], pt["a"], pt["x"], pt["lam"], pt["t"]
    return _phi_reversed_interval(
        pt,
        opts,
        uppers=(1 / (a * x), 1 / (x * t)),
        lowers=(qv / x, 1 / (lam * x * t)),
        arg=a * qv / lam,
        alternating=True,
        pref_num=(qv / x, x * t * qv),
        pref_den=(a * qv, lam * x * t * qv),
    )


def _1ss_lhs(pt, opts):
    ctx = NumContext(pt["q"])
    a, x, lam, t = pt["a"], pt["x"], pt["lam"], pt["t"]
    lo = _fam_bound_consts(pt)
    C = poch_abs_upper(a, pt["q"]) * poch_abs_upper(lam, pt["q"]) / (
        (1 - abs(x)) * lo ** 3
    )

    def term(n):
        return (
            hahn_phi_num(ctx, a, x, n)
            * qpoch_finite_num(lam, pt["q"], n)
            * t ** n
            / ctx.qq(n)
        )

    return _sum_lhs(term, _rig_tail(abs(t), C, 0), opts)


def _1ss_rhs(pt, opts):
    a, x, lam, t = pt["a"], pt["x"], pt["lam"], pt["t"]
    return _ladder_series_interval(
        pt,
        opts,
        r=x,
        alpha=a,
        U=(t,),
        L=(lam * t,),
        pref_num=(lam * t,),
        pref_den=(t,),
    )


def _1sdss_lhs(pt, opts):
    qv = pt["q"]
    partial, tail = phi_numeric(
        [pt["a"], pt["b"]],
        [pt["c"]],
        qv,
        pt["z"],
        kmax=opts.kmax,
        tail_target=opts.tail_target,
    )
    return partial, tail


def _1sdss_rhs(pt, opts):
    """Unpacked right side whose single pair has U = c/a, possibly above 1.

    The shared pair envelope needs |U| < 1; here the k = 0 term of each
    Phi_n is split off and the rest bounded through the g-coefficients of
    (cz;q)_oo/((c/a)z;q)_oo, whose growth gamma is tamed by the extra q^k.
    Needs gamma q < 1 (expansion radius) and |r| gamma < 1 (series tail).
    """
    qv = pt["q"]
    a, b, c = pt["a"], pt["b"], pt["c"]
    r = a * pt["z"] / c
    U, L = c / a, c
    M, gamma = prodratio_coeff_bounds(L, U, qv)
    if gamma < 1:
        return _ladder_series_interval(
            pt, opts, r=r, alpha=b, U=(U,), L=(L,), pref_num=(), pref_den=()
        )
    if gamma == 1 or gamma * qv >= 1 or abs(r) * gamma >= 1:
        raise TailNotBounded("unpacked envelope ratio not usable")
    lo = qfac_inf_lower(qv)
    phat = poch_abs_upper(U, qv) / _poch_inf_abs_lower(L, qv)
    Chat = phat * M * (1 / (gamma - 1) + qv / ((1 - qv) * (1 - gamma * qv)))
    walpha = poch_abs_upper(b, qv) / lo

    def series_tail(N):
        return walpha * (
            geom_tail(abs(r), N) + Chat * geom_tail(abs(r) * gamma, N)
        )

    ctx = NumContext(qv)
    upoch = [Q(1)]
    lpoch = [Q(1)]
    partial = Q(0)
    apoch = Q(1)
    rpow = Q(1)
    n = 0
    while True:
        upoch.append(upoch[-1] * (1 - U * ctx.qpow(n)))
        lpoch.append(lpoch[-1] * (1 - L * ctx.qpow(n)))
        qn = Q(1)
        phi = Q(0)
        for k in range(n + 1):
            if k:
                qn *= 1 - qv ** (k - 1 - n)
            phi += qn * ctx.qpow(k) * upoch[k] / (lpoch[k] * ctx.qq(k))
        partial += apoch * rpow / ctx.qq(n) * phi
        tail = series_tail(n)
        if tail <= opts.tail_target:
            break
        n += 1
        if n > opts.dmax:
            raise TailNotBounded(f"no certified series tail within {opts.dmax} terms")
        apoch *= 1 - b * ctx.qpow(n - 1)
        rpow *= r
    return partial, tail


# --- samplers and constraints -----------------------------------------------


def _guard_bases(pt, bases, tag):
    bad = []
    for v in bases:
        if not pts.off_q_ladder(v, pt["q"]):
            bad.append(f"{tag} base {v} too close to a q-ladder point")
    return bad


def _c_exgen(pt, mirror=False):
    t, s = pt["t"], pt["s"]
    A, x, y, b = pt["A"], pt["x"], pt["y"], pt["b"]
    g = x if not mirror else y
    out = []
    for name, v in (("t/s", t / s), (("ys" if mirror else "xs"), g * s), ("Abs", A * b * s)):
        if abs(v) >= 1:
            out.append(f"|{name}| >= 1")
    rho = max((A + 1) * abs(b), abs(x) + abs(y)) * max(abs(t), abs(s))
    if rho >= Q(3, 4):
        out.append("series tail ratio too large")
    return out


def _s_exgen(rng):
    pt = {
        "q": pts.dyadic_q(rng),
        "A": pts.dyadic_mid(rng),
        "x": pts.dyadic_small(rng),
        "y": pts.dyadic_small(rng),
        "b": pts.dyadic_small(rng),
    }
    pt["s"] = pts.dyadic_small(rng)
    pt["t"] = pt["s"] * pts.dyadic_frac(rng)
    return pt


def _c_gextend(pt, mirror=False):
    t, s, w = pt["t"], pt["s"], pt["w"]
    A, x, y, b = pt["A"], pt["x"], pt["y"], pt["b"]
    g = x if not mirror else y
    out = []
    for name, v in (
        ("s/t", s / t),
        ("t/w", t / w),
        (("yw" if mirror else "xw"), g * w),
        ("Abw", A * b * w),
    ):
        if abs(v) >= 1:
            out.append(f"|{name}| >= 1")
    rho = max((A + 1) * abs(b), abs(x) + abs(y)) * max(abs(t), abs(s), abs(w))
    if rho >= Q(3, 4):
        out.append("series tail ratio too large")
    return out


def _s_gextend(rng):
    pt = {
        "q": pts.dyadic_q(rng),
        "A": pts.dyadic_mid(rng),
        "x": pts.dyadic_small(rng),
        "y": pts.dyadic_small(rng),
        "b": pts.dyadic_small(rng),
    }
    pt["w"] = pts.dyadic_small(rng)
    pt["t"] = pt["w"] * pts.dyadic_frac(rng)
    pt["s"] = pt["t"] * pts.dyadic_frac(rng)
    return pt


def _c_1sums(pt):
    x, t = pt["x"], pt["t"]
    B, u, v, b = pt["B"], pt["u"], pt["v"], pt["b"]
    out = []
    for name, val in (("x", x), ("ut", u * t), ("Bbt", B * b * t)):
        if abs(val) >= 1:
            out.append(f"|{name}| >= 1")
    rho = max((B + 1) * abs(b), abs(u) + abs(v)) * abs(t)
    if rho >= Q(3, 4):
        out.append("series tail ratio too large")
    return out


def _s_1sums(rng):
    return {
        "q": pts.dyadic_q(rng),
        "B": pts.dyadic_mid(rng),
        "a": pts.dyadic_small(rng),
        "x": pts.dyadic_small(rng),
        "u": pts.dyadic_small(rng),
        "v": pts.dyadic_small(rng),
        "b": pts.dyadic_small(rng),
        "t": pts.dyadic_small(rng),
    }


def _c_2sums(pt):
    qv = pt["q"]
    a, x, t = pt["a"], pt["x"], pt["t"]
    B, u, v, b = pt["B"], pt["u"], pt["v"], pt["b"]
    out = []
    for name, val in (
        ("aq", a * qv),
        ("vxtq", v * x * t * qv),
        ("bxtqB", b * x * t * qv * B),
    ):
        if abs(val) >= 1:
            out.append(f"|{name}| >= 1")
    if abs(a * u * qv / (B * v)) >= 1:
        out.append("phi argument not below 1")
    out += _guard_bases(pt, [x, v * x * t, B * b * x * t], "den/phi")
    return out


_PSI_Q = [Q(1, 4), Q(5, 16), Q(3, 8)]


def _s_2sums(rng):
    # u and v drawn from the same scale keeps the phi argument ~ a*q/B, small
    return {
        "q": rng.choice(_PSI_Q),
        "B": pts.dyadic_mid(rng),
        "a": pts.dyadic_small(rng),
        "x": pts.dyadic_small(rng),
        "u": pts.dyadic_small(rng),
        "v": pts.dyadic_small(rng),
        "b": pts.dyadic_small(rng),
        "t": pts.dyadic_small(rng),
    }


def _c_1s(pt):
    x, t = pt["x"], pt["t"]
    B, u, b = pt["B"], pt["u"], pt["b"]
    out = []
    for name, val in (("x", x), ("ut", u * t), ("Bbt", B * b * t)):
        if abs(val) >= 1:
            out.append(f"|{name}| >= 1")
    rho = max((B + 1) * abs(b), abs(u)) * abs(t)
    if rho >= Q(3, 4):
        out.append("series tail ratio too large")
    return out


def _s_1s(rng):
    return {
        "q": pts.dyadic_q(rng),
        "B": pts.dyadic_mid(rng),
        "a": pts.dyadic_small(rng),
        "x": pts.dyadic_small(rng),
        "u": pts.dyadic_small(rng),
        "b": pts.dyadic_small(rng),
        "t": pts.dyadic_small(rng),
    }


def _c_2s(pt):
    qv = pt["q"]
    a, x, t = pt["a"], pt["x"], pt["t"]
    B, u, b = pt["B"], pt["u"], pt["b"]
    out = []
    for name, val in (("aq", a * qv), ("bxtqB", b * x * t * qv * B)):
        if abs(val) >= 1:
            out.append(f"|{name}| >= 1")
    if abs(a * u * x * t * qv / B) >= 1:
        out.append("phi argument not below 1")
    out += _guard_bases(pt, [x, B * b * x * t], "den/phi")
    return out


def _s_2s(rng):
    return {
        "q": rng.choice(_PSI_Q),
        "B": pts.dyadic_mid(rng),
        "a": pts.dyadic_small(rng),
        "x": pts.dyadic_small(rng),
        "u": pts.dyadic_small(rng),
        "b": pts.dyadic_small(rng),
        "t": pts.dyadic_small(rng),
    }


def _c_c1sums(pt):
    # exact coefficient comparison: only nonzero divisors matter
    out = []
    for name in ("a", "x", "lam"):
        if pt[name] == 0:
            out.append(f"{name} must be nonzero")
    return out


def _s_c1sums(rng):
    return {
        "q": pts.dyadic_q(rng),
        "a": pts.dyadic_small(rng),
        "x": pts.dyadic_small(rng),
        "lam": pts.dyadic_mid(rng),
    }


def _s_psi_weighted(rng):
    return {
        "q": rng.choice(_PSI_Q),
        "a": pts.dyadic_small(rng),
        "x": pts.dyadic_small(rng),
        "lam": pts.dyadic_mid(rng),
        "t": pts.dyadic_small(rng),
    }


def _c_2ss(pt):
    qv = pt["q"]
    a, x, lam, t = pt["a"], pt["x"], pt["lam"], pt["t"]
    out = []
    for name, val in (("aq", a * qv), ("xt", x * t)):
        if abs(val) >= 1:
            out.append(f"|{name}| >= 1")
    if abs(a * qv / lam) >= 1:
        out.append("phi argument not below 1")
    out += _guard_bases(pt, [x, lam * x * t], "den/phi")
    return out


def _c_1ss(pt):
    x, t = pt["x"], pt["t"]
    out = []
    for name, val in (("t", t), ("x", x)):
        if abs(val) >= 1:
            out.append(f"|{name}| >= 1")
    return out


def _s_1ss(rng):
    return {
        "q": pts.dyadic_q(rng),
        "a": pts.dyadic_small(rng),
        "x": pts.dyadic_small(rng),
        "lam": pts.dyadic_mid(rng),
        "t": pts.dyadic_small(rng),
    }


def _c_1sdss(pt):
    qv = pt["q"]
    a, c, z = pt["a"], pt["c"], pt["z"]
    out = []
    if abs(z) >= Q(7, 8):
        out.append("|z| too close to 1")
    if abs(qv * c / a) >= Q(9, 10):
        out.append("unpacking radius needs q c/a well below 1")
    return out


def _s_1sdss(rng):
    return {
        "q": pts.dyadic_q(rng),
        "a": pts.dyadic_mid(rng),
        "b": pts.dyadic_small(rng),
        "c": pts.dyadic_mid(rng),
        "z": pts.dyadic_small(rng),
    }


# ---------------------------------------------------------------------------
# mutation helpers


def _m_scale(name, k=2):
    def f(env):
        out = dict(env)
        v = out[name]
        out[name] = v.scale(k) if isinstance(v, RatFunc) else v * k
        return out

    return f


def _m_qshift(name):
    def f(env):
        out = dict(env)
        v = out[name]
        if isinstance(v, RatFunc):
            out[name] = v * mono_rf(v.reg, 1, {"q": 1})
        else:
            out[name] = v * out["q"]
        return out

    return f


def _m_swap(n1, n2):
    def f(env):
        out = dict(env)
        out[n1], out[n2] = out[n2], out[n1]
        return out

    return f


def _m_tscale(env):
    out = dict(env)
    anyrf = out["x"]
    out["_t_scale"] = RatFunc.const(anyrf.reg, 2) if isinstance(anyrf, RatFunc) else Q(2)
    return out


# ---------------------------------------------------------------------------
# registry assembly


def _probe_scalar_phi(args):
    """An analytic entry's closed form: scalar phi argument, never terminating."""

    def probe(reg):
        phi_formal(
            reg,
            PhiSpec(upper=(), lower=(), arg=RatFunc.const(reg, Q(args))),
            vars=("t",),
            order=1,
        )

    return probe


def _entries():
    e = []
    e.append(
        IdentityCheck(
            id="usu",
            anchor="pochhammer negative-shift inversion",
            mode="formal",
            kind="scalars",
            scalars=("q", "a"),
            build=_b_usu,
            mutations={"a->2a": _m_scale("a"), "a->aq": _m_qshift("a")},
        )
    )
    e.append(
        IdentityCheck(
            id="qbinom-spec",
            anchor="generalized q-binomial as a pochhammer ratio",
            mode="formal",
            kind="scalars",
            scalars=("q", "A"),
            build=_b_qbinom,
            mutations={"A->qA": _m_qshift("A")},
        )
    )
    e.append(
        IdentityCheck(
            id="gener",
            anchor="cauchy polynomial generating function",
            mode="formal",
            kind="series",
            expansion_vars=("t",),
            scalars=("q", "x", "y"),
            build=_b_gener,
            mutations={"swap-xy": _m_swap("x", "y"), "y->qy": _m_qshift("y")},
        )
    )
    e.append(
        IdentityCheck(
            id="putt",
            anchor="q-binomial theorem (1phi0)",
            mode="formal",
            kind="series",
            expansion_vars=("t",),
            scalars=("q", "a"),
            build=_b_putt,
            mutations={"a->qa": _m_qshift("a")},
        )
    )
    e.append(
        IdentityCheck(
            id="euler",
            anchor="euler series for the reciprocal infinite product",
            mode="formal",
            kind="series",
            expansion_vars=("t",),
            scalars=("q",),
            build=_b_euler,
            mutations={"t->2t": _m_tscale},
        )
    )
    e.append(
        IdentityCheck(
            id="euler-inv",
            anchor="euler alternating series for the infinite product",
            mode="formal",
            kind="series",
            expansion_vars=("t",),
            scalars=("q",),
            build=_b_euler_inv,
            mutations={"t->2t": _m_tscale},
        )
    )
    e.append(
        IdentityCheck(
            id="male",
            anchor="q-chu-vandermonde evaluation",
            mode="formal",
            kind="scalars",
            scalars=("q", "a", "c"),
            build=_b_male,
            mutations={"c->qc": _m_qshift("c"), "a->2a": _m_scale("a")},
        )
    )
    e.append(
        IdentityCheck(
            id="tO1",
            anchor="T-operator transform of the cauchy kernel",
            mode="formal",
            kind="series",
            expansion_vars=("t",),
            scalars=("q", "x", "y", "z", "A"),
            build=_b_tO1,
            build_sampled=_sv_tO1,
            mutations={"A->qA": _m_qshift("A"), "z->2z": _m_scale("z")},
        )
    )
    e.append(
        IdentityCheck(
            id="tO2",
            anchor="E-operator transform of the inverted cauchy kernel",
            mode="formal",
            kind="series",
            expansion_vars=("t",),
            scalars=("q", "x", "y", "z", "A"),
            build=_b_tO2,
            build_sampled=_sv_tO2,
            mutations={"swap-xy": _m_swap("x", "y"), "z->2z": _m_scale("z")},
        )
    )
    e.append(
        IdentityCheck(
            id="bella",
            anchor="T-operator bilinear kernel expansion",
            mode="formal",
            kind="series",
            expansion_vars=("s",),
            scalars=("q", "x", "y", "b", "A"),
            build=_b_bella,
            build_sampled=_sv_bella,
            mutations={"b->2b": _m_scale("b"), "A->qA": _m_qshift("A")},
        )
    )
    e.append(
        IdentityCheck(
            id="tbella",
            anchor="E-operator bilinear kernel expansion",
            mode="formal",
            kind="series",
            expansion_vars=("s",),
            scalars=("q", "x", "y", "b", "A"),
            build=_b_tbella,
            build_sampled=_sv_tbella,
            mutations={"b->2b": _m_scale("b"), "A->qA": _m_qshift("A")},
        )
    )
    e.append(
        IdentityCheck(
            id="check1-rep",
            anchor="operator representation of the trivariate C family",
            mode="formal",
            kind="scalars",
            scalars=("q", "x", "y", "b", "A"),
            build=_b_check1,
            mutations={"b->2b": _m_scale("b"), "A->qA": _m_qshift("A")},
        )
    )
    e.append(
        IdentityCheck(
            id="check2-rep",
            anchor="operator representation of the trivariate D family",
            mode="formal",
            kind="scalars",
            scalars=("q", "x", "y", "b", "A"),
            build=_b_check2,
            mutations={"b->2b": _m_scale("b"), "A->qA": _m_qshift("A")},
        )
    )
    e.append(
        IdentityCheck(
            id="exdddgen",
            anchor="shift-indexed C-family generating function",
            mode="formal",
            kind="series",
            expansion_vars=("t",),
            scalars=("q", "x", "y", "b", "A"),
            build=_b_exdddgen,
            build_sampled=_sv_exdddgen,
            mutations={"A->qA": _m_qshift("A"), "swap-xy": _m_swap("x", "y")},
        )
    )
    e.append(
        IdentityCheck(
            id="sexdddgen",
            anchor="shift-indexed D-family generating function",
            mode="formal",
            kind="series",
            expansion_vars=("t",),
            scalars=("q", "x", "y", "b", "A"),
            build=_b_sexdddgen,
            build_sampled=_sv_sexdddgen,
            mutations={"A->qA": _m_qshift("A"), "swap-xy": _m_swap("x", "y")},
        )
    )
    e.append(
        IdentityCheck(
            id="ler",
            anchor="closed generating function for the C family",
            mode="formal",
            kind="series",
            expansion_vars=("t",),
            scalars=("q", "x", "y", "b", "A"),
            build=_b_ler,
            mutations={
                "b->2b": _m_scale("b"),
                "A->qA": _m_qshift("A"),
                "swap-xy": _m_swap("x", "y"),
            },
        )
    )
    e.append(
        IdentityCheck(
            id="lerr",
            anchor="closed generating function for the D family",
            mode="formal",
            kind="series",
            expansion_vars=("t",),
            scalars=("q", "x", "y", "b", "A"),
            build=_b_lerr,
            mutations={
                "b->2b": _m_scale("b"),
                "A->qA": _m_qshift("A"),
                "swap-xy": _m_swap("x", "y"),
            },
        )
    )
    e.append(
        IdentityCheck(
            id="gs",
            anchor="pochhammer-weighted C-family generating function",
            mode="formal",
            kind="series",
            expansion_vars=("t", "lam"),
            scalars=("q", "x", "y", "b", "A"),
            build=_b_gs,
            build_sampled=_sv_gs,
            mutations={"A->qA": _m_qshift("A"), "b->2b": _m_scale("b")},
        )
    )
    e.append(
        IdentityCheck(
            id="cc1sums",
            anchor="pochhammer-weighted D-family generating function",
            mode="formal",
            kind="series",
            expansion_vars=("t", "lam"),
            scalars=("q", "x", "y", "b", "A"),
            build=_b_cc1sums,
            build_sampled=_sv_cc1sums,
            mutations={"A->qA": _m_qshift("A"), "b->2b": _m_scale("b")},
        )
    )
    e.append(
        IdentityCheck(
            id="21sums",
            anchor="pochhammer-weighted phi-polynomial generating function",
            mode="formal",
            kind="series",
            expansion_vars=("t",),
            scalars=("q", "a", "x", "lam"),
            build=_b_21sums,
            mutations={"lam->2lam": _m_scale("lam"), "a->2a": _m_scale("a")},
        )
    )
    e.append(
        IdentityCheck(
            id="2sdss",
            anchor="2phi1 to 2phi2 transformation",
            mode="formal",
            kind="series",
            expansion_vars=("t",),
            scalars=("q", "a", "b", "c"),
            build=_b_2sdss,
            mutations={"c->qc": _m_qshift("c"), "b->2b": _m_scale("b")},
        )
    )
    # --- analytic ---
    e.append(
        IdentityCheck(
            id="exgen",
            anchor="double-sum generating function for the C family",
            mode="analytic",
            kind="series",
            scalars=("q", "A", "x", "y", "b", "t", "s"),
            lhs_num=lambda pt, o: _exgen_lhs(pt, o),
            rhs_num=lambda pt, o: _exgen_rhs(pt, o),
            sample=_s_exgen,
            constraints=lambda pt: _c_exgen(pt),
            mutations={"b->2b": _m_scale("b"), "swap-xy": _m_swap("x", "y")},
            phi_probe=_probe_scalar_phi(Q(1, 3)),
        )
    )
    e.append(
        IdentityCheck(
            id="2exgen",
            anchor="double-sum generating function for the D family",
            mode="analytic",
            kind="series",
            scalars=("q", "A", "x", "y", "b", "t", "s"),
            lhs_num=lambda pt, o: _exgen_lhs(pt, o, mirror=True),
            rhs_num=lambda pt, o: _exgen_rhs(pt, o, mirror=True),
            sample=_s_exgen,
            constraints=lambda pt: _c_exgen(pt, mirror=True),
            mutations={"b->2b": _m_scale("b"), "swap-xy": _m_swap("x", "y")},
            phi_probe=_probe_scalar_phi(Q(1, 3)),
        )
    )
    e.append(
        IdentityCheck(
            id="gextend",
            anchor="triple-sum generating function for the C family",
            mode="analytic",
            kind="series",
            scalars=("q", "A", "x", "y", "b", "t", "s", "w"),
            lhs_num=lambda pt, o: _gextend_lhs(pt, o),
            rhs_num=lambda pt, o: _gextend_rhs(pt, o),
            sample=_s_gextend,
            constraints=lambda pt: _c_gextend(pt),
            mutations={"b->2b": _m_scale("b"), "swap-xy": _m_swap("x", "y")},
            phi_probe=_probe_scalar_phi(Q(1, 3)),
        )
    )
    e.append(
        IdentityCheck(
            id="2gextend",
            anchor="triple-sum generating function for the D family",
            mode="analytic",
            kind="series",
            scalars=("q", "A", "x", "y", "b", "t", "s", "w"),
            lhs_num=lambda pt, o: _gextend_lhs(pt, o, mirror=True),
            rhs_num=lambda pt, o: _gextend_rhs(pt, o, mirror=True),
            sample=_s_gextend,
            constraints=lambda pt: _c_gextend(pt, mirror=True),
            mutations={"b->2b": _m_scale("b"), "swap-xy": _m_swap("x", "y")},
            phi_probe=_probe_scalar_phi(Q(1, 3)),
        )
    )
    e.append(
        IdentityCheck(
            id="1sums",
            anchor="bilinear sum pairing phi polynomials with the trivariate C family",
            mode="analytic",
            kind="series",
            scalars=("q", "B", "a", "x", "u", "v", "b", "t"),
            lhs_num=_1sums_lhs,
            rhs_num=_1sums_rhs,
            sample=_s_1sums,
            constraints=_c_1sums,
            mutations={"a->2a": _m_scale("a"), "b->2b": _m_scale("b")},
            phi_probe=_probe_scalar_phi(Q(1, 3)),
        )
    )
    e.append(
        IdentityCheck(
            id="2sums",
            anchor="bilinear sum pairing psi polynomials with the trivariate D family",
            mode="analytic",
            kind="series",
            scalars=("q", "B", "a", "x", "u", "v", "b", "t"),
            lhs_num=_2sums_lhs,
            rhs_num=_2sums_rhs,
            sample=_s_2sums,
            constraints=_c_2sums,
            mutations={"u->2u": _m_scale("u"), "b->2b": _m_scale("b")},
            phi_probe=_probe_scalar_phi(Q(1, 3)),
        )
    )
    e.append(
        IdentityCheck(
            id="1s",
            anchor="bilinear sum pairing phi polynomials with the bivariate C family",
            mode="analytic",
            kind="series",
            scalars=("q", "B", "a", "x", "u", "b", "t"),
            lhs_num=_1s_lhs,
            rhs_num=_1s_rhs,
            sample=_s_1s,
            constraints=_c_1s,
            mutations={"a->2a": _m_scale("a"), "b->2b": _m_scale("b")},
            phi_probe=_probe_scalar_phi(Q(1, 3)),
        )
    )
    e.append(
        IdentityCheck(
            id="2s",
            anchor="bilinear sum pairing psi polynomials with the bivariate D family",
            mode="analytic",
            kind="series",
            scalars=("q", "B", "a", "x", "u", "b", "t"),
            lhs_num=_2s_lhs,
            rhs_num=_2s_rhs,
            sample=_s_2s,
            constraints=_c_2s,
            mutations={"u->2u": _m_scale("u"), "b->2b": _m_scale("b")},
            phi_probe=_probe_scalar_phi(Q(1, 3)),
        )
    )
    e.append(
        IdentityCheck(
            id="c1sums",
            anchor="pochhammer-weighted psi-polynomial generating function",
            mode="analytic",
            kind="series",
            scalars=("q", "a", "x", "lam", "t"),
            lhs_num=_psi_weighted_lhs,
            rhs_num=_c1sums_rhs,
            sample=_s_psi_weighted,
            constraints=_c_c1sums,
            mutations={"lam->2lam": _m_scale("lam"), "a->2a": _m_scale("a")},
            phi_probe=_probe_scalar_phi(Q(1, 3)),
        )
    )
    e.append(
        IdentityCheck(
            id="1ss",
            anchor="weighted phi-polynomial sum (3phi2 closed form)",
            mode="analytic",
            kind="series",
            scalars=("q", "a", "x", "lam", "t"),
            lhs_num=_1ss_lhs,
            rhs_num=_1ss_rhs,
            sample=_s_1ss,
            constraints=_c_1ss,
            mutations={"lam->2lam": _m_scale("lam"), "a->2a": _m_scale("a")},
            phi_probe=_probe_scalar_phi(Q(1, 3)),
        )
    )
    e.append(
        IdentityCheck(
            id="2ss",
            anchor="weighted psi-polynomial sum (2phi2 closed form)",
            mode="analytic",
            kind="series",
            scalars=("q", "a", "x", "lam", "t"),
            lhs_num=_psi_weighted_lhs,
            rhs_num=_2ss_rhs,
            sample=_s_psi_weighted,
            constraints=_c_2ss,
            mutations={"lam->2lam": _m_scale("lam"), "a->2a": _m_scale("a")},
            phi_probe=_probe_scalar_phi(Q(1, 3)),
        )
    )
    e.append(
        IdentityCheck(
            id="1sdss",
            anchor="2phi1 to 3phi2 transformation",
            mode="analytic",
            kind="series",
            scalars=("q", "a", "b", "c", "z"),
            lhs_num=_1sdss_lhs,
            rhs_num=_1sdss_rhs,
            sample=_s_1sdss,
            constraints=_c_1sdss,
            mutations={"c->2c": _m_scale("c"), "b->2b": _m_scale("b")},
            phi_probe=_probe_scalar_phi(Q(1, 3)),
        )
    )
    e.append(
        IdentityCheck(
            id="reductions",
            anchor="cross-identity reduction suite",
            mode="composite",
            kind="composite",
            mutations={"a:b->2b": _m_scale("b")},
        )
    )
    return e


def build_registry() -> dict:
    """Construct the registry and assert mode soundness.

    Every analytic entry's phi shape must be rejected by phi_formal (scalar
    argument, no termination); formal entries are built through phi_formal by
    every formal run, so their acceptance is exercised constantly.
    """
    from ..algebra import DEFAULT_REGISTRY

    reg_map = {}
    probe_reg = DEFAULT_REGISTRY
    for entry in _entries():
        if entry.mode == "analytic":
            if entry.phi_probe is None:
                raise AssertionError(f"analytic entry {entry.id} lacks a phi probe")
            try:
                entry.phi_probe(probe_reg)
            except NotFormallySummable:
                pass
            else:
                raise AssertionError(
                    f"analytic entry {entry.id} was accepted by phi_formal"
                )
        reg_map[entry.id] = entry
    return reg_map


_REGISTRY = None


def get_registry() -> dict:
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = build_registry()
    return _REGISTRY


def registry_list():
    return [
        {"id": c.id, "paper_anchor": c.anchor, "mode": c.mode}
        for c in get_registry().values()
    ]
