"""Suite execution.

Four drivers share the registry: `run_formal` (symbolic series/parameter
comparison, optionally re-checked at seeded rational bindings), `run_analytic`
(certified interval comparison at exact dyadic points), `run_reductions`
(cross-identity degenerations), and `run_mutations` (every catalogued
single-symbol perturbation must break its identity).  All drivers are
deterministic in (seed, order, points); `run_suite` optionally fans entries
out over processes and always aggregates sorted by id.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal, localcontext

from ..algebra import (
    DEFAULT_REGISTRY,
    Q,
    RatFunc,
    TruncSeries,
    ratfunc_equal,
    ratfunc_str,
    series_equal_witness,
)
from ..errors import (
    DivisionByZero,
    DomainViolation,
    NotFormallySummable,
    TailNotBounded,
)
from .points import rng_for, sampled_binding
from .registry import AnalyticOpts, base_env, get_registry
from .report import FAIL, PASS, CheckReport

EPS_DEFAULT = Q(1, 10 ** 25)
TAIL_DEFAULT = Q(1, 10 ** 30)

_SAMPLE_ATTEMPTS = 500
_BINDING_ATTEMPTS = 20


def _sci(v) -> str:
    """Deterministic scientific rendering of an exact rational."""
    if v == 0:
        return "0"
    with localcontext() as ctx:
        ctx.prec = 12
        d = Decimal(int(v.numerator)) / Decimal(int(v.denominator))
    return f"{d:E}"


def _cap(s: str, n: int = 400) -> str:
    return s if len(s) <= n else s[:n] + "..."


def _ms(t0: float) -> int:
    return int((time.perf_counter() - t0) * 1000)


# ---------------------------------------------------------------------------
# formal


def _formal_witness(pairs):
    """First mismatching coefficient (or parameter instance) across pairs."""
    for label, lhs, rhs in pairs:
        if isinstance(lhs, TruncSeries):
            w = series_equal_witness(lhs, rhs)
            if w is not None:
                deg, ca, cb = w
                return {
                    "label": label,
                    "degree": list(deg),
                    "lhs": _cap(ratfunc_str(ca)),
                    "rhs": _cap(ratfunc_str(cb)),
                }
        else:
            if not ratfunc_equal(lhs, rhs):
                return {
                    "label": label,
                    "lhs": _cap(ratfunc_str(lhs)),
                    "rhs": _cap(ratfunc_str(rhs)),
                }
    return None


def _sampled_witness(entry, order, seed):
    """Bind scalars to seeded rationals, rebuild both sides, compare exactly.

    The binding happens before the build, so coefficients stay univariate in
    q and the final compare is exact rational arithmetic at the drawn q.
    Returns (witness, skip_reason); a binding that hits a denominator zero
    anywhere is rejected and redrawn.
    """
    reg = DEFAULT_REGISTRY
    names = list(entry.scalars)
    for attempt in range(_BINDING_ATTEMPTS):
        rng = rng_for(seed, entry.id, attempt)
        binding = sampled_binding(rng, names)
        try:
            if entry.build_sampled is not None:
                rows = entry.build_sampled(reg, binding, order)
                for label, lv, rv in rows:
                    for deg, (va, vb) in enumerate(zip(lv, rv)):
                        if va != vb:
                            return (
                                {
                                    "label": label,
                                    "degree": [deg],
                                    "lhs": str(va),
                                    "rhs": str(vb),
                                    "binding": {k: str(v) for k, v in binding.items()},
                                },
                                None,
                            )
                return None, None
            env = dict(base_env(reg))
            for name, val in binding.items():
                if name != "q":
                    env[name] = RatFunc.const(reg, val)
            pairs = entry.build(reg, env, env, order)
            for label, lhs, rhs in pairs:
                if isinstance(lhs, TruncSeries):
                    zero = lhs.reg.zero_ratfunc
                    for key in sorted(set(lhs.coeffs) | set(rhs.coeffs)):
                        va = lhs.coeffs.get(key, zero).evaluate(binding)
                        vb = rhs.coeffs.get(key, zero).evaluate(binding)
                        if va != vb:
                            return (
                                {
                                    "label": label,
                                    "degree": list(key),
                                    "lhs": str(va),
                                    "rhs": str(vb),
                                    "binding": {k: str(v) for k, v in binding.items()},
                                },
                                None,
                            )
                else:
                    va = lhs.evaluate(binding)
                    vb = rhs.evaluate(binding)
                    if va != vb:
                        return (
                            {
                                "label": label,
                                "lhs": str(va),
                                "rhs": str(vb),
                                "binding": {k: str(v) for k, v in binding.items()},
                            },
                            None,
                        )
            return None, None
        except (DivisionByZero, ZeroDivisionError):
            continue
    return None, "no nondegenerate sample binding found"


def _run_formal_one(check_id: str, order: int, seed: int, sampled: bool) -> CheckReport:
    entry = get_registry()[check_id]
    reg = DEFAULT_REGISTRY
    mode = "formal-sampled" if sampled else "formal"
    t0 = time.perf_counter()
    try:
        if sampled:
            wit, reason = _sampled_witness(entry, order, seed)
            if reason is not None:
                return CheckReport(
                    id=check_id,
                    paper_anchor=entry.anchor,
                    mode=mode,
                    status=f"skipped: {reason}",
                    elapsed_ms=_ms(t0),
                    order=order,
                )
        else:
            env = base_env(reg)
            pairs = entry.build(reg, env, env, order)
            wit = _formal_witness(pairs)
    except NotFormallySummable as exc:
        return CheckReport(
            id=check_id,
            paper_anchor=entry.anchor,
            mode=mode,
            status=f"skipped: {exc}",
            elapsed_ms=_ms(t0),
            order=order,
        )
    return CheckReport(
        id=check_id,
        paper_anchor=entry.anchor,
        mode=mode,
        status=FAIL if wit else PASS,
        elapsed_ms=_ms(t0),
        order=order,
        witness=wit,
    )


def run_formal(ids=None, order: int = 8, seed: int = 0, sampled: bool = False, jobs: int = 1):
    regy = get_registry()
    sel = [i for i in (ids or regy) if regy[i].mode == "formal"]
    args = [(i, order, seed, sampled) for i in sel]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            reports = list(ex.map(_pool_formal, args))
    else:
        reports = [_run_formal_one(*a) for a in args]
    reports.sort(key=lambda r: r.id)
    return reports


def _pool_formal(args):
    return _run_formal_one(*args)


# ---------------------------------------------------------------------------
# analytic


def _points_for(entry, seed: int, npoints: int, injected=None):
    if injected is not None and entry.id in injected:
        out = []
        for pt in injected[entry.id]:
            viol = entry.constraints(pt)
            if viol:
                raise DomainViolation(f"{entry.id}: " + "; ".join(viol))
            out.append(pt)
        if not out:
            raise DomainViolation(f"{entry.id}: empty injected point list")
        return out
    out = []
    for i in range(npoints):
        rng = rng_for(seed, entry.id, i)
        for _ in range(_SAMPLE_ATTEMPTS):
            pt = entry.sample(rng)
            if not entry.constraints(pt):
                out.append(pt)
                break
        else:
            raise DomainViolation(
                f"{entry.id}: sampler could not satisfy domain constraints"
            )
    return out


def _pt_str(pt) -> dict:
    return {k: str(v) for k, v in sorted(pt.items())}


def _run_analytic_one(
    check_id: str,
    npoints: int,
    seed: int,
    eps,
    tail_target,
    kmax: int,
    injected=None,
) -> CheckReport:
    entry = get_registry()[check_id]
    t0 = time.perf_counter()
    opts = AnalyticOpts(eps=eps, tail_target=tail_target, kmax=kmax)
    pts_list = _points_for(entry, seed, npoints, injected)
    worst = None
    for pt in pts_list:
        try:
            lv, lt = entry.lhs_num(pt, opts)
            rm, rh = entry.rhs_num(pt, opts)
        except TailNotBounded as exc:
            return CheckReport(
                id=check_id,
                paper_anchor=entry.anchor,
                mode="analytic",
                status=f"skipped: {exc}",
                elapsed_ms=_ms(t0),
                points=len(pts_list),
                witness={"point": _pt_str(pt)},
            )
        diff = abs(lv - rm)
        bound = opts.eps + lt + rh
        if diff > bound:
            return CheckReport(
                id=check_id,
                paper_anchor=entry.anchor,
                mode="analytic",
                status=FAIL,
                elapsed_ms=_ms(t0),
                points=len(pts_list),
                witness={
                    "point": _pt_str(pt),
                    "diff": _sci(diff),
                    "bound": _sci(bound),
                },
            )
        if worst is None or diff > worst:
            worst = diff
    return CheckReport(
        id=check_id,
        paper_anchor=entry.anchor,
        mode="analytic",
        status=PASS,
        elapsed_ms=_ms(t0),
        points=len(pts_list),
    )


def run_analytic(
    ids=None,
    points: int = 5,
    seed: int = 0,
    eps=EPS_DEFAULT,
    tail_target=TAIL_DEFAULT,
    kmax: int = 4000,
    jobs: int = 1,
    injected=None,
):
    regy = get_registry()
    sel = [i for i in (ids or regy) if regy[i].mode == "analytic"]
    args = [(i, points, seed, eps, tail_target, kmax, injected) for i in sel]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            reports = list(ex.map(_pool_analytic, args))
    else:
        reports = [_run_analytic_one(*a) for a in args]
    reports.sort(key=lambda r: r.id)
    return reports


def _pool_analytic(args):
    return _run_analytic_one(*args)


# ---------------------------------------------------------------------------
# reductions


def _series_pair_witness(tag, a, b):
    w = series_equal_witness(a, b)
    if w is None:
        return None
    deg, ca, cb = w
    return {
        "side": tag,
        "degree": list(deg),
        "lhs": _cap(ratfunc_str(ca)),
        "rhs": _cap(ratfunc_str(cb)),
    }


def _red_shift_zero(order: int, env_shift=None):
    """Shifted generating functions at shift 0 must equal the plain ones."""
    reg = DEFAULT_REGISTRY
    regy = get_registry()
    env = base_env(reg)
    env_shift = env_shift or env
    for shifted_id, plain_id in (("exdddgen", "ler"), ("sexdddgen", "lerr")):
        pairs = regy[shifted_id].build(reg, env, env_shift, order)
        lhs0, rhs0 = next((l, r) for lab, l, r in pairs if lab == "s=0")
        plain = regy[plain_id].build(reg, env, env, order)
        _, lhsP, rhsP = plain[0]
        for tag, a, b in (
            (f"{shifted_id}-lhs", lhs0, lhsP),
            (f"{shifted_id}-rhs", rhs0, rhsP),
        ):
            w = _series_pair_witness(tag, a, b)
            if w is not None:
                return w
    return None


def _red_lam_zero(order: int):
    """The pochhammer-weighted sums at weight-variable degree 0."""
    reg = DEFAULT_REGISTRY
    regy = get_registry()
    env = base_env(reg)
    for weighted_id, plain_id in (("gs", "ler"), ("cc1sums", "lerr")):
        pairs = regy[weighted_id].build(reg, env, env, order)
        _, lhsW, rhsW = pairs[0]
        plain = regy[plain_id].build(reg, env, env, order)
        _, lhsP, rhsP = plain[0]
        for tag, a, b in (
            (f"{weighted_id}-lhs", lhsW.restrict("lam", 0), lhsP),
            (f"{weighted_id}-rhs", rhsW.restrict("lam", 0), rhsP),
        ):
            w = _series_pair_witness(tag, a, b)
            if w is not None:
                return w
    return None


def _red_v_zero(seed: int, opts: AnalyticOpts, npts: int = 2):
    """Trivariate bilinear sum at v=0 collapses to the bivariate one."""
    regy = get_registry()
    tri, bi = regy["1sums"], regy["1s"]
    for i in range(npts):
        rng = rng_for(seed, "reductions:v0", i)
        for _ in range(_SAMPLE_ATTEMPTS):
            pt = bi.sample(rng)
            pt = dict(pt, v=Q(0))
            if not tri.constraints(pt):
                break
        else:
            raise DomainViolation("reductions: no valid v=0 point")
        la, ta = tri.lhs_num(pt, opts)
        lb, tb = bi.lhs_num(pt, opts)
        if abs(la - lb) > ta + tb:
            return {"side": "lhs", "point": _pt_str(pt), "diff": _sci(abs(la - lb))}
        ra, ha = tri.rhs_num(pt, opts)
        rb, hb = bi.rhs_num(pt, opts)
        if abs(ra - rb) > ha + hb + 2 * opts.eps:
            return {"side": "rhs", "point": _pt_str(pt), "diff": _sci(abs(ra - rb))}
    return None


def _red_collapse(seed: int, opts: AnalyticOpts, npts: int = 2):
    """Triple sum with middle variable 0 collapses to the double sum."""
    regy = get_registry()
    triple, double = regy["gextend"], regy["exgen"]
    for i in range(npts):
        rng = rng_for(seed, "reductions:collapse", i)
        for _ in range(_SAMPLE_ATTEMPTS):
            pt3 = triple.sample(rng)
            pt3 = dict(pt3, s=Q(0))
            pt2 = {k: pt3[k] for k in ("q", "A", "x", "y", "b")}
            pt2["t"] = pt3["t"]
            pt2["s"] = pt3["w"]
            if not triple.constraints(pt3) and not double.constraints(pt2):
                break
        else:
            raise DomainViolation("reductions: no valid collapse point")
        la, ta = triple.lhs_num(pt3, opts)
        lb, tb = double.lhs_num(pt2, opts)
        if abs(la - lb) > ta + tb:
            return {"side": "lhs", "point": _pt_str(pt3), "diff": _sci(abs(la - lb))}
        ra, ha = triple.rhs_num(pt3, opts)
        rb, hb = double.rhs_num(pt2, opts)
        if abs(ra - rb) > ha + hb + 2 * opts.eps:
            return {"side": "rhs", "point": _pt_str(pt3), "diff": _sci(abs(ra - rb))}
    return None


_RED_ANCHOR = "cross-identity reduction suite"


def run_reductions(
    seed: int = 0,
    order: int = 6,
    eps=EPS_DEFAULT,
    tail_target=TAIL_DEFAULT,
    kmax: int = 4000,
):
    opts = AnalyticOpts(eps=eps, tail_target=tail_target, kmax=kmax)
    out = []
    specs = (
        ("reductions:a-shift0", "formal", lambda: _red_shift_zero(order), {"order": order}),
        ("reductions:b-weight0", "formal", lambda: _red_lam_zero(order), {"order": order}),
        ("reductions:c-v0", "analytic", lambda: _red_v_zero(seed, opts), {"points": 2}),
        ("reductions:d-collapse", "analytic", lambda: _red_collapse(seed, opts), {"points": 2}),
    )
    for rid, mode, fn, extra in specs:
        t0 = time.perf_counter()
        wit = fn()
        out.append(
            CheckReport(
                id=rid,
                paper_anchor=_RED_ANCHOR,
                mode=mode,
                status=FAIL if wit else PASS,
                elapsed_ms=_ms(t0),
                witness=wit,
                **extra,
            )
        )
    return out


# ---------------------------------------------------------------------------
# mutations


def _mutation_formal(entry, mut, order: int):
    reg = DEFAULT_REGISTRY
    env = base_env(reg)
    envm = mut(dict(env))
    pairs = entry.build(reg, env, envm, order)
    return _formal_witness(pairs)


def _mutation_analytic(entry, mut, seed: int, opts: AnalyticOpts):
    for i in range(50):
        rng = rng_for(seed, entry.id + "::mut", i)
        for _ in range(_SAMPLE_ATTEMPTS):
            pt = entry.sample(rng)
            if not entry.constraints(pt):
                break
        else:
            continue
        mpt = mut(dict(pt))
        if entry.constraints(mpt):
            continue
        try:
            lv, lt = entry.lhs_num(pt, opts)
            rm, rh = entry.rhs_num(mpt, opts)
        except (TailNotBounded, DivisionByZero):
            continue
        diff = abs(lv - rm)
        bound = opts.eps + lt + rh
        if diff > bound:
            return {
                "point": _pt_str(pt),
                "diff": _sci(diff),
                "bound": _sci(bound),
            }
        return None
    return None


def _mutation_composite(entry, mut, order: int):
    reg = DEFAULT_REGISTRY
    env = base_env(reg)
    return _red_shift_zero(order, env_shift=mut(dict(env)))


def run_mutations(
    ids=None,
    order: int = 4,
    seed: int = 0,
    eps=EPS_DEFAULT,
    tail_target=TAIL_DEFAULT,
    kmax: int = 4000,
):
    """Every catalogued perturbation must produce a detectable mismatch.

    A mutation report passes when the perturbed identity fails; its witness
    records the detected discrepancy.
    """
    regy = get_registry()
    sel = sorted(ids or regy)
    opts = AnalyticOpts(eps=eps, tail_target=tail_target, kmax=kmax)
    out = []
    for cid in sel:
        entry = regy[cid]
        for name, mut in sorted(entry.mutations.items()):
            t0 = time.perf_counter()
            if entry.mode == "formal":
                wit = _mutation_formal(entry, mut, order)
            elif entry.mode == "analytic":
                wit = _mutation_analytic(entry, mut, seed, opts)
            else:
                wit = _mutation_composite(entry, mut, order)
            flipped = wit is not None
            out.append(
                CheckReport(
                    id=f"{cid}::{name}",
                    paper_anchor=entry.anchor,
                    mode=entry.mode,
                    status=PASS if flipped else FAIL,
                    elapsed_ms=_ms(t0),
                    witness=wit if flipped else {"mutation": name, "note": "mutant matched"},
                )
            )
    return out


# ---------------------------------------------------------------------------
# orchestration


def _run_task(args):
    kind, cid, order, npoints, seed, eps, tail_target, kmax, sampled, inj = args
    if kind == "formal":
        return [_run_formal_one(cid, order, seed, sampled)]
    if kind == "analytic":
        return [
            _run_analytic_one(cid, npoints, seed, eps, tail_target, kmax, inj)
        ]
    return run_reductions(seed=seed, eps=eps, tail_target=tail_target, kmax=kmax)


def run_suite(
    suite: str = "all",
    mode=None,
    order: int = 8,
    points: int = 5,
    seed: int = 0,
    eps=EPS_DEFAULT,
    tail_target=TAIL_DEFAULT,
    kmax: int = 4000,
    jobs: int = 1,
    injected=None,
):
    """Run the selected identities and return reports sorted by id.

    `mode` filters/overrides execution: "formal" and "analytic" restrict to
    entries of that mode, "sampled" runs the formal entries at seeded rational
    bindings.  Unknown suite names and invalid injected points raise
    DomainViolation (a configuration error, not an identity failure).
    """
    regy = get_registry()
    if suite in (None, "", "all"):
        ids = list(regy)
    else:
        ids = [s.strip() for s in suite.split(",") if s.strip()]
        for cid in ids:
            if cid not in regy:
                raise DomainViolation(f"unknown identity: {cid}")
    sampled = mode == "sampled"
    if mode in ("formal", "sampled"):
        ids = [i for i in ids if regy[i].mode == "formal"]
    elif mode == "analytic":
        ids = [i for i in ids if regy[i].mode == "analytic"]
    elif mode not in (None, "", "all"):
        raise DomainViolation(f"unknown mode: {mode}")

    if injected:
        # injected points are validated up front so a bad configuration
        # surfaces before any long run
        for cid, pts_list in injected.items():
            if cid not in regy or regy[cid].mode != "analytic":
                raise DomainViolation(f"points injected for non-analytic id: {cid}")
            _points_for(regy[cid], seed, 0, {cid: pts_list})

    tasks = []
    for cid in ids:
        m = regy[cid].mode
        kind = m if m in ("formal", "analytic") else "composite"
        inj = (
            {cid: injected[cid]}
            if kind == "analytic" and injected and cid in injected
            else None
        )
        tasks.append(
            (kind, cid, order, points, seed, eps, tail_target, kmax, sampled, inj)
        )

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_run_task, tasks))
    else:
        chunks = [_run_task(t) for t in tasks]
    reports = [r for chunk in chunks for r in chunk]
    reports.sort(key=lambda r: r.id)
    return reports
