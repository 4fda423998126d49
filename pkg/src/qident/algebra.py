"""Exact scalar, polynomial, rational-function and truncated-series arithmetic.

Layout of the kernel:

  BigRational   -- gmpy2.mpq when available, fractions.Fraction otherwise
  Symbol        -- name + invertible flag (negative exponents allowed)
  SymbolRegistry-- fixed ordered symbol set with packed-integer exponent keys
  MultiPoly     -- sparse Laurent polynomial, dict packed-key -> coefficient
  RatFunc       -- non-canonical quotient of two MultiPoly values
  TruncSeries   -- total-degree-truncated power series with RatFunc coefficients

Exponent vectors are packed into one Python int: each symbol owns a fixed-width
bit field holding (exponent + offset), so multiplying monomials is a single
integer addition (minus the packed offset).  Widths are generous enough that
no field can overflow at the orders this kernel runs at.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .errors import (
    DivisionByZero,
    NonUnitConstantTerm,
    NotDivisible,
    OrderExceeded,
)

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as Q

# Coefficients are ints or Q; mixing is fine under Python arithmetic.
QNum = Union[int, "Q"]

_ZERO = 0
_ONE = 1


def qnum(value) -> QNum:
    """Coerce ints, strings like '3/4', and rationals to a coefficient."""
    if isinstance(value, int):
        return value
    return Q(value)


@dataclass(frozen=True)
class Symbol:
    name: str
    invertible: bool = False


# Widths chosen so field sums at the largest supported truncation orders stay
# far from the edges (q exponents reach a few thousand after cross
# multiplication; everything else stays below a hundred).
_DEFAULT_SYMBOLS = (
    (Symbol("q", invertible=True), 26),
    (Symbol("A", invertible=True), 16),
    (Symbol("B", invertible=True), 16),
    (Symbol("x"), 14),
    (Symbol("y"), 14),
    (Symbol("b"), 14),
    (Symbol("u"), 12),
    (Symbol("v"), 12),
    (Symbol("z"), 12),
    (Symbol("a"), 12),
    (Symbol("c"), 12),
    (Symbol("lam"), 12),
    (Symbol("alpha"), 12),
)


class SymbolRegistry:
    """Immutable ordered symbol set plus the packed-key layout."""

    def __init__(self, symbols_with_widths=_DEFAULT_SYMBOLS):
        self.symbols = tuple(sym for sym, _ in symbols_with_widths)
        self.widths = tuple(w for _, w in symbols_with_widths)
        names = [s.name for s in self.symbols]
        if len(set(names)) != len(names):
            raise ValueError("symbol names must be unique")
        self.index = {s.name: i for i, s in enumerate(self.symbols)}
        self.shifts = []
        shift = 0
        # Last symbol sits in the lowest bits; q in the highest, so raw packed
        # key comparison is lexicographic with q most significant.
        for w in reversed(self.widths):
            self.shifts.append(shift)
            shift += w
        self.shifts.reverse()
        self.offsets = tuple(1 << (w - 1) for w in self.widths)
        self.masks = tuple((1 << w) - 1 for w in self.widths)
        off = 0
        for o, s in zip(self.offsets, self.shifts):
            off |= o << s
        self.offset_key = off
        self._sym_poly_cache: dict[str, MultiPoly] = {}
        self._sym_ratfunc_cache: dict[str, RatFunc] = {}
        self.zero_poly = MultiPoly(self, {})
        self.one_poly = MultiPoly(self, {off: _ONE})
        self.one_ratfunc = RatFunc(self.one_poly, self.one_poly)
        self.zero_ratfunc = RatFunc(self.zero_poly, self.one_poly)
        # Fixed evaluation points for the Schwartz-Zippel equality pre-check.
        rng = random.Random(0x51DE)
        self.sz_points = []
        for _ in range(2):
            pt = {}
            for sym in self.symbols:
                pt[sym.name] = Q(rng.randint(2, 23), rng.randint(24, 53))
            self.sz_points.append(pt)

    def pack(self, exps: Mapping[str, int]) -> int:
        key = self.offset_key
        for name, e in exps.items():
            if e == 0:
                continue
            i = self.index[name]
            if e < 0 and not self.symbols[i].invertible:
                raise ValueError(
                    f"negative exponent on non-invertible symbol {name!r}"
                )
            key += e << self.shifts[i]
        return key

    def unpack(self, key: int) -> tuple[int, ...]:
        return tuple(
            ((key >> s) & m) - o
            for s, m, o in zip(self.shifts, self.masks, self.offsets)
        )

    def exponent(self, key: int, name: str) -> int:
        i = self.index[name]
        return ((key >> self.shifts[i]) & self.masks[i]) - self.offsets[i]

    def total_degree(self, key: int) -> int:
        return sum(self.unpack(key))

    def sym(self, name: str) -> MultiPoly:
        p = self._sym_poly_cache.get(name)
        if p is None:
            p = MultiPoly(self, {self.pack({name: 1}): _ONE})
            self._sym_poly_cache[name] = p
        return p

    def sym_rf(self, name: str) -> RatFunc:
        r = self._sym_ratfunc_cache.get(name)
        if r is None:
            r = RatFunc(self.sym(name), self.one_poly)
            self._sym_ratfunc_cache[name] = r
        return r


class MultiPoly:
    """Sparse multivariate Laurent polynomial over exact rationals.

    terms: dict mapping packed exponent key -> nonzero coefficient.
    Instances are immutable by convention; never mutate .terms after
    construction escapes.
    """

    __slots__ = ("reg", "terms")

    def __init__(self, reg: SymbolRegistry, terms: dict):
        self.reg = reg
        self.terms = terms

    # -- constructors -------------------------------------------------------

    @staticmethod
    def const(reg: SymbolRegistry, value) -> MultiPoly:
        v = qnum(value)
        if v == 0:
            return reg.zero_poly
        return MultiPoly(reg, {reg.offset_key: v})

    @staticmethod
    def monomial(reg: SymbolRegistry, coeff, exps: Mapping[str, int]) -> MultiPoly:
        v = qnum(coeff)
        if v == 0:
            return reg.zero_poly
        return MultiPoly(reg, {reg.pack(exps): v})

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        if len(self.terms) != 1:
            return False
        c = self.terms.get(self.reg.offset_key)
        return c is not None and c == 1

    def is_const(self) -> bool:
        if not self.terms:
            return True
        return len(self.terms) == 1 and self.reg.offset_key in self.terms

    def get_const(self) -> QNum:
        if not self.terms:
            return _ZERO
        if not self.is_const():
            raise ValueError("polynomial is not constant")
        return self.terms[self.reg.offset_key]

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: MultiPoly) -> MultiPoly:
        a, b = self.terms, other.terms
        if not a:
            return other
        if not b:
            return self
        if len(b) > len(a):
            a, b = b, a
        out = dict(a)
        for k, c in b.items():
            s = out.get(k)
            if s is None:
                out[k] = c
            else:
                s = s + c
                if s == 0:
                    del out[k]
                else:
                    out[k] = s
        return MultiPoly(self.reg, out)

    def __neg__(self) -> MultiPoly:
        return MultiPoly(self.reg, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: MultiPoly) -> MultiPoly:
        a, b = self.terms, other.terms
        if not b:
            return self
        if not a:
            return -other
        out = dict(a)
        for k, c in b.items():
            s = out.get(k)
            if s is None:
                out[k] = -c
            else:
                s = s - c
                if s == 0:
                    del out[k]
                else:
                    out[k] = s
        return MultiPoly(self.reg, out)

    def __mul__(self, other: MultiPoly) -> MultiPoly:
        a, b = self.terms, other.terms
        if not a or not b:
            return self.reg.zero_poly
        off = self.reg.offset_key
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for kb, cb in b.items():
            kb_off = kb - off
            for ka, ca in a.items():
                k = ka + kb_off
                c = ca * cb
                s = get(k)
                if s is None:
                    out[k] = c
                else:
                    s = s + c
                    if s == 0:
                        del out[k]
                    else:
                        out[k] = s
        return MultiPoly(self.reg, out)

    def scale(self, value: QNum) -> MultiPoly:
        if value == 0:
            return self.reg.zero_poly
        if value == 1:
            return self
        return MultiPoly(self.reg, {k: c * value for k, c in self.terms.items()})

    def mul_monomial(self, coeff: QNum, exps: Mapping[str, int]) -> MultiPoly:
        if coeff == 0:
            return self.reg.zero_poly
        dk = self.reg.pack(exps) - self.reg.offset_key
        return MultiPoly(self.reg, {k + dk: c * coeff for k, c in self.terms.items()})

    def __pow__(self, n: int) -> MultiPoly:
        if n < 0:
            raise ValueError("negative power of a polynomial; use RatFunc")
        result = self.reg.one_poly
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):  # pragma: no cover - polys are not dict keys in hot paths
        return hash(frozenset(self.terms.items()))

    # -- structure ----------------------------------------------------------

    def degree_in(self, name: str) -> int:
        """Max exponent of `name`; 0 for the zero polynomial."""
        if not self.terms:
            return 0
        reg = self.reg
        i = reg.index[name]
        s, m, o = reg.shifts[i], reg.masks[i], reg.offsets[i]
        return max(((k >> s) & m) - o for k in self.terms)

    def evaluate(self, point: Mapping[str, QNum]) -> QNum:
        reg = self.reg
        total = _ZERO
        for k, c in self.terms.items():
            v = c
            for exp, sym in zip(reg.unpack(k), reg.symbols):
                if exp == 0:
                    continue
                base = point[sym.name]
                if exp < 0:
                    if base == 0:
                        raise DivisionByZero(f"0**{exp} while evaluating {sym.name}")
                    v = v * (Q(base) ** exp)
                else:
                    v = v * (base ** exp)
            total = total + v
        return total

    def substitute_monomials(
        self, bindings: Mapping[str, tuple[QNum, Mapping[str, int]]]
    ) -> MultiPoly:
        """Substitute symbol -> coeff * monomial; stays polynomial (Laurent)."""
        reg = self.reg
        idx_bind = {}
        for name, (cf, exps) in bindings.items():
            idx_bind[reg.index[name]] = (qnum(cf), reg.pack(exps) - reg.offset_key)
        out: dict = {}
        for k, c in self.terms.items():
            exps = reg.unpack(k)
            nk = k
            nc = c
            dead = False
            for i, (cf, dk) in idx_bind.items():
                e = exps[i]
                if e == 0:
                    continue
                nk -= e << reg.shifts[i]
                nk += e * dk
                if cf == 1:
                    pass
                elif cf == 0:
                    dead = True
                    break
                elif e >= 0:
                    nc = nc * (cf ** e)
                else:
                    nc = nc * (Q(cf) ** e)
            if dead:
                continue
            s = out.get(nk)
            if s is None:
                out[nk] = nc
            else:
                s = s + nc
                if s == 0:
                    del out[nk]
                else:
                    out[nk] = s
        return MultiPoly(reg, out)

    def __repr__(self) -> str:
        return f"MultiPoly({poly_str(self)})"


# ---------------------------------------------------------------------------
# exact division


def _unidiv_vals(reg: SymbolRegistry) -> tuple:
    vals = getattr(reg, "_unidiv_vals_cache", None)
    if vals is None:
        rng = random.Random(0x51DE ^ 0xA5)
        vals = tuple(Q(rng.randint(3, 23), rng.randint(24, 53)) for _ in reg.symbols)
        reg._unidiv_vals_cache = vals
    return vals


def _uni_collapse(p: MultiPoly, vals: tuple) -> dict:
    """Collapse to a univariate Laurent poly in q by evaluating other symbols."""
    reg = p.reg
    unpack = reg.unpack
    out: dict = {}
    for k, c in p.terms.items():
        e = unpack(k)
        v = c
        for i in range(1, len(e)):
            ei = e[i]
            if ei:
                v = v * vals[i] ** ei
        d0 = e[0]
        s = out.get(d0)
        out[d0] = v if s is None else s + v
    return {e: c for e, c in out.items() if c != 0}


def _uni_divisible(pu: dict, du: dict) -> bool:
    """Exact divisibility of univariate Laurent polys over Q (q invertible)."""
    pmin = min(pu)
    dmin = min(du)
    pdeg = max(pu) - pmin
    ddeg = max(du) - dmin
    if pdeg < ddeg:
        return False
    P = [0] * (pdeg + 1)
    for e, c in pu.items():
        P[e - pmin] = c
    D = [0] * (ddeg + 1)
    for e, c in du.items():
        D[e - dmin] = c
    lead = D[ddeg]
    for i in range(pdeg, ddeg - 1, -1):
        c = P[i]
        if c == 0:
            continue
        f = Q(c) / Q(lead)
        off = i - ddeg
        for j in range(ddeg):
            if D[j]:
                P[off + j] -= f * D[j]
        P[i] = 0
    return not any(P[:ddeg])


def _try_div(p: MultiPoly, d: MultiPoly, cap: Optional[int] = None) -> Optional[MultiPoly]:
    """Exact division attempt: return q with p == q*d, else None.

    Greedy reduction against the divisor's leading monomial in the packed-key
    order (lexicographic, q most significant).  Each step strictly lowers the
    processed lead key, so the loop always terminates; `cap` just bounds the
    effort spent on opportunistic calls.
    """
    if d.is_zero():
        raise DivisionByZero("division by the zero polynomial")
    if p.is_zero():
        return p.reg.zero_poly
    if d.is_one():
        return p
    reg = p.reg
    kd = max(d.terms)
    cd = d.terms[kd]
    ed = reg.unpack(kd)
    inv_flags = tuple(s.invertible for s in reg.symbols)
    # Trailing monomials multiply exactly like leading ones, so if the tail
    # quotient needs a negative exponent the division must fail; this rejects
    # deep failures before the reduction loop pays for them.
    e_lo = reg.unpack(min(p.terms))
    d_lo = reg.unpack(min(d.terms))
    for a, b, inv in zip(e_lo, d_lo, inv_flags):
        if a < b and not inv:
            return None
    if cap is not None:
        # Specializing every symbol but q is a ring homomorphism, so exact
        # divisibility must survive it; the univariate remainder test rejects
        # nearly all hopeless opportunistic attempts at trivial cost.
        vals = _unidiv_vals(reg)
        du = _uni_collapse(d, vals)
        pu = _uni_collapse(p, vals)
        if du:
            if pu and not _uni_divisible(pu, du):
                return None
        elif pu:
            return None
    rem = dict(p.terms)
    out: dict = {}
    steps = 0
    # max-heap (negated keys, lazy deletion): every live key of rem is on the
    # heap, so after draining stale tops the heap top is max(rem).
    heap = [-k for k in rem]
    heapq.heapify(heap)
    while rem:
        if cap is not None:
            steps += 1
            if steps > cap:
                return None
        while True:
            km = -heap[0]
            if km in rem:
                break
            heapq.heappop(heap)
        em = reg.unpack(km)
        qe = tuple(a - b for a, b in zip(em, ed))
        ok = True
        for e, inv in zip(qe, inv_flags):
            if e < 0 and not inv:
                ok = False
                break
        if not ok:
            return None
        qk = km - kd + reg.offset_key
        cm = rem[km]
        if isinstance(cm, int) and isinstance(cd, int) and cm % cd == 0:
            qc = cm // cd
        else:
            qc = Q(cm) / Q(cd)
        out[qk] = qc
        # rem -= qc * x^qe * d
        base = qk - reg.offset_key
        for k2, c2 in d.terms.items():
            k = k2 + base
            c = c2 * qc
            s = rem.get(k)
            if s is None:
                rem[k] = -c
                heapq.heappush(heap, -k)
            else:
                s = s - c
                if s == 0:
                    del rem[k]
                else:
                    rem[k] = s
    return MultiPoly(reg, out)


def poly_div_exact_in(p: MultiPoly, d: MultiPoly, pivot: str) -> MultiPoly:
    """Exact univariate long division in `pivot`; NotDivisible on remainder."""
    if d.is_zero():
        raise DivisionByZero("division by the zero polynomial")
    if p.is_zero():
        return p.reg.zero_poly
    reg = p.reg
    i = reg.index[pivot]
    shift, mask, offs = reg.shifts[i], reg.masks[i], reg.offsets[i]

    def pivot_deg(k: int) -> int:
        return ((k >> shift) & mask) - offs

    d_deg = max(pivot_deg(k) for k in d.terms)
    lead = MultiPoly(
        reg,
        {k - (d_deg << shift): c for k, c in d.terms.items() if pivot_deg(k) == d_deg},
    )
    rem = MultiPoly(reg, dict(p.terms))
    out = reg.zero_poly
    while not rem.is_zero():
        r_deg = max(pivot_deg(k) for k in rem.terms)
        if r_deg < d_deg:
            raise NotDivisible(f"remainder of pivot degree {r_deg} left")
        r_lead = MultiPoly(
            reg,
            {
                k - (r_deg << shift): c
                for k, c in rem.terms.items()
                if pivot_deg(k) == r_deg
            },
        )
        q_coeff = _try_div(r_lead, lead)
        if q_coeff is None:
            raise NotDivisible("leading coefficient not divisible")
        q_term = q_coeff.mul_monomial(_ONE, {pivot: r_deg - d_deg})
        out = out + q_term
        rem = rem - q_term * d
    return out


# ---------------------------------------------------------------------------
# content normalization helpers


def _int_lcm(a: int, b: int) -> int:
    from math import gcd

    return a // gcd(a, b) * b


def _strip_content(num: MultiPoly, den: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    """Scale to integer coefficients and remove the common integer content."""
    from math import gcd

    lcm = 1
    for p in (num, den):
        for c in p.terms.values():
            d = c.denominator if not isinstance(c, int) else 1
            if d != 1:
                lcm = _int_lcm(lcm, int(d))
    if lcm != 1:
        num = MultiPoly(num.reg, {k: _as_int(c * lcm) for k, c in num.terms.items()})
        den = MultiPoly(den.reg, {k: _as_int(c * lcm) for k, c in den.terms.items()})
    g = 0
    for p in (num, den):
        for c in p.terms.values():
            g = gcd(g, int(c))
            if g == 1:
                break
        if g == 1:
            break
    neg = False
    if den.terms:
        neg = den.terms[max(den.terms)] < 0
    if g > 1 or neg:
        if neg:
            g = -g if g else -1
        num = MultiPoly(num.reg, {k: _as_int_div(c, g) for k, c in num.terms.items()})
        den = MultiPoly(den.reg, {k: _as_int_div(c, g) for k, c in den.terms.items()})
    return num, den


def _as_int(c) -> QNum:
    ic = int(c)
    return ic if ic == c else c


def _as_int_div(c, g) -> QNum:
    if isinstance(c, int) and c % g == 0:
        return c // g
    return Q(c) / g


_TRY_DIV_CAP = 512


class RatFunc:
    """Quotient of MultiPoly values; not canonical, equality by cross product."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly, normalize: bool = False):
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if normalize and not den.is_one():
            num, den = _strip_content(num, den)
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_poly(p: MultiPoly) -> RatFunc:
        return RatFunc(p, p.reg.one_poly)

    @staticmethod
    def const(reg: SymbolRegistry, value) -> RatFunc:
        return RatFunc(MultiPoly.const(reg, value), reg.one_poly)

    @property
    def reg(self) -> SymbolRegistry:
        return self.num.reg

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        if self.den.is_one():
            return self.num.is_one()
        return self.num == self.den

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: RatFunc) -> RatFunc:
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        a, b = self, other
        if a.den is b.den or a.den == b.den:
            return RatFunc(a.num + b.num, a.den)
        e = _try_div(b.den, a.den, cap=_TRY_DIV_CAP)
        if e is not None:
            return RatFunc(a.num * e + b.num, b.den)
        e = _try_div(a.den, b.den, cap=_TRY_DIV_CAP)
        if e is not None:
            return RatFunc(a.num + b.num * e, a.den)
        return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den, normalize=True)

    def __neg__(self) -> RatFunc:
        return RatFunc(-self.num, self.den)

    def __sub__(self, other: RatFunc) -> RatFunc:
        return self + (-other)

    def __mul__(self, other: RatFunc) -> RatFunc:
        if self.num.is_zero() or other.num.is_zero():
            return self.reg.zero_ratfunc
        if self.den.is_one():
            if other.den.is_one():
                return RatFunc(self.num * other.num, self.den)
            return RatFunc(self.num * other.num, other.den)
        if other.den.is_one():
            return RatFunc(self.num * other.num, self.den)
        # opportunistic cross cancellation keeps pochhammer chains small
        e = _try_div(self.num, other.den, cap=_TRY_DIV_CAP)
        if e is not None:
            return RatFunc(e * other.num, self.den)
        e = _try_div(other.num, self.den, cap=_TRY_DIV_CAP)
        if e is not None:
            return RatFunc(self.num * e, other.den)
        return RatFunc(self.num * other.num, self.den * other.den, normalize=True)

    def __truediv__(self, other: RatFunc) -> RatFunc:
        if other.num.is_zero():
            raise DivisionByZero("division by the zero rational function")
        return self * RatFunc(other.den, other.num)

    def __pow__(self, n: int) -> RatFunc:
        if n == 0:
            return self.reg.one_ratfunc
        if n < 0:
            if self.num.is_zero():
                raise DivisionByZero("negative power of zero")
            return RatFunc(self.den, self.num) ** (-n)
        return RatFunc(self.num ** n, self.den ** n)

    def scale(self, value: QNum) -> RatFunc:
        if value == 0:
            return self.reg.zero_ratfunc
        return RatFunc(self.num.scale(value), self.den)

    def to_poly(self) -> MultiPoly:
        """Exact conversion to MultiPoly; NotDivisible if genuinely rational."""
        if self.den.is_one():
            return self.num
        if self.den.is_const():
            return self.num.scale(Q(1) / Q(self.den.get_const()))
        q = _try_div(self.num, self.den)
        if q is None:
            raise NotDivisible("rational function is not polynomial")
        return q

    def evaluate(self, point: Mapping[str, QNum]) -> QNum:
        d = self.den.evaluate(point)
        if d == 0:
            raise DivisionByZero("denominator vanished at evaluation point")
        n = self.num.evaluate(point)
        if n == 0:
            return _ZERO
        return Q(n) / Q(d)

    def __repr__(self) -> str:
        return f"RatFunc({ratfunc_str(self)})"


def ratfunc_equal(a: RatFunc, b: RatFunc) -> bool:
    """a == b as rational functions, via cross multiplication.

    A Schwartz-Zippel style evaluation at two fixed rational points runs
    first; it can only short-circuit to False (a fast witness for genuinely
    different functions), never to True.
    """
    if a.num.is_zero():
        return b.num.is_zero()
    if b.num.is_zero():
        return False
    if a.den is b.den or a.den == b.den:
        return a.num == b.num
    for pt in a.reg.sz_points:
        try:
            da = a.den.evaluate(pt)
            db = b.den.evaluate(pt)
            if da == 0 or db == 0:
                continue
            if a.num.evaluate(pt) * db != b.num.evaluate(pt) * da:
                return False
        except DivisionByZero:
            continue
    # one-sided exact division keeps the confirming multiplication small
    e = _try_div(b.den, a.den, cap=20000)
    if e is not None:
        return a.num * e == b.num
    e = _try_div(a.den, b.den, cap=20000)
    if e is not None:
        return a.num == b.num * e
    return (a.num * b.den - b.num * a.den).is_zero()


def ratfunc_eval(a: RatFunc, point: Mapping[str, QNum]) -> QNum:
    return a.evaluate(point)


def poly_mul(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a * b


def poly_substitute(p: MultiPoly, bindings: Mapping[str, RatFunc]) -> RatFunc:
    """Substitute symbols by arbitrary rational functions."""
    reg = p.reg
    idx_bind = {reg.index[name]: val for name, val in bindings.items()}
    pow_cache: dict[tuple[int, int], RatFunc] = {}

    def bound_power(i: int, e: int) -> RatFunc:
        key = (i, e)
        r = pow_cache.get(key)
        if r is None:
            r = idx_bind[i] ** e
            pow_cache[key] = r
        return r

    total = reg.zero_ratfunc
    for k, c in p.terms.items():
        exps = reg.unpack(k)
        rest: dict = {}
        factor = reg.one_ratfunc
        for i, e in enumerate(exps):
            if e == 0:
                continue
            if i in idx_bind:
                factor = factor * bound_power(i, e)
            else:
                rest[reg.symbols[i].name] = e
        term = factor.scale(c)
        if rest:
            term = term * RatFunc.from_poly(MultiPoly.monomial(reg, _ONE, rest))
        total = total + term
    return total


# ---------------------------------------------------------------------------
# truncated series

VAR_ORDER = ("t", "s", "w", "lam")


def _canon_vars(vars: Iterable[str]) -> tuple[str, ...]:
    vs = set(vars)
    unknown = vs.difference(VAR_ORDER)
    if unknown:
        raise ValueError(f"unknown expansion variables {sorted(unknown)}")
    return tuple(v for v in VAR_ORDER if v in vs)


class TruncSeries:
    """Power series truncated by total degree across its expansion variables."""

    __slots__ = ("reg", "vars", "order", "coeffs")

    def __init__(self, reg, vars: Sequence[str], order: int, coeffs: dict):
        if order < 0:
            raise ValueError("order must be >= 0")
        self.reg = reg
        self.vars = tuple(vars)
        self.order = order
        self.coeffs = coeffs

    @staticmethod
    def const(reg, vars: Sequence[str], order: int, value: RatFunc) -> TruncSeries:
        zero = (0,) * len(tuple(vars))
        coeffs = {} if value.is_zero() else {zero: value}
        return TruncSeries(reg, tuple(vars), order, coeffs)

    @staticmethod
    def one(reg, vars: Sequence[str], order: int) -> TruncSeries:
        return TruncSeries.const(reg, vars, order, reg.one_ratfunc)

    def coeff(self, deg: Sequence[int]) -> RatFunc:
        deg = tuple(deg)
        if len(deg) != len(self.vars):
            raise ValueError("degree vector arity mismatch")
        if sum(deg) > self.order:
            raise OrderExceeded(f"degree {deg} beyond truncation order {self.order}")
        return self.coeffs.get(deg, self.reg.zero_ratfunc)

    def align(self, vars: Sequence[str]) -> TruncSeries:
        vars = tuple(vars)
        if vars == self.vars:
            return self
        pos = []
        for v in self.vars:
            if v not in vars:
                raise ValueError(f"cannot drop variable {v} in alignment")
            pos.append(vars.index(v))
        coeffs = {}
        for deg, c in self.coeffs.items():
            nd = [0] * len(vars)
            for p, d in zip(pos, deg):
                nd[p] = d
            coeffs[tuple(nd)] = c
        return TruncSeries(self.reg, vars, self.order, coeffs)

    def __add__(self, other: TruncSeries) -> TruncSeries:
        vars = _canon_vars(set(self.vars) | set(other.vars))
        a = self.align(vars)
        b = other.align(vars)
        order = min(a.order, b.order)
        out = {d: c for d, c in a.coeffs.items() if sum(d) <= order}
        for d, c in b.coeffs.items():
            if sum(d) > order:
                continue
            s = out.get(d)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(d, None)
            else:
                out[d] = s
        return TruncSeries(self.reg, vars, order, out)

    def __neg__(self) -> TruncSeries:
        return TruncSeries(
            self.reg, self.vars, self.order, {d: -c for d, c in self.coeffs.items()}
        )

    def __sub__(self, other: TruncSeries) -> TruncSeries:
        return self + (-other)

    def __mul__(self, other: TruncSeries) -> TruncSeries:
        vars = _canon_vars(set(self.vars) | set(other.vars))
        a = self.align(vars)
        b = other.align(vars)
        order = min(a.order, b.order)
        if len(a.coeffs) < len(b.coeffs):
            a, b = b, a
        out: dict = {}
        for db, cb in b.coeffs.items():
            sb = sum(db)
            if sb > order:
                continue
            for da, ca in a.coeffs.items():
                if sum(da) + sb > order:
                    continue
                d = tuple(i + j for i, j in zip(da, db))
                c = ca * cb
                s = out.get(d)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(d, None)
                else:
                    out[d] = s
        return TruncSeries(self.reg, vars, order, out)

    def scale(self, value: RatFunc) -> TruncSeries:
        if value.is_zero():
            return TruncSeries(self.reg, self.vars, self.order, {})
        return TruncSeries(
            self.reg,
            self.vars,
            self.order,
            {d: c * value for d, c in self.coeffs.items()},
        )

    def shift(self, var: str, k: int) -> TruncSeries:
        """Multiply by var**k, truncating at the same order."""
        i = self.vars.index(var)
        out = {}
        for d, c in self.coeffs.items():
            nd = list(d)
            nd[i] += k
            if nd[i] < 0:
                raise ValueError("negative shift below degree zero")
            if sum(nd) <= self.order:
                out[tuple(nd)] = c
        return TruncSeries(self.reg, self.vars, self.order, out)

    def restrict(self, var: str, degree: int = 0) -> TruncSeries:
        """Slice at var**degree and drop the variable."""
        i = self.vars.index(var)
        vars = tuple(v for v in self.vars if v != var)
        out = {}
        for d, c in self.coeffs.items():
            if d[i] != degree:
                continue
            nd = tuple(e for j, e in enumerate(d) if j != i)
            out[nd] = c
        return TruncSeries(self.reg, vars, self.order - degree, out)

    def truncate(self, order: int) -> TruncSeries:
        if order >= self.order:
            return self
        return TruncSeries(
            self.reg,
            self.vars,
            order,
            {d: c for d, c in self.coeffs.items() if sum(d) <= order},
        )

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        parts = []
        for d in sorted(self.coeffs)[:6]:
            parts.append(f"{d}: {ratfunc_str(self.coeffs[d])}")
        return f"TruncSeries({self.vars}, N={self.order}, {{{', '.join(parts)}}})"


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return a * b


def series_coeff(a: TruncSeries, deg: Sequence[int]) -> RatFunc:
    return a.coeff(deg)


def _graded_degrees(nvars: int, order: int):
    """All degree vectors with total degree <= order, graded-lex sorted."""

    def gen(prefix, rem, slots):
        if slots == 1:
            yield prefix + (rem,)
            return
        for e in range(rem + 1):
            yield from gen(prefix + (e,), rem - e, slots - 1)

    for total in range(order + 1):
        if nvars == 0:
            if total == 0:
                yield ()
            continue
        yield from gen((), total, nvars)


def series_reciprocal(a: TruncSeries) -> TruncSeries:
    """Multiplicative inverse up to the truncation order (graded recursion)."""
    zero_deg = (0,) * len(a.vars)
    a0 = a.coeffs.get(zero_deg)
    if a0 is None or a0.is_zero():
        raise NonUnitConstantTerm("series has no invertible constant term")
    inv0 = a.reg.one_ratfunc / a0
    out = {zero_deg: inv0}
    for d in _graded_degrees(len(a.vars), a.order):
        if d == zero_deg:
            continue
        acc = a.reg.zero_ratfunc
        for e, ae in a.coeffs.items():
            if e == zero_deg:
                continue
            rd = tuple(i - j for i, j in zip(d, e))
            if any(i < 0 for i in rd):
                continue
            r = out.get(rd)
            if r is None:
                continue
            acc = acc + ae * r
        if not acc.is_zero():
            out[d] = -(inv0 * acc)
    return TruncSeries(a.reg, a.vars, a.order, out)


def series_equal_witness(
    a: TruncSeries, b: TruncSeries
) -> Optional[tuple[tuple[int, ...], RatFunc, RatFunc]]:
    """None when equal to the common order; else the first differing degree."""
    vars = _canon_vars(set(a.vars) | set(b.vars))
    a = a.align(vars)
    b = b.align(vars)
    order = min(a.order, b.order)
    for d in _graded_degrees(len(vars), order):
        ca = a.coeffs.get(d, a.reg.zero_ratfunc)
        cb = b.coeffs.get(d, b.reg.zero_ratfunc)
        if not ratfunc_equal(ca, cb):
            return d, ca, cb
    return None


# ---------------------------------------------------------------------------
# deterministic text rendering

_COEFF_SYMS = ("q", "A", "B", "a")


def _coeff_part_str(reg, k: int, c) -> tuple[str, bool]:
    """Render one coefficient-symbol monomial; returns (text, negative)."""
    neg = c < 0
    if neg:
        c = -c
    factors = []
    if c != 1:
        factors.append(str(c))
    for name in ("A", "B", "a", "q"):
        e = reg.exponent(k, name)
        if e == 0:
            continue
        factors.append(name if e == 1 else f"{name}^{e}")
    if not factors:
        factors.append("1")
    return "*".join(factors), neg


def poly_str(p: MultiPoly) -> str:
    """Deterministic rendering: terms grouped by the non-(q,A,B) monomial.

    Groups are ordered by ascending total degree, then descending
    lexicographic exponent vector in registry order; coefficients in q, A, B
    are rendered in parentheses when they have more than one term.
    """
    reg = p.reg
    if p.is_zero():
        return "0"
    coeff_idx = [reg.index[n] for n in _COEFF_SYMS if n in reg.index]
    groups: dict[tuple[int, ...], dict] = {}
    for k, c in p.terms.items():
        exps = reg.unpack(k)
        group = tuple(
            e if i not in coeff_idx else 0 for i, e in enumerate(exps)
        )
        ck = reg.offset_key
        for i in coeff_idx:
            ck += exps[i] << reg.shifts[i]
        groups.setdefault(group, {})[ck] = c

    def group_order(g):
        return (sum(g), tuple(-e for e in g))

    pieces = []
    for g in sorted(groups, key=group_order):
        mono_factors = []
        for i, e in enumerate(g):
            if e == 0:
                continue
            name = reg.symbols[i].name
            mono_factors.append(name if e == 1 else f"{name}^{e}")
        mono = "*".join(mono_factors)
        coeff_terms = groups[g]
        keys = sorted(coeff_terms, key=lambda k: (reg.total_degree(k), k))
        if len(keys) == 1:
            body, neg = _coeff_part_str(reg, keys[0], coeff_terms[keys[0]])
            if mono:
                text = mono if body == "1" else f"{body}*{mono}"
            else:
                text = body
            pieces.append(("-" if neg else "+", text))
        else:
            lead_neg = coeff_terms[keys[0]] < 0
            sign = -1 if lead_neg else 1
            inner = []
            for j, k in enumerate(keys):
                body, neg = _coeff_part_str(reg, k, sign * coeff_terms[k])
                if j == 0:
                    inner.append(body if not neg else f"-{body}")
                else:
                    inner.append(f"- {body}" if neg else f"+ {body}")
            joined = " ".join(inner)
            text = f"({joined})*{mono}" if mono else f"({joined})"
            pieces.append(("-" if lead_neg else "+", text))
    sign0, text0 = pieces[0]
    parts = [f"-{text0}" if sign0 == "-" else text0]
    for sign, text in pieces[1:]:
        parts.append(f"{sign} {text}")
    return " ".join(parts)


def ratfunc_str(r: RatFunc) -> str:
    if r.den.is_one():
        return poly_str(r.num)
    return f"({poly_str(r.num)})/({poly_str(r.den)})"


DEFAULT_REGISTRY = SymbolRegistry()
