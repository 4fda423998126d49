"""Seeded sample-point generation: dyadic analytic points, rational bindings.

Sampling is deterministic: the RNG is keyed by (seed, identity id, point
index).  Analytic points are dyadic so exact partial sums stay cheap; the
draw helpers keep magnitudes small enough that every geometric tail ratio
used by the runner stays well below 1.
"""

from __future__ import annotations

import random

from ..algebra import Q


def rng_for(seed: int, ident: str, index: int = 0) -> random.Random:
    return random.Random(f"{seed}:{ident}:{index}")


# --- dyadic draws -----------------------------------------------------------

_Q_CHOICES = [Q(1, 4), Q(5, 16), Q(3, 8), Q(7, 16)]
_MID_CHOICES = [Q(1, 8), Q(1, 4), Q(3, 8), Q(1, 2), Q(5, 8), Q(3, 4)]
_FRAC_CHOICES = [Q(1, 4), Q(5, 16), Q(3, 8), Q(1, 2)]


def dyadic_q(rng: random.Random):
    """Base q for analytic points: dyadic, comfortably inside (0,1)."""
    return rng.choice(_Q_CHOICES)


def dyadic_small(rng: random.Random):
    """Small positive dyadic in (0, 1/8]."""
    e = rng.choice([5, 6, 7])
    m = rng.randrange(1, 2 ** (e - 3), 2)
    return Q(m, 2 ** e)


def dyadic_mid(rng: random.Random):
    """Positive dyadic in [1/8, 3/4] (pochhammer bases, q-power aliases)."""
    return rng.choice(_MID_CHOICES)


def dyadic_frac(rng: random.Random):
    """Dyadic ratio in (0, 1/2] used to order nested expansion variables."""
    return rng.choice(_FRAC_CHOICES)


# --- degeneracy guards ------------------------------------------------------


def off_q_ladder(val, qv, jmax: int = 200, margin=Q(1, 64)) -> bool:
    """True when 1 - val*q^j stays at least `margin` away from 0 for j<=jmax.

    Used for every pochhammer base that lands in a denominator and every
    lower phi parameter, so interval reciprocals never straddle zero and no
    term of a partial sum divides by a vanishing factor.
    """
    val = abs(Q(val))
    if val == 0:
        return True
    qj = Q(1)
    for _ in range(jmax + 1):
        if abs(1 - val * qj) < margin:
            return False
        qj *= qv
        if val * qj < margin:  # factors only drift toward 1 from here on
            return True
    return True


def all_below_one(vals) -> bool:
    return all(abs(Q(v)) < 1 for v in vals)


# --- rational bindings for the sampled formal mode --------------------------


def sampled_binding(rng: random.Random, names, qname: str = "q") -> dict:
    """Rational values (numerators/denominators <= 99) for non-expansion symbols.

    q gets a proper fraction strictly inside (0,1) and never 1/2's trivial
    neighbors 0 or 1; other symbols get positive rationals, never exactly 1
    (so x != y style coincidences cannot mask an asymmetry bug).
    """
    out = {}
    for name in names:
        if name == qname:
            den = rng.randrange(3, 100)
            num = rng.randrange(1, den)
            out[name] = Q(num, den)
        else:
            num = rng.randrange(1, 100)
            den = rng.randrange(1, 100)
            v = Q(num, den)
            if v == 1:
                v = Q(num + 1 if num < 99 else num - 1, den)
            out[name] = v
    return out
