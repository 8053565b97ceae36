"""Vectorised double-double arithmetic for carrier phase reduction.

A carrier at a few GHz observed a few tens of km away accumulates ~1e5-1e7
cycles, and a plain float64 product keeps only ~1e-10 of the fractional
cycle.  Every value here is an unevaluated sum ``hi + lo`` with
``|lo| <= ulp(hi)/2``, which carries ~106 bits and reduces the fractional
cycle to float64 accuracy.

The error-free transformations are the classic ones (Knuth two-sum, Dekker
split/product); numpy does not expose fma, so the products are split.
"""

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def quick_two_sum(a, b):
    # requires |a| >= |b|
    s = a + b
    return s, b - (s - a)


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def dd_add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    e = e + (al + bl)
    return quick_two_sum(s, e)


def dd_sub(ah, al, bh, bl):
    return dd_add(ah, al, -np.asarray(bh), -np.asarray(bl))


def dd_mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return quick_two_sum(p, e)


def dd_div_d(ah, al, b):
    """Divide a double-double by a plain double."""
    q1 = ah / b
    p, e = two_prod(q1, b)
    rem = ((ah - p) - e) + al
    q2 = rem / b
    return quick_two_sum(q1, q2)


def frac_cycles(hi, lo):
    """Fractional part of ``hi + lo`` wrapped to [-0.5, 0.5], as float64.

    ``hi - round(hi)`` is exact for |hi| < 2**52, so the only rounding is the
    final addition of ``lo``.
    """
    hi = np.asarray(hi, dtype=np.float64)
    lo = np.asarray(lo, dtype=np.float64)
    f = (hi - np.round(hi)) + lo
    return f - np.round(f)
