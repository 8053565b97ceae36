"""Per-element propagation phase in cycles, reduced without losing the fraction.

All functions broadcast over ``theta``, ``r1`` and ``t`` and put the element
axis last.  Phases are returned as fractional cycles in [-0.5, 0.5]; the large
integer part of f * (t - r1/c) is removed in double-double arithmetic before
anything is rounded to float64.
"""

import numpy as np

from . import _ddouble as dd
from .model import ArrayConfig, PhaseMode


def retarded_time(t, r1, c: float):
    """t - r1/c as a double-double pair."""
    t = np.asarray(t, dtype=np.float64)
    r1 = np.asarray(r1, dtype=np.float64)
    qh, ql = dd.dd_div_d(r1, np.zeros_like(r1), c)
    return dd.dd_sub(t, np.zeros_like(t), qh, ql)


def carrier_cycles(cfg: ArrayConfig, r1, t) -> np.ndarray:
    """Fractional cycles of the reference carrier f0 * (t - r1/c)."""
    uh, ul = retarded_time(t, r1, cfg.c)
    ph, pl = dd.dd_mul(cfg.f0, 0.0, uh, ul)
    return dd.frac_cycles(ph, pl)


def element_cycles(cfg: ArrayConfig, theta, r1, t, mode: PhaseMode = PhaseMode.DROP_QUADRATIC,
                   baseband: bool = False) -> np.ndarray:
    """Fractional phase (in cycles) of every element's wave at (theta, r1, t).

    With ``baseband`` the reference carrier f0*(t - r1/c) is subtracted before
    reduction, i.e. the result is what a receiver sees after mixing with its
    own f0 local oscillator.
    """
    theta = np.asarray(theta, dtype=np.float64)
    uh, ul = retarded_time(t, r1, cfg.c)
    theta, uh, ul = np.broadcast_arrays(theta, uh, ul)
    uh = uh[..., None]
    ul = ul[..., None]
    m = cfg.element_index
    # (n-1) d cos(theta) / c, the element's path-length advance in seconds
    lead = (cfg.spacing * np.cos(theta) / cfg.c)[..., None] * m

    if mode is PhaseMode.EXACT:
        fh, fl = dd.two_prod(m, cfg.delta_f)
        fh, fl = dd.dd_add(cfg.f0, 0.0, fh, fl)          # f_n
        sh, sl = dd.dd_add(uh, ul, lead, 0.0)            # t - (r1 - lead*c)/c
        ch, cl = dd.dd_mul(fh, fl, sh, sl)
        if baseband:
            bh, bl = dd.dd_mul(cfg.f0, 0.0, uh, ul)
            ch, cl = dd.dd_sub(ch, cl, bh, bl)
        return dd.frac_cycles(ch, cl)

    # f0*u + (n-1)*f0*d*cos(theta)/c + (n-1)*delta_f*u
    sh, sl = dd.dd_mul(cfg.delta_f * m, 0.0, uh, ul)
    sh, sl = dd.dd_add(sh, sl, cfg.f0 * lead, 0.0)
    if not baseband:
        ch, cl = dd.dd_mul(cfg.f0, 0.0, uh, ul)
        sh, sl = dd.dd_add(ch, cl, sh, sl)
    return dd.frac_cycles(sh, sl)


def element_phasors(cfg: ArrayConfig, theta, r1, t, mode: PhaseMode = PhaseMode.DROP_QUADRATIC,
                    baseband: bool = False) -> np.ndarray:
    """exp(j*2*pi*cycles) for every element; shape (..., N)."""
    return np.exp(2j * np.pi * element_cycles(cfg, theta, r1, t, mode, baseband))


def quadratic_cycles(cfg: ArrayConfig, theta) -> np.ndarray:
    """The (n-1)**2 * delta_f * d * cos(theta) / c term dropped by the approximate mode."""
    theta = np.asarray(theta, dtype=np.float64)
    m = cfg.element_index
    return (cfg.delta_f * cfg.spacing * np.cos(theta) / cfg.c)[..., None] * m ** 2
