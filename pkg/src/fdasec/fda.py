"""Frequency diverse array far field, FDA-DM field, and beam-peak loci."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dm import ExcitationVector, NoiseVector, synthesize_excitation
from .model import ArrayConfig, ObservationPoint, PhaseMode, Scenario, steering_vector
from .phase import element_phasors


class RangeIndependentPeaksError(ValueError):
    """With delta_f == 0 the peak condition does not involve range."""


@dataclass(frozen=True)
class PeakLocus:
    """All (theta, r1, t) with f0 d cos(theta)/c - delta_f r1/c + delta_f t == z."""

    cfg: ArrayConfig
    z: int

    def range_at(self, theta: float, t: float) -> float:
        return peak_locus_range(self.cfg, theta, t, self.z)

    def residual(self, theta: float, r1: float, t: float) -> float:
        c = self.cfg.c
        return (self.cfg.f0 * self.cfg.spacing * math.cos(theta) / c
                - self.cfg.delta_f * r1 / c + self.cfg.delta_f * t - self.z)


def _excitation(excitation) -> np.ndarray:
    if isinstance(excitation, ExcitationVector):
        return excitation.entries
    return np.asarray(excitation, dtype=complex)


def fda_field(cfg: ArrayConfig, excitation, obs: ObservationPoint,
              mode: PhaseMode = PhaseMode.DROP_QUADRATIC, path_loss: bool = False) -> complex:
    """B = sum_n A_n exp(j 2 pi f_n (t - (r1 - (n-1) d cos(theta)) / c)).

    Path loss is normalised out unless ``path_loss`` asks for a 1/r1 factor.
    """
    a = _excitation(excitation)
    if a.shape != (cfg.n_elements,):
        raise ValueError(f"excitation must have {cfg.n_elements} entries, got shape {a.shape}")
    value = complex(np.sum(a * element_phasors(cfg, obs.theta, obs.range, obs.time, mode)))
    if path_loss:
        value /= obs.range
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise FloatingPointError(f"non-finite field at {obs}")
    return value


def fda_field_grid(cfg: ArrayConfig, excitations, theta, r1, t,
                   mode: PhaseMode = PhaseMode.DROP_QUADRATIC, baseband: bool = False) -> np.ndarray:
    """Fields for many points and many excitations at once.

    ``excitations`` is (K, N) or (N,); the result has the broadcast point shape
    followed by K (dropped when a single excitation is given).
    """
    ph = element_phasors(cfg, theta, r1, t, mode, baseband)
    a = np.asarray(excitations, dtype=complex)
    return ph @ a.T


def fda_dm_field(cfg: ArrayConfig, scn: Scenario, d_sym: complex, w: NoiseVector | np.ndarray,
                 obs: ObservationPoint, mode: PhaseMode = PhaseMode.DROP_QUADRATIC) -> complex:
    """FDA field driven by the DM excitation p*D*conj(H(theta0)) + q*W."""
    h0 = steering_vector(cfg, scn.theta0)
    return fda_field(cfg, synthesize_excitation(scn, h0, d_sym, w), obs, mode)


def fda_dm_terms(cfg: ArrayConfig, scn: Scenario, d_sym: complex, w, obs: ObservationPoint,
                 mode: PhaseMode = PhaseMode.DROP_QUADRATIC) -> tuple[complex, complex]:
    """(information sum, artificial-noise sum) of the FDA-DM field separately."""
    h0 = steering_vector(cfg, scn.theta0)
    w_entries = w.entries if isinstance(w, NoiseVector) else np.asarray(w, dtype=complex)
    ph = element_phasors(cfg, obs.theta, obs.range, obs.time, mode)
    info = complex(np.sum(scn.p * d_sym * np.conj(h0) * ph))
    noise = complex(np.sum(scn.q * w_entries * ph))
    return info, noise


def peak_locus_range(cfg: ArrayConfig, theta: float, t: float, z: int) -> float:
    """Range at which the z-th beam peak sits for direction theta at time t.

    Solves the (linear) phase-alignment condition for r1; non-positive
    results are returned unchanged and are the caller's to discard.
    """
    if cfg.delta_f == 0:
        raise RangeIndependentPeaksError(
            "range-independent peaks: with delta_f == 0 alignment only depends on theta")
    c = cfg.c
    return (cfg.f0 * cfg.spacing * math.cos(theta) / c + cfg.delta_f * t - z) * c / cfg.delta_f


def quadratic_phase_bound(cfg: ArrayConfig) -> float:
    """Largest phase dropped by the approximate mode, in degrees."""
    m = cfg.n_elements - 1
    return 360.0 * m * m * abs(cfg.delta_f) * cfg.spacing / cfg.c
