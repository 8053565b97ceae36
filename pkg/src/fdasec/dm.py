"""Directional-modulation excitation: beam toward theta0 plus null-space noise."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ArrayConfig, ObservationPoint, Scenario, steering_vector
from .phase import carrier_cycles
from .streams import NOISE_STREAM, keyed_generator


class NoNullSpaceError(ValueError):
    """A single-element array has no room for artificial noise."""


@dataclass(frozen=True)
class NoiseVector:
    entries: np.ndarray
    symbol_index: int


@dataclass(frozen=True)
class ExcitationVector:
    entries: np.ndarray
    symbol: complex


def null_space_basis(h) -> np.ndarray:
    """Orthonormal basis of {b : sum(b * conj(h)) == 0}, one vector per row.

    Gram-Schmidt over the canonical basis after seeding with h/|h|; each
    candidate is orthogonalised twice and candidates whose residual collapses
    are skipped.  Returns an (N-1, N) complex array.
    """
    h = np.asarray(h, dtype=complex).ravel()
    n = h.size
    if n < 2:
        raise NoNullSpaceError("no null space: a single element cannot carry artificial noise")
    norm = np.linalg.norm(h)
    if norm == 0:
        raise ValueError("channel vector is zero")
    basis = [h / norm]
    for k in range(n):
        v = np.zeros(n, dtype=complex)
        v[k] = 1.0
        for _ in range(2):
            for b in basis:
                v = v - np.vdot(b, v) * b
        r = np.linalg.norm(v)
        if r < 1e-6:
            continue
        basis.append(v / r)
        if len(basis) == n:
            break
    return np.array(basis[1:])


def _noise_projector(h0) -> np.ndarray:
    # the field at theta0 is sum(W_n * H_n(theta0)), so W must be
    # orthogonal to conj(H(theta0)) under the Hermitian inner product
    return null_space_basis(np.conj(h0))


def draw_artificial_noise(h0, seed: int, symbol_index: int) -> NoiseVector:
    """Unit-power noise vector W with sum(W * h0) == 0.

    A complex Gaussian draw is projected onto the null space and
    renormalised; the draw depends only on ``(seed, symbol_index)``.
    """
    basis = _noise_projector(h0)
    return _draw(basis, seed, symbol_index)


def _draw(basis: np.ndarray, seed: int, symbol_index: int) -> NoiseVector:
    n = basis.shape[1]
    rng = keyed_generator(seed, NOISE_STREAM, symbol_index)
    g = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    coef = basis.conj() @ g
    w = coef @ basis
    return NoiseVector(w / np.linalg.norm(w), int(symbol_index))


def draw_noise_stream(h0, seed: int, n_symbols: int) -> np.ndarray:
    """Stack of per-symbol noise vectors, shape (K, N)."""
    basis = _noise_projector(h0)
    return np.array([_draw(basis, seed, k).entries for k in range(n_symbols)])


def synthesize_excitation(scn: Scenario, h0, d_sym: complex, w) -> ExcitationVector:
    """G = p * D * conj(h0) + q * W."""
    h0 = np.asarray(h0, dtype=complex)
    w_entries = w.entries if isinstance(w, NoiseVector) else np.asarray(w, dtype=complex)
    if w_entries.shape != h0.shape:
        raise ValueError(f"noise length {w_entries.shape} does not match channel {h0.shape}")
    g = scn.p * d_sym * np.conj(h0) + scn.q * w_entries
    return ExcitationVector(g, complex(d_sym))


def excitation_matrix(scn: Scenario, h0, symbols, noise) -> np.ndarray:
    """Row k is the excitation for symbol k; shape (K, N)."""
    symbols = np.asarray(symbols, dtype=complex)
    return scn.p * symbols[:, None] * np.conj(h0)[None, :] + scn.q * np.asarray(noise)


def dm_field(cfg: ArrayConfig, exc, obs: ObservationPoint) -> complex:
    """Phased-array (delta_f == 0) field sum(G_n H_n(theta)) * exp(j2pi f0 (t - r1/c))."""
    if cfg.delta_f != 0:
        raise ValueError("dm_field requires delta_f == 0; use fda_field for a frequency diverse array")
    g = exc.entries if isinstance(exc, ExcitationVector) else np.asarray(exc, dtype=complex)
    af = np.sum(g * steering_vector(cfg, obs.theta))
    carrier = np.exp(2j * np.pi * carrier_cycles(cfg, obs.range, obs.time))
    return complex(af * carrier)


def target_channel(cfg: ArrayConfig, scn: Scenario) -> np.ndarray:
    return steering_vector(cfg, scn.theta0)
