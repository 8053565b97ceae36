import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fdasec.dm import (NoNullSpaceError, NoiseVector, dm_field, draw_artificial_noise,
                       draw_noise_stream, excitation_matrix, null_space_basis,
                       synthesize_excitation, target_channel)
from fdasec.model import ArrayConfig, ObservationPoint, PhysicalConstants, Scenario, steering_vector
from fdasec.streams import symbol_indices, symbol_stream


def test_null_space_of_all_ones_pair():
    b = null_space_basis([1, 1])
    assert b.shape == (1, 2)
    np.testing.assert_allclose(np.abs(b[0]), [1 / math.sqrt(2)] * 2, atol=1e-15)
    assert abs(np.vdot([1, 1], b[0])) < 1e-15


def test_null_space_of_canonical_vector():
    b = null_space_basis([0, 0, 1])
    np.testing.assert_allclose(np.abs(b @ np.array([0, 0, 1])), 0, atol=1e-15)
    np.testing.assert_allclose(b @ b.conj().T, np.eye(2), atol=1e-15)


@settings(max_examples=60)
@given(st.integers(2, 24), st.floats(0, math.pi), st.floats(0.01, 0.2))
def test_null_space_is_orthonormal_complement(n, theta, d):
    h = steering_vector(ArrayConfig(n, d, 3e9), theta)
    b = null_space_basis(h)
    assert b.shape == (n - 1, n)
    np.testing.assert_allclose(b @ b.conj().T, np.eye(n - 1), atol=1e-12)
    np.testing.assert_allclose(b.conj() @ h, 0, atol=1e-12)


def test_single_element_has_no_null_space():
    with pytest.raises(NoNullSpaceError):
        null_space_basis([1.0])
    with pytest.raises(ValueError):
        null_space_basis([0, 0])


def test_noise_draw_is_replayable_and_frozen(table1_cfg):
    h0 = steering_vector(table1_cfg, math.radians(40))
    w = draw_artificial_noise(h0, seed=7, symbol_index=0)
    again = draw_artificial_noise(h0, seed=7, symbol_index=0)
    assert np.array_equal(w.entries, again.entries)
    golden = [(-0.40188793292795383 + 0.18677611504759165j),
              (0.1296637114614373 + 0.12301860603274743j),
              (0.14074935115406506 + 0.47633006708959136j)]
    np.testing.assert_allclose(w.entries[:3], golden, rtol=0, atol=1e-15)
    nxt = draw_artificial_noise(h0, 7, 1).entries[0]
    assert abs(nxt - (-0.047358775987263624 + 0.18887026350558433j)) < 1e-15
    other = draw_artificial_noise(h0, 0, 0).entries[0]
    assert abs(other - (0.030538815152447142 + 0.2246346362035262j)) < 1e-15


def test_noise_stream_matches_individual_draws(table1_cfg):
    h0 = steering_vector(table1_cfg, 0.9)
    stream = draw_noise_stream(h0, 11, 6)
    # order independence: index 4 drawn alone equals row 4
    np.testing.assert_array_equal(stream[4], draw_artificial_noise(h0, 11, 4).entries)


@settings(max_examples=50)
@given(st.integers(2, 20), st.floats(0.01, math.pi - 0.01), st.integers(0, 2 ** 63), st.integers(0, 10 ** 6))
def test_noise_is_unit_power_and_invisible_at_target(n, theta, seed, idx):
    h0 = steering_vector(ArrayConfig(n, 0.05, 3e9), theta)
    w = draw_artificial_noise(h0, seed, idx)
    assert w.symbol_index == idx
    assert abs(np.linalg.norm(w.entries) - 1) < 1e-12
    assert abs(np.sum(w.entries * h0)) < 1e-12


def test_symbol_indices_golden(table1_scn):
    assert symbol_indices(table1_scn).tolist() == [
        3, 0, 3, 1, 1, 3, 0, 3, 2, 0, 0, 3, 0, 1, 1, 1, 2, 1, 2, 0,
        3, 0, 0, 0, 1, 0, 0, 2, 1, 0, 3, 0, 2, 0, 0, 2, 2, 1, 1, 3]


def test_symbol_stream_is_prefix_stable(table1_scn):
    from dataclasses import replace
    short = symbol_stream(replace(table1_scn, n_symbols=10))[0]
    assert short.tolist() == symbol_indices(table1_scn)[:10].tolist()


def test_excitation_example():
    scn = Scenario(math.pi / 2, 1e3, 0.5, 0.25)
    h0 = np.ones(2)
    w = np.array([1, -1]) / math.sqrt(2)
    g = synthesize_excitation(scn, h0, 1j, w)
    np.testing.assert_allclose(g.entries, [0.5j + 0.25 / math.sqrt(2), 0.5j - 0.25 / math.sqrt(2)])
    assert g.symbol == 1j
    with pytest.raises(ValueError):
        synthesize_excitation(scn, h0, 1, np.ones(3))


def test_excitation_matrix_matches_rowwise(table1_cfg, table1_scn):
    h0 = target_channel(table1_cfg, table1_scn)
    _, sym = symbol_stream(table1_scn)
    noise = draw_noise_stream(h0, 0, table1_scn.n_symbols)
    m = excitation_matrix(table1_scn, h0, sym, noise)
    for k in (0, 17, 39):
        np.testing.assert_allclose(m[k], synthesize_excitation(table1_scn, h0, sym[k], noise[k]).entries)


def test_dm_field_at_target_is_clean():
    cfg = ArrayConfig(8, 0.05, 3e9, constants=PhysicalConstants.paper())
    scn = Scenario(math.radians(60), 2e4, 0.6, 0.8)
    h0 = target_channel(cfg, scn)
    w = draw_artificial_noise(h0, 3, 0)
    d = np.exp(1j * math.pi / 4)
    # f0 R / c integral, so the carrier is 1
    e = dm_field(cfg, synthesize_excitation(scn, h0, d, w), ObservationPoint(scn.theta0, 2e4, 0.0))
    assert abs(e - 0.6 * 8 * d) < 1e-12


def test_dm_field_off_target_carries_noise():
    cfg = ArrayConfig(8, 0.05, 3e9, constants=PhysicalConstants.paper())
    scn = Scenario(math.radians(60), 2e4, 0.0, 1.0)
    h0 = target_channel(cfg, scn)
    w = draw_artificial_noise(h0, 3, 0)
    g = synthesize_excitation(scn, h0, 1, w)
    off = dm_field(cfg, g, ObservationPoint(math.radians(100), 2e4, 0.0))
    assert abs(off) > 1e-3
    brute = sum(w.entries[n] * np.exp(2j * np.pi * 3e9 * n * 0.05 * math.cos(math.radians(100)) / 3e8)
                for n in range(8))
    assert abs(off - brute) < 1e-12


def test_dm_field_rejects_frequency_offset(table1_cfg):
    with pytest.raises(ValueError):
        dm_field(table1_cfg, np.ones(10), ObservationPoint(1.0, 1e3))


def test_power_split_between_beam_and_noise():
    # E|G|^2 = p^2 N + q^2 with unit-modulus symbols and unit-power noise
    cfg = ArrayConfig(6, 0.05, 3e9)
    scn = Scenario(1.1, 1e4, 0.4, 0.7, n_symbols=10000, seed=5)
    h0 = target_channel(cfg, scn)
    _, sym = symbol_stream(scn)
    noise = draw_noise_stream(h0, scn.seed, scn.n_symbols)
    g = excitation_matrix(scn, h0, sym, noise)
    power = np.mean(np.sum(np.abs(g) ** 2, axis=1))
    assert power == pytest.approx(0.4 ** 2 * 6 + 0.7 ** 2, rel=1e-2)


def test_noise_vector_is_frozen():
    w = NoiseVector(np.zeros(2), 0)
    with pytest.raises(Exception):
        w.symbol_index = 3
