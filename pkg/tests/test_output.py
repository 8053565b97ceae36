import math

import numpy as np
import pytest

from fdasec.output import (emit_constellation_csv, emit_sweep_csv, emit_table_csv, read_manifest, sha256,
                           write_manifest)
from fdasec.receiver import transmission
from fdasec.scenario import load_scenario, table1_path
from fdasec.sweep import Axis, GridSpec, sweep

DEG40 = math.radians(40)


@pytest.fixture
def small_sweep(table1_cfg, table1_scn):
    return sweep(table1_cfg, table1_scn, GridSpec(Axis.fixed(DEG40), Axis(29e3, 31e3, 3)))


def test_three_cells_four_lines(small_sweep, tmp_path):
    path = emit_sweep_csv(small_sweep, tmp_path / "s.csv")
    lines = path.read_text().splitlines()
    assert len(lines) == 4
    assert lines[0] == "theta_deg,range_m,time_s,field_mag,field_phase_deg,evm,ser"
    row = [float(x) for x in lines[2].split(",")]
    assert row[0] == pytest.approx(40.0) and row[1] == 30e3
    assert row[3] == pytest.approx(5.0, abs=1e-9)
    # reference symbol 0 has index 3, i.e. exp(-j 3 pi / 4)
    assert row[4] == pytest.approx(-135.0, abs=1e-9)
    assert row[5] < 1e-12 and row[6] == 0


def test_values_round_trip_exactly(small_sweep, tmp_path):
    lines = emit_sweep_csv(small_sweep, tmp_path / "s.csv").read_text().splitlines()[1:]
    evm = [float(line.split(",")[5]) for line in lines]
    assert evm == small_sweep.evm.ravel().tolist()


def test_symbols_profile(small_sweep, tmp_path):
    lines = emit_sweep_csv(small_sweep, tmp_path / "s.csv", profile="symbols").read_text().splitlines()
    header = lines[0].split(",")
    assert header[3:5] == ["e0_re", "e0_im"] and header[-2:] == ["evm", "ser"]
    assert len(header) == 3 + 2 * 40 + 2
    with pytest.raises(ValueError):
        emit_sweep_csv(small_sweep, tmp_path / "x.csv", profile="wide")


def test_row_order_is_time_range_theta(table1_cfg, table1_scn, tmp_path):
    res = sweep(table1_cfg, table1_scn, GridSpec(Axis(0.5, 0.6, 2), Axis(2e4, 3e4, 2), Axis(0, 1e-6, 2)))
    rows = [line.split(",")[:3] for line in emit_sweep_csv(res, tmp_path / "s.csv").read_text().splitlines()[1:]]
    coords = [(float(a), float(b), float(c)) for a, b, c in rows]
    assert [c[2] for c in coords] == [0.0] * 4 + [1e-6] * 4
    assert [c[1] for c in coords[:4]] == [2e4, 2e4, 3e4, 3e4]
    assert coords[0][0] < coords[1][0]


def test_re_emission_is_byte_identical(small_sweep, tmp_path):
    a = emit_sweep_csv(small_sweep, tmp_path / "a.csv")
    b = emit_sweep_csv(small_sweep, tmp_path / "b.csv")
    assert a.read_bytes() == b.read_bytes() and sha256(a) == sha256(b)


def test_constellation_and_table(table1_cfg, table1_scn, tmp_path):
    tx = transmission(table1_cfg, table1_scn)
    path = emit_constellation_csv(5.0 * tx.symbols, tx.symbols, tx.indices, table1_scn.constellation, 5.0,
                                  tmp_path / "c.csv")
    lines = path.read_text().splitlines()
    assert len(lines) == 41
    assert all(line.split(",")[1] == line.split(",")[-1] for line in lines[1:])
    table = emit_table_csv(tmp_path / "t.csv", ["a", "b", "c", "d"], [[1, 0.5, "x", True]])
    assert table.read_text() == "a,b,c,d\n1,5.0000000000000000e-01,x,1\n"


def test_manifest_round_trip(tmp_path, small_sweep):
    sf = load_scenario(table1_path())
    out = emit_sweep_csv(small_sweep, tmp_path / "s.csv")
    m = read_manifest(write_manifest(tmp_path / "m.json", "sweep", {"axis": "range"}, "text", sf, [out]))
    assert m["command"] == "sweep" and m["options"] == {"axis": "range"}
    assert m["seed"] == 0 and m["phase_mode"] == "approx" and m["c_mode"] == "paper"
    assert m["outputs"] == {"s.csv": sha256(out)}
    assert np.isfinite(small_sweep.evm).all()
