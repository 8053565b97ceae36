"""CSV emission and run manifests.

Every number is written as ``%.16e`` (17 significant digits) so that files
round-trip float64 values and are byte-stable across runs.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from . import __version__
from .receiver import demodulate
from .sweep import SweepResult

FLOAT_FMT = "{:.16e}"


def fmt(x) -> str:
    return FLOAT_FMT.format(float(x))


def _write(path, header, rows) -> Path:
    path = Path(path)
    lines = [",".join(header)]
    lines += [",".join(r) for r in rows]
    path.write_text("\n".join(lines) + "\n")
    return path


def sweep_rows(result: SweepResult, profile: str = "aggregate", reference_symbol: int = 0):
    """Header and rows for a sweep; rows run over (time, range, theta) in C order."""
    t, r, th = (np.broadcast_to(a, result.grid.shape) for a in result.coordinates())
    k = result.scenario.n_symbols
    if profile == "aggregate":
        header = ["theta_deg", "range_m", "time_s", "field_mag", "field_phase_deg", "evm", "ser"]
        e = result.fields[..., reference_symbol]
        cols = [np.degrees(th), r, t, np.abs(e), np.degrees(np.angle(e)), result.evm, result.ser]
    elif profile == "symbols":
        header = ["theta_deg", "range_m", "time_s"]
        cols = [np.degrees(th), r, t]
        for i in range(k):
            header += [f"e{i}_re", f"e{i}_im"]
            cols += [result.fields[..., i].real, result.fields[..., i].imag]
        header += ["evm", "ser"]
        cols += [result.evm, result.ser]
    else:
        raise ValueError(f"unknown profile {profile!r}")
    flat = [np.ravel(c) for c in cols]
    rows = ([fmt(c[i]) for c in flat] for i in range(result.grid.cell_count))
    return header, rows


def emit_sweep_csv(result: SweepResult, path, profile: str = "aggregate",
                   reference_symbol: int = 0) -> Path:
    header, rows = sweep_rows(result, profile, reference_symbol)
    return _write(path, header, rows)


def emit_constellation_csv(baseband, symbols, indices, constellation, gain: float, path) -> Path:
    decided = demodulate(np.asarray(baseband), constellation, gain)
    header = ["symbol", "tx_index", "tx_re", "tx_im", "rx_re", "rx_im", "rx_norm_re",
              "rx_norm_im", "decided_index"]
    rows = []
    for k, (b, d, i, j) in enumerate(zip(baseband, symbols, indices, np.atleast_1d(decided))):
        rows.append([str(k), str(int(i)), fmt(d.real), fmt(d.imag), fmt(b.real), fmt(b.imag),
                     fmt(b.real / gain), fmt(b.imag / gain), str(int(j))])
    return _write(path, header, rows)


def emit_table_csv(path, header, records) -> Path:
    """Generic table; floats are formatted, ints and strings written as-is."""
    def cell(v):
        if isinstance(v, (bool, np.bool_)):
            return "1" if v else "0"
        if isinstance(v, (int, np.integer)):
            return str(int(v))
        if isinstance(v, str):
            return v
        return fmt(v)
    return _write(path, header, ([cell(v) for v in rec] for rec in records))


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(path, command: str, options: dict, scenario_text: str, sf, outputs) -> Path:
    """JSON manifest with everything needed to replay a run."""
    manifest = {
        "tool": "fdasec",
        "version": __version__,
        "command": command,
        "options": options,
        "seed": sf.scenario.seed,
        "phase_mode": sf.phase_mode.value,
        "c_mode": sf.array.constants.mode,
        "scenario": scenario_text,
        "outputs": {Path(p).name: sha256(p) for p in outputs},
    }
    path = Path(path)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def read_manifest(path) -> dict:
    return json.loads(Path(path).read_text())
