"""Command line entry point: ``fdasec <command> <scenario> [options]``.

Exit codes: 0 success, 1 usage or scenario error, 2 verification failure,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .model import ObservationPoint, PhaseMode
from .output import (emit_constellation_csv, emit_sweep_csv, emit_table_csv, read_manifest,
                     write_manifest)
from .receiver import Integration, clean_gain, evaluate_link, received_basebands, transmission
from .scenario import (ScenarioError, ScenarioFile, load_scenario, parse_quantity, parse_scenario,
                       serialize_scenario)
from .sweep import (Axis, DegenerateRegionError, GridSpec, RegionLostError, centroid_velocity,
                    check_slices, secure_region, sweep)
from .verify import run_checks

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _time_list(text: str) -> list[float]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            out.append(float(part))
        except ValueError:
            out.append(parse_quantity(part, "time"))
    if not out:
        raise UsageError("empty time list")
    return out


def _obs(sf: ScenarioFile, opts: dict) -> ObservationPoint:
    scn = sf.scenario
    theta = scn.theta0 if opts.get("theta") is None else math.radians(opts["theta"])
    r1 = scn.range0 if opts.get("range") is None else opts["range"]
    return ObservationPoint(theta, r1, opts.get("time") or 0.0)


def cmd_simulate(sf: ScenarioFile, opts: dict, out: Path) -> tuple[int, list]:
    cfg, scn = sf.array, sf.scenario
    obs = _obs(sf, opts)
    tx = transmission(cfg, scn)
    rx = sf.receiver
    rep = evaluate_link(cfg, scn, obs, sf.phase_mode, rx.integration, tx, rx.n_quad, rx.anchor)
    b = received_basebands(cfg, scn, obs, sf.phase_mode, rx.integration, tx, rx.n_quad, rx.anchor)
    cons = emit_constellation_csv(b, tx.symbols, tx.indices, scn.constellation,
                                  clean_gain(cfg, scn), out / "simulate_constellation.csv")
    metrics = emit_table_csv(out / "simulate_metrics.csv",
                             ["theta_deg", "range_m", "time_s", "evm", "ser", "residual_noise_power"],
                             [[math.degrees(obs.theta), obs.range, obs.time, rep.evm_rms, rep.ser,
                               rep.residual_noise_power]])
    print(f"point theta={math.degrees(obs.theta):.6g} deg range={obs.range:.6g} m time={obs.time:.6g} s "
          f"({rx.integration.value})")
    print(f"evm_rms={rep.evm_rms:.6e} ser={rep.ser:.6g} ({rep.n_errors}/{rep.n_symbols}) "
          f"residual_noise_power={rep.residual_noise_power:.6e}")
    return EXIT_OK, [cons, metrics]


def _sweep_grid(sf: ScenarioFile, axis: str) -> GridSpec:
    g, scn = sf.grid, sf.scenario

    def fixed(ax: Axis, default: float) -> Axis:
        return ax if ax.count == 1 else Axis.fixed(default)

    theta = fixed(g.theta_axis, scn.theta0)
    rng = fixed(g.range_axis, scn.range0)
    time = fixed(g.time_axis, 0.0)
    chosen = {"angle": g.theta_axis, "range": g.range_axis, "time": g.time_axis}[axis]
    if chosen.count < 2:
        raise UsageError(f"[grid] gives no sweep for the {axis} axis (need 'start, stop, count')")
    if axis == "angle":
        theta = chosen
    elif axis == "range":
        rng = chosen
    else:
        time = chosen
    return GridSpec(theta, rng, time)


def cmd_sweep(sf: ScenarioFile, opts: dict, out: Path) -> tuple[int, list]:
    axis = opts["axis"]
    grid = _sweep_grid(sf, axis)
    res = sweep(sf.array, sf.scenario, grid, sf.phase_mode)
    path = emit_sweep_csv(res, out / f"sweep_{axis}.csv", sf.output.profile, sf.output.reference_symbol)
    flat = int(np.argmin(res.evm))
    it, ir, ith = np.unravel_index(flat, res.evm.shape)
    t, r, th = (np.broadcast_to(a, grid.shape) for a in res.coordinates())
    region = secure_region(res, sf.receiver.evm_threshold)
    print(f"{grid.cell_count} cells; EVM minimum {res.evm.flat[flat]:.3e} at "
          f"theta={math.degrees(th[it, ir, ith]):.6g} deg, range={r[it, ir, ith]:.6g} m, "
          f"time={t[it, ir, ith]:.6g} s")
    print(f"cells with SER=0: {int(np.sum(res.n_errors == 0))}; "
          f"EVM <= {region.threshold:g}: {int(region.mask.sum())}")
    return EXIT_OK, [path]


def _range_axis(sf: ScenarioFile) -> Axis:
    if sf.grid.range_axis.count > 1:
        return sf.grid.range_axis
    r = sf.scenario.range0
    return Axis(0.5 * r, 1.5 * r, 2001)


def cmd_demo_propagation(sf: ScenarioFile, opts: dict, out: Path) -> tuple[int, list]:
    cfg, scn, mode = sf.array, sf.scenario, sf.phase_mode
    times = opts["times"]
    r_axis = _range_axis(sf)
    tx = transmission(cfg, scn)
    thr = sf.receiver.evm_threshold
    outputs, records, slices = [], [], []
    for i, tk in enumerate(times):
        grid = GridSpec(Axis.fixed(scn.theta0), r_axis, Axis.fixed(tk))
        res = sweep(cfg, scn, grid, mode, tx)
        outputs.append(emit_sweep_csv(res, out / f"propagation_t{i}.csv", sf.output.profile,
                                      sf.output.reference_symbol))
        s = secure_region(res, thr).slices[0]
        slices.append(s)
        expected = scn.range0 + cfg.c * tk
        rep = evaluate_link(cfg, scn, ObservationPoint(scn.theta0, expected, tk), mode, tx=tx)
        records.append([tk, s.lower, s.upper, s.centroid, s.extent, expected, rep.evm_rms, rep.ser])
        state = "lost" if s.empty else f"[{s.lower:.6g}, {s.upper:.6g}] m centroid {s.centroid:.6g} m"
        print(f"t={tk:.6g} s: secure region {state}; at {expected:.6g} m evm={rep.evm_rms:.3e} "
              f"ser={rep.ser:.3g} ({'clean' if rep.n_errors == 0 else 'distorted'})")
    outputs.append(emit_table_csv(out / "propagation_region.csv",
                                  ["time_s", "lower_m", "upper_m", "centroid_m", "extent_m",
                                   "propagated_target_m", "evm_at_target", "ser_at_target"], records))
    if len(times) >= 5:
        try:
            check_slices(slices, r_axis, thr)
            v = centroid_velocity(slices)
            print(f"region velocity {v:.9e} m/s = {v / cfg.c:.9f} c")
        except (RegionLostError, DegenerateRegionError) as exc:
            print(f"region velocity unavailable: {exc}")
    else:
        print("region velocity needs at least 5 time slices")
    return EXIT_OK, outputs


def cmd_verify(sf: ScenarioFile, opts: dict, out: Path) -> tuple[int, list]:
    results = run_checks(sf)
    for r in results:
        print(f"{r.status:4s} {r.name:34s} residual={r.residual:.3e} tol={r.tolerance:.1e}  {r.detail}")
    path = emit_table_csv(out / "verify.csv", ["check", "status", "residual", "tolerance"],
                          [[r.name, r.status, r.residual, r.tolerance] for r in results])
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return (EXIT_VERIFY if failed else EXIT_OK), [path]


def cmd_residual_noise(sf: ScenarioFile, opts: dict, out: Path) -> tuple[int, list]:
    cfg, scn = sf.array, sf.scenario
    obs = ObservationPoint(scn.theta0, scn.range0, 0.0)
    tx = transmission(cfg, scn)
    records = []
    rx = sf.receiver
    inst = evaluate_link(cfg, scn, obs, sf.phase_mode, Integration.INSTANT, tx)
    print(f"{'T [s]':>12s} {'evm_rms':>12s} {'ser':>6s} {'residual':>12s}")
    print(f"{'instant':>12s} {inst.evm_rms:12.4e} {inst.ser:6.3f} {inst.residual_noise_power:12.4e}")
    for T in opts["periods"]:
        rep = evaluate_link(cfg, replace(scn, symbol_period=T), obs, sf.phase_mode,
                            Integration.OVER_T, tx, rx.n_quad, rx.anchor)
        records.append([T, cfg.delta_f * T, rep.evm_rms, rep.ser, rep.residual_noise_power])
        print(f"{T:12.4e} {rep.evm_rms:12.4e} {rep.ser:6.3f} {rep.residual_noise_power:12.4e}")
    path = emit_table_csv(out / "residual_noise.csv",
                          ["period_s", "delta_f_times_period", "evm", "ser", "residual_noise_power"],
                          records)
    return EXIT_OK, [path]


COMMANDS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "demo-propagation": cmd_demo_propagation,
    "verify": cmd_verify,
    "residual-noise": cmd_residual_noise,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default: file value, else 0)")
    common.add_argument("--phase-mode", choices=["exact", "approx"], default=None)
    common.add_argument("--c-mode", choices=["si", "paper"], default=None)
    common.add_argument("--evm-threshold", type=float, default=None)
    common.add_argument("--out", default=".", help="output directory")

    parser = _Parser(prog="fdasec", description="FDA / DM / FDA-DM far-field security simulator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", parents=[common], help="metrics and constellation at one point")
    p.add_argument("scenario")
    p.add_argument("--theta", type=float, default=None, help="observation angle in degrees")
    p.add_argument("--range", type=float, default=None, help="observation range in metres")
    p.add_argument("--time", type=float, default=None, help="sampling time in seconds")

    p = sub.add_parser("sweep", parents=[common], help="sweep one grid axis")
    p.add_argument("scenario")
    p.add_argument("--axis", choices=["angle", "range", "time"], required=True)

    p = sub.add_parser("demo-propagation", parents=[common], help="range sweeps at several times")
    p.add_argument("scenario")
    p.add_argument("--times", required=True, help="comma-separated times, e.g. 0us,5us,10us")

    p = sub.add_parser("verify", parents=[common], help="run the analytic check suite")
    p.add_argument("scenario")

    p = sub.add_parser("residual-noise", parents=[common], help="EVM at the target vs integration period")
    p.add_argument("scenario")
    p.add_argument("--periods", required=True, help="comma-separated periods, e.g. 10ns,1us")

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("manifest")
    p.add_argument("--out", default=".")
    return parser


def _command_options(args) -> dict:
    if args.command == "simulate":
        return {"theta": args.theta, "range": args.range, "time": args.time}
    if args.command == "sweep":
        return {"axis": args.axis}
    if args.command == "demo-propagation":
        return {"times": _time_list(args.times)}
    if args.command == "residual-noise":
        return {"periods": _time_list(args.periods)}
    return {}


def run(command: str, sf: ScenarioFile, opts: dict, out: Path) -> int:
    out.mkdir(parents=True, exist_ok=True)
    code, outputs = COMMANDS[command](sf, opts, out)
    text = serialize_scenario(sf)
    stem = command.replace("-", "_")
    write_manifest(out / f"{stem}_manifest.json", command, opts, text, sf, outputs)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "replay":
            m = read_manifest(args.manifest)
            sf = parse_scenario(m["scenario"])
            return run(m["command"], sf, m["options"], Path(args.out))
        sf = load_scenario(args.scenario).with_overrides(
            seed=args.seed,
            phase_mode=None if args.phase_mode is None else PhaseMode.parse(args.phase_mode),
            c_mode=args.c_mode, evm_threshold=args.evm_threshold)
        opts = _command_options(args)
        return run(args.command, sf, opts, Path(args.out))
    except (UsageError, ScenarioError) as exc:
        print(f"fdasec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"fdasec: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (KeyError, ValueError) as exc:
        print(f"fdasec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
