"""Scenario files: INI-style sections with unit-suffixed physical quantities.

Example::

    [array]
    n_elements = 10
    spacing = 5 cm
    f0 = 3 ghz
    delta_f = 10 khz

    [scenario]
    theta0 = 40 deg
    range0 = 30 km
    p = 0.5
    q = 0.5
    n_symbols = 40

    [grid]
    range = 15 km, 45 km, 3001

Quantities are normalised to SI (m, Hz, s, rad) on parsing.  Serialisation
writes SI values with ``repr`` precision so that parse(serialize(x)) == x.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, replace
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Optional

from .model import ArrayConfig, Constellation, PhaseMode, PhysicalConstants, Scenario
from .receiver import PANEL_NODES, Integration
from .sweep import DEFAULT_EVM_THRESHOLD, Axis, GridSpec


class ScenarioError(ValueError):
    """Malformed or invalid scenario file."""


UNITS = {
    "length": {"m": "1", "cm": "0.01", "mm": "0.001", "km": "1000"},
    "frequency": {"hz": "1", "khz": "1e3", "mhz": "1e6", "ghz": "1e9"},
    "time": {"s": "1", "ms": "1e-3", "us": "1e-6", "ns": "1e-9", "ps": "1e-12"},
    "angle": {"rad": None, "deg": None},
}

_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([a-zA-Zµ]+)\s*$")


def parse_quantity(text: str, kind: str) -> float:
    """Parse ``'10 khz'`` and friends to an SI float, exactly rounded."""
    m = _QUANTITY.match(text)
    if not m:
        raise ScenarioError(f"expected a number with a {kind} unit, got {text!r}")
    number, unit = m.group(1), m.group(2).lower().replace("µ", "u")
    table = UNITS[kind]
    if unit not in table:
        raise ScenarioError(f"unit {unit!r} is not a {kind} unit (use one of {', '.join(table)})")
    try:
        value = Decimal(number)
    except InvalidOperation as exc:  # pragma: no cover - regex guards this
        raise ScenarioError(f"bad number {number!r}") from exc
    if kind == "angle":
        return math.radians(float(value)) if unit == "deg" else float(value)
    return float(value * Decimal(table[unit]))


def _si_unit(kind: str) -> str:
    return {"length": "m", "frequency": "hz", "time": "s", "angle": "rad"}[kind]


def format_quantity(value: float, kind: str) -> str:
    return f"{float(value)!r} {_si_unit(kind)}"


@dataclass(frozen=True)
class ReceiverOptions:
    integration: Integration = Integration.INSTANT
    n_quad: int = PANEL_NODES
    evm_threshold: float = DEFAULT_EVM_THRESHOLD
    anchor: str = "center"


@dataclass(frozen=True)
class OutputOptions:
    profile: str = "aggregate"
    reference_symbol: int = 0


@dataclass(frozen=True)
class ScenarioFile:
    array: ArrayConfig
    scenario: Scenario
    grid: GridSpec
    receiver: ReceiverOptions
    output: OutputOptions
    phase_mode: PhaseMode = PhaseMode.DROP_QUADRATIC
    taper_phases: Optional[tuple] = None

    def with_overrides(self, seed: Optional[int] = None, phase_mode: Optional[PhaseMode] = None,
                       c_mode: Optional[str] = None, evm_threshold: Optional[float] = None) -> "ScenarioFile":
        out = self
        if seed is not None:
            out = replace(out, scenario=replace(out.scenario, seed=int(seed)))
        if phase_mode is not None:
            out = replace(out, phase_mode=phase_mode)
        if c_mode is not None:
            out = replace(out, array=replace(out.array, constants=PhysicalConstants.from_mode(c_mode)))
        if evm_threshold is not None:
            out = replace(out, receiver=replace(out.receiver, evm_threshold=float(evm_threshold)))
        return out


# (key, kind, required); kind is a unit family or a plain-value parser name
_SCHEMA = {
    "array": [("n_elements", "int", True), ("spacing", "length", True), ("f0", "frequency", True),
              ("delta_f", "frequency", True), ("taper", "angle_list", False)],
    "scenario": [("theta0", "angle", True), ("range0", "length", True), ("p", "float", True),
                 ("q", "float", True), ("n_symbols", "int", True), ("constellation", "word", False),
                 ("seed", "int", False), ("symbol_period", "time", False),
                 ("phase_mode", "word", False), ("c_mode", "word", False)],
    "grid": [("theta", "angle_axis", False), ("range", "length_axis", False),
             ("time", "time_axis", False)],
    "receiver": [("integration", "word", False), ("n_quad", "int", False),
                 ("evm_threshold", "float", False), ("anchor", "word", False)],
    "output": [("profile", "word", False), ("reference_symbol", "int", False)],
}


def _convert(text: str, kind: str):
    if kind == "int":
        try:
            return int(text.strip())
        except ValueError as exc:
            raise ScenarioError(f"expected an integer, got {text!r}") from exc
    if kind == "float":
        try:
            return float(text.strip())
        except ValueError as exc:
            raise ScenarioError(f"expected a number, got {text!r}") from exc
    if kind == "word":
        return text.strip().lower()
    if kind == "angle_list":
        return tuple(parse_quantity(part, "angle") for part in text.split(","))
    if kind.endswith("_axis"):
        unit_kind = kind[:-5]
        parts = [p.strip() for p in text.split(",")]
        if len(parts) == 1:
            return Axis.fixed(parse_quantity(parts[0], unit_kind))
        if len(parts) != 3:
            raise ScenarioError(f"axis needs 'value' or 'start, stop, count', got {text!r}")
        start, stop = parse_quantity(parts[0], unit_kind), parse_quantity(parts[1], unit_kind)
        return Axis(start, stop, _convert(parts[2], "int"))
    return parse_quantity(text, kind)


def _read_sections(text: str) -> dict:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"),
                                       strict=True, default_section="__none__")
    try:
        parser.read_string(text, source="<scenario>")
    except configparser.MissingSectionHeaderError as exc:
        raise ScenarioError(f"syntax error at line {exc.lineno}: key outside any [section]") from exc
    except configparser.ParsingError as exc:
        where = "; ".join(f"line {n}: {line.strip()}" for n, line in exc.errors)
        raise ScenarioError(f"syntax error at {where}") from exc
    except configparser.Error as exc:
        detail = exc.message.split("]: ", 1)[-1]
        line = getattr(exc, "lineno", None)
        prefix = "syntax error" if line is None else f"syntax error at line {line}"
        raise ScenarioError(f"{prefix}: {detail}") from exc
    unknown = [s for s in parser.sections() if s not in _SCHEMA]
    if unknown:
        raise ScenarioError(f"unknown section(s): {', '.join('[' + s + ']' for s in unknown)}")
    return {s: dict(parser.items(s)) for s in parser.sections()}


def parse_scenario(text: str) -> ScenarioFile:
    sections = _read_sections(text)
    values: dict[str, dict] = {}
    missing, problems = [], []
    for section, keys in _SCHEMA.items():
        raw = dict(sections.get(section, {}))
        known = {k for k, _, _ in keys}
        for key in raw:
            if key not in known:
                problems.append(f"unknown key '{key}' in [{section}]")
        got = {}
        for key, kind, required in keys:
            if key not in raw:
                if required:
                    missing.append(f"{section}.{key}")
                continue
            try:
                got[key] = _convert(raw[key], kind)
            except (ScenarioError, ValueError) as exc:
                problems.append(f"{section}.{key}: {exc}")
        values[section] = got
    if missing:
        problems.insert(0, "missing required key(s): " + ", ".join(missing))
    if problems:
        raise ScenarioError("; ".join(problems))
    return _build(values)


def _build(v: dict) -> ScenarioFile:
    a, s, g, r, o = (v[k] for k in ("array", "scenario", "grid", "receiver", "output"))
    try:
        constants = PhysicalConstants.from_mode(s.get("c_mode", "paper"))
        phase_mode = PhaseMode.parse(s.get("phase_mode", "approx"))
        taper_phases = a.get("taper")
        taper = None if taper_phases is None else tuple(complex(math.cos(x), math.sin(x))
                                                         for x in taper_phases)
        array = ArrayConfig(a["n_elements"], a["spacing"], a["f0"], a["delta_f"], taper, constants)
        scenario = Scenario(s["theta0"], s["range0"], s["p"], s["q"],
                            Constellation(s.get("constellation", "qpsk")), s["n_symbols"],
                            s.get("seed", 0), s.get("symbol_period"))
        grid = GridSpec(g.get("theta", Axis.fixed(scenario.theta0)),
                        g.get("range", Axis.fixed(scenario.range0)),
                        g.get("time", Axis.fixed(0.0)))
        receiver = ReceiverOptions(Integration(r.get("integration", "instant")),
                                   r.get("n_quad", PANEL_NODES),
                                   r.get("evm_threshold", DEFAULT_EVM_THRESHOLD),
                                   r.get("anchor", "center"))
        output = OutputOptions(o.get("profile", "aggregate"), o.get("reference_symbol", 0))
    except (ValueError, KeyError) as exc:
        raise ScenarioError(f"invalid value: {exc}") from exc
    if grid.theta_axis.start < 0 or grid.theta_axis.stop > math.pi:
        raise ScenarioError("grid.theta must stay within [0 deg, 180 deg]")
    if grid.range_axis.start <= 0:
        raise ScenarioError("grid.range must be positive")
    if receiver.n_quad < 8:
        raise ScenarioError("receiver.n_quad must be at least 8")
    if not receiver.evm_threshold > 0:
        raise ScenarioError("receiver.evm_threshold must be positive")
    if receiver.anchor not in ("center", "start"):
        raise ScenarioError("receiver.anchor must be 'center' or 'start'")
    if output.profile not in ("aggregate", "symbols"):
        raise ScenarioError("output.profile must be 'aggregate' or 'symbols'")
    if not 0 <= output.reference_symbol < scenario.n_symbols:
        raise ScenarioError("output.reference_symbol must index a transmitted symbol")
    return ScenarioFile(array, scenario, grid, receiver, output, phase_mode, taper_phases)


def _axis_text(axis: Axis, kind: str) -> str:
    if axis.count == 1:
        return format_quantity(axis.start, kind)
    return f"{format_quantity(axis.start, kind)}, {format_quantity(axis.stop, kind)}, {axis.count}"


def serialize_scenario(sf: ScenarioFile) -> str:
    a, s, g, r, o = sf.array, sf.scenario, sf.grid, sf.receiver, sf.output
    lines = ["[array]",
             f"n_elements = {a.n_elements}",
             f"spacing = {format_quantity(a.spacing, 'length')}",
             f"f0 = {format_quantity(a.f0, 'frequency')}",
             f"delta_f = {format_quantity(a.delta_f, 'frequency')}"]
    if sf.taper_phases is not None:
        lines.append("taper = " + ", ".join(format_quantity(x, "angle") for x in sf.taper_phases))
    lines += ["", "[scenario]",
              f"theta0 = {format_quantity(s.theta0, 'angle')}",
              f"range0 = {format_quantity(s.range0, 'length')}",
              f"p = {s.p!r}",
              f"q = {s.q!r}",
              f"n_symbols = {s.n_symbols}",
              f"constellation = {s.constellation.value}",
              f"seed = {s.seed}"]
    if s.symbol_period is not None:
        lines.append(f"symbol_period = {format_quantity(s.symbol_period, 'time')}")
    lines += [f"phase_mode = {sf.phase_mode.value}",
              f"c_mode = {a.constants.mode}",
              "", "[grid]",
              f"theta = {_axis_text(g.theta_axis, 'angle')}",
              f"range = {_axis_text(g.range_axis, 'length')}",
              f"time = {_axis_text(g.time_axis, 'time')}",
              "", "[receiver]",
              f"integration = {r.integration.value}",
              f"n_quad = {r.n_quad}",
              f"evm_threshold = {r.evm_threshold!r}",
              f"anchor = {r.anchor}",
              "", "[output]",
              f"profile = {o.profile}",
              f"reference_symbol = {o.reference_symbol}",
              ""]
    if a.constants.mode == "custom":
        raise ScenarioError("only 'si' and 'paper' wave speeds can be serialised")
    return "\n".join(lines)


def load_scenario(path) -> ScenarioFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OSError(f"cannot read scenario {path}: {exc}") from exc
    return parse_scenario(text)


def table1_path() -> Path:
    """The shipped reference scenario."""
    return Path(__file__).with_name("data") / "table1.scn"
