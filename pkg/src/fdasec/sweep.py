"""Grid evaluation over angle, range and time, and the secure region on it."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .model import ArrayConfig, PhaseMode, Scenario, check_far_field
from .phase import element_phasors
from .receiver import Transmission, clean_gain, link_metrics, transmission

DEFAULT_EVM_THRESHOLD = 0.1


class RegionLostError(ValueError):
    """The secure region is empty in at least one time slice."""


class DegenerateRegionError(ValueError):
    """The secure region is not bounded inside the range window."""


@dataclass(frozen=True)
class Axis:
    start: float
    stop: float
    count: int = 1

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 1:
            raise ValueError(f"axis count must be a positive integer, got {self.count}")
        if self.start > self.stop:
            raise ValueError(f"axis start {self.start} exceeds stop {self.stop}")
        if self.count == 1 and self.start != self.stop:
            raise ValueError("a single-point axis needs start == stop")

    @classmethod
    def fixed(cls, value: float) -> "Axis":
        return cls(value, value, 1)

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.start], dtype=np.float64)
        return np.linspace(self.start, self.stop, self.count)

    def shifted(self, offset: float) -> "Axis":
        return Axis(self.start + offset, self.stop + offset, self.count)


@dataclass(frozen=True)
class GridSpec:
    theta_axis: Axis
    range_axis: Axis
    time_axis: Axis = field(default_factory=lambda: Axis.fixed(0.0))

    @property
    def shape(self) -> tuple[int, int, int]:
        """Cell array shape, ordered (time, range, theta)."""
        return (self.time_axis.count, self.range_axis.count, self.theta_axis.count)

    @property
    def cell_count(self) -> int:
        nt, nr, nth = self.shape
        return nt * nr * nth


@dataclass
class SweepResult:
    """Per-cell field samples and link metrics, arrays indexed [time, range, theta]."""

    grid: GridSpec
    cfg: ArrayConfig
    scenario: Scenario
    mode: PhaseMode
    fields: np.ndarray      # passband field per symbol, (..., K)
    baseband: np.ndarray    # carrier-removed samples per symbol, (..., K)
    evm: np.ndarray
    n_errors: np.ndarray
    residual_noise_power: np.ndarray

    @property
    def ser(self) -> np.ndarray:
        return self.n_errors / self.scenario.n_symbols

    @property
    def metadata(self) -> dict:
        return {"seed": self.scenario.seed, "phase_mode": self.mode.value,
                "c_mode": self.cfg.constants.mode}

    def coordinates(self):
        """Broadcastable (time, range, theta) coordinate arrays."""
        t = self.grid.time_axis.values()[:, None, None]
        r = self.grid.range_axis.values()[None, :, None]
        th = self.grid.theta_axis.values()[None, None, :]
        return t, r, th


def sweep(cfg: ArrayConfig, scn: Scenario, grid: GridSpec,
          mode: PhaseMode = PhaseMode.DROP_QUADRATIC, tx: Optional[Transmission] = None) -> SweepResult:
    """Instantaneous link evaluation at every grid cell.

    One transmission (symbols and noise draws, replayed from the seed) is
    observed from every cell, so differences between cells are purely
    geometric.
    """
    tx = tx if tx is not None else transmission(cfg, scn)
    check_far_field(cfg, grid.range_axis.start)
    t = grid.time_axis.values()[:, None, None]
    r = grid.range_axis.values()[None, :, None]
    th = grid.theta_axis.values()[None, None, :]
    shape = grid.shape
    t, r, th = (np.broadcast_to(a, shape) for a in (t, r, th))

    ex_t = tx.excitations.T
    fields = element_phasors(cfg, th, r, t, mode) @ ex_t
    base = element_phasors(cfg, th, r, t, mode, baseband=True) @ ex_t
    evm, n_err, resid = link_metrics(base, tx.symbols, tx.indices, scn.constellation,
                                     clean_gain(cfg, scn))
    if not (np.all(np.isfinite(fields)) and np.all(np.isfinite(base))):
        raise FloatingPointError("non-finite field in sweep")
    return SweepResult(grid, cfg, scn, mode, fields, base, evm, n_err, resid)


@dataclass(frozen=True)
class RegionSlice:
    """Secure run along the swept axis for one time slice.

    ``lower``/``upper`` are threshold crossings interpolated linearly between
    cells; an unbounded side falls back to the axis end and is flagged.
    """

    time: float
    axis: str
    empty: bool
    start_index: int = -1
    stop_index: int = -1
    lower: float = float("nan")
    upper: float = float("nan")
    bounded_below: bool = False
    bounded_above: bool = False

    @property
    def centroid(self) -> float:
        return 0.5 * (self.lower + self.upper)

    @property
    def extent(self) -> float:
        return self.upper - self.lower

    @property
    def bounded(self) -> bool:
        return self.bounded_below and self.bounded_above

    @property
    def n_cells(self) -> int:
        return 0 if self.empty else self.stop_index - self.start_index + 1


@dataclass
class SecureRegionMask:
    mask: np.ndarray
    threshold: float
    slices: list

    @property
    def empty(self) -> bool:
        return not bool(self.mask.any())


def _crossing(x0, e0, x1, e1, thr):
    if e1 == e0:
        return 0.5 * (x0 + x1)
    return x0 + (thr - e0) / (e1 - e0) * (x1 - x0)


def _profile_slice(x: np.ndarray, evm: np.ndarray, thr: float, time: float, axis: str) -> RegionSlice:
    i = int(np.argmin(evm))
    if not evm[i] <= thr:
        return RegionSlice(time, axis, True)
    lo = i
    while lo > 0 and evm[lo - 1] <= thr:
        lo -= 1
    hi = i
    while hi < len(evm) - 1 and evm[hi + 1] <= thr:
        hi += 1
    if lo > 0:
        lower, below = _crossing(x[lo - 1], evm[lo - 1], x[lo], evm[lo], thr), True
    else:
        lower, below = float(x[0]), False
    if hi < len(evm) - 1:
        upper, above = _crossing(x[hi], evm[hi], x[hi + 1], evm[hi + 1], thr), True
    else:
        upper, above = float(x[-1]), False
    return RegionSlice(time, axis, False, lo, hi, float(lower), float(upper), below, above)


def secure_region(result: SweepResult, evm_threshold: float = DEFAULT_EVM_THRESHOLD) -> SecureRegionMask:
    """Cells with EVM <= threshold, plus the run around the EVM minimum per time slice.

    The run is taken along the range axis when it has more than one point,
    otherwise along the angle axis; with both swept, along range in the
    angle column holding the slice minimum.
    """
    if not evm_threshold > 0:
        raise ValueError(f"threshold must be positive, got {evm_threshold}")
    mask = result.evm <= evm_threshold
    g = result.grid
    times = g.time_axis.values()
    slices = []
    for k, tk in enumerate(times.tolist()):
        evm_k = result.evm[k]
        if g.range_axis.count > 1 or g.theta_axis.count == 1:
            col = int(np.unravel_index(np.argmin(evm_k), evm_k.shape)[1])
            slices.append(_profile_slice(g.range_axis.values(), evm_k[:, col], evm_threshold, tk, "range"))
        else:
            slices.append(_profile_slice(g.theta_axis.values(), evm_k[0, :], evm_threshold, tk, "theta"))
    return SecureRegionMask(mask, evm_threshold, slices)


def _time_values(times) -> np.ndarray:
    if isinstance(times, Axis):
        return times.values()
    return np.asarray(times, dtype=np.float64).ravel()


def track_region(cfg: ArrayConfig, scn: Scenario, range_axis: Axis, times,
                 evm_threshold: float = DEFAULT_EVM_THRESHOLD,
                 mode: PhaseMode = PhaseMode.DROP_QUADRATIC, theta: Optional[float] = None,
                 tx: Optional[Transmission] = None, min_slices: int = 5):
    """Secure-region slices along range at each time, with sanity checks.

    ``times`` is an :class:`Axis` or any sequence of instants.
    """
    t_values = _time_values(times)
    if len(t_values) < min_slices:
        raise ValueError(f"need at least {min_slices} time slices, got {len(t_values)}")
    th = scn.theta0 if theta is None else theta
    tx = tx if tx is not None else transmission(cfg, scn)
    slices = []
    for tk in t_values:
        grid = GridSpec(Axis.fixed(th), range_axis, Axis.fixed(float(tk)))
        slices.append(secure_region(sweep(cfg, scn, grid, mode, tx), evm_threshold).slices[0])
    check_slices(slices, range_axis, evm_threshold)
    return slices


def check_slices(slices, range_axis: Axis, evm_threshold: float) -> None:
    """Raise unless every slice holds a region bounded inside the range window."""
    for s in slices:
        if s.empty:
            raise RegionLostError(f"region lost: no cell below EVM {evm_threshold} at t = {s.time:g} s")
        if not s.bounded:
            raise DegenerateRegionError(
                f"region not bounded within [{range_axis.start:g}, {range_axis.stop:g}] m "
                f"at t = {s.time:g} s")


def region_velocity(cfg: ArrayConfig, scn: Scenario, range_axis: Axis, times,
                    evm_threshold: float = DEFAULT_EVM_THRESHOLD,
                    mode: PhaseMode = PhaseMode.DROP_QUADRATIC, theta: Optional[float] = None) -> float:
    """Least-squares slope of secure-region centroid range against time, in m/s."""
    slices = track_region(cfg, scn, range_axis, times, evm_threshold, mode, theta)
    return centroid_velocity(slices)


def centroid_velocity(slices) -> float:
    t = np.array([s.time for s in slices], dtype=np.float64)
    centroid = np.array([s.centroid for s in slices])
    if np.ptp(t) == 0:
        raise DegenerateRegionError("all time slices coincide; velocity is undefined")
    slope, _ = np.polyfit(t - t.mean(), centroid, 1)
    return float(slope)
