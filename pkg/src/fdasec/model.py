"""Shared domain types, constants, carrier ladder and steering vectors."""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

SPEED_OF_LIGHT = 299792458.0
"Exact SI speed of light in m/s."

ROUNDED_SPEED_OF_LIGHT = 3.0e8
"Rounded value under which identities such as c / 30 km = 10 kHz hold exactly."


class FarFieldWarning(UserWarning):
    """Observation point closer than the conventional Fraunhofer distance."""


class FrequencyOffsetWarning(UserWarning):
    """Frequency increment not small compared with the reference carrier."""


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = SPEED_OF_LIGHT

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"wave speed must be positive, got {self.c}")

    @classmethod
    def si(cls) -> "PhysicalConstants":
        return cls(SPEED_OF_LIGHT)

    @classmethod
    def paper(cls) -> "PhysicalConstants":
        return cls(ROUNDED_SPEED_OF_LIGHT)

    @classmethod
    def from_mode(cls, mode: str) -> "PhysicalConstants":
        if mode == "si":
            return cls.si()
        if mode == "paper":
            return cls.paper()
        raise ValueError(f"unknown c-mode {mode!r} (expected 'si' or 'paper')")

    @property
    def mode(self) -> str:
        if self.c == SPEED_OF_LIGHT:
            return "si"
        if self.c == ROUNDED_SPEED_OF_LIGHT:
            return "paper"
        return "custom"


class PhaseMode(enum.Enum):
    """How the per-element propagation phase is evaluated.

    ``EXACT`` keeps every term of f_n * (t - (r1 - (n-1) d cos(theta)) / c).
    ``DROP_QUADRATIC`` omits the (n-1)**2 * delta_f * d * cos(theta) / c term,
    which is the form the FDA-DM literature works with.
    """

    EXACT = "exact"
    DROP_QUADRATIC = "approx"

    @classmethod
    def parse(cls, text: str) -> "PhaseMode":
        key = text.strip().lower()
        for mode in cls:
            if key in (mode.value, mode.name.lower()):
                return mode
        if key in ("dropquadratic", "drop_quadratic"):
            return cls.DROP_QUADRATIC
        raise ValueError(f"unknown phase mode {text!r} (expected 'exact' or 'approx')")


class Constellation(enum.Enum):
    BPSK = "bpsk"
    QPSK = "qpsk"
    PSK8 = "8psk"

    @property
    def points(self) -> np.ndarray:
        if self is Constellation.BPSK:
            return np.array([1.0 + 0j, -1.0 + 0j])
        if self is Constellation.QPSK:
            # ordering as listed for the reference QPSK alphabet
            ang = np.array([1, 3, -1, -3]) * np.pi / 4
        else:
            ang = (2 * np.arange(8) + 1) * np.pi / 8
        return np.exp(1j * ang)

    @property
    def order(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class ArrayConfig:
    """Uniform linear FDA: element n radiates at f0 + (n-1)*delta_f.

    ``taper`` holds the unit-modulus initial-state weights v_n*exp(j*phi_n);
    it is applied by :func:`uniform_excitation`, not by the DM synthesis,
    which fully specifies its own element weights.
    """

    n_elements: int
    spacing: float
    f0: float
    delta_f: float = 0.0
    taper: Optional[tuple] = None
    constants: PhysicalConstants = field(default_factory=PhysicalConstants.paper)

    def __post_init__(self):
        if int(self.n_elements) != self.n_elements or self.n_elements < 1:
            raise ValueError(f"n_elements must be a positive integer, got {self.n_elements}")
        if not self.spacing > 0:
            raise ValueError(f"spacing must be positive, got {self.spacing}")
        if not self.f0 > 0:
            raise ValueError(f"f0 must be positive, got {self.f0}")
        if not math.isfinite(self.delta_f):
            raise ValueError("delta_f must be finite")
        if self.taper is not None:
            taper = tuple(complex(v) for v in self.taper)
            if len(taper) != self.n_elements:
                raise ValueError(
                    f"taper has {len(taper)} entries for {self.n_elements} elements")
            for v in taper:
                if abs(abs(v) - 1.0) > 1e-12:
                    raise ValueError(f"taper entries must be unit modulus, got |{v}|={abs(v)}")
            object.__setattr__(self, "taper", taper)
        if abs(self.delta_f) / self.f0 > 1e-3:
            warnings.warn(
                f"|delta_f|/f0 = {abs(self.delta_f) / self.f0:.3g} exceeds 1e-3",
                FrequencyOffsetWarning, stacklevel=3)

    @property
    def c(self) -> float:
        return self.constants.c

    @property
    def taper_array(self) -> np.ndarray:
        if self.taper is None:
            return np.ones(self.n_elements, dtype=complex)
        return np.array(self.taper, dtype=complex)

    @property
    def element_index(self) -> np.ndarray:
        """Zero-based element offsets (n - 1) as float64."""
        return np.arange(self.n_elements, dtype=np.float64)

    @property
    def aperture(self) -> float:
        return self.n_elements * self.spacing


@dataclass(frozen=True)
class Scenario:
    theta0: float
    range0: float
    p: float
    q: float
    constellation: Constellation = Constellation.QPSK
    n_symbols: int = 40
    seed: int = 0
    symbol_period: Optional[float] = None

    def __post_init__(self):
        if not 0.0 < self.theta0 < math.pi:
            raise ValueError(f"theta0 must lie in (0, pi), got {self.theta0}")
        if not self.range0 > 0:
            raise ValueError(f"range0 must be positive, got {self.range0}")
        if self.p < 0 or self.q < 0:
            raise ValueError("p and q must be non-negative")
        if self.p ** 2 + self.q ** 2 <= 0:
            raise ValueError("p and q cannot both be zero")
        if int(self.n_symbols) != self.n_symbols or self.n_symbols < 1:
            raise ValueError(f"n_symbols must be a positive integer, got {self.n_symbols}")
        if self.symbol_period is not None and not self.symbol_period > 0:
            raise ValueError(f"symbol_period must be positive, got {self.symbol_period}")
        if not isinstance(self.constellation, Constellation):
            object.__setattr__(self, "constellation", Constellation(self.constellation))


@dataclass(frozen=True)
class ObservationPoint:
    theta: float
    range: float
    time: float = 0.0

    def __post_init__(self):
        if not self.range > 0:
            raise ValueError(f"range must be positive, got {self.range}")


def carrier_frequencies(cfg: ArrayConfig) -> np.ndarray:
    """Per-element carriers f0 + (n-1)*delta_f in Hz."""
    return cfg.f0 + cfg.element_index * cfg.delta_f


def steering_vector(cfg: ArrayConfig, theta) -> np.ndarray:
    """Channel vector exp(j*2*pi*f0*(n-1)*d*cos(theta)/c).

    Broadcasts over ``theta``; the element axis is last.
    """
    theta = np.asarray(theta, dtype=np.float64)
    cycles = cfg.f0 * cfg.spacing * np.cos(theta)[..., None] * cfg.element_index / cfg.c
    return np.exp(2j * np.pi * cycles)


def uniform_excitation(cfg: ArrayConfig, symbol: complex = 1.0) -> np.ndarray:
    """Plain FDA excitation A_n = D * taper_n."""
    return symbol * cfg.taper_array


def far_field_distance(cfg: ArrayConfig) -> float:
    """Conventional Fraunhofer distance 2*(N*d)**2/lambda0."""
    return 2.0 * cfg.aperture ** 2 * cfg.f0 / cfg.c


def check_far_field(cfg: ArrayConfig, ranges: Sequence[float] | float) -> bool:
    """Warn (and return False) when any range is inside the Fraunhofer distance."""
    r_min = float(np.min(ranges))
    bound = far_field_distance(cfg)
    if r_min < bound:
        warnings.warn(
            f"range {r_min:g} m is inside the far-field distance {bound:g} m",
            FarFieldWarning, stacklevel=2)
        return False
    return True
