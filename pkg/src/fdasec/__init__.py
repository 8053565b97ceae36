"""Far-field simulator for DM, FDA and FDA-DM transmit arrays.

Fields are evaluated as functions of angle, range *and* time, which is what
exposes the secure region of an FDA-DM link travelling outward at the wave
speed.
"""

__version__ = "0.1.0"

from .model import (ArrayConfig, Constellation, ObservationPoint, PhaseMode, PhysicalConstants,
                    Scenario, carrier_frequencies, steering_vector)
from .dm import dm_field, draw_artificial_noise, null_space_basis, synthesize_excitation
from .fda import fda_dm_field, fda_field, peak_locus_range, quadratic_phase_bound
from .receiver import (Integration, MetricReport, demodulate, downconvert_instant, evaluate_link,
                       integrate_symbol)
from .sweep import Axis, GridSpec, region_velocity, secure_region, sweep

__all__ = [
    "ArrayConfig", "Axis", "Constellation", "GridSpec", "Integration", "MetricReport",
    "ObservationPoint", "PhaseMode", "PhysicalConstants", "Scenario", "carrier_frequencies",
    "demodulate", "dm_field", "downconvert_instant", "draw_artificial_noise", "evaluate_link",
    "fda_dm_field", "fda_field", "integrate_symbol", "null_space_basis", "peak_locus_range",
    "quadratic_phase_bound", "region_velocity", "secure_region", "steering_vector",
    "sweep", "synthesize_excitation",
]
