"""Klein-Gordon tunneling through a rectangular barrier.

Transmission amplitudes, phase and dwell times, zone-edge limits and a
wave-packet check of the stationary-phase delay.
"""

from .errors import DegenerateInputError, DomainError, NumericalError, TunnelingError
from .kinematics import (
    EPS_EDGE,
    BarrierConfig,
    EnergyPoint,
    Zone,
    classical_traversal_time,
    classify_zone,
    energy_point,
    normalize,
    rho2,
    zone_edges,
)
from .scattering import (
    ScatteringSolution,
    TransmissionPolar,
    exact_transmission,
    matched_solution,
    transmission_modulus,
    transmission_phase,
    transmission_polar,
)
from .times import (
    Branch,
    Edge,
    EdgeLimitResult,
    TimeObservables,
    dwell_time_closed,
    dwell_time_matched,
    dwell_time_numeric,
    edge_limits,
    edge_series_coefficients,
    nr_baseline,
    observables,
    phase_time_closed,
    phase_time_numeric,
    phase_time_series,
)
from .wavepacket import PacketTrace, SpectrumSpec, spectral_distortion, synthesize_transmitted

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
