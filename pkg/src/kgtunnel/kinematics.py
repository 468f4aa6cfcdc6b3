"""Barrier parameters, relativistic dispersion and energy zones.

Natural units (hbar = c = 1) throughout.  The canonical independent
variable is the normalized energy ``n2 = k**2 / w**2`` with
``w = sqrt(2 m V0)``; the barrier enters through ``upsilon = V0 / m``
and the dimensionless width ``wL``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError

#: half-width (in n2) of the band tagged as a zone boundary
EPS_EDGE = 1e-9


class Zone(str, Enum):
    KLEIN = "Klein"
    TUNNELING = "TunnelingEvanescent"
    ABOVE_BARRIER = "AboveBarrier"
    BOUNDARY = "Boundary"

    @property
    def oscillatory(self) -> bool:
        return self in (Zone.KLEIN, Zone.ABOVE_BARRIER)


@dataclass(frozen=True)
class BarrierConfig:
    """Rectangular barrier of height V0 and width L for a particle of mass m.

    Stored in normalized form (w, upsilon, L) so that the non-relativistic
    baseline upsilon = 0 (m -> inf at fixed w) is representable.  Use
    :func:`normalize` to build one from physical inputs.
    """

    w: float
    upsilon: float
    length: float

    def __post_init__(self):
        for name in ("w", "length"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive and finite, got {v!r}")
        if not (math.isfinite(self.upsilon) and self.upsilon >= 0):
            raise DomainError(f"upsilon must be >= 0 and finite, got {self.upsilon!r}")

    @classmethod
    def from_normalized(cls, upsilon: float, wL: float, w: float = 1.0) -> "BarrierConfig":
        if not (math.isfinite(wL) and wL > 0):
            raise DomainError(f"wL must be positive and finite, got {wL!r}")
        return cls(w=float(w), upsilon=float(upsilon), length=float(wL) / float(w))

    @property
    def mass(self) -> float:
        if self.upsilon == 0:
            return math.inf
        return self.w / math.sqrt(2 * self.upsilon)

    @property
    def v0(self) -> float:
        return self.w * math.sqrt(self.upsilon / 2)

    @property
    def wL(self) -> float:
        return self.w * self.length

    @property
    def mL(self) -> float:
        return self.mass * self.length

    @property
    def edges(self) -> tuple[float, float]:
        return zone_edges(self.upsilon)


def normalize(m: float, v0: float, length: float) -> BarrierConfig:
    """Map physical (m, V0, L) to a :class:`BarrierConfig`."""
    for name, v in (("m", m), ("v0", v0), ("length", length)):
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
            raise DomainError(f"{name} must be positive and finite, got {v!r}")
    return BarrierConfig(w=math.sqrt(2 * m * v0), upsilon=v0 / m, length=float(length))


def zone_edges(upsilon: float) -> tuple[float, float]:
    """n2 at E = V0 - m and E = V0 + m."""
    return upsilon / 2 - 1.0, upsilon / 2 + 1.0


def energy_ratio(n2, upsilon):
    """E/m = sqrt(1 + 2 n2 upsilon)."""
    return np.sqrt(1.0 + 2.0 * np.asarray(n2, dtype=float) * upsilon)


def rho2(n2, upsilon):
    """Signed interior parameter rho_n**2 = (m**2 - (E - V0)**2) / w**2.

    Algebraically equal to sqrt(1 + 2 n2 upsilon) - (n2 + upsilon/2) but
    written as a product of the distances to both zone edges, so it keeps
    full relative accuracy next to the edges and reduces to 1 - n2 at
    upsilon = 0.
    """
    n2 = np.asarray(n2, dtype=float)
    s = energy_ratio(n2, upsilon)
    lo, hi = zone_edges(upsilon)
    return 2.0 * (n2 - lo) * (hi - n2) / ((2.0 * n2 / (s + 1.0) + 1.0) * (s + upsilon + 1.0))


def classify_zone(n2: float, upsilon: float, eps: float = EPS_EDGE) -> Zone:
    lo, hi = zone_edges(upsilon)
    if abs(n2 - lo) < eps or abs(n2 - hi) < eps:
        return Zone.BOUNDARY
    if n2 < lo:
        return Zone.KLEIN
    if n2 > hi:
        return Zone.ABOVE_BARRIER
    return Zone.TUNNELING


def classify_zones(n2, upsilon: float, eps: float = EPS_EDGE) -> np.ndarray:
    """Vectorized :func:`classify_zone`; returns an object array of Zone."""
    return np.array([classify_zone(float(v), upsilon, eps) for v in np.ravel(n2)], dtype=object)


@dataclass(frozen=True)
class EnergyPoint:
    n2: float
    k: float
    energy: float
    energy_ratio: float
    rho2: float
    zone: Zone

    @property
    def n(self) -> float:
        return math.sqrt(self.n2)

    @property
    def rho(self) -> float:
        """Evanescent decay parameter; 0 outside the tunneling zone."""
        return math.sqrt(max(self.rho2, 0.0))

    @property
    def q(self) -> float:
        """Interior wavenumber (normalized) in the oscillatory zones."""
        return math.sqrt(max(-self.rho2, 0.0))


def energy_point(cfg: BarrierConfig, n2: float) -> EnergyPoint:
    if not (math.isfinite(n2) and n2 > 0):
        raise DomainError(f"n2 must be positive and finite, got {n2!r}")
    k = cfg.w * math.sqrt(n2)
    return EnergyPoint(
        n2=float(n2),
        k=k,
        energy=math.hypot(k, cfg.mass),
        energy_ratio=float(energy_ratio(n2, cfg.upsilon)),
        rho2=float(rho2(n2, cfg.upsilon)),
        zone=classify_zone(n2, cfg.upsilon),
    )


def classical_traversal_time(cfg: BarrierConfig, pt: EnergyPoint) -> float:
    """Classical traversal time tau = L dk/dE = L E / k.

    Infinite for the upsilon = 0 baseline, where m -> inf at fixed w.
    """
    if not pt.k > 0:
        raise DomainError("classical traversal time diverges at k = 0")
    return cfg.length * pt.energy / pt.k
