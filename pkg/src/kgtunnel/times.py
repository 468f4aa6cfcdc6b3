"""Phase time, dwell time and their zone-edge limits.

All times are returned divided by the classical traversal time
tau = L E / k, which makes them functions of (n2, upsilon, wL) only.

The printed phase-time ratio f/g is 0/0 at the zone edges: both the
zeroth-order terms and the hyperbolic terms vanish like rho**2 there.
:func:`phase_time_ratio` divides that factor out analytically,

    f / (2 rho2) = 4 [s (4 n2 - upsilon) + 2] + 2 A (wL)**2 D(z)
    g / (2 rho2) = 16 n2 s + B (wL)**2 S(z)**2

with s = E/m, A = (2s - upsilon)(s**2 - s upsilon + 1), B = s (2s - upsilon)**2,
S = sinh(x)/x, D = (sinh(2x)/(2x) - 1)/x**2 and z = x**2 = (rho wL)**2.  The
result is regular at the edges and continues analytically into the
oscillatory zones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import integrate

from . import _hyper
from .errors import DomainError, NumericalError
from .kinematics import (
    BarrierConfig,
    EnergyPoint,
    Zone,
    classical_traversal_time,
    energy_point,
    energy_ratio,
    rho2,
    zone_edges,
)
from .nonrel import schrodinger_times
from .scattering import interior_density, matched_solution

#: rho wL below which the small-argument expansion is considered accurate
EPS_SERIES = 1e-2

# The dwell time uses the prefactor m/k exactly as printed, i.e. it treats
# the incident flux as the non-relativistic k/m.  The Klein-Gordon current
# of the incident wave would be k/E; the two differ by E/m.
DWELL_FLUX_PREFACTOR = "m/k"

# quadrature tolerances for the dwell-time integral (normalized to unit width)
_QUAD_EPSABS = 1e-12
_QUAD_EPSREL = 1e-12


class Branch(str, Enum):
    CLOSED_FORM = "ClosedForm"
    EDGE_LIMIT = "EdgeLimit"
    SERIES = "SeriesExpansion"


class Edge(str, Enum):
    LOWER = "Lower"
    UPPER = "Upper"


@dataclass(frozen=True)
class TimeObservables:
    tau: float
    t_phi_norm: float
    t_dwell_norm: float
    branch: Branch


@dataclass(frozen=True)
class EdgeLimitResult:
    edge: Edge
    n2: float
    transmission: float
    t_phi_norm: float
    t_dwell_norm: float


# ---------------------------------------------------------------------------
# kernels on (n2, upsilon, wL)


def phase_time_terms(n2, upsilon, x):
    """Numerator f and denominator g of t_phi/tau exactly as printed.

    ``x`` is the hyperbolic argument rho wL, taken as an independent
    variable.  Only meant for x != 0; use :func:`phase_time_ratio` for
    evaluation.
    """
    n2 = np.asarray(n2, dtype=float)
    x = np.asarray(x, dtype=float)
    u = upsilon
    s = np.sqrt(1 + 2 * n2 * u)
    sh, ch = np.sinh(x), np.cosh(x)
    f = 8 * n2 * ((2 + 8 * n2 * u + u * u) - (4 * n2 + 3 * u) * s) + 4 * (
        (4 + 4 * n2 * u + u * u) * s - 2 * u * (2 + 3 * n2 * u)
    ) * sh * ch / x
    g = 16 * n2 * (2 * (1 + 2 * n2 * u) - s * (2 * n2 + u)) + 2 * (
        (4 + 8 * n2 * u + u * u) * s - 4 * u * (1 + 2 * n2 * u)
    ) * sh ** 2
    return f, g


def _ab(n2, upsilon):
    s = energy_ratio(n2, upsilon)
    d = 2 * s - upsilon
    return s, d * (s * (s - upsilon) + 1), s * d * d


def phase_time_ratio(n2, upsilon, wL):
    """t_phi / tau, cancellation-free and valid in every zone."""
    n2 = np.asarray(n2, dtype=float)
    s, A, B = _ab(n2, upsilon)
    z = rho2(n2, upsilon) * wL * wL
    W2 = wL * wL
    P = 4 * (s * (4 * n2 - upsilon) + 2)
    x = np.sqrt(np.maximum(z, 0.0))
    big = x > _hyper.X_LARGE
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        num = P + 2 * A * W2 * _hyper.shch_excess(z)
        den = 16 * n2 * s + B * W2 * _hyper.sinhc_sqrt(z) ** 2
        inv = _hyper.inv_sinhc_sq(x)
        num_big = P * inv + 2 * A * W2 * _hyper.coth_over_x_minus_csch_sq(x)
        den_big = 16 * n2 * s * inv + B * W2
        return np.where(big, num_big / den_big, num / den)


def phase_time_series_value(n2, upsilon):
    """Leading small-(rho wL) term of t_phi/tau, as printed."""
    n2 = np.asarray(n2, dtype=float)
    u = upsilon
    s = np.sqrt(1 + 2 * n2 * u)
    num = (4 + 4 * n2 * u + u * u) * s - 2 * u * (2 + 3 * n2 * u)
    den = (4 + 8 * n2 * u + u * u) * s - 4 * u * (1 + 2 * n2 * u)
    return 4.0 / 3.0 * num / den


def dwell_time_ratio(n2, upsilon, wL, transmission="printed"):
    """t_D / tau from the closed form f_D / g_D.

    ``transmission="printed"`` is the printed g_D, which carries the
    printed |T|**2.  ``"exact"`` replaces that factor by the |T|**2 of
    the continuity problem, giving the exact value of the (m/k) integral.
    Both are written as f_D = 2 + (n2 + rho2) (wL)**2 D(z) so they stay
    finite at the edges.
    """
    if transmission not in ("printed", "exact"):
        raise ValueError(f"transmission must be 'printed' or 'exact', got {transmission!r}")
    n2 = np.asarray(n2, dtype=float)
    r2 = rho2(n2, upsilon)
    s = energy_ratio(n2, upsilon)
    z = r2 * wL * wL
    W2 = wL * wL
    gamma = 1.0 if transmission == "printed" else (n2 + r2) ** 2
    x = np.sqrt(np.maximum(z, 0.0))
    big = x > _hyper.X_LARGE
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        f = 2 + (n2 + r2) * W2 * _hyper.shch_excess(z)
        g = 2 * s * (1 + gamma * W2 * _hyper.sinhc_sqrt(z) ** 2 / (4 * n2))
        inv = _hyper.inv_sinhc_sq(x)
        f_big = 2 * inv + (n2 + r2) * W2 * _hyper.coth_over_x_minus_csch_sq(x)
        g_big = 2 * s * (inv + gamma * W2 / (4 * n2))
        return np.where(big, f_big / g_big, f / g)


# ---------------------------------------------------------------------------
# point operations


def _require_closed_zone(pt: EnergyPoint):
    if pt.zone not in (Zone.TUNNELING, Zone.BOUNDARY):
        raise DomainError(f"n2={pt.n2} lies in the {pt.zone.value} zone, not the tunneling zone")


def phase_time_closed(pt: EnergyPoint, cfg: BarrierConfig) -> float:
    _require_closed_zone(pt)
    return float(phase_time_ratio(pt.n2, cfg.upsilon, cfg.wL))


def phase_time_series(pt: EnergyPoint, cfg: BarrierConfig) -> float:
    return float(phase_time_series_value(pt.n2, cfg.upsilon))


def dwell_time_closed(pt: EnergyPoint, cfg: BarrierConfig) -> float:
    _require_closed_zone(pt)
    return float(dwell_time_ratio(pt.n2, cfg.upsilon, cfg.wL, "printed"))


def dwell_time_matched(pt: EnergyPoint, cfg: BarrierConfig) -> float:
    """Closed-form value of the dwell integral for the exact amplitudes."""
    _require_closed_zone(pt)
    return float(dwell_time_ratio(pt.n2, cfg.upsilon, cfg.wL, "exact"))


def _phase(cfg: BarrierConfig, n: float) -> float:
    return float(np.angle(matched_solution(energy_point(cfg, n * n), cfg).T))


def phase_time_numeric(pt: EnergyPoint, cfg: BarrierConfig) -> float:
    """t_phi/tau from a finite difference of arg T of the matched solution.

    Central difference in n with h = max(1e-6, 1e-4 d), d the distance to
    the nearest zone edge (or to n = 0), plus one Richardson step.
    """
    if pt.zone is not Zone.TUNNELING:
        raise DomainError(f"numerical phase time needs a tunneling-zone point, got {pt.zone.value}")
    n = pt.n
    lo, hi = zone_edges(cfg.upsilon)
    d = min(n, math.sqrt(hi) - n)
    if lo > 0:
        d = min(d, n - math.sqrt(lo))
    h = max(1e-6, 1e-4 * d)
    if 2 * h >= d:
        raise NumericalError(
            f"difference step {h:.3g} does not fit between n={n} and the zone edge; use times.edge_limits"
        )
    ph = np.unwrap([_phase(cfg, n + j * h) for j in (-2, -1, 1, 2)])
    d1 = (ph[2] - ph[1]) / (2 * h)
    d2 = (ph[3] - ph[0]) / (4 * h)
    return float((4 * d1 - d2) / 3 / cfg.wL)


def dwell_time_numeric(pt: EnergyPoint, cfg: BarrierConfig) -> float:
    """(m/k) * integral of |phi_2|**2 over the barrier, divided by tau."""
    sol = matched_solution(pt, cfg)
    L = cfg.length

    def density(xi):
        return float(interior_density(sol, min(xi * L, L)))

    val, err, info = integrate.quad(
        density, 0.0, 1.0, epsabs=_QUAD_EPSABS, epsrel=_QUAD_EPSREL, limit=200, full_output=1
    )[:3]
    if err > max(_QUAD_EPSABS, _QUAD_EPSREL * abs(val)) * 10:
        raise NumericalError(
            f"dwell quadrature did not converge at n2={pt.n2}: value={val}, error estimate={err}, "
            f"evaluations={info['neval']}"
        )
    # (m/k) L <|phi_2|^2> / (L E / k) = <|phi_2|^2> m / E
    return float(val / pt.energy_ratio)


def edge_limits(cfg: BarrierConfig, edge: Edge) -> EdgeLimitResult:
    """Limiting |T|, t_phi/tau and t_D/tau at a zone edge, as printed.

    Lower edge (n2 -> upsilon/2 - 1): -(4/3)/(1 + 2 n2) and (1/2)/(2 n2 + 1);
    upper edge (n2 -> upsilon/2 + 1): -(4/3)/(1 - 2 n2) and (1/2)/(2 n2 - 1).
    """
    edge = Edge(edge)
    u = cfg.upsilon
    if u <= 0:
        raise DomainError("edge limits need upsilon > 0")
    if edge is Edge.LOWER:
        if u <= 2:
            raise DomainError(f"no lower tunneling edge for upsilon={u} <= 2 (n2 would be <= 0)")
        n2, sign = u / 2 - 1, 1.0
    else:
        n2, sign = u / 2 + 1, -1.0
    trans = (1 + cfg.wL ** 2 / (2 * u - sign * 4)) ** -0.5
    return EdgeLimitResult(
        edge=edge,
        n2=n2,
        transmission=trans,
        t_phi_norm=-(4.0 / 3.0) / (1 + sign * 2 * n2),
        t_dwell_norm=0.5 / (2 * n2 + sign),
    )


def dwell_time_terms(n2, upsilon, x, wL):
    """Printed f_D and g_D with n2 and x = rho wL as independent inputs.

    rho2 is taken as (x / wL)**2, so n2 can be held at a zone edge while
    x -> 0.  Cancels catastrophically for small x; use
    :func:`dwell_time_ratio` for production values.
    """
    n2 = np.asarray(n2, dtype=float)
    x = np.asarray(x, dtype=float)
    r2 = (x / wL) ** 2
    sh, ch = np.sinh(x), np.cosh(x)
    f = (1 - n2 / r2) + (1 + n2 / r2) * sh * ch / x
    g = 2 * energy_ratio(n2, upsilon) * (1 + sh ** 2 / (4 * n2 * r2))
    return f, g


def edge_approach(cfg: BarrierConfig, edge: Edge, x: float = 1e-3) -> EdgeLimitResult:
    """Printed closed forms evaluated at the edge n2 with rho wL = x.

    This is the expansion in which the limits of :func:`edge_limits`
    are taken: n2 stays on the edge while x -> 0.  (At fixed wL, moving
    n2 instead gives :func:`phase_time_ratio` at the edge.)
    """
    edge = Edge(edge)
    lo, hi = zone_edges(cfg.upsilon)
    n2 = lo if edge is Edge.LOWER else hi
    if n2 <= 0:
        raise DomainError(f"{edge.value} edge n2={n2} is not positive for upsilon={cfg.upsilon}")
    if not x > 0:
        raise DomainError(f"x = rho wL must be positive, got {x}")
    wL = cfg.wL
    r2 = (x / wL) ** 2
    modulus = (1 + math.sinh(x) ** 2 / (4 * n2 * r2)) ** -0.5
    f, g = phase_time_terms(n2, cfg.upsilon, x)
    fd, gd = dwell_time_terms(n2, cfg.upsilon, x, wL)
    return EdgeLimitResult(
        edge=edge, n2=n2, transmission=float(modulus), t_phi_norm=float(f / g), t_dwell_norm=float(fd / gd)
    )


def edge_series_coefficients(upsilon: float, edge: Edge, degree: int = 6, half_width: float = 0.05):
    """Power-series coefficients of f and g in x = rho wL at a zone edge.

    n2 is pinned at the edge and f, g are fitted as polynomials in x on
    Chebyshev nodes in [-half_width, half_width].  Returns two arrays of
    coefficients, lowest order first.
    """
    edge = Edge(edge)
    lo, hi = zone_edges(upsilon)
    n2 = lo if edge is Edge.LOWER else hi
    if n2 <= 0:
        raise DomainError(f"{edge.value} edge n2={n2} is not positive for upsilon={upsilon}")
    m = 4 * degree + 4
    nodes = half_width * np.cos(np.pi * (np.arange(m) + 0.5) / m)
    f, g = phase_time_terms(n2, upsilon, nodes)
    return npoly.polyfit(nodes, f, degree), npoly.polyfit(nodes, g, degree)


def observables(pt: EnergyPoint, cfg: BarrierConfig, transmission: str = "printed") -> TimeObservables:
    """tau with both normalized times at one tunneling-zone (or edge) point."""
    _require_closed_zone(pt)
    branch = Branch.EDGE_LIMIT if pt.zone is Zone.BOUNDARY else Branch.CLOSED_FORM
    return TimeObservables(
        tau=classical_traversal_time(cfg, pt),
        t_phi_norm=float(phase_time_ratio(pt.n2, cfg.upsilon, cfg.wL)),
        t_dwell_norm=float(dwell_time_ratio(pt.n2, cfg.upsilon, cfg.wL, transmission)),
        branch=branch,
    )


def nr_baseline(pt: EnergyPoint, cfg: BarrierConfig) -> TimeObservables:
    """Schroedinger phase and dwell times at the same (n2, wL).

    Meant for upsilon = 0 or the regime upsilon n2 << 1, upsilon / n2 << 1;
    tau is the non-relativistic m L / k (infinite at upsilon = 0).
    """
    if not 0 < pt.n2 < 1:
        raise DomainError(f"non-relativistic tunneling needs 0 < n2 < 1, got {pt.n2}")
    t_phi, t_dwell = schrodinger_times(pt.n2, cfg.wL)
    return TimeObservables(
        tau=cfg.mass * cfg.length / pt.k,
        t_phi_norm=float(t_phi),
        t_dwell_norm=float(t_dwell),
        branch=Branch.CLOSED_FORM,
    )
