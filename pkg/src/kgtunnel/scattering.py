"""Transmission through the barrier: closed forms and boundary matching.

Two routes to the amplitudes are kept independent of each other:

* closed forms in (n2, upsilon, wL) -- the printed modulus/phase pair and
  the exact amplitude of the continuity problem, both written through the
  entire functions of ``_hyper`` so they are defined in every zone;
* :func:`matched_solution`, a direct 4x4 solve of the continuity
  conditions for phi and phi' at x = 0 and x = L.

The transmitted wave is ``T exp(i k (x - L))`` so a free particle has
``T = exp(i k L)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _hyper
from .errors import DegenerateInputError, DomainError
from .kinematics import EPS_EDGE, BarrierConfig, EnergyPoint, Zone, rho2


class InteriorMode(str, Enum):
    EVANESCENT = "Evanescent"
    OSCILLATORY = "Oscillatory"


@dataclass(frozen=True)
class ScatteringSolution:
    """Amplitudes of the stationary solution for unit incident amplitude.

    Inside the barrier ``phi_2 = alpha exp(-kappa x) + beta exp(kappa x)``
    with ``kappa = w rho`` (evanescent) or ``kappa = i w q`` (oscillatory).
    ``k_n`` and ``kappa_n`` are the wavenumbers in units of w.
    """

    R: complex
    T: complex
    alpha: complex
    beta: complex
    interior_mode: InteriorMode
    k_n: float
    kappa_n: complex
    wL: float
    length: float

    @property
    def probability_defect(self) -> float:
        return abs(self.R) ** 2 + abs(self.T) ** 2 - 1.0


@dataclass(frozen=True)
class TransmissionPolar:
    modulus: float
    phase: float


# ---------------------------------------------------------------------------
# array kernels


def _interior(n2, upsilon, wL):
    n2 = np.asarray(n2, dtype=float)
    r2 = rho2(n2, upsilon)
    z = r2 * wL * wL
    return n2, r2, z


def printed_transmission_probability(n2, upsilon, wL):
    """|T|**2 from the printed modulus, 1 / (1 + sinh(x)**2 / (4 n2 rho2)).

    Written as 1 / (1 + (wL)**2 S(z)**2 / (4 n2)) with S = sinh(x)/x,
    which is its analytic continuation through the zone edges.
    """
    n2, r2, z = _interior(n2, upsilon, wL)
    a = wL * wL / (4.0 * n2)
    x = np.sqrt(np.maximum(z, 0.0))
    big = x > _hyper.X_LARGE
    with np.errstate(over="ignore", invalid="ignore"):
        direct = 1.0 / (1.0 + a * _hyper.sinhc_sqrt(z) ** 2)
        scaled = _hyper.inv_sinhc_sq(x) / (_hyper.inv_sinhc_sq(x) + a)
    return np.where(big, scaled, direct)


def printed_transmission_phase(n2, upsilon, wL):
    """Principal-branch phase arctan[(n2 - rho2)/(2 n rho) tanh(rho wL)]."""
    phase = _transmission_angle(n2, upsilon, wL)
    return (phase + np.pi / 2) % np.pi - np.pi / 2


def _transmission_angle(n2, upsilon, wL):
    """arg T in (-pi, pi], from the closed form."""
    n2, r2, z = _interior(n2, upsilon, wL)
    b = (n2 - r2) * wL / (2.0 * np.sqrt(n2))
    x = np.sqrt(np.maximum(z, 0.0))
    big = x > _hyper.X_LARGE
    # cosh(x) > 0 in the evanescent range, so only the ratio tanh(x)/x matters there
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        c = np.where(big, 1.0, _hyper.cosh_sqrt(z))
        sc = np.where(big, np.tanh(x) / x, _hyper.sinhc_sqrt(z))
    return np.arctan2(b * sc, c)


def exact_transmission(n2, upsilon, wL):
    """Complex T of the continuity problem, in closed form.

    1/T = cosh(x) + i (rho2 - n2) / (2 n rho) sinh(x), evaluated as an
    entire function of z = x**2 (valid in all zones and at the edges).
    """
    n2, r2, z = _interior(n2, upsilon, wL)
    b = (r2 - n2) * wL / (2.0 * np.sqrt(n2))
    x = np.sqrt(np.maximum(z, 0.0))
    big = x > _hyper.X_LARGE
    with np.errstate(over="ignore", invalid="ignore"):
        direct = 1.0 / (_hyper.cosh_sqrt(z) + 1j * b * _hyper.sinhc_sqrt(z))
        e = np.exp(-2.0 * x)
        xs = np.where(big, x, 1.0)
        scaled = np.exp(-x) / ((1.0 + e) / 2.0 + 1j * b * (-np.expm1(-2.0 * x)) / (2.0 * xs))
    return np.where(big, scaled, direct)


def exact_transmission_probability(n2, upsilon, wL):
    """|T|**2 = 1 / (1 + (n2 + rho2)**2 sinh(x)**2 / (4 n2 rho2))."""
    n2, r2, z = _interior(n2, upsilon, wL)
    a = (n2 + r2) ** 2 * wL * wL / (4.0 * n2)
    x = np.sqrt(np.maximum(z, 0.0))
    big = x > _hyper.X_LARGE
    with np.errstate(over="ignore", invalid="ignore"):
        direct = 1.0 / (1.0 + a * _hyper.sinhc_sqrt(z) ** 2)
        scaled = _hyper.inv_sinhc_sq(x) / (_hyper.inv_sinhc_sq(x) + a)
    return np.where(big, scaled, direct)


def unwrapped_phase(n2_grid, upsilon, wL):
    """Continuous transmission phase along an ascending n2 grid.

    Built from arg T and unwrapped across branch crossings; agrees with
    the principal branch wherever that one is continuous.
    """
    return np.unwrap(np.angle(exact_transmission(n2_grid, upsilon, wL)))


# ---------------------------------------------------------------------------
# point operations


def _require_tunneling(pt: EnergyPoint):
    if pt.zone is Zone.BOUNDARY:
        raise DegenerateInputError(
            f"n2={pt.n2} is on a zone edge; use times.edge_limits for the limiting values"
        )
    if pt.zone is not Zone.TUNNELING:
        raise DomainError(f"closed form is for the tunneling zone, n2={pt.n2} is in {pt.zone.value}; use matched_solution")
    if math.sqrt(pt.rho2) <= EPS_EDGE:
        raise DegenerateInputError(f"rho_n={math.sqrt(pt.rho2)} too close to 0")


def transmission_modulus(pt: EnergyPoint, cfg: BarrierConfig) -> float:
    """|T| = [1 + sinh(rho wL)**2 / (4 n2 rho2)]**-1/2 as printed."""
    _require_tunneling(pt)
    return float(np.sqrt(printed_transmission_probability(pt.n2, cfg.upsilon, cfg.wL)))


def transmission_phase(pt: EnergyPoint, cfg: BarrierConfig) -> float:
    _require_tunneling(pt)
    return float(printed_transmission_phase(pt.n2, cfg.upsilon, cfg.wL))


def transmission_polar(pt: EnergyPoint, cfg: BarrierConfig) -> TransmissionPolar:
    return TransmissionPolar(transmission_modulus(pt, cfg), transmission_phase(pt, cfg))


def matched_solution(pt: EnergyPoint, cfg: BarrierConfig) -> ScatteringSolution:
    """Solve the four continuity conditions for (R, alpha, beta, T).

    Lengths are scaled by 1/w.  The growing interior exponential is
    referenced to x = L (``beta' = beta exp(kappa L)``) so every matrix
    entry is bounded by 1 for opaque barriers.
    """
    if pt.zone is Zone.BOUNDARY:
        raise DegenerateInputError(
            f"matching matrix is singular at the zone edge n2={pt.n2}; use times.edge_limits"
        )
    k = pt.n
    if pt.rho2 > 0:
        kappa = complex(math.sqrt(pt.rho2))
        mode = InteriorMode.EVANESCENT
    else:
        kappa = 1j * math.sqrt(-pt.rho2)
        mode = InteriorMode.OSCILLATORY
    L = cfg.wL
    em = np.exp(-kappa * L)
    A = np.array(
        [
            [-1.0, 1.0, em, 0.0],
            [1j * k, -kappa, kappa * em, 0.0],
            [0.0, em, 1.0, -1.0],
            [0.0, -kappa * em, kappa, -1j * k],
        ],
        dtype=complex,
    )
    rhs = np.array([1.0, 1j * k, 0.0, 0.0], dtype=complex)
    try:
        R, alpha, beta_ref, T = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise DegenerateInputError(f"matching matrix singular at n2={pt.n2}") from exc
    return ScatteringSolution(
        R=complex(R),
        T=complex(T),
        alpha=complex(alpha),
        beta=complex(beta_ref * em),
        interior_mode=mode,
        k_n=k,
        kappa_n=kappa,
        wL=L,
        length=cfg.length,
    )


def interior_wavefunction(sol: ScatteringSolution, x):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(x > sol.length):
        raise DomainError(f"x must lie in [0, {sol.length}]")
    xi = x * (sol.wL / sol.length)
    kap = sol.kappa_n
    beta_ref = sol.beta * np.exp(kap * sol.wL)
    return sol.alpha * np.exp(-kap * xi) + beta_ref * np.exp(kap * (xi - sol.wL))


def interior_density(sol: ScatteringSolution, x):
    """|phi_2(x)|**2 for x in [0, L] (physical units)."""
    return np.abs(interior_wavefunction(sol, x)) ** 2
