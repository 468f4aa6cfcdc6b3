"""Textbook Schroedinger rectangular barrier, used as an independent oracle.

Written in the usual (k, kappa, k0) variables with k0**2 = 2 m V0 and
hbar = 1, lengths in units of 1/k0.  Nothing here is shared with the
relativistic closed forms.
"""

from __future__ import annotations

import numpy as np


def _wavenumbers(n2):
    k = np.sqrt(n2)
    kappa = np.sqrt((1.0 - n2) + 0j)  # i * k' above the barrier
    return k, kappa


def schrodinger_amplitudes(n2, wL):
    """(R, T) for unit incidence, transmitted wave T exp(i k (x - L)).

    Above the barrier kappa is imaginary and the same expressions hold.
    """
    k, kappa = _wavenumbers(np.asarray(n2, dtype=float))
    L = wL
    den = 2 * k * kappa * np.cosh(kappa * L) - 1j * (k ** 2 - kappa ** 2) * np.sinh(kappa * L)
    T = 2 * k * kappa / den
    R = -1j * (k ** 2 + kappa ** 2) * np.sinh(kappa * L) / den
    return R, T


def schrodinger_transmission_probability(n2, wL):
    """T = [1 + k0**4 sinh(kappa L)**2 / (4 k**2 kappa**2)]**-1 (E < V0)."""
    k, kappa = _wavenumbers(np.asarray(n2, dtype=float))
    kap = kappa.real
    return 1.0 / (1.0 + np.sinh(kap * wL) ** 2 / (4 * k ** 2 * kap ** 2))


def schrodinger_times(n2, wL):
    """Phase time and dwell time, each divided by tau = m L / k (E < V0).

        t_phi = (m / k kappa) [2 kappa L k**2 (kappa**2 - k**2) + k0**4 sinh(2 kappa L)] / D
        t_D   = (m k / kappa) [2 kappa L (kappa**2 - k**2) + k0**2 sinh(2 kappa L)] / D
        D     = 4 k**2 kappa**2 + k0**4 sinh(kappa L)**2
    """
    n2 = np.asarray(n2, dtype=float)
    k = np.sqrt(n2)
    kap = np.sqrt(1.0 - n2)
    L = wL
    s2 = np.sinh(2 * kap * L)
    D = 4 * k ** 2 * kap ** 2 + np.sinh(kap * L) ** 2
    t_phi = (2 * kap * L * k ** 2 * (kap ** 2 - k ** 2) + s2) / (k * kap * D)
    t_dwell = k * (2 * kap * L * (kap ** 2 - k ** 2) + s2) / (kap * D)
    tau = L / k
    return t_phi / tau, t_dwell / tau
