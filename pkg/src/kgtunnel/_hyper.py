"""Entire functions of z = x**2 used by the closed forms.

Every closed form depends on the interior decay only through
x = rho * wL.  Writing the hyperbolics as functions of the signed square
z = x**2 gives one expression that is analytic across the tunneling-zone
edges (z = 0) and continues into the oscillatory zones (z < 0, where
sinh -> sin).
"""

import math

import numpy as np

# |z| below which the Taylor series is used
_SERIES_Z = 1.0
_N_TERMS = 16

# x above which callers switch to exponentially scaled forms
X_LARGE = 20.0

_FACT = [float(math.factorial(j)) for j in range(2 * _N_TERMS + 4)]
_SINHC_COEF = np.array([1.0 / _FACT[2 * j + 1] for j in range(_N_TERMS)])
_EXCESS_COEF = np.array([4.0 ** j / _FACT[2 * j + 1] for j in range(1, _N_TERMS + 1)])


def _horner(coef, z):
    out = np.zeros_like(z)
    for c in coef[::-1]:
        out = out * z + c
    return out


def cosh_sqrt(z):
    """cosh(sqrt(z)), continued as cos(sqrt(-z)) for z < 0."""
    z = np.asarray(z, dtype=float)
    r = np.sqrt(np.abs(z))
    with np.errstate(over="ignore"):
        return np.where(z >= 0, np.cosh(r), np.cos(r))


def sinhc_sqrt(z):
    """sinh(x)/x with x = sqrt(z); sin(y)/y for z = -y**2."""
    z = np.asarray(z, dtype=float)
    r = np.sqrt(np.abs(z))
    small = np.abs(z) < _SERIES_Z
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        direct = np.where(z >= 0, np.sinh(r), np.sin(r)) / r
    return np.where(small, _horner(_SINHC_COEF, z), direct)


def shch_excess(z):
    """(sinh(2x)/(2x) - 1) / x**2 with x = sqrt(z); equals 2/3 at z = 0."""
    z = np.asarray(z, dtype=float)
    r = np.sqrt(np.abs(z))
    small = np.abs(z) < _SERIES_Z
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        c = np.where(z >= 0, np.sinh(2 * r), np.sin(2 * r)) / (2 * r)
        direct = (c - 1.0) / z
    return np.where(small, _horner(_EXCESS_COEF, z), direct)


def inv_sinhc_sq(x):
    """x**2 / sinh(x)**2 for x > 0, without overflow."""
    x = np.asarray(x, dtype=float)
    e = np.exp(-2 * x)
    return 4 * x * x * e / (-np.expm1(-2 * x)) ** 2


def coth_over_x_minus_csch_sq(x):
    """coth(x)/x - 1/sinh(x)**2 for large x > 0."""
    x = np.asarray(x, dtype=float)
    e = np.exp(-2 * x)
    em = -np.expm1(-2 * x)
    return (1 + e) / (em * x) - 4 * e / em ** 2
