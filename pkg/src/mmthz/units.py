"""Scalar conventions: SI units, linear power ratios, dB only at the edges."""

import math

import numpy as np

from .errors import DomainError

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact
GHZ = 1e9
_DB_PER_NEPER = 10.0 * math.log10(math.e)


def db_to_linear(x):
    """Convert decibels to a linear power ratio, ``10**(x/10)``."""
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"dB value must be finite, got {x!r}")
    out = np.power(10.0, arr / 10.0)
    return float(out) if out.ndim == 0 else out


def linear_to_db(x):
    """Convert a linear power ratio to dB. Zero maps to ``-inf``."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError(f"power ratio must be non-negative, got {x!r}")
    with np.errstate(divide="ignore"):
        out = 10.0 * np.log10(arr)
    return float(out) if out.ndim == 0 else out


def dbm_to_watts(p_dbm):
    return db_to_linear(p_dbm) * 1e-3


def watts_to_dbm(p_w):
    return linear_to_db(np.asarray(p_w, dtype=float) * 1e3)


def wavelength(freq_hz):
    """Free-space wavelength in meters for a frequency in Hz."""
    f = np.asarray(freq_hz, dtype=float)
    if np.any(~(f > 0)):
        raise DomainError(f"frequency must be positive, got {freq_hz!r}")
    out = SPEED_OF_LIGHT / f
    return float(out) if out.ndim == 0 else out


def db_per_km_to_nepers_per_m(att_db_km):
    """Specific attenuation in dB/km to a power absorption coefficient in 1/m."""
    return np.asarray(att_db_km, dtype=float) / (_DB_PER_NEPER * 1000.0)


def nepers_to_db(x):
    return _DB_PER_NEPER * x


def wrap_angle(theta):
    """Map angles onto (-pi, pi]."""
    t = np.asarray(theta, dtype=float)
    out = np.pi - np.mod(np.pi - t, 2.0 * np.pi)
    return float(out) if out.ndim == 0 else out
