"""Narrowband link equations for mmWave and THz links.

Everything is linear (watts, power ratios); convert with :mod:`mmthz.units`
at the edges.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import gammaincinv

from .atmosphere import transmittance
from .errors import DomainError
from .units import wavelength

C_EXACT = 299_792_458  # m/s, int so rational inputs stay exact


class LinkState(str, Enum):
    LOS = "LOS"
    NLOS = "NLOS"


@dataclass(frozen=True)
class PathLossLaw:
    """Power-law path loss ``c * r**(-alpha)``."""

    c: float
    alpha: float

    def __post_init__(self):
        if not (self.c > 0 and self.alpha > 0):
            raise DomainError(f"path-loss law needs c > 0 and alpha > 0, got {self!r}")

    def __call__(self, r):
        r = _check_distance(r)
        return self.c * r ** (-self.alpha)

    @classmethod
    def free_space_intercept(cls, freq_hz, alpha):
        """Law whose 1 m intercept equals free-space loss at ``freq_hz``."""
        return cls((wavelength(freq_hz) / (4.0 * math.pi)) ** 2, alpha)


@dataclass(frozen=True)
class FadingSpec:
    """Nakagami shape parameters for LOS and NLOS links (unit mean power)."""

    mu_los: float = 3.0
    mu_nlos: float = 2.0

    def __post_init__(self):
        if not (self.mu_los > 0 and self.mu_nlos > 0):
            raise DomainError("Nakagami shape parameters must be positive")

    def shape(self, state):
        return self.mu_los if LinkState(state) is LinkState.LOS else self.mu_nlos


@dataclass(frozen=True)
class ThzPathGeometry:
    """Single-bounce geometry: Tx to surface ``r1``, surface to Rx ``r2``."""

    r1: float
    r2: float
    gamma_r: float = 1.0
    gamma_s: float = 1.0

    def __post_init__(self):
        if not (self.r1 > 0 and self.r2 > 0):
            raise DomainError("r1 and r2 must be positive")
        if self.gamma_r < 0 or self.gamma_s < 0:
            raise DomainError("path coefficients must be >= 0")


def _check_distance(r):
    arr = np.asarray(r, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError(f"distance must be positive, got {r!r}")
    return arr if arr.ndim else float(arr)


def mmwave_rx_power(p_t, pathloss, r, g_t=1.0, g_r=1.0, h=1.0):
    """Received power ``P_t * l(r) * g_r * g_t * H`` of a mmWave link.

    ``pathloss`` is the :class:`PathLossLaw` for the link's state; molecular
    absorption is neglected.
    """
    r = _check_distance(r)
    if np.any(np.asarray(h) < 0) or g_t < 0 or g_r < 0 or p_t < 0:
        raise DomainError("power, gains and fading must be >= 0")
    return p_t * pathloss(r) * g_r * g_t * h


def sample_nakagami_power(mu, seed=None, size=None):
    """Nakagami-``mu`` power fading draws: Gamma(shape=mu, scale=1/mu), unit mean.

    ``seed`` may be an int, a SeedSequence or a numpy Generator.
    """
    if not mu > 0:
        raise DomainError(f"Nakagami shape must be positive, got {mu!r}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return rng.gamma(shape=mu, scale=1.0 / mu, size=size)


def nakagami_power_quantile(mu, q):
    """Quantile ``q`` of the unit-mean Gamma(mu, 1/mu) fading power."""
    if not mu > 0:
        raise DomainError(f"Nakagami shape must be positive, got {mu!r}")
    if not 0 < q < 1:
        raise DomainError(f"quantile must lie in (0, 1), got {q!r}")
    return float(gammaincinv(mu, q) / mu)


def fspl(freq_hz, r):
    """Free-space path gain ``(lambda / (4 pi r))**2`` (a ratio below one)."""
    r = _check_distance(r)
    lam = wavelength(freq_hz)
    return (lam * lam / (4.0 * math.pi)) / (4.0 * math.pi * r * r)


def thz_rx_power_los(p_t, freq_hz, r, g_t=1.0, g_r=1.0, spectrum=None):
    """LOS THz received power: free-space loss times molecular transmittance."""
    return p_t * fspl(freq_hz, r) * g_r * g_t * transmittance(r, freq_hz, spectrum)


def thz_scattered_path(p_t, freq_hz, geom, g_t=1.0, g_r=1.0, spectrum=None):
    """Power via a scattering surface; each leg has its own spreading loss."""
    return (p_t * g_r * g_t * fspl(freq_hz, geom.r1) * fspl(freq_hz, geom.r2)
            * transmittance(geom.r1, freq_hz, spectrum) * transmittance(geom.r2, freq_hz, spectrum)
            * geom.gamma_r)


def thz_reflected_path(p_t, freq_hz, geom, gamma, g_t=1.0, g_r=1.0, spectrum=None):
    """Power via a specular reflection with amplitude coefficient ``gamma``.

    Spreading and absorption act over the unfolded length ``r1 + r2``; the
    result also carries the geometry's ``gamma_s`` factor.
    """
    if not 0.0 <= gamma <= 1.0:
        raise DomainError(f"reflection coefficient must lie in [0, 1], got {gamma!r}")
    r = geom.r1 + geom.r2
    return (p_t * g_r * g_t * fspl(freq_hz, r) * gamma ** 2
            * transmittance(r, freq_hz, spectrum) * geom.gamma_s)


def doppler_spread(freq_hz, speed):
    """Maximum Doppler shift ``f v / c`` in Hz.

    Works with any numeric type: ``fractions.Fraction`` arguments give an
    exact rational result.
    """
    if speed < 0:
        raise DomainError(f"speed must be >= 0, got {speed!r}")
    if not freq_hz > 0:
        raise DomainError(f"frequency must be positive, got {freq_hz!r}")
    return freq_hz * speed / C_EXACT
