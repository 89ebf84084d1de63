"""Rough-surface reflection and directive-scattering (DS) received power."""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, NumericalError
from .units import wavelength


@dataclass(frozen=True)
class SurfaceSpec:
    """Surface roughness and reflection parameters.

    ``gamma_s`` is the smooth-surface reflection coefficient (amplitude,
    penetration loss included), ``h0`` the minimum-to-maximum protuberance,
    ``h_rms`` the RMS height, ``alpha_r`` the DS lobe-width exponent and
    ``area`` the effective aperture of the scattering surface in m^2.
    """

    gamma_s: float
    h0: float = 0.0
    h_rms: float = 0.0
    alpha_r: float = 1.0
    area: float = 1.0
    # Backscatter lobe weight; only 0 (forward lobe only) is implemented.
    backscatter: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.gamma_s <= 1.0:
            raise DomainError(f"gamma_s must lie in [0, 1], got {self.gamma_s!r}")
        if self.h0 < 0 or self.h_rms < 0:
            raise DomainError("surface heights must be >= 0")
        if not self.alpha_r > 0:
            raise DomainError(f"alpha_r must be positive, got {self.alpha_r!r}")
        if not self.area > 0:
            raise DomainError(f"area must be positive, got {self.area!r}")
        if self.backscatter != 0.0:
            raise NotImplementedError("backscattered lobe is not modelled")


@dataclass(frozen=True)
class ScatterGeometry:
    """Incidence/observation angles (radians, from the surface normal) and ranges."""

    theta_i: float
    theta_s: float
    r_i: float
    r_s: float

    def __post_init__(self):
        _check_incidence(self.theta_i)
        if not (self.r_i > 0 and self.r_s > 0):
            raise DomainError("r_i and r_s must be positive")

    @property
    def theta_r(self):
        return self.theta_i

    @property
    def psi(self):
        return self.theta_s - self.theta_r


def _check_incidence(theta_i):
    t = np.asarray(theta_i, dtype=float)
    if np.any(t < 0) or np.any(t >= math.pi / 2) or np.any(np.isnan(t)):
        raise DomainError(f"incidence angle must lie in [0, pi/2), got {theta_i!r}")


def critical_height(freq_hz, theta_i):
    """Rayleigh critical height ``lambda / (8 cos theta_i)`` in meters."""
    _check_incidence(theta_i)
    return wavelength(freq_hz) / (8.0 * np.cos(theta_i))


def classify(surface, freq_hz, theta_i):
    """``"smooth"`` if ``h0`` is below the critical height, else ``"rough"``."""
    return "smooth" if surface.h0 < critical_height(freq_hz, theta_i) else "rough"


def rough_loss_factor(surface, freq_hz, theta_i):
    """Scattering loss factor rho; the rough reflection coefficient is rho * gamma_s."""
    _check_incidence(theta_i)
    x = math.pi * surface.h_rms * np.cos(theta_i) / wavelength(freq_hz)
    return np.exp(-8.0 * x * x)


def reflection_coefficient(surface, freq_hz, theta_i):
    return rough_loss_factor(surface, freq_hz, theta_i) * surface.gamma_s


def power_split(surface, freq_hz, theta_i, p_incident=1.0):
    """Split incident power into specular and diffuse parts.

    Returns ``(reflected, scattered, s2)`` with ``s2`` the scattering
    coefficient (scattered fraction of the incident power).
    """
    if p_incident < 0:
        raise DomainError("incident power must be >= 0")
    rho = rough_loss_factor(surface, freq_hz, theta_i)
    g2 = surface.gamma_s ** 2
    s2 = (1.0 - rho * rho) * g2
    return p_incident * rho * rho * g2, p_incident * s2, s2


def ds_lobe(psi, alpha_r):
    """Directive-scattering lobe ``((1 + cos psi) / 2) ** alpha_r``."""
    return ((1.0 + np.cos(psi)) / 2.0) ** alpha_r


@lru_cache(maxsize=8)
def _gl(n):
    return np.polynomial.legendre.leggauss(n)


def _composite_gl(a, b, panels, order=10):
    x, w = _gl(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _refine(estimate, tol, max_level, what):
    prev = None
    history = []
    for level in range(max_level + 1):
        val = estimate(2 ** level)
        history.append(val)
        if prev is not None and abs(val - prev) <= tol:
            return val, level, history
        prev = val
    raise NumericalError(
        f"{what}: no convergence to {tol:g} after {max_level} refinements; "
        f"last estimates {history[-3:]}")


def ds_normalization(alpha_r, *, domain="planar", theta_r=0.0, tol=1e-12, max_level=12,
                     full_output=False):
    """Integral of the DS lobe over the scattering directions.

    ``domain="planar"`` integrates ``d theta_s d phi_s`` over
    ``theta_s in [theta_r - pi/2, theta_r + pi/2]`` and
    ``phi_s in [-pi/2, pi/2]`` with no Jacobian; the lobe depends only on
    ``theta_s - theta_r`` so the result is independent of ``theta_r``.

    ``domain="hemisphere"`` integrates over solid angle above the surface
    (``sin theta_s`` Jacobian) with the lobe evaluated at the true 3-D angle
    between the scattered and specular directions, the latter at polar
    angle ``theta_r``.

    The composite Gauss-Legendre grid is doubled until two successive
    estimates agree within ``tol``.
    """
    if not alpha_r > 0:
        raise DomainError(f"alpha_r must be positive, got {alpha_r!r}")
    if domain == "planar":
        def estimate(panels):
            u, w = _composite_gl(-math.pi / 2, math.pi / 2, panels)
            return math.pi * float(np.dot(w, ds_lobe(u, alpha_r)))
    elif domain == "hemisphere":
        st, ct = math.sin(theta_r), math.cos(theta_r)

        def estimate(panels):
            th, wt = _composite_gl(0.0, math.pi / 2, panels)
            ph, wp = _composite_gl(-math.pi, math.pi, 2 * panels)
            cos_psi = (np.sin(th)[:, None] * st * np.cos(ph)[None, :]
                       + np.cos(th)[:, None] * ct)
            lobe = ((1.0 + cos_psi) / 2.0) ** alpha_r
            return float(np.einsum("i,ij,j->", wt * np.sin(th), lobe, wp))
    else:
        raise DomainError(f"unknown integration domain {domain!r}")
    val, level, history = _refine(estimate, tol, max_level, f"DS normalisation (alpha_r={alpha_r})")
    if full_output:
        return val, {"level": level, "estimates": history}
    return val


def received_scattered_power(surface, geom, freq_hz, p_t, g_t, g_r, *, domain="planar"):
    """Power received via diffuse scattering off ``surface``.

    Transmitter at ``geom.r_i`` from the surface, receiver at ``geom.r_s``
    in direction ``geom.theta_s``. Linear units throughout.
    """
    if not (g_t > 0 and g_r > 0):
        raise DomainError("antenna gains must be positive")
    _, _, s2 = power_split(surface, freq_hz, geom.theta_i)
    f_alpha = ds_normalization(surface.alpha_r, domain=domain, theta_r=geom.theta_r)
    lam = wavelength(freq_hz)
    incident = s2 * surface.area * p_t * g_t / (4.0 * math.pi * geom.r_i ** 2)
    p_s0 = incident / (geom.r_s ** 2 * f_alpha)
    return p_s0 * ds_lobe(geom.psi, surface.alpha_r) * lam ** 2 / (4.0 * math.pi) * g_r
