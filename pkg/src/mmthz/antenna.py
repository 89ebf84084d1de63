"""Analog beam-pattern models, half-power beamwidth and multi-lobe fitting.

Array-factor patterns (:class:`UlaExact`, :class:`SincApprox`,
:class:`Cosine`) are unit-peak; absolute element gain is applied separately
by the caller. :class:`UlaExact` and :class:`SincApprox` take the cosine
direction ``phi = (d / lambda) cos(theta_AoD)`` as their argument, all other
patterns the planar angle from boresight in radians.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigurationError, DomainError, UndefinedHpbwError


def _check_n(n):
    if int(n) != n or n < 1:
        raise DomainError(f"element count must be a positive integer, got {n!r}")


def _check_gains(g_m, g_s):
    if not (g_m >= g_s >= 0):
        raise DomainError(f"need g_m >= g_s >= 0, got g_m={g_m!r}, g_s={g_s!r}")


@dataclass(frozen=True)
class UlaExact:
    n: int
    spacing: float = 0.5  # element spacing in wavelengths

    def __post_init__(self):
        _check_n(self.n)
        if not self.spacing > 0:
            raise DomainError("spacing must be positive")


@dataclass(frozen=True)
class SincApprox:
    n: int
    spacing: float = 0.5

    def __post_init__(self):
        _check_n(self.n)
        if not self.spacing > 0:
            raise DomainError("spacing must be positive")


@dataclass(frozen=True)
class FlatTop:
    g_m: float
    g_s: float
    theta_3db: float

    def __post_init__(self):
        _check_gains(self.g_m, self.g_s)
        if not self.theta_3db > 0:
            raise DomainError("theta_3db must be positive")


@dataclass(frozen=True)
class MultiLobe:
    """Symmetric step pattern.

    ``lobes`` is a sequence of ``(edge, gain)``: lobe ``k`` covers
    ``edge[k-1] < |theta| <= edge[k]``; the last lobe extends to every
    larger angle whatever its edge.
    """

    lobes: tuple

    def __post_init__(self):
        lobes = tuple((float(e), float(g)) for e, g in self.lobes)
        if not lobes:
            raise DomainError("multi-lobe pattern needs at least one lobe")
        edges = [e for e, _ in lobes]
        if edges[0] <= 0 or any(b <= a for a, b in zip(edges, edges[1:])):
            raise DomainError(f"lobe edges must be positive and increasing, got {edges}")
        if any(g < 0 for _, g in lobes):
            raise DomainError("lobe gains must be >= 0")
        object.__setattr__(self, "lobes", lobes)

    @property
    def edges(self):
        return np.array([e for e, _ in self.lobes])

    @property
    def gains(self):
        return np.array([g for _, g in self.lobes])


@dataclass(frozen=True)
class Gaussian:
    g_m: float
    g_s: float
    eta: float

    def __post_init__(self):
        _check_gains(self.g_m, self.g_s)
        if not self.eta > 0:
            raise DomainError("eta must be positive")


@dataclass(frozen=True)
class Cosine:
    n: int

    def __post_init__(self):
        _check_n(self.n)


PATTERNS = (UlaExact, SincApprox, FlatTop, MultiLobe, Gaussian, Cosine)


def _ula(n, phi):
    # sin^2 is pi-periodic, so fold phi to the nearest grating lobe offset
    delta = phi - np.round(phi)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = np.sin(np.pi * n * delta) ** 2 / (n * n * np.sin(np.pi * delta) ** 2)
    small = np.abs(delta) < 1e-8
    series = 1.0 - (n * n - 1) * (np.pi * delta) ** 2 / 3.0
    return np.where(small, series, g)


def _sinc(n, phi):
    with np.errstate(divide="ignore", invalid="ignore"):
        g = np.sin(np.pi * n * phi) ** 2 / (np.pi * n * phi) ** 2
    small = np.abs(np.pi * n * phi) < 1e-8
    return np.where(small, 1.0 - (np.pi * n * phi) ** 2 / 3.0, g)


def gain(pattern, direction):
    """Linear gain of ``pattern`` toward ``direction``."""
    x = np.asarray(direction, dtype=float)
    if isinstance(pattern, UlaExact):
        out = _ula(pattern.n, x)
    elif isinstance(pattern, SincApprox):
        out = _sinc(pattern.n, x)
    elif isinstance(pattern, FlatTop):
        out = np.where(np.abs(x) <= pattern.theta_3db, pattern.g_m, pattern.g_s)
    elif isinstance(pattern, MultiLobe):
        edges, gains = pattern.edges, pattern.gains
        idx = np.searchsorted(edges, np.abs(x), side="left")
        out = gains[np.minimum(idx, len(gains) - 1)]
    elif isinstance(pattern, Gaussian):
        out = (pattern.g_m - pattern.g_s) * np.exp(-pattern.eta * x * x) + pattern.g_s
    elif isinstance(pattern, Cosine):
        out = np.where(np.abs(x) <= 1.0 / pattern.n,
                       np.cos(np.pi * pattern.n * x / 2.0) ** 2, 0.0)
    else:
        raise TypeError(f"not an antenna pattern: {pattern!r}")
    out = np.asarray(out, dtype=float)
    return float(out) if out.ndim == 0 else out


def gain_at_offset(pattern, psi):
    """Gain at planar angle ``psi`` away from the steered direction.

    Array-factor patterns are evaluated at ``phi = spacing * sin(psi)``,
    the cosine-direction offset of a broadside-steered array.
    """
    if isinstance(pattern, (UlaExact, SincApprox)):
        return gain(pattern, pattern.spacing * np.sin(psi))
    return gain(pattern, psi)


def multi_stream_gain(patterns, steering, direction):
    """Effective gain of several analog beams, one per stream or user."""
    if len(patterns) != len(steering):
        raise DomainError("need one steering angle per pattern")
    return sum(gain(p, np.asarray(direction) - s) for p, s in zip(patterns, steering))


def _hpbw_search_limit(pattern):
    if isinstance(pattern, UlaExact):
        return 0.5
    if isinstance(pattern, (SincApprox, Cosine)):
        return 1.0 / pattern.n
    if isinstance(pattern, Gaussian):
        return max(math.pi, math.sqrt(60.0 / pattern.eta))
    if isinstance(pattern, MultiLobe):
        return max(math.pi, 2.0 * float(pattern.edges[-1]))
    return math.pi


def hpbw(pattern, xtol=1e-12):
    """Smallest positive angle at which the gain falls to half its boresight value.

    For patterns with a step (flat-top, multi-lobe) this is the step location.
    Raises :class:`UndefinedHpbwError` if the gain never drops below half.
    """
    half = gain(pattern, 0.0) / 2.0
    limit = _hpbw_search_limit(pattern)
    grid = np.concatenate(([0.0], limit * np.logspace(-12, 0, 6001)))
    below = np.nonzero(gain(pattern, grid) < half)[0]
    if len(below) == 0:
        raise UndefinedHpbwError(f"{pattern!r} never drops below half of its peak gain")
    hi = float(grid[below[0]])
    lo = float(grid[below[0] - 1])
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if gain(pattern, mid) < half:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _as_samples(samples, gains=None):
    if gains is None:
        arr = np.asarray(samples, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise DomainError("samples must be a sequence of (angle, gain) pairs")
        return arr[:, 0], arr[:, 1]
    return np.asarray(samples, dtype=float), np.asarray(gains, dtype=float)


def pattern_mse(pattern, samples, gains=None):
    """Mean squared error of ``pattern`` against (angle, gain) samples."""
    angles, g = _as_samples(samples, gains)
    return float(np.mean((gain(pattern, angles) - g) ** 2))


def fit_multi_lobe(samples, k, gains=None):
    """Best ``k``-lobe step pattern in the mean-squared-error sense.

    Samples are folded onto ``|angle|``. The optimal contiguous partition is
    found exactly by dynamic programming over breakpoints between distinct
    sample angles; each lobe edge sits on the outermost sample of the lobe
    and its gain is the mean of the samples it covers. Among equal-error
    partitions the one with the earliest breakpoints (narrowest main lobe)
    wins.
    """
    angles, g = _as_samples(samples, gains)
    k = int(k)
    if k < 1:
        raise ConfigurationError("lobe count must be >= 1")
    if len(angles) < 2 * k:
        raise ConfigurationError(f"need at least {2 * k} samples for {k} lobes, got {len(angles)}")
    if np.any(g < 0):
        raise DomainError("sample gains must be >= 0")
    a = np.abs(angles)
    uniq, inv = np.unique(a, return_inverse=True)
    if len(uniq) < k:
        raise ConfigurationError(f"only {len(uniq)} distinct angles; cannot place {k} lobes")
    cnt = np.bincount(inv).astype(float)
    s = np.bincount(inv, weights=g)
    ss = np.bincount(inv, weights=g * g)
    zero = np.zeros(1)
    cp, sp, ssp = (np.concatenate((zero, np.cumsum(v))) for v in (cnt, s, ss))
    tol = 1e-12 * (1.0 + ssp[-1])
    _, ends = kernels.segmented_lsq(cp, sp, ssp, k, tol)
    lobes = []
    start = 0
    for idx, end in enumerate(ends):
        mean = (sp[end] - sp[start]) / (cp[end] - cp[start])
        edge = float(uniq[end - 1]) if idx < k - 1 else max(float(uniq[-1]), math.pi)
        if idx == k - 1 and lobes and edge <= lobes[-1][0]:
            edge = lobes[-1][0] * 2.0
        lobes.append((edge, float(mean)))
        start = end
    if lobes[0][0] == 0.0:
        # a main lobe containing only boresight still needs a positive edge
        lobes[0] = (np.nextafter(0.0, 1.0), lobes[0][1])
    return MultiLobe(tuple(lobes))
