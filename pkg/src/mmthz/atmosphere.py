"""Environmental losses: molecular absorption, rain and foliage.

All tables hold dB quantities the way they are usually quoted (dB/km for
specific attenuation, dB for foliage/penetration). Conversion to a linear
transmittance happens only inside :func:`transmittance`. Nothing is
extrapolated outside a table; out-of-range queries raise
:class:`~mmthz.errors.ExtrapolationError`.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (ConfigurationError, DomainError, ExtrapolationError,
                     UnsupportedRegimeError)
from .units import GHZ, db_per_km_to_nepers_per_m
from ._tables import default_table, load_toml


def _as_anchor_array(anchors, what):
    arr = np.asarray(anchors, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or len(arr) < 2:
        raise ConfigurationError(f"{what}: need at least two [x, y] anchors")
    if np.any(np.diff(arr[:, 0]) <= 0):
        raise ConfigurationError(f"{what}: anchor abscissae must be strictly increasing")
    return arr


@dataclass(frozen=True, eq=False)
class AbsorptionSpectrum:
    """Specific attenuation anchors, log-linearly interpolated in frequency.

    ``freqs_hz`` and ``att_db_km`` are parallel arrays; the log of the
    attenuation is interpolated linearly in frequency.
    """

    freqs_hz: np.ndarray
    att_db_km: np.ndarray
    interpolation: str = "log-linear"

    def __post_init__(self):
        f = np.asarray(self.freqs_hz, dtype=float)
        a = np.asarray(self.att_db_km, dtype=float)
        if f.shape != a.shape or f.ndim != 1 or len(f) < 2:
            raise ConfigurationError("absorption spectrum needs >= 2 parallel anchors")
        if np.any(np.diff(f) <= 0):
            raise ConfigurationError("absorption anchors must be strictly increasing in frequency")
        if np.any(a <= 0):
            # log-linear interpolation needs strictly positive values
            raise ConfigurationError("absorption anchors must be > 0 dB/km")
        if self.interpolation != "log-linear":
            raise ConfigurationError(f"unsupported interpolation {self.interpolation!r}")
        object.__setattr__(self, "freqs_hz", f)
        object.__setattr__(self, "att_db_km", a)

    @classmethod
    def from_ghz(cls, anchors):
        arr = _as_anchor_array(anchors, "absorption spectrum")
        return cls(arr[:, 0] * GHZ, arr[:, 1])

    @property
    def span_hz(self):
        return float(self.freqs_hz[0]), float(self.freqs_hz[-1])

    def specific_attenuation(self, freq_hz):
        """Specific attenuation in dB/km at ``freq_hz``."""
        f = np.asarray(freq_hz, dtype=float)
        lo, hi = self.span_hz
        if np.any(f < lo) or np.any(f > hi) or np.any(np.isnan(f)):
            raise ExtrapolationError(
                f"frequency {freq_hz!r} Hz outside absorption table [{lo:g}, {hi:g}] Hz")
        out = np.exp(np.interp(f, self.freqs_hz, np.log(self.att_db_km)))
        # return anchor values bit-exactly
        idx = np.searchsorted(self.freqs_hz, f)
        idx = np.clip(idx, 0, len(self.freqs_hz) - 1)
        out = np.where(self.freqs_hz[idx] == f, self.att_db_km[idx], out)
        return float(out) if out.ndim == 0 else out

    def absorption_coefficient(self, freq_hz):
        """Power absorption coefficient in 1/m."""
        return db_per_km_to_nepers_per_m(self.specific_attenuation(freq_hz))


def load_spectrum(path=None):
    doc = default_table("absorption.toml") if path is None else load_toml(path)
    if doc.get("version") != 1:
        raise ConfigurationError("unsupported absorption table version")
    arr = _as_anchor_array(doc.get("anchors", []), "absorption spectrum")
    return AbsorptionSpectrum(arr[:, 0] * GHZ, arr[:, 1], doc.get("interpolation", "log-linear"))


def default_spectrum():
    return load_spectrum()


def transmittance(r, freq_hz, spectrum=None):
    """Fraction of power surviving molecular absorption over ``r`` meters.

    Beer-Lambert: ``exp(-kappa(f) * r)`` with kappa taken from ``spectrum``.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(np.isnan(r)):
        raise DomainError(f"distance must be >= 0, got {r!r}")
    if spectrum is None:
        spectrum = default_spectrum()
    kappa = spectrum.absorption_coefficient(freq_hz)
    out = np.exp(-kappa * r)
    return float(out) if out.ndim == 0 else out


def absorption_loss_db(r, freq_hz, spectrum=None):
    """Absorption loss in dB over ``r`` meters (positive number)."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError(f"distance must be >= 0, got {r!r}")
    if spectrum is None:
        spectrum = default_spectrum()
    out = spectrum.specific_attenuation(freq_hz) * r / 1000.0
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True, eq=False)
class RainRegime:
    name: str
    min_hz: float
    max_hz: float  # math.inf for open-ended
    rates: np.ndarray
    att_db_km: np.ndarray

    def covers(self, freq_hz):
        return self.min_hz <= freq_hz <= self.max_hz


@dataclass(frozen=True)
class RainTable:
    regimes: tuple

    def __post_init__(self):
        for reg in self.regimes:
            if np.any(np.diff(reg.att_db_km) < 0):
                raise ConfigurationError(f"rain regime {reg.name!r}: attenuation must not decrease with rate")
            if reg.rates[0] != 0.0 or reg.att_db_km[0] != 0.0:
                raise ConfigurationError(f"rain regime {reg.name!r}: table must start at (0, 0)")

    def regime_for(self, freq_hz):
        for reg in self.regimes:
            if reg.covers(freq_hz):
                return reg
        raise UnsupportedRegimeError(
            f"no rain-attenuation regime covers {freq_hz / GHZ:g} GHz "
            f"(available: {', '.join(r.name for r in self.regimes)})")


def load_rain_table(path=None):
    doc = default_table("rain.toml") if path is None else load_toml(path)
    if doc.get("version") != 1:
        raise ConfigurationError("unsupported rain table version")
    regimes = []
    for rec in doc.get("regime", []):
        arr = _as_anchor_array(rec["anchors"], f"rain regime {rec.get('name')!r}")
        regimes.append(RainRegime(
            rec["name"], float(rec["min_ghz"]) * GHZ,
            float(rec.get("max_ghz", math.inf)) * GHZ, arr[:, 0], arr[:, 1]))
    return RainTable(tuple(regimes))


def rain_attenuation(freq_hz, rate_mm_hr, table=None):
    """Rain specific attenuation in dB/km, piecewise-linear in rain rate."""
    if not rate_mm_hr >= 0:
        raise DomainError(f"rain rate must be >= 0, got {rate_mm_hr!r}")
    if table is None:
        table = load_rain_table()
    reg = table.regime_for(freq_hz)
    if rate_mm_hr > reg.rates[-1]:
        raise ExtrapolationError(
            f"rain rate {rate_mm_hr} mm/hr beyond {reg.name} table maximum {reg.rates[-1]:g} mm/hr")
    return float(np.interp(rate_mm_hr, reg.rates, reg.att_db_km))


def rain_loss_db(freq_hz, rate_mm_hr, r, table=None):
    """Total rain loss in dB over a path of ``r`` meters."""
    if r < 0:
        raise DomainError(f"distance must be >= 0, got {r!r}")
    return rain_attenuation(freq_hz, rate_mm_hr, table) * r / 1000.0


@dataclass(frozen=True, eq=False)
class FoliageTable:
    freqs_hz: np.ndarray
    loss_db: np.ndarray
    penetration: tuple = ()  # ((material, freq_hz, loss_db), ...)

    def __post_init__(self):
        if np.any(np.asarray(self.loss_db) < 0):
            raise ConfigurationError("foliage losses must be >= 0 dB")


def load_foliage_table(path=None):
    doc = default_table("foliage.toml") if path is None else load_toml(path)
    if doc.get("version") != 1:
        raise ConfigurationError("unsupported foliage table version")
    arr = _as_anchor_array(doc.get("anchors", []), "foliage table")
    pen = tuple((p["material"], float(p["freq_ghz"]) * GHZ, float(p["loss_db"]))
                for p in doc.get("penetration", []))
    return FoliageTable(arr[:, 0] * GHZ, arr[:, 1], pen)


def foliage_loss(freq_hz, table=None):
    """Foliage loss in dB, linear in frequency between anchors."""
    if table is None:
        table = load_foliage_table()
    lo, hi = table.freqs_hz[0], table.freqs_hz[-1]
    if not lo <= freq_hz <= hi:
        raise ExtrapolationError(
            f"foliage loss tabulated for [{lo / GHZ:g}, {hi / GHZ:g}] GHz only, got {freq_hz / GHZ:g} GHz")
    return float(np.interp(freq_hz, table.freqs_hz, table.loss_db))


def penetration_loss(material, freq_hz, table=None):
    """Measured penetration loss in dB for a named obstruction.

    Only the measured (material, frequency) points exist; any other
    frequency raises ExtrapolationError.
    """
    if table is None:
        table = load_foliage_table()
    for name, f, loss in table.penetration:
        if name == material:
            if not math.isclose(f, freq_hz, rel_tol=1e-9):
                raise ExtrapolationError(
                    f"penetration loss for {material!r} measured at {f / GHZ:g} GHz only")
            return loss
    known = ", ".join(repr(p[0]) for p in table.penetration)
    raise ConfigurationError(f"unknown material {material!r}; known: {known}")
