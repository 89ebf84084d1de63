"""Registry of candidate mmWave and THz bands, queryable by frequency."""

from dataclasses import dataclass

from .errors import ConfigurationError, DomainError
from .units import GHZ
from ._tables import default_table, load_toml

CATEGORIES = ("mmwave", "thz")


@dataclass(frozen=True)
class Band:
    name: str
    segments: tuple  # ((low_hz, high_hz), ...)
    remarks: str
    category: str

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise ConfigurationError(f"band {self.name!r}: unknown category {self.category!r}")
        if not self.segments:
            raise ConfigurationError(f"band {self.name!r} has no segments")
        for low, high in self.segments:
            if not low < high:
                raise ConfigurationError(f"band {self.name!r}: segment [{low}, {high}] is empty")

    def contains(self, freq_hz):
        return any(low <= freq_hz <= high for low, high in self.segments)

    def to_dict(self):
        return {
            "name": self.name,
            "category": self.category,
            "segments_ghz": [[low / GHZ, high / GHZ] for low, high in self.segments],
            "remarks": self.remarks,
        }


def parse_bands(doc):
    if doc.get("version") != 1:
        raise ConfigurationError(f"unsupported band table version {doc.get('version')!r}")
    bands = []
    for rec in doc.get("band", []):
        try:
            segs = tuple((float(lo) * GHZ, float(hi) * GHZ) for lo, hi in rec["segments_ghz"])
            bands.append(Band(rec["name"], segs, rec.get("remarks", ""), rec["category"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigurationError(f"malformed band record {rec!r}: {exc}") from exc
    return tuple(bands)


def load_bands(path=None):
    """Load a band table from ``path``, or the default table."""
    if path is None:
        return _default_bands()
    return parse_bands(load_toml(path))


def _default_bands():
    return parse_bands(default_table("bands.toml"))


def lookup_bands(freq_hz, bands=None):
    """Every band with a segment containing ``freq_hz`` (closed intervals)."""
    if not freq_hz > 0:
        raise DomainError(f"frequency must be positive, got {freq_hz!r}")
    if bands is None:
        bands = _default_bands()
    return [b for b in bands if b.contains(freq_hz)]
