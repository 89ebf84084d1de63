"""Locating and parsing the shipped TOML tables."""

import os
from functools import lru_cache
from importlib import resources
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ConfigurationError

TABLE_DIR_ENV = "MMTHZ_TABLE_DIR"


def load_toml(path):
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigurationError(f"table file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f"cannot parse {path}: {exc}") from exc


def default_table(name):
    """Parse a table by file name.

    ``$MMTHZ_TABLE_DIR/<name>`` takes precedence over the copy shipped in
    the package.
    """
    return _cached_table(name, os.environ.get(TABLE_DIR_ENV) or "")


@lru_cache(maxsize=None)
def _cached_table(name, override_dir):
    if override_dir:
        candidate = Path(override_dir) / name
        if candidate.exists():
            return load_toml(candidate)
    with resources.files("mmthz.data").joinpath(name).open("rb") as fh:
        return tomllib.load(fh)
