"""Scenario files and the small parameter languages used on the command line."""

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from . import antenna, blockage
from .atmosphere import load_spectrum
from .channel import FadingSpec, LinkState, PathLossLaw
from .errors import ConfigurationError
from .netsim import NetworkScenario
from .units import GHZ, db_to_linear, dbm_to_watts
from ._tables import load_toml

SCHEMA_VERSION = 1


@lru_cache(maxsize=None)
def load_schema(name):
    with resources.files("mmthz.schemas").joinpath(f"{name}.json").open() as fh:
        return json.load(fh)


def validate(doc, schema_name):
    try:
        jsonschema.validate(doc, load_schema(schema_name))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigurationError(f"{schema_name}: {where}: {exc.message}") from exc


def parse_kv(text):
    """``"a=1,b=x,c=1/2/3"`` -> ``{"a": 1.0, "b": "x", "c": [1.0, 2.0, 3.0]}``."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise ConfigurationError(f"expected key=value, got {item!r}")
        key, val = (s.strip() for s in item.split("=", 1))
        out[key] = _coerce(val)
    return out


def _coerce(val):
    if "/" in val:
        return [_coerce(v) for v in val.split("/")]
    try:
        return float(val)
    except ValueError:
        return val


def _take(params, allowed, what):
    unknown = set(params) - set(allowed)
    if unknown:
        raise ConfigurationError(f"{what}: unknown parameter(s) {sorted(unknown)}")


_PATTERN_KEYS = {
    "ula": ("n", "spacing"),
    "sinc": ("n", "spacing"),
    "flattop": ("gm_db", "gs_db", "theta_3db_rad", "theta_3db"),
    "gaussian": ("gm_db", "gs_db", "eta"),
    "cosine": ("n",),
    "multilobe": ("edges_rad", "edges", "gains_db"),
}


def build_pattern(model, params):
    """Antenna pattern from a model name and parameters (gains in dBi)."""
    if model in (None, "", "isotropic"):
        return None
    if model not in _PATTERN_KEYS:
        raise ConfigurationError(f"unknown antenna model {model!r}; choose from {sorted(_PATTERN_KEYS)}")
    _take(params, _PATTERN_KEYS[model], f"pattern {model}")
    try:
        if model in ("ula", "sinc"):
            cls = antenna.UlaExact if model == "ula" else antenna.SincApprox
            return cls(int(params["n"]), float(params.get("spacing", 0.5)))
        if model == "cosine":
            return antenna.Cosine(int(params["n"]))
        if model == "flattop":
            theta = params.get("theta_3db_rad", params.get("theta_3db"))
            return antenna.FlatTop(db_to_linear(params["gm_db"]), db_to_linear(params["gs_db"]),
                                   float(theta))
        if model == "gaussian":
            return antenna.Gaussian(db_to_linear(params["gm_db"]), db_to_linear(params["gs_db"]),
                                    float(params["eta"]))
        edges = params.get("edges_rad", params.get("edges"))
        gains = params["gains_db"]
        edges = edges if isinstance(edges, list) else [edges]
        gains = gains if isinstance(gains, list) else [gains]
        if len(edges) != len(gains):
            raise ConfigurationError("multilobe needs as many edges as gains")
        return antenna.MultiLobe(tuple(zip(map(float, edges), map(db_to_linear, gains))))
    except (KeyError, TypeError) as exc:
        raise ConfigurationError(f"pattern {model}: missing or bad parameter {exc}") from exc


def parse_pattern_spec(spec):
    """``"flattop:gm_db=20,gs_db=-5,theta_3db=0.1"`` -> pattern."""
    if spec is None:
        return None
    model, _, rest = spec.partition(":")
    return build_pattern(model.strip().lower(), parse_kv(rest))


_LOS_DEFAULTS = {"uma": (18.0, 63.0), "umi": (18.0, 36.0), "nyu": (20.0, 160.0)}


def build_los_model(model, params):
    """LOS model from a name and unit-suffixed or bare parameters."""
    p = {k[:-2] if k.endswith("_m") else k: v for k, v in params.items()}
    p = {("density" if k in ("mu", "density_per_m2") else k): v for k, v in p.items()}
    try:
        if model in (None, "none"):
            return None
        if model in _LOS_DEFAULTS:
            _take(p, ("d1", "d2"), f"LOS model {model}")
            d1, d2 = _LOS_DEFAULTS[model]
            cls = blockage.NyuSquared if model == "nyu" else blockage.UmaUmi
            return cls(float(p.get("d1", d1)), float(p.get("d2", d2)))
        if model == "boolean":
            _take(p, ("density", "mean_length", "mean_width"), "LOS model boolean")
            return blockage.BooleanRect(float(p["density"]), float(p["mean_length"]),
                                        float(p["mean_width"]))
        if model == "losball":
            _take(p, ("radius", "density", "mean_length"), "LOS model losball")
            if "radius" in p:
                return blockage.LosBall(float(p["radius"]))
            return blockage.LosBall.from_blockage_field(float(p["density"]), float(p["mean_length"]))
        if model == "human":
            _take(p, ("density", "body_radius", "variant"), "LOS model human")
            return blockage.HumanField(float(p["density"]), float(p["body_radius"]),
                                       p.get("variant", "as_written"))
        if model == "selfblock":
            _take(p, ("delta", "cone_angle_rad", "cone_angle"), "LOS model selfblock")
            delta = p.get("delta", p.get("cone_angle_rad", p.get("cone_angle")))
            return blockage.SelfBlockCone(float(delta))
    except KeyError as exc:
        raise ConfigurationError(f"LOS model {model}: missing parameter {exc}") from exc
    raise ConfigurationError(f"unknown LOS model {model!r}")


def _law(doc, freq_hz, default_alpha):
    if doc is None:
        return PathLossLaw.free_space_intercept(freq_hz, default_alpha)
    if "c_db" in doc:
        return PathLossLaw(db_to_linear(doc["c_db"]), float(doc["alpha"]))
    return PathLossLaw.free_space_intercept(freq_hz, float(doc["alpha"]))


def _resolve(base, path):
    p = Path(path)
    return p if p.is_absolute() else base / p


def load_config(path):
    """Parse and validate a scenario file.

    Returns ``(scenario, simulation_options)``.
    """
    path = Path(path)
    doc = load_toml(path)
    return scenario_from_dict(doc, base=path.parent)


def scenario_from_dict(doc, base=Path(".")):
    validate(doc, "config")
    sc = doc["scenario"]
    tables = doc.get("tables", {})
    freq_hz = float(sc.get("freq_ghz", 28.0)) * GHZ
    band = sc.get("band", "mmwave")
    absorption = None
    if sc.get("use_absorption", band == "thz"):
        absorption = load_spectrum(_resolve(base, tables["absorption"]) if "absorption" in tables else None)
    los = sc.get("los", {"model": "none"})
    los_model = build_los_model(los["model"], {k: v for k, v in los.items() if k != "model"})
    pl = sc.get("pathloss", {})
    fading = FadingSpec(**sc["fading"]) if "fading" in sc else None

    def pattern(key):
        if key not in sc:
            return None
        d = dict(sc[key])
        return build_pattern(d.pop("model"), d)

    self_block = None
    if "self_block" in sc:
        self_block = blockage.SelfBlockCone(float(sc["self_block"]["cone_angle_rad"]))
    scenario = NetworkScenario(
        bs_density=float(sc["bs_density_per_m2"]),
        window_radius=float(sc.get("window_radius_m", 1000.0)),
        band=band,
        freq_hz=freq_hz,
        los_model=los_model,
        pathloss={LinkState.LOS: _law(pl.get("los"), freq_hz, 2.0),
                  LinkState.NLOS: _law(pl.get("nlos"), freq_hz, 4.0)},
        fading=fading,
        tx_pattern=pattern("tx_pattern"),
        rx_pattern=pattern("rx_pattern"),
        p_t=dbm_to_watts(sc.get("pt_dbm", 30.0)),
        noise_power=dbm_to_watts(sc["noise_dbm"]) if "noise_dbm" in sc else None,
        bandwidth=float(sc.get("bandwidth_hz", 100e6)),
        alignment=sc.get("alignment", "random-interferer-angles"),
        absorption=absorption,
        self_block=self_block,
        interference=sc.get("interference"),
        fixed_bs=tuple(map(tuple, sc["fixed_bs_m"])) if "fixed_bs_m" in sc else None,
        min_distance=float(sc.get("min_distance_m", 1.0)),
    )
    return scenario, dict(doc.get("simulation", {}))

