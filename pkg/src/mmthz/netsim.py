"""Monte-Carlo downlink coverage in a Poisson field of base stations.

The typical user sits at the origin of a disc of radius ``window_radius``;
base stations outside it are ignored. Each trial:

1. draws a Poisson number of BSs uniformly in the disc (or uses the pinned
   ``fixed_bs`` positions),
2. marks each link LOS with probability ``p_los(los_model, r)``,
3. removes BSs inside the user's self-blockage cone, if configured,
4. associates with the largest average received power (no fading, both
   beams aligned),
5. evaluates SINR with fading and the interferers' beam gains, and
6. records ``bandwidth * log2(1 + SINR)``.

Trials are processed in fixed chunks, each with its own random stream
derived from ``(seed, chunk index)``, so results are bit-identical for any
number of workers.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .antenna import gain_at_offset
from .atmosphere import transmittance
from .blockage import LOS_MODELS, SelfBlockCone, in_self_block_cone, p_los
from .channel import FadingSpec, LinkState, PathLossLaw, fspl
from .errors import ConfigurationError

BOLTZMANN = 1.380649e-23
ALIGNMENTS = ("perfect-to-serving", "random-interferer-angles")
CHUNK_TRIALS = 1000
DEFAULT_THRESHOLDS_DB = tuple(float(t) for t in range(-20, 41, 2))


def thermal_noise_power(bandwidth, temperature=290.0):
    """Thermal noise ``k T B`` in watts."""
    return BOLTZMANN * temperature * bandwidth


@dataclass(frozen=True)
class NetworkScenario:
    """Deployment, propagation and radio parameters of a coverage study.

    Powers are in watts, distances in meters, ``bs_density`` in BS/m^2.
    ``pathloss`` maps :class:`LinkState` to a :class:`PathLossLaw`; when
    omitted, both states use the free-space 1 m intercept with exponents
    2 (LOS) and 4 (NLOS). ``los_model=None`` makes every link LOS,
    ``fading=None`` disables fading, and a ``None`` pattern is isotropic.

    THz scenarios use free-space loss times molecular transmittance on LOS
    links and treat NLOS links as carrying no power. They are noise-limited
    unless ``interference=True``.
    """

    bs_density: float
    window_radius: float = 1000.0
    band: str = "mmwave"
    freq_hz: float = 28e9
    los_model: object = None
    pathloss: dict = None
    fading: FadingSpec = None
    tx_pattern: object = None
    rx_pattern: object = None
    p_t: float = 1.0
    noise_power: float = None
    bandwidth: float = 100e6
    alignment: str = "random-interferer-angles"
    absorption: object = None
    self_block: SelfBlockCone = None
    interference: bool = None
    fixed_bs: tuple = None
    min_distance: float = 1.0

    def __post_init__(self):
        if self.band not in ("mmwave", "thz"):
            raise ConfigurationError(f"band must be 'mmwave' or 'thz', got {self.band!r}")
        if self.alignment not in ALIGNMENTS:
            raise ConfigurationError(f"alignment must be one of {ALIGNMENTS}")
        if self.bs_density < 0 or not self.window_radius > 0:
            raise ConfigurationError("need bs_density >= 0 and window_radius > 0")
        if not (self.p_t > 0 and self.bandwidth > 0 and self.freq_hz > 0):
            raise ConfigurationError("p_t, bandwidth and freq_hz must be positive")
        if self.noise_power is not None and self.noise_power < 0:
            raise ConfigurationError("noise_power must be >= 0")
        if isinstance(self.los_model, SelfBlockCone):
            raise ConfigurationError("pass the self-blockage cone as self_block, not los_model")
        if self.los_model is not None and not isinstance(self.los_model, LOS_MODELS):
            raise ConfigurationError(f"unknown LOS model {self.los_model!r}")
        if self.pathloss is None:
            object.__setattr__(self, "pathloss", {
                LinkState.LOS: PathLossLaw.free_space_intercept(self.freq_hz, 2.0),
                LinkState.NLOS: PathLossLaw.free_space_intercept(self.freq_hz, 4.0),
            })
        else:
            pl = {LinkState(k): v for k, v in self.pathloss.items()}
            if set(pl) != {LinkState.LOS, LinkState.NLOS}:
                raise ConfigurationError("pathloss needs one law per link state")
            object.__setattr__(self, "pathloss", pl)
        if self.fixed_bs is not None:
            pts = np.asarray(self.fixed_bs, dtype=float).reshape(-1, 2)
            if np.any(np.hypot(pts[:, 0], pts[:, 1]) <= 0):
                raise ConfigurationError("pinned base stations must not sit on the user")
            object.__setattr__(self, "fixed_bs", tuple(map(tuple, pts)))

    @property
    def noise(self):
        if self.noise_power is None:
            return thermal_noise_power(self.bandwidth)
        return self.noise_power

    @property
    def interference_enabled(self):
        if self.interference is None:
            return self.band == "mmwave"
        return self.interference


@dataclass
class SimResult:
    sinr: np.ndarray  # linear, one per trial; 0 for trials without a serving BS
    coverage: list
    mean_rate: float
    trials: int
    seed: int
    outage_fraction: float
    links: dict = field(default=None, repr=False)

    @property
    def sinr_samples(self):
        return self.sinr


def _pattern_gain(pattern, angle):
    if pattern is None:
        return np.ones_like(np.asarray(angle, dtype=float))
    return gain_at_offset(pattern, angle)


def _link_power(sc, r, los, g_t, g_r, h):
    """Received power for each link; zero for THz NLOS links."""
    if sc.band == "mmwave":
        pl = np.where(los, sc.pathloss[LinkState.LOS](r), sc.pathloss[LinkState.NLOS](r))
        return sc.p_t * pl * g_r * g_t * h
    tau = 1.0 if sc.absorption is None else transmittance(r, sc.freq_hz, sc.absorption)
    p = sc.p_t * fspl(sc.freq_hz, r) * g_r * g_t * h * tau
    return np.where(los, p, 0.0)


def _chunk(sc, n, seed, chunk, record):
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chunk,)))
    if sc.fixed_bs is not None:
        pts = np.asarray(sc.fixed_bs)
        counts = np.full(n, len(pts), dtype=np.int64)
        r = np.tile(np.hypot(pts[:, 0], pts[:, 1]), n)
        bearing = np.tile(np.arctan2(pts[:, 1], pts[:, 0]), n)
    else:
        counts = rng.poisson(sc.bs_density * math.pi * sc.window_radius ** 2, size=n)
        total = int(counts.sum())
        r = sc.window_radius * np.sqrt(rng.random(total))
        bearing = rng.uniform(-math.pi, math.pi, total)
        r = np.maximum(r, sc.min_distance)
    trial = np.repeat(np.arange(n, dtype=np.int64), counts)
    total = len(trial)

    u_los = rng.random(total)
    los = np.ones(total, dtype=bool) if sc.los_model is None else u_los < p_los(sc.los_model, r)
    facing = rng.uniform(-math.pi, math.pi, n)
    tx_angle = rng.uniform(-math.pi, math.pi, total)
    rx_angle = rng.uniform(-math.pi, math.pi, total)
    if sc.fading is None:
        h = np.ones(total)
    else:
        shape = np.where(los, sc.fading.mu_los, sc.fading.mu_nlos)
        h = rng.gamma(shape, 1.0 / shape)

    if sc.self_block is not None:
        keep = ~in_self_block_cone(bearing, facing[trial], sc.self_block.cone_angle)
        trial, r, bearing, los = trial[keep], r[keep], bearing[keep], los[keep]
        tx_angle, rx_angle, h = tx_angle[keep], rx_angle[keep], h[keep]

    g_t0 = float(_pattern_gain(sc.tx_pattern, 0.0))
    g_r0 = float(_pattern_gain(sc.rx_pattern, 0.0))
    avg = _link_power(sc, r, los, g_t0, g_r0, 1.0)
    avg = np.where(avg > 0, avg, -1.0)
    serving = kernels.grouped_argmax(trial, avg, n)
    has = serving >= 0
    has[has] = avg[serving[has]] > 0

    sinr = np.zeros(n)
    if np.any(has):
        idx = serving[has]
        signal = _link_power(sc, r[idx], los[idx], g_t0, g_r0, h[idx])
        interference = np.zeros(n)
        if sc.interference_enabled:
            mask = np.ones(len(trial), dtype=bool)
            mask[idx] = False
            mask &= has[trial]
            it = trial[mask]
            if sc.alignment == "perfect-to-serving":
                off = bearing[mask] - bearing[serving[it]]
                rx_off = np.pi - np.mod(np.pi - off, 2.0 * np.pi)
            else:
                rx_off = rx_angle[mask]
            g_t = _pattern_gain(sc.tx_pattern, tx_angle[mask])
            g_r = _pattern_gain(sc.rx_pattern, rx_off)
            p_int = _link_power(sc, r[mask], los[mask], g_t, g_r, h[mask])
            interference = np.bincount(it, weights=p_int, minlength=n)
        with np.errstate(divide="ignore", invalid="ignore"):
            sinr[has] = signal / (interference[has] + sc.noise)
    links = None
    if record:
        links = {"distance": r, "los": los, "trial": trial + chunk * CHUNK_TRIALS}
    return sinr, links


def simulate(scenario, trials, seed, *, workers=1, record_links=False,
             thresholds_db=DEFAULT_THRESHOLDS_DB):
    """Run ``trials`` independent network realisations."""
    trials = int(trials)
    if trials < 1:
        raise ConfigurationError("trials must be >= 1")
    seed = int(seed)
    sizes = [min(CHUNK_TRIALS, trials - s) for s in range(0, trials, CHUNK_TRIALS)]
    jobs = [(scenario, n, seed, k, record_links) for k, n in enumerate(sizes)]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda j: _chunk(*j), jobs))
    else:
        parts = [_chunk(*j) for j in jobs]
    sinr = np.concatenate([p[0] for p in parts])
    links = None
    if record_links:
        links = {k: np.concatenate([p[1][k] for p in parts]) for k in ("distance", "los", "trial")}
    with np.errstate(over="ignore"):
        rate = scenario.bandwidth * np.log2(1.0 + sinr)
    result = SimResult(sinr=sinr, coverage=[], mean_rate=float(np.mean(rate)), trials=trials,
                       seed=seed, outage_fraction=float(np.mean(sinr == 0.0)), links=links)
    result.coverage = coverage_curve(result, thresholds_db)
    return result


def coverage_curve(result, thresholds_db):
    """Empirical ``P[SINR > T]`` for each threshold ``T`` in dB."""
    sinr = result.sinr if isinstance(result, SimResult) else np.asarray(result, dtype=float)
    if len(sinr) == 0:
        raise ConfigurationError("no SINR samples")
    out = []
    for t in thresholds_db:
        lin = 10.0 ** (float(t) / 10.0)
        out.append((float(t), float(np.mean(sinr > lin))))
    return out
