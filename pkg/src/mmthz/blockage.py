"""LOS probability models for static, human and self blockage.

Closed forms take the link length ``d`` (meters, scalar or array) and return
the probability that the link is line-of-sight. :func:`monte_carlo_los`
is an independent geometric estimate for the two Boolean-model variants.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigurationError, DomainError


def _positive(name, value):
    if not (value > 0 and math.isfinite(value)):
        raise DomainError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class UmaUmi:
    """3GPP-style UMa/UMi model. UMa: d1=18, d2=63; UMi: d1=18, d2=36."""

    d1: float = 18.0
    d2: float = 63.0

    def __post_init__(self):
        _positive("d1", self.d1)
        _positive("d2", self.d2)


@dataclass(frozen=True)
class NyuSquared:
    d1: float = 20.0
    d2: float = 160.0

    def __post_init__(self):
        _positive("d1", self.d1)
        _positive("d2", self.d2)


@dataclass(frozen=True)
class BooleanRect:
    """Poisson field of randomly oriented rectangles (density per m^2)."""

    density: float
    mean_length: float
    mean_width: float

    def __post_init__(self):
        _positive("density", self.density)
        _positive("mean_length", self.mean_length)
        _positive("mean_width", self.mean_width)

    @property
    def beta(self):
        return 2.0 * self.density * (self.mean_width + self.mean_length) / math.pi


@dataclass(frozen=True)
class LosBall:
    radius: float

    def __post_init__(self):
        _positive("radius", self.radius)

    @classmethod
    def from_blockage_field(cls, density, mean_length):
        """Radius from ``sqrt(2) * density * mean_length / pi``.

        Taken literally. It has units of 1/length when ``density`` is per
        m^2, so check the result before relying on it.
        """
        return cls(math.sqrt(2.0) * density * mean_length / math.pi)


HUMAN_VARIANTS = ("as_written", "void_probability", "capsule")


@dataclass(frozen=True)
class HumanField:
    """Humans as discs of ``body_radius`` with Poisson centres.

    ``variant`` picks the closed form evaluated by :func:`p_los`:

    ``as_written``
        ``1 - exp(-mu (r d + pi r^2))`` taken literally (the default).
        It grows with ``d``, so treat it with care.
    ``void_probability``
        ``exp(-mu (r d + pi r^2))``, the probability that no centre falls
        in that area.
    ``capsule``
        ``exp(-mu (2 r d + pi r^2))``, the exact void probability of the
        region swept by a disc touching the segment.
    """

    density: float
    body_radius: float
    variant: str = "as_written"

    def __post_init__(self):
        _positive("density", self.density)
        _positive("body_radius", self.body_radius)
        if self.variant not in HUMAN_VARIANTS:
            raise DomainError(f"variant must be one of {HUMAN_VARIANTS}, got {self.variant!r}")


@dataclass(frozen=True)
class SelfBlockCone:
    """Directions inside a cone of full angle ``cone_angle`` are blocked."""

    cone_angle: float

    def __post_init__(self):
        if not 0.0 <= self.cone_angle < 2.0 * math.pi:
            raise DomainError(f"cone_angle must lie in [0, 2*pi), got {self.cone_angle!r}")


LOS_MODELS = (UmaUmi, NyuSquared, BooleanRect, LosBall, HumanField, SelfBlockCone)


def _distances(d):
    d = np.asarray(d, dtype=float)
    if np.any(d < 0) or np.any(np.isnan(d)):
        raise DomainError(f"link length must be >= 0, got {d!r}")
    return d


def _uma_form(d1, d2, d):
    with np.errstate(divide="ignore", over="ignore"):
        near = np.where(d > 0, np.minimum(d1 / np.where(d > 0, d, 1.0), 1.0), 1.0)
    tail = np.exp(-d / d2)
    return near * (1.0 - tail) + tail


def p_los(model, d):
    """LOS probability of a link of length ``d`` under ``model``."""
    d = _distances(d)
    if isinstance(model, UmaUmi):
        out = _uma_form(model.d1, model.d2, d)
    elif isinstance(model, NyuSquared):
        out = _uma_form(model.d1, model.d2, d) ** 2
    elif isinstance(model, BooleanRect):
        out = np.exp(-model.beta * d)
    elif isinstance(model, LosBall):
        out = (d < model.radius).astype(float)
    elif isinstance(model, HumanField):
        r, mu = model.body_radius, model.density
        if model.variant == "capsule":
            out = np.exp(-mu * (2.0 * r * d + math.pi * r * r))
        else:
            void = np.exp(-mu * (r * d + math.pi * r * r))
            out = void if model.variant == "void_probability" else 1.0 - void
    elif isinstance(model, SelfBlockCone):
        out = np.full(d.shape, 1.0 - model.cone_angle / (2.0 * math.pi))
    else:
        raise TypeError(f"not a LOS model: {model!r}")
    out = np.clip(out, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def in_self_block_cone(bearing, facing, cone_angle):
    """True where ``bearing`` lies inside the cone centred on ``facing``."""
    off = np.pi - np.mod(np.pi - (np.asarray(bearing) - np.asarray(facing)), 2.0 * np.pi)
    return np.abs(off) < cone_angle / 2.0


def blockage_diameter(model):
    """Characteristic obstacle size used to pad simulation windows."""
    if isinstance(model, BooleanRect):
        return model.mean_length + model.mean_width
    if isinstance(model, HumanField):
        return 2.0 * model.body_radius
    raise TypeError(f"no geometric realisation for {type(model).__name__}")


CHUNK_TRIALS = 10_000


def _chunk_rng(seed, chunk):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chunk,)))


def _mc_chunk(model, d, pad, n, seed, chunk, clear_receiver):
    rng = _chunk_rng(seed, chunk)
    x0, x1, y0, y1 = -pad, d + pad, -pad, pad
    lam = model.density * (x1 - x0) * (y1 - y0)
    counts = rng.poisson(lam, size=n)
    total = int(counts.sum())
    trial = np.repeat(np.arange(n, dtype=np.int64), counts)
    cx = rng.uniform(x0, x1, total)
    cy = rng.uniform(y0, y1, total)
    if isinstance(model, BooleanRect):
        length = rng.exponential(model.mean_length, total)
        width = rng.exponential(model.mean_width, total)
        angle = rng.uniform(0.0, math.pi, total)
        blocked = kernels.rect_blocked(trial, cx, cy, 0.5 * length, 0.5 * width,
                                       np.cos(angle), np.sin(angle), d, n, clear_receiver)
    else:
        blocked = kernels.disc_blocked(trial, cx, cy, model.body_radius, d, n, clear_receiver)
    return n - int(np.count_nonzero(blocked))


def monte_carlo_los(model, d, trials, seed, *, clear_receiver=True, pad_diameters=3.0,
                    workers=1):
    """Geometric Monte-Carlo LOS probability for a link of length ``d``.

    The link runs from the receiver at the origin to ``(d, 0)``. Obstacle
    centres are a homogeneous Poisson process in a rectangle padded by
    ``pad_diameters`` obstacle diameters on every side; rectangles get
    exponential length and width with the model means and a uniform
    orientation.

    With ``clear_receiver`` (default) obstacles that cover the receiver are
    removed first, i.e. the estimate is conditioned on an outdoor,
    unobstructed receiver. That is the conditioning under which the
    Boolean-rectangle closed form is exact; without it the mean number of
    crossing obstacles gains the term ``density * E[L] * E[W]``.

    Trials are split into fixed chunks with their own derived random stream,
    so the result does not depend on ``workers``.

    Returns ``(estimate, stderr)``.
    """
    if not isinstance(model, (BooleanRect, HumanField)):
        raise TypeError("monte_carlo_los supports BooleanRect and HumanField only")
    trials = int(trials)
    if trials < 1:
        raise DomainError("trials must be >= 1")
    d = float(d)
    if d < 0:
        raise DomainError(f"link length must be >= 0, got {d!r}")
    if pad_diameters < 3.0:
        raise ConfigurationError(
            f"window padding of {pad_diameters} obstacle diameters is too small (need >= 3)")
    if d == 0.0:
        return 1.0, 0.0
    pad = pad_diameters * blockage_diameter(model)
    sizes = [min(CHUNK_TRIALS, trials - s) for s in range(0, trials, CHUNK_TRIALS)]
    args = [(model, d, pad, n, seed, k, clear_receiver) for k, n in enumerate(sizes)]
    if workers > 1 and len(args) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            clear = sum(pool.map(lambda a: _mc_chunk(*a), args))
    else:
        clear = sum(_mc_chunk(*a) for a in args)
    p = clear / trials
    return p, math.sqrt(max(p * (1.0 - p), 0.0) / trials)
