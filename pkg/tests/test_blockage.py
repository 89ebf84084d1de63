import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_array_equal
from shapely.geometry import LineString, Point, Polygon

from mmthz import blockage, kernels
from mmthz.blockage import (BooleanRect, HumanField, LosBall, NyuSquared, SelfBlockCone,
                            UmaUmi, monte_carlo_los, p_los)
from mmthz.errors import ConfigurationError, DomainError

distances = st.floats(0.0, 5000.0)


def test_uma_collapses_inside_d1():
    assert_array_equal(p_los(UmaUmi(18, 63), np.arange(0, 19)), 1.0)


def test_uma_value():
    d = 100.0
    expected = 18 / d * (1 - math.exp(-d / 63)) + math.exp(-d / 63)
    assert p_los(UmaUmi(18, 63), d) == pytest.approx(expected, rel=1e-15)


@given(distances)
def test_nyu_is_uma_squared(d):
    assert p_los(NyuSquared(20, 160), d) == pytest.approx(p_los(UmaUmi(20, 160), d) ** 2, rel=1e-12)


MODELS = [UmaUmi(18, 63), UmaUmi(18, 36), NyuSquared(20, 160), BooleanRect(1e-3, 15, 10),
          LosBall(50.0), HumanField(0.01, 0.3, "void_probability"), HumanField(0.01, 0.3, "capsule")]


@pytest.mark.parametrize("model", MODELS, ids=lambda m: type(m).__name__)
@given(a=distances, b=distances)
def test_nonincreasing_and_bounded(model, a, b):
    lo, hi = sorted((a, b))
    p_lo, p_hi = p_los(model, lo), p_los(model, hi)
    assert 0.0 <= p_hi <= p_lo <= 1.0


@pytest.mark.parametrize("model", MODELS[:5], ids=lambda m: type(m).__name__)
def test_zero_length_link_is_los(model):
    assert p_los(model, 0.0) == 1.0


def test_boolean_beta():
    m = BooleanRect(2e-4, 15.0, 8.0)
    assert m.beta == 2 * 2e-4 * 23 / math.pi
    assert p_los(m, 300.0) == pytest.approx(math.exp(-m.beta * 300.0), rel=1e-15)


def test_los_ball_step():
    assert_array_equal(p_los(LosBall(40.0), [0, 39.9, 40.0, 100]), [1, 1, 0, 0])
    r = LosBall.from_blockage_field(1e-3, 20.0).radius
    assert r == pytest.approx(math.sqrt(2) * 1e-3 * 20 / math.pi)


def test_human_variants():
    mu, r, d = 0.05, 0.25, 10.0
    void = math.exp(-mu * (r * d + math.pi * r * r))
    assert p_los(HumanField(mu, r), d) == pytest.approx(1 - void)
    assert p_los(HumanField(mu, r, "void_probability"), d) == pytest.approx(void)
    assert p_los(HumanField(mu, r, "capsule"), d) == pytest.approx(
        math.exp(-mu * (2 * r * d + math.pi * r * r)))
    with pytest.raises(DomainError):
        HumanField(mu, r, "other")


def test_self_block():
    assert p_los(SelfBlockCone(math.pi / 2), 25.0) == pytest.approx(0.75)
    assert p_los(SelfBlockCone(0.0), 25.0) == 1.0
    with pytest.raises(DomainError):
        SelfBlockCone(2 * math.pi)
    assert blockage.in_self_block_cone(0.1, 0.0, 0.3)
    assert not blockage.in_self_block_cone(0.2, 0.0, 0.3)
    assert blockage.in_self_block_cone(math.pi - 0.05, -math.pi + 0.05, 0.3)


@pytest.mark.parametrize("bad", [-1.0, math.nan])
def test_rejects_bad_distance(bad):
    with pytest.raises(DomainError):
        p_los(UmaUmi(), bad)


@pytest.mark.parametrize("kw", [dict(d1=0), dict(d2=-1)])
def test_rejects_bad_params(kw):
    with pytest.raises(DomainError):
        UmaUmi(**kw)


def _random_rects(rng, n, d):
    cx = rng.uniform(-10, d + 10, n)
    cy = rng.uniform(-10, 10, n)
    hl = rng.exponential(3.0, n)
    hw = rng.exponential(1.5, n)
    ang = rng.uniform(0, math.pi, n)
    return cx, cy, hl, hw, ang


def _shapely_rect(cx, cy, hl, hw, a):
    c, s = math.cos(a), math.sin(a)
    pts = [(cx + u * c - v * s, cy + u * s + v * c) for u, v in ((-hl, -hw), (hl, -hw), (hl, hw), (-hl, hw))]
    return Polygon(pts)


@pytest.mark.parametrize("impl", sorted(kernels.backends()))
@pytest.mark.parametrize("clear", [False, True])
def test_rect_kernel_against_polygon_oracle(impl, clear):
    rng = np.random.default_rng(3)
    d, n = 30.0, 400
    cx, cy, hl, hw, ang = _random_rects(rng, n, d)
    trial = np.arange(n, dtype=np.int64)
    got = kernels.rect_blocked(trial, cx, cy, hl, hw, np.cos(ang), np.sin(ang), d, n, clear,
                               impl=impl)
    seg = LineString([(0, 0), (d, 0)])
    want = []
    for k in range(n):
        poly = _shapely_rect(cx[k], cy[k], hl[k], hw[k], ang[k])
        hit = poly.intersects(seg)
        if clear and poly.covers(Point(0, 0)):
            hit = False
        want.append(hit)
    assert_array_equal(got.astype(bool), want)
    assert 50 < sum(want) < 350  # the sample exercises both outcomes


@pytest.mark.parametrize("impl", sorted(kernels.backends()))
@pytest.mark.parametrize("clear", [False, True])
def test_disc_kernel_against_buffer_oracle(impl, clear):
    rng = np.random.default_rng(4)
    d, n, radius = 20.0, 400, 2.0
    cx = rng.uniform(-5, d + 5, n)
    cy = rng.uniform(-5, 5, n)
    trial = np.arange(n, dtype=np.int64)
    got = kernels.disc_blocked(trial, cx, cy, radius, d, n, clear, impl=impl)
    seg = LineString([(0, 0), (d, 0)])
    want = [seg.distance(Point(x, y)) <= radius and not (clear and math.hypot(x, y) <= radius)
            for x, y in zip(cx, cy)]
    assert_array_equal(got.astype(bool), want)


@pytest.mark.parametrize("mu, d", [(2e-3, 20.0), (5e-4, 100.0)])
def test_mc_matches_boolean_closed_form(mu, d):
    model = BooleanRect(mu, 10.0, 5.0)
    p, se = monte_carlo_los(model, d, 40_000, seed=11)
    exact = p_los(model, d)
    sigma = math.sqrt(exact * (1 - exact) / 40_000)
    assert abs(p - exact) < 4 * sigma
    assert se == pytest.approx(sigma, rel=0.05)


def test_mc_without_clearing_adds_area_term():
    model = BooleanRect(2e-3, 10.0, 5.0)
    d, n = 40.0, 40_000
    p, _ = monte_carlo_los(model, d, n, seed=5, clear_receiver=False)
    exact = math.exp(-model.beta * d - model.density * model.mean_length * model.mean_width)
    assert abs(p - exact) < 4 * math.sqrt(exact * (1 - exact) / n)


def test_mc_human_capsule():
    model = HumanField(0.05, 0.3, "capsule")
    d, n = 15.0, 40_000
    p, _ = monte_carlo_los(model, d, n, seed=8, clear_receiver=False)
    exact = p_los(model, d)
    assert abs(p - exact) < 4 * math.sqrt(exact * (1 - exact) / n)


def test_mc_independent_of_workers():
    model = BooleanRect(1e-3, 10.0, 5.0)
    assert monte_carlo_los(model, 50.0, 35_000, 2) == monte_carlo_los(model, 50.0, 35_000, 2, workers=3)


def test_mc_guards():
    model = BooleanRect(1e-3, 10.0, 5.0)
    with pytest.raises(ConfigurationError):
        monte_carlo_los(model, 10.0, 100, 0, pad_diameters=2.0)
    with pytest.raises(TypeError):
        monte_carlo_los(UmaUmi(), 10.0, 100, 0)
    assert monte_carlo_los(model, 0.0, 100, 0) == (1.0, 0.0)
