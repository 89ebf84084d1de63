import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from mmthz import units
from mmthz.errors import DomainError


def test_db_roundtrip_examples():
    assert units.db_to_linear(0.0) == 1.0
    assert units.db_to_linear(10.0) == pytest.approx(10.0, rel=1e-15)
    assert units.db_to_linear(-30.0) == pytest.approx(1e-3, rel=1e-15)
    assert units.linear_to_db(0.0) == -math.inf


@given(st.floats(-300, 300))
def test_db_roundtrip(x):
    assert units.linear_to_db(units.db_to_linear(x)) == pytest.approx(x, abs=1e-12)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_db_rejects_nonfinite(bad):
    with pytest.raises(DomainError):
        units.db_to_linear(bad)


def test_dbm_watts():
    assert units.dbm_to_watts(30.0) == pytest.approx(1.0, rel=1e-15)
    assert units.watts_to_dbm(1e-3) == pytest.approx(0.0, abs=1e-12)


def test_wavelength():
    assert units.wavelength(299_792_458.0) == 1.0
    assert units.wavelength(60e9) == pytest.approx(4.99654e-3, rel=1e-5)
    with pytest.raises(DomainError):
        units.wavelength(0.0)


def test_nepers_conversion():
    # 10 dB/km over 1 km is 10 dB
    k = units.db_per_km_to_nepers_per_m(10.0)
    assert units.nepers_to_db(k * 1000.0) == pytest.approx(10.0, rel=1e-14)


@given(st.floats(-50, 50, allow_nan=False))
def test_wrap_angle_range(t):
    w = units.wrap_angle(t)
    assert -math.pi < w <= math.pi
    assert math.cos(w) == pytest.approx(math.cos(t), abs=1e-9)


def test_wrap_angle_vector():
    assert_allclose(units.wrap_angle(np.array([math.pi, -math.pi, 3 * math.pi])), [math.pi] * 3)
