import math

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from mmthz import atmosphere, blockage, channel, netsim
from mmthz.antenna import FlatTop
from mmthz.channel import FadingSpec, PathLossLaw
from mmthz.errors import ConfigurationError
from mmthz.netsim import NetworkScenario, simulate
from mmthz.units import GHZ


def test_single_bs_matches_link_budget():
    law_los = PathLossLaw(3e-7, 2.1)
    sc = NetworkScenario(bs_density=0.0, fixed_bs=((30.0, 40.0),),
                         pathloss={"LOS": law_los, "NLOS": PathLossLaw(3e-7, 4.0)},
                         tx_pattern=FlatTop(100.0, 0.1, 0.2), rx_pattern=FlatTop(10.0, 0.1, 0.5),
                         p_t=2.0, noise_power=1e-12)
    res = simulate(sc, 5, seed=1)
    want = channel.mmwave_rx_power(2.0, law_los, 50.0, g_t=100.0, g_r=10.0) / 1e-12
    np.testing.assert_allclose(res.sinr, want, rtol=1e-12)


def test_single_bs_thz_budget():
    spec = atmosphere.default_spectrum()
    sc = NetworkScenario(bs_density=0.0, band="thz", freq_hz=300 * GHZ, fixed_bs=((0.0, 12.0),),
                         absorption=spec, p_t=0.1, noise_power=1e-13)
    res = simulate(sc, 3, seed=0)
    want = channel.thz_rx_power_los(0.1, 300 * GHZ, 12.0, spectrum=spec) / 1e-13
    np.testing.assert_allclose(res.sinr, want, rtol=1e-12)


def test_two_bs_interference():
    law = PathLossLaw(1e-6, 2.0)
    sc = NetworkScenario(bs_density=0.0, fixed_bs=((10.0, 0.0), (0.0, 20.0)),
                         pathloss={"LOS": law, "NLOS": law}, noise_power=1e-9)
    res = simulate(sc, 2, seed=3)
    s, i = law(10.0), law(20.0)
    np.testing.assert_allclose(res.sinr, s / (i + 1e-9), rtol=1e-12)


def _default():
    return NetworkScenario(bs_density=1e-4, los_model=blockage.UmaUmi(18, 63),
                           fading=FadingSpec(3, 2), tx_pattern=FlatTop(100, 0.1, 0.17),
                           rx_pattern=FlatTop(10, 0.1, 0.52))


def test_reproducible_across_workers():
    sc = _default()
    a = simulate(sc, 3500, seed=9)
    b = simulate(sc, 3500, seed=9, workers=3)
    assert_array_equal(a.sinr, b.sinr)
    assert a.coverage == b.coverage
    c = simulate(sc, 3500, seed=10)
    assert not np.array_equal(a.sinr, c.sinr)


def test_coverage_nonincreasing():
    res = simulate(_default(), 2000, seed=4)
    cov = [c for _, c in res.coverage]
    assert all(b <= a for a, b in zip(cov, cov[1:]))


def test_los_fraction_follows_model():
    model = blockage.UmaUmi(18, 63)
    sc = NetworkScenario(bs_density=1e-4, los_model=model)
    res = simulate(sc, 3000, seed=12, record_links=True)
    r, los = res.links["distance"], res.links["los"]
    for lo, hi in [(0, 50), (50, 150), (150, 400), (400, 1000)]:
        sel = (r >= lo) & (r < hi)
        p = blockage.p_los(model, r[sel]).mean()
        se = math.sqrt(p * (1 - p) / sel.sum())
        assert abs(los[sel].mean() - p) < 4 * se


def test_empty_window_outage():
    lam = 2e-6
    sc = NetworkScenario(bs_density=lam, window_radius=500.0)
    res = simulate(sc, 20_000, seed=1)
    p0 = math.exp(-lam * math.pi * 500.0 ** 2)
    assert abs(res.outage_fraction - p0) < 4 * math.sqrt(p0 * (1 - p0) / 20_000)


def test_self_block_thinning():
    cone = blockage.SelfBlockCone(math.pi / 2)
    sc = NetworkScenario(bs_density=1e-4, self_block=cone)
    full = simulate(NetworkScenario(bs_density=1e-4), 2000, seed=6, record_links=True)
    thin = simulate(sc, 2000, seed=6, record_links=True)
    kept = len(thin.links["distance"]) / len(full.links["distance"])
    n = len(full.links["distance"])
    assert abs(kept - 0.75) < 4 * math.sqrt(0.75 * 0.25 / n)


def test_thz_noise_limited_by_default():
    sc = NetworkScenario(bs_density=1e-3, window_radius=50.0, band="thz", freq_hz=300 * GHZ)
    assert not sc.interference_enabled
    assert sc.noise == pytest.approx(netsim.BOLTZMANN * 290 * 100e6)


def test_mean_rate_matches_sinr():
    sc = _default()
    res = simulate(sc, 1500, seed=2)
    assert res.mean_rate == pytest.approx(np.mean(sc.bandwidth * np.log2(1 + res.sinr)), rel=1e-12)


@pytest.mark.parametrize("kw", [dict(band="uhf"), dict(alignment="any"), dict(bs_density=-1.0),
                                dict(los_model=blockage.SelfBlockCone(1.0)),
                                dict(fixed_bs=((0.0, 0.0),))])
def test_scenario_validation(kw):
    base = dict(bs_density=1e-4)
    base.update(kw)
    with pytest.raises(ConfigurationError):
        NetworkScenario(**base)


def test_trials_validation():
    with pytest.raises(ConfigurationError):
        simulate(NetworkScenario(bs_density=1e-4), 0, seed=1)
