import math

import numpy as np
import pytest

from cnbs.analytic import MarketQuery, OptionSpec, option_price
from cnbs.mc import CHUNK, GbmParams, mc_discounted_terminal, mc_price, simulate_path


def test_params_invariants():
    with pytest.raises(ValueError):
        GbmParams(0.1, 0.2, 0.0)
    with pytest.raises(ValueError):
        GbmParams(0.1, -0.2, 1.0)


def test_zero_noise_path_is_deterministic_growth():
    path = simulate_path(GbmParams(0.08, 0.0, 50.0), 2.0, 8, seed=1)
    np.testing.assert_allclose(path, 50.0 * np.exp(0.08 * 0.25 * np.arange(9)), rtol=1e-14)
    flat = simulate_path(GbmParams(0.0, 0.0, 50.0), 2.0, 8, seed=1)
    np.testing.assert_array_equal(flat, 50.0)


def test_path_seeded_and_positive():
    params = GbmParams(0.05, 0.9, 10.0)
    a = simulate_path(params, 5.0, 1000, seed=42)
    b = simulate_path(params, 5.0, 1000, seed=42)
    np.testing.assert_array_equal(a, b)
    assert len(a) == 1001 and a[0] == 10.0
    assert np.all(a > 0)
    assert not np.array_equal(a, simulate_path(params, 5.0, 1000, seed=43))


def test_path_log_increments_have_gbm_moments():
    params = GbmParams(0.1, 0.3, 1.0)
    n, horizon = 200_000, 200.0
    inc = np.diff(np.log(simulate_path(params, horizon, n, seed=9)))
    dt = horizon / n
    se = 0.3 * math.sqrt(dt / n)
    assert abs(inc.mean() - (0.1 - 0.045) * dt) <= 5 * se
    assert inc.std() == pytest.approx(0.3 * math.sqrt(dt), rel=0.01)


def test_zero_volatility_price_is_discounted_intrinsic():
    spec = OptionSpec("call", 10.0, 0.1, 0.0, 0.5)
    est = mc_price(spec, 12.0, 1000, seed=0)
    assert est.mean == pytest.approx(max(12.0 - 10.0 * math.exp(-0.05), 0.0), rel=1e-12)
    assert est.std_error == 0.0


def test_martingale_identity(call_10):
    est = mc_discounted_terminal(call_10, 10.0, 400_000, seed=3)
    assert abs(est.mean - 10.0) <= 4 * est.std_error


def test_deep_in_the_money_call_tracks_forward(call_10):
    tiny_strike = call_10.replace(strike=1e-9)
    est = mc_price(tiny_strike, 10.0, 400_000, seed=4)
    assert abs(est.mean - (10.0 - 1e-9 * math.exp(-0.05))) <= 4 * est.std_error


def test_estimate_is_bitwise_independent_of_workers(put_100):
    n = 3 * CHUNK + 123
    one = mc_price(put_100, 100.0, n, seed=17, workers=1)
    many = mc_price(put_100, 100.0, n, seed=17, workers=4)
    assert one == many
    assert one.n_paths == n and one.seed == 17


def test_seed_changes_estimate(put_100):
    assert mc_price(put_100, 100.0, 10_000, 1) != mc_price(put_100, 100.0, 10_000, 2)


def test_rejects_too_few_paths(call_10):
    with pytest.raises(ValueError):
        mc_price(call_10, 10.0, 1)


def test_standard_error_scales_like_root_n(call_10):
    small = mc_price(call_10, 10.0, 10_000, seed=5)
    large = mc_price(call_10, 10.0, 160_000, seed=5)
    assert small.std_error / large.std_error == pytest.approx(4.0, rel=0.1)
    ref = option_price(call_10, MarketQuery(10.0))
    assert abs(large.mean - ref) <= 4 * large.std_error
