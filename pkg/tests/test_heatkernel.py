import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cnbs.analytic import MarketQuery, OptionSpec, option_price, payoff
from cnbs.heatkernel import (
    convolution_simpson,
    heat_convolution,
    price_via_heat_kernel,
    to_heat_coords,
    u0,
)

from oracles import bs_reference, heat_closed_form


def test_coords_reference():
    spec = OptionSpec("call", 10.0, 0.1, 0.2, 1.0)
    hc = to_heat_coords(spec, MarketQuery(10.0))
    assert hc.x == 0.0
    assert hc.k_dim == pytest.approx(5.0)
    assert hc.alpha == pytest.approx(-2.0)
    assert hc.beta == pytest.approx(-9.0)
    assert to_heat_coords(spec, MarketQuery(10.0, 1.0)).tau == 0.0
    assert hc.tau == pytest.approx(0.02)


@pytest.mark.parametrize("spot, vol", [(0.0, 0.2), (10.0, 0.0)])
def test_coords_domain(spot, vol):
    with pytest.raises(ValueError):
        to_heat_coords(OptionSpec("call", 10.0, 0.1, vol, 1.0), MarketQuery(spot))


@given(r=st.floats(0.0, 0.5), sigma=st.floats(0.05, 1.0))
def test_transform_consistency(r, sigma):
    hc = to_heat_coords(OptionSpec("put", 1.0, r, sigma, 1.0), MarketQuery(1.0))
    k, a, b = hc.k_dim, hc.alpha, hc.beta
    assert 2 * a + (k - 1) == pytest.approx(0.0, abs=1e-12 * max(1.0, k))
    assert b == pytest.approx(a * a + (k - 1) * a - k, rel=1e-12, abs=1e-12)


def test_u0_values():
    assert u0(0.0, 5.0, "call") == 0.0
    assert u0(0.0, 5.0, "put") == 0.0
    assert u0(math.log(4.0), 5.0, "call") == pytest.approx(48.0, rel=1e-14)
    assert u0(-10.0, 5.0, "call") == 0.0
    assert u0(10.0, 5.0, "put") == 0.0
    np.testing.assert_array_equal(u0(np.array([-1.0, 0.0]), 2.0, "call"), [0.0, 0.0])


def test_convolution_matches_closed_form():
    ref = heat_closed_form("call", 5.0, 0.0, 0.04)
    assert ref == pytest.approx(0.3113100775226173, rel=1e-15)
    assert heat_convolution("call", 5.0, 0.0, 0.04, tol=1e-10) == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("kind", ["call", "put"])
@pytest.mark.parametrize("k_dim, x, tau", [(0.5, 0.3, 0.1), (5.0, -0.4, 0.3), (20.0, 0.1, 0.02), (1.0, 0.0, 1.5)])
def test_convolution_panel(kind, k_dim, x, tau):
    ref = heat_closed_form(kind, k_dim, x, tau)
    assert heat_convolution(kind, k_dim, x, tau, tol=1e-10) == pytest.approx(ref, rel=1e-8)


def test_convolution_zero_tau_is_payoff():
    for x in (-0.5, 0.0, 0.7):
        assert heat_convolution("call", 3.0, x, 0.0) == u0(x, 3.0, "call")
    assert heat_convolution("call", 3.0, 0.2, 1e-12) == pytest.approx(u0(0.2, 3.0, "call"), rel=1e-6)


def test_convolution_zero_integrand():
    assert heat_convolution("call", 5.0, -20.0, 1e-3) == 0.0


def test_convolution_domain_errors():
    with pytest.raises(ValueError):
        heat_convolution("call", 5.0, 0.0, -0.1)
    with pytest.raises(ValueError):
        heat_convolution("call", 5.0, 0.0, 0.1, tol=0.0)


def test_quadrature_converges_at_fourth_order():
    changes = []
    prev = None
    for n in (8, 16, 32, 64, 128):
        cur = convolution_simpson("call", 5.0, 0.1, 0.2, n)
        if prev is not None:
            changes.append(abs(cur - prev))
        prev = cur
    ratios = np.array(changes[:-1]) / np.array(changes[1:])
    assert np.all(ratios[1:] >= 4.0)


def test_price_reference(call_10):
    q = MarketQuery(10.0)
    assert price_via_heat_kernel(call_10, q) == pytest.approx(1.358038837446373, rel=1e-9)


def test_price_at_expiry_is_payoff(put_100):
    assert price_via_heat_kernel(put_100, MarketQuery(80.0, 1.0)) == payoff("put", 80.0, 100.0)


def test_put_near_zero_spot(put_100):
    value = price_via_heat_kernel(put_100, MarketQuery(1e-6))
    assert value == pytest.approx(100.0 * math.exp(-0.25), rel=1e-7)


def test_oracle_equivalence_panel():
    rng = np.random.default_rng(5)
    for _ in range(25):
        kind = rng.choice(["call", "put"])
        E = rng.uniform(5, 200)
        spec = OptionSpec(kind, E, rng.uniform(0.0, 0.3), rng.uniform(0.1, 0.8), rng.uniform(0.1, 2.0))
        q = MarketQuery(E * rng.uniform(0.5, 2.0))
        ref = bs_reference(kind, q.spot, E, spec.rate, spec.volatility, spec.expiry)
        hk = price_via_heat_kernel(spec, q)
        assert hk == pytest.approx(ref, rel=1e-6, abs=1e-12 * E)
        assert hk == pytest.approx(option_price(spec, q), rel=1e-6, abs=1e-12 * E)
