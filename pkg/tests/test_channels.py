import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iqdyn.channels import (ChannelKind, build_effective_rates, channel_rates, decay_pair,
                            evolve_populations, stationary_concurrence, xi)
from iqdyn.errors import NegativeRate
from iqdyn.states import Basis, BellPopulations, SpatialConfig

from conftest import configs, populations

times = st.floats(0.0, 20.0, allow_nan=False)


def test_parse_aliases():
    assert ChannelKind.parse("dephasing") is ChannelKind.PHASE_DAMPING
    assert ChannelKind.parse("Amplitude-Damping") is ChannelKind.AMPLITUDE_DAMPING
    with pytest.raises(ValueError):
        ChannelKind.parse("bitflip")


def test_negative_rate_rejected():
    with pytest.raises(NegativeRate):
        build_effective_rates(SpatialConfig.separated(), -1.0, 1.0)


@given(configs())
def test_decay_pair_dephasing(c):
    pair = decay_pair(channel_rates("dephasing", c, 1.0, 1.0))
    assert pair.gamma_minus == pytest.approx(2 * (1 - xi(c)), abs=1e-14)
    assert pair.gamma_plus == pytest.approx(2 * (1 + xi(c)), abs=1e-14)


@given(configs())
def test_decay_pair_depolarizing_l_only(c):
    rates = channel_rates("depolarizing", c, 1.0, 1.0)
    assert rates.gamma0R == 0.0
    pair = decay_pair(rates, ChannelKind.DEPOLARIZING.regions)
    assert pair.gamma_minus == pytest.approx((c.l - c.lprime) ** 2, abs=1e-14)
    assert pair.gamma_plus == pytest.approx((c.l + c.lprime) ** 2, abs=1e-14)


def test_theta_does_not_enter_rates():
    a = channel_rates("dephasing", SpatialConfig.from_l(0.6, 0.3, 0.0), 1.3, 0.7).table
    b = channel_rates("dephasing", SpatialConfig.from_l(0.6, 0.3, 2.1), 1.3, 0.7).table
    assert np.array_equal(a, b)


@settings(max_examples=60)
@given(st.sampled_from(list(ChannelKind)), configs(), populations(), times)
def test_populations_stay_normalized(channel, c, p, t):
    p0 = BellPopulations(channel.basis, p)
    out = evolve_populations(channel, p0, c, t)
    assert abs(out.p.sum() - 1) < 1e-12
    assert np.all(out.p > -1e-12)


@given(st.sampled_from(list(ChannelKind)), configs(), populations())
def test_zero_time_identity(channel, c, p):
    p0 = BellPopulations(channel.basis, p)
    assert np.allclose(evolve_populations(channel, p0, c, 0.0).p, p, atol=1e-15)


def test_separated_dephasing_formula():
    c = SpatialConfig.separated()
    t = 0.8
    out = evolve_populations("dephasing", BellPopulations.pure("1m"), c, t)
    # gamma_- = 2 for separated particles
    assert out["1m"] == pytest.approx(0.5 * (1 + math.exp(-t)), abs=1e-15)
    assert out["1p"] == pytest.approx(0.5 * (1 - math.exp(-t)), abs=1e-15)


def test_depolarizing_long_time_mixture():
    c = SpatialConfig.separated()
    out = evolve_populations("depolarizing", BellPopulations.pure("1m"), c, math.inf, 1.0, 0.0)
    assert np.allclose(out.p, 0.25, atol=1e-15)


def test_amplitude_damping_requires_equal_rates():
    with pytest.raises(ValueError):
        evolve_populations("amplitude_damping", BellPopulations.pure("1m"),
                           SpatialConfig.separated(), 1.0, 1.0, 0.5)


def test_amplitude_damping_continuous_at_resonance():
    # just below the xi = 1 switch vs exactly at it
    t = 1.7
    p0 = BellPopulations(Basis.DISSIPATIVE, [0.1, 0.2, 0.6, 0.1])
    # xi = cos(alpha - beta) = 1 - 5e-9
    alpha, beta = 0.6, 0.6 - 1e-4
    near = SpatialConfig(math.cos(alpha), math.sin(alpha), math.cos(beta), math.sin(beta))
    exact = SpatialConfig(math.cos(alpha), math.sin(alpha), math.cos(alpha), math.sin(alpha))
    assert 1 - 1e-8 < xi(near) < 1 - 1e-9
    a = evolve_populations("amplitude_damping", p0, near, t).p
    b = evolve_populations("amplitude_damping", p0, exact, t).p
    assert np.allclose(a, b, atol=1e-7)


def test_stationary_concurrence_endpoints():
    for ch in ("dephasing", "depolarizing"):
        assert stationary_concurrence(ch, SpatialConfig.from_l_squared(1.0)) == 0.0
        assert stationary_concurrence(ch, SpatialConfig.from_l_squared(0.5)) == pytest.approx(1.0, abs=1e-15)
    assert stationary_concurrence("amplitude_damping", SpatialConfig.from_l_squared(0.5)) == 1.0
    assert stationary_concurrence("amplitude_damping", SpatialConfig.from_l_squared(0.7)) == 0.0
