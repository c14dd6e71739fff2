import math

import numpy as np
import pytest
from hypothesis import given

from iqdyn.errors import ForbiddenState
from iqdyn.states import (LOC_L, LOC_R, Basis, BellPopulations, PseudospinState, SingleParticle,
                          SpatialConfig, Statistics, bell_state_norm, canonical_label,
                          populations_to_pseudospin, selection_rule_check, symmetrized_amplitude)

from conftest import configs, populations


def test_statistics_parse_and_eta():
    assert Statistics.parse("Bosons") is Statistics.BOSON
    assert Statistics.parse("fermion").eta == -1
    assert Statistics.BOSON.eta == 1
    with pytest.raises(ValueError):
        Statistics.parse("anyon")


def test_spatial_config_rejects_unnormalized_and_negative():
    with pytest.raises(ValueError):
        SpatialConfig(0.9, 0.9, 1.0, 0.0)
    with pytest.raises(ValueError):
        SpatialConfig(-1.0, 0.0, 1.0, 0.0)


def test_from_l_squared_branch():
    c = SpatialConfig.from_l_squared(0.7, 1.0, "boson")
    assert c.l == pytest.approx(math.sqrt(0.7))
    assert c.rprime == c.l and c.r == c.lprime
    assert c.statistics is Statistics.BOSON


@given(configs())
def test_overlap_matches_definition(c):
    expected = c.l * c.lprime + c.r * c.rprime * np.exp(1j * c.theta)
    assert abs(c.overlap() - expected) < 1e-14


def test_symmetrized_amplitude_exchange_sign():
    up_l, up_r = SingleParticle(LOC_L, 0), SingleParticle(LOC_R, 0)
    for stat in Statistics:
        # <L up, R up | R up, L up> is the pure exchange term
        assert symmetrized_amplitude(up_l, up_r, up_r, up_l, stat) == stat.eta
        # identical single-particle states
        assert symmetrized_amplitude(up_l, up_l, up_l, up_l, stat) == 1 + stat.eta


@given(configs())
def test_bell_norms_bracket_one(c):
    o2 = abs(c.overlap()) ** 2
    assert bell_state_norm(c, "1m") == pytest.approx(1 - c.eta * o2)
    for label in ("1p", "2p", "2m", "2", "0"):
        assert bell_state_norm(c, label) == pytest.approx(1 + c.eta * o2)


def test_label_aliases():
    assert canonical_label("one_minus") == "1m"
    assert canonical_label("zero") == "0"
    with pytest.raises(ValueError):
        canonical_label("three")


def test_populations_validation():
    with pytest.raises(ValueError):
        BellPopulations(Basis.NONDISSIPATIVE, [0.5, 0.6, 0, 0])
    with pytest.raises(ValueError):
        BellPopulations(Basis.NONDISSIPATIVE, [1.2, -0.2, 0, 0])
    p = BellPopulations.pure("2")
    assert p.basis is Basis.DISSIPATIVE and p["2"] == 1.0
    assert p.as_dict() == {"1m": 0.0, "1p": 0.0, "2": 1.0, "0": 0.0}


def test_selection_rule_fermions_identical_states():
    same = SpatialConfig.from_l(1.0, 1.0, 0.0, "fermion")
    with pytest.raises(ForbiddenState) as err:
        selection_rule_check(same, BellPopulations.pure("2"))
    assert err.value.label == "2"
    selection_rule_check(same, BellPopulations.pure("1m"))
    selection_rule_check(SpatialConfig.from_l(1.0, 1.0, 0.0, "boson"), BellPopulations.pure("2"))
    with pytest.raises(ForbiddenState):
        selection_rule_check(SpatialConfig.from_l(1.0, 1.0, 0.0, "boson"), BellPopulations.pure("1m"))


@given(populations())
def test_pseudospin_round_trip(p):
    for basis in Basis:
        pops = BellPopulations(basis, p)
        rho = populations_to_pseudospin(pops)
        assert np.allclose(rho.populations(basis), p, atol=1e-14)


def test_pseudospin_validation():
    with pytest.raises(ValueError):
        PseudospinState(np.diag([1.0, 1.0, 0, 0]))
    with pytest.raises(ValueError):
        PseudospinState(np.diag([1.5, -0.5, 0, 0]))
    m = PseudospinState(np.eye(4) / 4).matrix
    with pytest.raises(ValueError):
        m[0, 0] = 1
