import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from iqdyn.channels import ChannelKind, evolve_populations
from iqdyn.errors import ForbiddenState, ZeroProbability
from iqdyn.slocc import (DistributedState, gram_matrix, lr_amplitudes, probability_closed_form,
                         project, project_matrix, transfer_matrix)
from iqdyn.states import (Basis, BellPopulations, SpatialConfig, bell_state_norm,
                          populations_to_pseudospin)

from conftest import configs, populations


def _admissible(c, pops):
    return all(p <= 1e-12 or bell_state_norm(c, u) > 1e-6 for u, p in zip(pops.labels, pops.p))


def test_separated_particles_map_to_bell_states():
    c = SpatialConfig.separated()
    s = 1 / math.sqrt(2)
    for label, vec in {"1m": [0, s, -s, 0], "1p": [0, s, s, 0],
                       "2p": [s, 0, 0, s], "2m": [s, 0, 0, -s]}.items():
        assert np.allclose(lr_amplitudes(c, label), vec, atol=1e-15)
        d = project(BellPopulations.pure(label), c)
        assert d.probability == pytest.approx(1.0, abs=1e-15)
        assert np.allclose(d.matrix, np.outer(vec, vec), atol=1e-15)


def test_lr_amplitudes_returns_copy():
    c = SpatialConfig.from_l(0.6, 0.4)
    a = lr_amplitudes(c, "1m")
    a[:] = 0
    assert np.any(lr_amplitudes(c, "1m") != 0)


@given(configs())
def test_gram_is_hermitian_psd(c):
    g = gram_matrix(c)
    assert np.allclose(g, g.conj().T, atol=1e-14)
    assert np.linalg.eigvalsh(g)[0] > -1e-12


@given(configs())
def test_transfer_bounded_by_gram(c):
    # P_LR <= 1 for every slot state: G - T^+T is PSD
    t = transfer_matrix(c)
    assert np.linalg.eigvalsh(gram_matrix(c) - t.conj().T @ t)[0] > -1e-12


@settings(max_examples=60)
@given(st.sampled_from(list(Basis)), configs(), populations())
def test_fast_path_matches_general_projection(basis, c, p):
    pops = BellPopulations(basis, p)
    assume(_admissible(c, pops))
    try:
        fast = project(pops, c)
    except ZeroProbability:
        return
    general = project_matrix(populations_to_pseudospin(pops), c)
    assert fast.probability == pytest.approx(general.probability, abs=1e-10)
    assert np.allclose(fast.matrix, general.matrix, atol=1e-9)


@settings(max_examples=80)
@given(st.sampled_from(list(ChannelKind)), configs(), st.floats(0.0, 10.0))
def test_probability_closed_form_matches_projection(channel, c, t):
    p0 = BellPopulations(channel.basis, [1.0, 0, 0, 0])
    assume(bell_state_norm(c, "1m") > 1e-6)
    gr = 0.0 if channel is ChannelKind.DEPOLARIZING else 1.0
    try:
        ref = project(evolve_populations(channel, p0, c, t, 1.0, gr), c).probability
    except ZeroProbability:
        return
    assert probability_closed_form(channel, c, 1.0, t) == pytest.approx(ref, abs=1e-10)


def test_forbidden_state_rejected_by_projection():
    with pytest.raises(ForbiddenState):
        project(BellPopulations.pure("2"), SpatialConfig.from_l(1.0, 1.0, 0.0, "fermion"))


def test_zero_probability():
    # both particles at L: nothing to detect at R
    with pytest.raises(ZeroProbability):
        project(BellPopulations.pure("1p"), SpatialConfig.from_l(1.0, 1.0, 0.0, "boson"))


def test_distributed_state_validation():
    with pytest.raises(ValueError):
        DistributedState(np.eye(4), 0.5)
    with pytest.raises(ValueError):
        DistributedState(np.eye(4) / 4, 1.5)
