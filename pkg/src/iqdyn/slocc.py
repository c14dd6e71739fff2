"""sLOCC post-selection: one particle detected in L, the other in R.

The populations produced by the dynamics weight the slot-basis vectors
(``1/sqrt(2)`` Bell combinations), so the physical two-particle state is
``sum_u p_u N_u |u><u|`` over normalized states, renormalized by
``sum_u p_u N_u``. The distributed state and the post-selection probability
follow from that mixture.
"""
from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .channels import ChannelKind, channel_rates, decay_pair, xi
from .errors import ZeroProbability
from .states import (DOWN, LOC_L, LOC_R, UP, BellPopulations, PseudospinState, SingleParticle,
                     SpatialConfig, bell_state_norm, canonical_label, label_terms, selection_rule_check,
                     symmetrized_amplitude)

log = logging.getLogger(__name__)

ZERO_PROBABILITY_TOL = 1e-12
SPINS = (UP, DOWN)
# Row order of the distributed state: L-up R-up, L-up R-down, L-down R-up, L-down R-down.
LR_BASIS = tuple(product(SPINS, SPINS))


@dataclass(frozen=True)
class DistributedState:
    matrix: np.ndarray = field(repr=False)
    probability: float

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > 1e-10 or abs(np.trace(m) - 1) > 1e-10:
            raise ValueError("distributed state must be Hermitian with unit trace")
        if np.linalg.eigvalsh(m)[0] < -1e-10:
            raise ValueError("distributed state is not positive semidefinite")
        if not -1e-12 <= self.probability <= 1 + 1e-12:
            raise ValueError(f"probability {self.probability!r} outside [0, 1]")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


def _particles(config: SpatialConfig):
    return tuple(config.psi1), tuple(config.psi2)


def lr_amplitudes(config: SpatialConfig, label: str) -> np.ndarray:
    """<L s1, R s2 | u> for the slot-normalized basis state ``u`` (no 1/sqrt(N) factor)."""
    return _lr_amplitudes(config, canonical_label(label)).copy()


@functools.lru_cache(maxsize=4096)
def _lr_amplitudes(config: SpatialConfig, label: str) -> np.ndarray:
    psi1, psi2 = _particles(config)
    terms = label_terms(label)
    scale = 1 / math.sqrt(len(terms))
    out = np.zeros(4, dtype=complex)
    for k, (s1, s2) in enumerate(LR_BASIS):
        bra1, bra2 = SingleParticle(LOC_L, s1), SingleParticle(LOC_R, s2)
        for sign, (a1, a2) in terms:
            out[k] += sign * symmetrized_amplitude(
                bra1, bra2, SingleParticle(psi1, a1), SingleParticle(psi2, a2), config.statistics)
    out *= scale
    out.setflags(write=False)
    return out


def transfer_matrix(config: SpatialConfig) -> np.ndarray:
    """T[(s1, s2), (a1, a2)] = <L s1, R s2 | psi1 a1, psi2 a2>."""
    psi1, psi2 = _particles(config)
    t = np.zeros((4, 4), dtype=complex)
    for row, (s1, s2) in enumerate(LR_BASIS):
        for col, (a1, a2) in enumerate(LR_BASIS):
            t[row, col] = symmetrized_amplitude(
                SingleParticle(LOC_L, s1), SingleParticle(LOC_R, s2),
                SingleParticle(psi1, a1), SingleParticle(psi2, a2), config.statistics)
    return t


def gram_matrix(config: SpatialConfig) -> np.ndarray:
    """Symmetrized inner products of the slot states |psi1 a1, psi2 a2>."""
    psi1, psi2 = _particles(config)
    g = np.zeros((4, 4), dtype=complex)
    for row, (b1, b2) in enumerate(LR_BASIS):
        for col, (a1, a2) in enumerate(LR_BASIS):
            g[row, col] = symmetrized_amplitude(
                SingleParticle(psi1, b1), SingleParticle(psi2, b2),
                SingleParticle(psi1, a1), SingleParticle(psi2, a2), config.statistics)
    return g


def _distributed(unnormalized: np.ndarray, weight: float) -> DistributedState:
    norm = float(np.trace(unnormalized).real)
    p_lr = norm / weight
    if p_lr < ZERO_PROBABILITY_TOL:
        raise ZeroProbability(f"post-selection probability {p_lr:.3e} vanishes")
    m = unnormalized / norm
    # rounding only; P_LR <= 1 holds exactly
    return DistributedState((m + m.conj().T) / 2, min(p_lr, 1.0))


def project(populations: BellPopulations, config: SpatialConfig) -> DistributedState:
    """Distributed state and P_LR for a mixture diagonal in a channel basis."""
    selection_rule_check(config, populations)
    acc = np.zeros((4, 4), dtype=complex)
    weight = 0.0
    for label, p in zip(populations.labels, populations.p):
        if p <= 0:
            continue
        v = _lr_amplitudes(config, label)
        acc += p * np.outer(v, v.conj())
        weight += p * bell_state_norm(config, label)
    return _distributed(acc, weight)


def project_matrix(state: PseudospinState, config: SpatialConfig) -> DistributedState:
    """General projection of an arbitrary pseudospin matrix (e.g. oracle output)."""
    rho = np.asarray(state.matrix)
    t = transfer_matrix(config)
    weight = float(np.trace(gram_matrix(config) @ rho).real)
    if weight < ZERO_PROBABILITY_TOL:
        raise ZeroProbability("state has no physical weight for this configuration")
    return _distributed(t @ rho @ t.conj().T, weight)


def probability_closed_form(channel, config: SpatialConfig, gamma0: float, t: float) -> float:
    """Post-selection probability from |1m> for each channel in closed form.

    The dephasing expression uses exp(-gamma_- t / 2), the decay of the
    1m/1p coherence under this package's dephasing dynamics.
    """
    channel = ChannelKind.parse(channel)
    eta = config.eta
    l, r, lp, rp, th = config.l, config.r, config.lprime, config.rprime, config.theta
    direct = l**2 * rp**2 + lp**2 * r**2
    cross = l * lp * r * rp * math.cos(th)
    overlap2 = l**2 * lp**2 + r**2 * rp**2 + 2 * cross

    if channel is ChannelKind.AMPLITUDE_DAMPING:
        rate = gamma0 * (1 - xi(config))
        s = 1 - 2 * (math.exp(-rate * t) if rate > 0 else 1.0)
        num = direct + 2 * eta * cross * s
        den = 1 + eta * s * overlap2
    else:
        rates = channel_rates(channel, config, gamma0, gamma0)
        gm = decay_pair(rates, channel.regions).gamma_minus
        if channel is ChannelKind.PHASE_DAMPING:
            e = math.exp(-gm * t / 2) if gm > 0 else 1.0
            num = direct - 2 * eta * cross * e
            den = 1 - eta * e * overlap2
        else:
            s = 1 - 3 * (math.exp(-gm * t) if gm > 0 else 1.0)
            num = 2 * (direct + eta * cross * s)
            den = 2 + eta * s * overlap2
    if abs(den) < ZERO_PROBABILITY_TOL:
        raise ZeroProbability(f"closed-form denominator {den:.3e} vanishes")
    p = num / den
    if not -1e-9 <= p <= 1 + 1e-9:
        log.warning("closed-form P_LR = %r outside [0, 1] for %s, %s, t=%r", p, channel.value, config, t)
    return p
