"""Concurrence of the distributed state and the entropic indistinguishability degree."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import Undefined
from .slocc import DistributedState
from .states import BellPopulations, SpatialConfig, Statistics

_SYSY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


@dataclass(frozen=True)
class IndistinguishabilityDegree:
    value: float
    p_l_psi1: float
    p_r_psi2: float
    p_l_psi2: float
    p_r_psi1: float

    def __float__(self):
        return self.value


def _xlog2x(x: float) -> float:
    return 0.0 if x <= 0 else x * math.log2(x)


def indistinguishability(config: SpatialConfig) -> IndistinguishabilityDegree:
    pl1, pr1 = config.l**2, config.r**2
    pl2, pr2 = config.lprime**2, config.rprime**2
    a, b = pl1 * pr2, pl2 * pr1
    z = a + b
    if z <= 0:
        raise Undefined("both joint detection products vanish")
    value = -_xlog2x(a / z) - _xlog2x(b / z)
    return IndistinguishabilityDegree(min(max(0.0, value), 1.0), pl1, pr2, pl2, pr1)


def _indist_on_branch(l2: float) -> float:
    a, b = l2 * l2, (1 - l2) ** 2
    z = a + b
    return -_xlog2x(a / z) - _xlog2x(b / z)


def config_for_indistinguishability(target: float, statistics=Statistics.FERMION,
                                    theta: float = 0.0) -> SpatialConfig:
    """Config with l = r' whose indistinguishability equals ``target``.

    Bisection on l^2 in [0.5, 1], where the degree falls monotonically from 1 to 0.
    """
    if not 0 <= target <= 1:
        raise ValueError(f"target indistinguishability must lie in [0, 1], got {target}")
    if target == 1:
        return SpatialConfig.from_l_squared(0.5, theta, statistics)
    if target == 0:
        return SpatialConfig.from_l_squared(1.0, theta, statistics)
    lo, hi = 0.5, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        value = _indist_on_branch(mid)
        if value > target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4e-16:
            break
    return SpatialConfig.from_l_squared(0.5 * (lo + hi), theta, statistics)


def spin_flip(rho: np.ndarray) -> np.ndarray:
    return _SYSY @ rho.conj() @ _SYSY


def concurrence(state) -> float:
    """Concurrence of a two-qubit density matrix.

    The square roots of the eigenvalues of rho * spin_flip(rho) are computed as
    the singular values of tau = X^T (sy x sy) X with rho = X X^+, which
    keeps exact zeros at zero for rank-deficient states.
    """
    rho = np.asarray(state.matrix if isinstance(state, DistributedState) else state, dtype=complex)
    w, v = np.linalg.eigh((rho + rho.conj().T) / 2)
    x = v * np.sqrt(np.clip(w, 0, None))
    tau = x.T @ _SYSY @ x
    s = np.sort(np.linalg.svd(tau, compute_uv=False))[::-1]
    return float(min(1.0, max(0.0, s[0] - s[1] - s[2] - s[3])))


def bell_diagonal_concurrence(populations) -> float:
    p = populations.p if isinstance(populations, BellPopulations) else np.asarray(populations)
    return float(max(0.0, 2 * np.max(p) - 1))
