"""Brute-force Lindblad oracle: explicit 16x16 generator plus two propagators.

Nothing here imports the closed forms; the cross-check in the tests only
means something while that stays true.

Vectorization is row-stacking (numpy C order): ``vec(A X B) = (A kron B.T) vec(X)``,
so the jump term ``A_i rho A_j^dagger`` is ``A_i kron conj(A_j)``.

Jump operators: spin-1/2 operators ``sigma_n / 2`` for dephasing and
depolarizing, the lowering operator ``|down><up|`` for amplitude damping.
With this normalization the generator reproduces the closed-form rates.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .channels import REGIONS, ChannelKind, EffectiveRates
from .errors import StepTooLarge
from .states import PseudospinState

if os.environ.get("IQDYN_PURE_PYTHON"):
    from ._rk4_py import rk4_steps
    BACKEND = "python"
else:
    try:
        from ._rk4 import rk4_steps
        BACKEND = "compiled"
    except ImportError:  # extension not built
        from ._rk4_py import rk4_steps
        BACKEND = "python"

DEFAULT_DT = 1e-3
STABILITY_BOUND = 0.5

_I2 = np.eye(2, dtype=complex)
_I4 = np.eye(4, dtype=complex)

SINGLE_JUMPS = {
    "sx": np.array([[0, 1], [1, 0]], dtype=complex) / 2,
    "sy": np.array([[0, -1j], [1j, 0]], dtype=complex) / 2,
    "sz": np.array([[1, 0], [0, -1]], dtype=complex) / 2,
    "sm": np.array([[0, 0], [1, 0]], dtype=complex),
}


def embed(op: np.ndarray, slot: int) -> np.ndarray:
    """Single-particle operator acting on slot 0 or 1 of the 4-dim pseudospin space."""
    return np.kron(op, _I2) if slot == 0 else np.kron(_I2, op)


@dataclass(frozen=True)
class Superoperator:
    matrix: np.ndarray = field(repr=False)
    gamma0_max: float = 0.0

    def __post_init__(self):
        m = np.ascontiguousarray(self.matrix, dtype=complex)
        if m.shape != (16, 16):
            raise ValueError(f"expected 16x16 generator, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def row_sum_bound(self) -> float:
        return float(np.abs(self.matrix).sum(axis=1).max())

    def trace_functional_residual(self) -> float:
        """max |vec(I)^T L|; zero for a trace-preserving generator."""
        return float(np.abs(_I4.reshape(-1) @ self.matrix).max())


def dissipator(jump_i: np.ndarray, jump_j: np.ndarray) -> np.ndarray:
    """Vectorized A_i rho A_j^+ - 1/2 {A_j^+ A_i, rho}."""
    m = jump_j.conj().T @ jump_i
    return np.kron(jump_i, jump_j.conj()) - 0.5 * np.kron(m, _I4) - 0.5 * np.kron(_I4, m.T)


def build_generator(channel, rates: EffectiveRates) -> Superoperator:
    channel = ChannelKind.parse(channel)
    out = np.zeros((16, 16), dtype=complex)
    for name in channel.jumps:
        jumps = [embed(SINGLE_JUMPS[name], k) for k in (0, 1)]
        for x in REGIONS:
            g = rates.region(x)
            for i in range(2):
                for j in range(2):
                    if g[i, j] != 0:
                        out += g[i, j] * dissipator(jumps[i], jumps[j])
    return Superoperator(out, rates.gamma0_max)


def _finish(vec: np.ndarray) -> PseudospinState:
    m = vec.reshape(4, 4)
    return PseudospinState((m + m.conj().T) / 2, psd_tol=1e-8, trace_tol=1e-10)


def default_dt(generator: Superoperator) -> float:
    return DEFAULT_DT / generator.gamma0_max if generator.gamma0_max > 0 else DEFAULT_DT


def integrate(generator: Superoperator, rho0: PseudospinState, t: float,
              dt: float | None = None) -> PseudospinState:
    """Fixed-step RK4 on the vectorized master equation.

    The last step is shortened so the trajectory lands exactly on ``t``.
    Raises StepTooLarge when ``dt`` times the row-sum bound of the generator
    exceeds 0.5.
    """
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    if dt is None:
        dt = default_dt(generator)
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t == 0:
        return rho0
    if dt > t:
        raise ValueError(f"dt = {dt} exceeds t = {t}")
    bound = dt * generator.row_sum_bound()
    if bound > STABILITY_BOUND:
        raise StepTooLarge(f"dt * |L|_inf = {bound:.3g} > {STABILITY_BOUND}")

    n_full = int(np.floor(t / dt + 1e-9))
    rem = t - n_full * dt
    if abs(rem) <= 1e-9 * dt:
        # absorb rounding into the final step
        steps = [(dt, n_full - 1), (dt + rem, 1)]
    else:
        steps = [(dt, n_full), (rem, 1)]
    y = np.asarray(rho0.matrix).reshape(-1)
    for h, n in steps:
        if n > 0:
            y = rk4_steps(generator.matrix, y, h, n)
    return _finish(y)


def propagator(generator: Superoperator, t: float) -> np.ndarray:
    return expm(generator.matrix * t)


def expm_propagate(generator: Superoperator, rho0: PseudospinState, t: float) -> PseudospinState:
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    if t == 0:
        return rho0
    return _finish(propagator(generator, t) @ np.asarray(rho0.matrix).reshape(-1))
