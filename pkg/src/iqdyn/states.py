"""Two identical qubits: spatial configurations, symmetrized amplitudes and bases.

The dynamics are carried on a 4x4 pseudospin matrix indexed by slot order
``(s1, s2)`` in ``{uu, ud, du, dd}``; slot ``j`` belongs to the particle with
spatial wave function ``psi_j``. Spatial information only enters through
effective rates and through the sLOCC projection.

Spin index convention: 0 = up, 1 = down.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ForbiddenState

NORM_TOL = 1e-12
FORBIDDEN_TOL = 1e-12

UP, DOWN = 0, 1


class Statistics(enum.Enum):
    BOSON = "boson"
    FERMION = "fermion"

    @property
    def eta(self) -> int:
        """Exchange sign: +1 for bosons, -1 for fermions."""
        return 1 if self is Statistics.BOSON else -1

    @classmethod
    def parse(cls, value) -> "Statistics":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower().rstrip("s"))
        except ValueError:
            raise ValueError(f"unknown statistics {value!r}; expected boson or fermion") from None


@dataclass(frozen=True)
class SpatialConfig:
    """Spatial wave functions psi1 = l|L> + r|R>, psi2 = l'|L> + r' e^{i theta}|R>."""

    l: float
    r: float
    lprime: float
    rprime: float
    theta: float = 0.0
    statistics: Statistics = Statistics.FERMION

    def __post_init__(self):
        for name in ("l", "r", "lprime", "rprime"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)}")
        if abs(self.l**2 + self.r**2 - 1) > NORM_TOL:
            raise ValueError(f"l^2 + r^2 = {self.l**2 + self.r**2!r} != 1")
        if abs(self.lprime**2 + self.rprime**2 - 1) > NORM_TOL:
            raise ValueError(f"l'^2 + r'^2 = {self.lprime**2 + self.rprime**2!r} != 1")
        object.__setattr__(self, "statistics", Statistics.parse(self.statistics))

    @classmethod
    def from_l(cls, l, lprime, theta=0.0, statistics=Statistics.FERMION) -> "SpatialConfig":
        """Build from the L amplitudes; the R amplitudes follow from normalization."""
        return cls(l, np.sqrt(max(0.0, 1 - l * l)), lprime, np.sqrt(max(0.0, 1 - lprime * lprime)),
                   theta, statistics)

    @classmethod
    def from_l_squared(cls, l2, theta=0.0, statistics=Statistics.FERMION) -> "SpatialConfig":
        """Config on the l = r' branch with P(L | psi1) = l2."""
        l = np.sqrt(l2)
        lp = np.sqrt(max(0.0, 1 - l2))
        return cls(float(l), float(lp), float(lp), float(l), theta, statistics)

    @classmethod
    def separated(cls, theta=0.0, statistics=Statistics.FERMION) -> "SpatialConfig":
        return cls(1.0, 0.0, 0.0, 1.0, theta, statistics)

    @property
    def eta(self) -> int:
        return self.statistics.eta

    @property
    def psi1(self) -> np.ndarray:
        return np.array([self.l, self.r], dtype=complex)

    @property
    def psi2(self) -> np.ndarray:
        return np.array([self.lprime, self.rprime * np.exp(1j * self.theta)], dtype=complex)

    def overlap(self) -> complex:
        """<psi1|psi2> = l l' + r r' e^{i theta}."""
        return complex(np.vdot(self.psi1, self.psi2))


@dataclass(frozen=True)
class SingleParticle:
    """Single-particle state: spatial amplitudes over (L, R) and a pseudospin."""

    spatial: tuple
    spin: int

    def inner(self, other: "SingleParticle") -> complex:
        """<self|other>."""
        if self.spin != other.spin:
            return 0j
        return complex(np.vdot(np.asarray(self.spatial, dtype=complex),
                               np.asarray(other.spatial, dtype=complex)))


LOC_L = (1.0, 0.0)
LOC_R = (0.0, 1.0)


def symmetrized_amplitude(bra1: SingleParticle, bra2: SingleParticle,
                          ket1: SingleParticle, ket2: SingleParticle,
                          stat: Statistics) -> complex:
    """Two-particle overlap <bra1, bra2 | ket1, ket2> without particle labels.

    Direct term plus the exchange term weighted by ``eta``.
    """
    eta = Statistics.parse(stat).eta
    return bra1.inner(ket1) * bra2.inner(ket2) + eta * bra1.inner(ket2) * bra2.inner(ket1)


class Basis(enum.Enum):
    """Channel-adapted two-qubit bases (labels in storage order)."""

    NONDISSIPATIVE = ("1m", "1p", "2p", "2m")
    DISSIPATIVE = ("1m", "1p", "2", "0")

    @property
    def labels(self) -> tuple:
        return self.value


_S = 1 / np.sqrt(2)

# Slot-basis vectors over (uu, ud, du, dd) for each label.
SLOT_VECTORS = {
    "1m": np.array([0, _S, -_S, 0]),
    "1p": np.array([0, _S, _S, 0]),
    "2p": np.array([_S, 0, 0, _S]),
    "2m": np.array([_S, 0, 0, -_S]),
    "2": np.array([1.0, 0, 0, 0]),
    "0": np.array([0, 0, 0, 1.0]),
}

# Each label as a signed list of (s1, s2) slot terms before normalization.
_TERMS = {
    "1m": [(1, (UP, DOWN)), (-1, (DOWN, UP))],
    "1p": [(1, (UP, DOWN)), (1, (DOWN, UP))],
    "2p": [(1, (UP, UP)), (1, (DOWN, DOWN))],
    "2m": [(1, (UP, UP)), (-1, (DOWN, DOWN))],
    "2": [(1, (UP, UP))],
    "0": [(1, (DOWN, DOWN))],
}

LABEL_NAMES = {
    "one_minus": "1m", "one_plus": "1p", "two_plus": "2p",
    "two_minus": "2m", "two": "2", "zero": "0",
}


def canonical_label(label: str) -> str:
    label = str(label).strip()
    if label in _TERMS:
        return label
    try:
        return LABEL_NAMES[label.lower()]
    except KeyError:
        raise ValueError(f"unknown basis label {label!r}") from None


def basis_for_label(label: str) -> Basis:
    label = canonical_label(label)
    return Basis.DISSIPATIVE if label in ("2", "0") else Basis.NONDISSIPATIVE


def bell_state_norm(config: SpatialConfig, label: str) -> float:
    """Normalization N_u of a basis state: 1 - eta|<psi1|psi2>|^2 for 1m, else 1 + eta|.|^2."""
    label = canonical_label(label)
    o2 = abs(config.overlap()) ** 2
    if label == "1m":
        return 1 - config.eta * o2
    return 1 + config.eta * o2


def label_terms(label: str):
    return _TERMS[canonical_label(label)]


@dataclass(frozen=True)
class BellPopulations:
    """Probabilities over one of the two channel-adapted bases."""

    basis: Basis
    p: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.array(self.p, dtype=float).reshape(-1)
        if p.shape != (4,):
            raise ValueError(f"expected four populations, got shape {p.shape}")
        if np.any(p < -NORM_TOL) or np.any(p > 1 + NORM_TOL):
            raise ValueError(f"populations outside [0, 1]: {p}")
        if abs(p.sum() - 1) > NORM_TOL:
            raise ValueError(f"populations sum to {p.sum()!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @classmethod
    def pure(cls, label: str) -> "BellPopulations":
        label = canonical_label(label)
        basis = basis_for_label(label)
        p = np.zeros(4)
        p[basis.labels.index(label)] = 1.0
        return cls(basis, p)

    @property
    def labels(self) -> tuple:
        return self.basis.labels

    def __getitem__(self, label: str) -> float:
        return float(self.p[self.labels.index(canonical_label(label))])

    def as_dict(self) -> dict:
        return dict(zip(self.labels, self.p.tolist()))


def selection_rule_check(config: SpatialConfig, populations: BellPopulations) -> None:
    """Raise ForbiddenState if a populated basis state is forbidden by statistics."""
    for label, p in zip(populations.labels, populations.p):
        if p > FORBIDDEN_TOL:
            n = bell_state_norm(config, label)
            if n <= FORBIDDEN_TOL:
                raise ForbiddenState(label, n)


@dataclass(frozen=True)
class PseudospinState:
    """4x4 density matrix over the slot basis (uu, ud, du, dd)."""

    matrix: np.ndarray = field(repr=False)
    psd_tol: float = 1e-10
    trace_tol: float = 1e-12

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1) > self.trace_tol:
            raise ValueError(f"density matrix trace {np.trace(m).real!r} != 1")
        if np.linalg.eigvalsh(m)[0] < -self.psd_tol:
            raise ValueError("density matrix is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def populations(self, basis: Basis) -> np.ndarray:
        """Diagonal of the matrix in a channel basis (raw, not re-validated)."""
        return np.array([np.real(SLOT_VECTORS[u] @ self.matrix @ SLOT_VECTORS[u])
                         for u in basis.labels])


def populations_to_pseudospin(populations: BellPopulations) -> PseudospinState:
    m = np.zeros((4, 4), dtype=complex)
    for label, p in zip(populations.labels, populations.p):
        v = SLOT_VECTORS[label]
        m += p * np.outer(v, v)
    return PseudospinState(m)
