"""Effective decay rates and closed-form population dynamics for three local noises.

Time and rates are in any consistent units; the CLI uses gamma0 = 1 so that
``t`` is the dimensionless time gamma0*t.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import NegativeRate
from .states import Basis, BellPopulations, SpatialConfig

XI_DEGENERATE_TOL = 1e-9

REGIONS = ("L", "R")


class ChannelKind(enum.Enum):
    PHASE_DAMPING = "phase_damping"
    DEPOLARIZING = "depolarizing"
    AMPLITUDE_DAMPING = "amplitude_damping"

    @classmethod
    def parse(cls, value) -> "ChannelKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        aliases = {"dephasing": "phase_damping", "depolarising": "depolarizing"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ValueError(f"unknown channel {value!r}") from None

    @property
    def jumps(self) -> tuple:
        """Names of the single-particle jump operators."""
        return {
            ChannelKind.PHASE_DAMPING: ("sz",),
            ChannelKind.DEPOLARIZING: ("sx", "sy", "sz"),
            ChannelKind.AMPLITUDE_DAMPING: ("sm",),
        }[self]

    @property
    def regions(self) -> tuple:
        # depolarizing acts at L only
        return ("L",) if self is ChannelKind.DEPOLARIZING else REGIONS

    @property
    def basis(self) -> Basis:
        if self is ChannelKind.AMPLITUDE_DAMPING:
            return Basis.DISSIPATIVE
        return Basis.NONDISSIPATIVE


@dataclass(frozen=True)
class EffectiveRates:
    """gamma_X^(i,j) for X in (L, R), i, j in (1, 2); ``table[x, i, j]`` zero-based."""

    gamma0L: float
    gamma0R: float
    table: np.ndarray

    def __post_init__(self):
        t = np.array(self.table, dtype=float)
        if t.shape != (2, 2, 2):
            raise ValueError(f"rate table must have shape (2, 2, 2), got {t.shape}")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    def region(self, x: str) -> np.ndarray:
        return self.table[REGIONS.index(x)]

    @property
    def gamma0_max(self) -> float:
        return max(self.gamma0L, self.gamma0R)


@dataclass(frozen=True)
class DecayPair:
    gamma_plus: float
    gamma_minus: float


def build_effective_rates(config: SpatialConfig, gamma0L: float, gamma0R: float) -> EffectiveRates:
    """Rates gamma0_X |<X|psi_i>| |<psi_j|X>|; the phase theta drops out of every modulus."""
    if gamma0L < 0 or gamma0R < 0:
        raise NegativeRate(f"base rates must be non-negative, got ({gamma0L}, {gamma0R})")
    amp_l = np.array([config.l, config.lprime])
    amp_r = np.array([config.r, config.rprime])
    table = np.stack([gamma0L * np.outer(amp_l, amp_l), gamma0R * np.outer(amp_r, amp_r)])
    return EffectiveRates(float(gamma0L), float(gamma0R), table)


def channel_rates(channel, config: SpatialConfig, gamma0L: float = 1.0,
                  gamma0R: float = 1.0) -> EffectiveRates:
    """Rates for a channel; the depolarizing environment has no R component."""
    channel = ChannelKind.parse(channel)
    if channel is ChannelKind.DEPOLARIZING:
        gamma0R = 0.0
    return build_effective_rates(config, gamma0L, gamma0R)


def decay_pair(rates: EffectiveRates, regions=REGIONS) -> DecayPair:
    if not regions:
        raise ValueError("at least one region is required")
    sign = np.array([[1.0, -1.0], [-1.0, 1.0]])
    gp = gm = 0.0
    for x in regions:
        g = rates.region(x)
        gp += float(g.sum())
        gm += float((sign * g).sum())
    # (l - l')^2-type sums can round to -1e-17
    return DecayPair(gp, max(gm, 0.0))


def xi(config: SpatialConfig) -> float:
    """Spatial overlap parameter l l' + r r'."""
    return config.l * config.lprime + config.r * config.rprime


def _decay(rate: float, t: float) -> float:
    # exp(-rate*t) with a frozen (rate == 0) component staying at 1 for t = inf
    if rate == 0.0:
        return 1.0
    return math.exp(-rate * t)


def _check_time(t):
    if not t >= 0:
        raise ValueError(f"time must be non-negative, got {t}")


def _require_basis(p0: BellPopulations, basis: Basis):
    if p0.basis is not basis:
        raise ValueError(f"expected populations in the {basis.name.lower()} basis")


def dephasing_populations(p0: BellPopulations, pair: DecayPair, t: float) -> BellPopulations:
    _check_time(t)
    _require_basis(p0, Basis.NONDISSIPATIVE)
    p1m, p1p, p2p, p2m = p0.p
    e = _decay(pair.gamma_minus / 2, t)
    f = _decay(pair.gamma_plus / 2, t)
    p = [
        0.5 * (1 + e) * p1m + 0.5 * (1 - e) * p1p,
        0.5 * (1 + e) * p1p + 0.5 * (1 - e) * p1m,
        0.5 * (1 + f) * p2p + 0.5 * (1 - f) * p2m,
        0.5 * (1 + f) * p2m + 0.5 * (1 - f) * p2p,
    ]
    return BellPopulations(Basis.NONDISSIPATIVE, p)


def depolarizing_populations(p0: BellPopulations, pair: DecayPair, t: float) -> BellPopulations:
    """Populations under a depolarizing environment at L.

    ``1m`` relaxes to 1/4 at rate gamma_-; the other three states relax at
    (3 gamma_+ + gamma_-)/4 with a cross term fed by the ``1m`` excess.
    """
    _check_time(t)
    _require_basis(p0, Basis.NONDISSIPATIVE)
    e = _decay(pair.gamma_minus, t)
    k = _decay((3 * pair.gamma_plus + pair.gamma_minus) / 4, t)
    p1m0 = p0.p[0]
    out = [p1m0 * e + 0.25 * (1 - e)]
    for pu in p0.p[1:]:
        out.append(pu * k + 0.25 * (1 - k) + (1 - 4 * p1m0) / 12 * (e - k))
    return BellPopulations(Basis.NONDISSIPATIVE, out)


def amplitude_damping_populations(p0: BellPopulations, config: SpatialConfig,
                                  gamma0: float, t: float) -> BellPopulations:
    """Populations over (1m, 1p, 2, 0) under equal local amplitude damping.

    For xi < 1 the one-excitation states decay at (1 -+ xi) gamma0 and are fed
    by |2>; at xi = 1 the resonant 1p branch picks up a t e^{-2 gamma0 t} term
    and 1m is frozen.
    """
    _check_time(t)
    _require_basis(p0, Basis.DISSIPATIVE)
    p1m0, p1p0, p20, _ = p0.p
    x = xi(config)
    g2 = _decay(2 * gamma0, t)
    p2 = p20 * g2
    if x < 1 - XI_DEGENERATE_TOL:
        a, b = 1 - x, 1 + x
        ea, eb = _decay(a * gamma0, t), _decay(b * gamma0, t)
        p1m = p1m0 * ea + (a / b) * p20 * (ea - g2)
        # (e^{-b g t} - e^{-2 g t}) / a written via expm1 to stay exact as a -> 0
        if math.isinf(t) or gamma0 == 0:
            feed = 0.0
        else:
            feed = b * eb * (-math.expm1(-a * gamma0 * t)) / a
        p1p = p1p0 * eb + p20 * feed
    else:
        p1m = p1m0
        if math.isinf(t) or gamma0 == 0:
            growth = 0.0
        else:
            growth = 2 * gamma0 * t * g2
        p1p = p1p0 * g2 + p20 * growth
    return BellPopulations(Basis.DISSIPATIVE, [p1m, p1p, p2, 1 - p1m - p1p - p2])


def evolve_populations(channel, p0: BellPopulations, config: SpatialConfig, t: float,
                       gamma0L: float = 1.0, gamma0R: float = 1.0) -> BellPopulations:
    """Dispatch to the closed form of ``channel``."""
    channel = ChannelKind.parse(channel)
    if channel is ChannelKind.AMPLITUDE_DAMPING:
        if gamma0L != gamma0R:
            raise ValueError("amplitude-damping closed form requires gamma0L == gamma0R")
        return amplitude_damping_populations(p0, config, gamma0L, t)
    rates = channel_rates(channel, config, gamma0L, gamma0R)
    pair = decay_pair(rates, channel.regions)
    if channel is ChannelKind.PHASE_DAMPING:
        return dephasing_populations(p0, pair, t)
    return depolarizing_populations(p0, pair, t)


def stationary_concurrence(channel, config: SpatialConfig) -> float:
    """Long-time concurrence of the distributed state starting from |1m>."""
    channel = ChannelKind.parse(channel)
    l2, lp2 = config.l**2, config.lprime**2
    if channel is ChannelKind.PHASE_DAMPING:
        den = l2**2 + lp2**2
        return min(1.0, 2 * l2 * lp2 / den) if den > 0 else 0.0
    if channel is ChannelKind.DEPOLARIZING:
        den = l2**2 + lp2**2 - l2 * lp2
        if den <= 0:
            return 0.0
        return min(1.0, max(0.0, 3 * l2 * lp2 / (2 * den) - 0.5))
    return 1.0 if abs(1 - xi(config)) <= XI_DEGENERATE_TOL else 0.0
