"""Run configurations, trajectories, sweeps, self-validation and figure data.

Times are dimensionless (gamma0 * t) with gamma0 = 1; ``gamma0L``/``gamma0R``
are multiples of that unit.
"""
from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import oracle
from .channels import ChannelKind, channel_rates, evolve_populations, stationary_concurrence, xi
from .errors import ForbiddenState, IQDynError, UnknownFigure, ZeroProbability
from .measures import (bell_diagonal_concurrence, concurrence, config_for_indistinguishability,
                       indistinguishability)
from .slocc import probability_closed_form, project, project_matrix
from .states import (Basis, BellPopulations, SpatialConfig, Statistics, canonical_label,
                     populations_to_pseudospin, selection_rule_check)

log = logging.getLogger(__name__)

VALIDATION_TOL = 1e-8
VALIDATION_TIMES = (0.1, 0.5, 1.0, 2.0, 5.0)
CRITICAL_THRESHOLD = 1e-5
CRITICAL_STEP = 1e-3

METHODS = ("closed_form", "rk4", "expm")


def fmt(x) -> str:
    return format(float(x), ".17g")


def _population_columns(basis: Basis) -> list:
    return ["p_" + {"1m": "1m", "1p": "1p", "2p": "2p", "2m": "2m", "2": "2", "0": "0"}[u]
            for u in basis.labels]


def write_csv(path, header, rows, metadata=None):
    """Write ``# key: value`` metadata lines, a header row and 17-digit rows with LF endings."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# {k}: {v}" for k, v in (metadata or {}).items()]
    lines.append(",".join(header))
    lines.extend(",".join(fmt(x) for x in row) for row in rows)
    with open(path, "w", newline="\n", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def read_csv(path):
    """Inverse of ``write_csv``: (metadata dict, header list, float array)."""
    meta, header, rows = {}, None, []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.strip()
        elif header is None:
            header = line.split(",")
        elif line:
            rows.append([float(x) for x in line.split(",")])
    return meta, header, np.array(rows, dtype=float).reshape(-1, len(header or []))


@dataclass
class RunConfig:
    channel: ChannelKind
    spatial: SpatialConfig
    initial_state: BellPopulations
    t_max: float
    samples: int = 201
    gamma0L: float = 1.0
    gamma0R: float = 1.0
    dt_oracle: float = 1e-3
    method: str = "closed_form"
    output_path: str | None = None
    target_indistinguishability: float | None = None

    def __post_init__(self):
        self.channel = ChannelKind.parse(self.channel)
        if self.samples < 2:
            raise ValueError(f"samples must be >= 2, got {self.samples}")
        if not self.t_max > 0:
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.initial_state.basis is not self.channel.basis:
            raise ValueError(f"initial state must be given in the {self.channel.basis.name.lower()} "
                             f"basis {self.channel.basis.labels} for {self.channel.value}")
        if self.channel is ChannelKind.DEPOLARIZING and self.gamma0R != 0:
            raise ValueError("depolarizing noise acts at L only; gamma0R must be 0")
        if self.channel is ChannelKind.AMPLITUDE_DAMPING and self.gamma0L != self.gamma0R:
            raise ValueError("amplitude damping requires gamma0L == gamma0R")
        selection_rule_check(self.spatial, self.initial_state)

    @property
    def statistics(self) -> Statistics:
        return self.spatial.statistics

    @property
    def theta(self) -> float:
        return self.spatial.theta

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        """Build from a flat key/value mapping (e.g. a parsed TOML file)."""
        data = dict(data)
        channel = ChannelKind.parse(data.pop("channel"))
        statistics = Statistics.parse(data.pop("statistics", "fermion"))
        theta = float(data.pop("theta", 0.0))
        target = data.pop("indistinguishability", None)
        if target is not None:
            target = float(target)
            spatial = config_for_indistinguishability(target, statistics, theta)
            for key in ("l", "r", "lprime", "rprime", "l2"):
                if key in data:
                    raise ValueError(f"give either indistinguishability or {key}, not both")
        elif "l2" in data:
            spatial = SpatialConfig.from_l_squared(float(data.pop("l2")), theta, statistics)
        else:
            l, lp = float(data.pop("l")), float(data.pop("lprime"))
            r = data.pop("r", None)
            rp = data.pop("rprime", None)
            if r is None or rp is None:
                spatial = SpatialConfig.from_l(l, lp, theta, statistics)
            else:
                spatial = SpatialConfig(l, float(r), lp, float(rp), theta, statistics)

        initial = data.pop("initial_state", "one_minus")
        if isinstance(initial, str):
            label = canonical_label(initial)
            if label not in channel.basis.labels:
                raise ValueError(f"initial state {initial!r} is not in the {channel.value} basis "
                                 f"{channel.basis.labels}")
            initial = BellPopulations(channel.basis, [float(u == label) for u in channel.basis.labels])
        else:
            initial = BellPopulations(channel.basis, [float(x) for x in initial])

        gamma0L = float(data.pop("gamma0L", 1.0))
        default_r = 0.0 if channel is ChannelKind.DEPOLARIZING else gamma0L
        kwargs = dict(
            channel=channel,
            spatial=spatial,
            initial_state=initial,
            t_max=float(data.pop("t_max")),
            samples=int(data.pop("samples", 201)),
            gamma0L=gamma0L,
            gamma0R=float(data.pop("gamma0R", default_r)),
            dt_oracle=float(data.pop("dt_oracle", 1e-3)),
            method=str(data.pop("method", "closed_form")),
            output_path=data.pop("output_path", data.pop("output", None)),
            target_indistinguishability=target,
        )
        if data:
            raise ValueError(f"unknown configuration keys: {sorted(data)}")
        return cls(**kwargs)


@dataclass
class TrajectoryRecord:
    basis: Basis
    t: np.ndarray
    populations: np.ndarray
    p_lr: np.ndarray
    concurrence: np.ndarray
    indistinguishability: float
    metadata: dict = field(default_factory=dict)

    @property
    def header(self) -> list:
        return ["t", *_population_columns(self.basis), "P_LR", "C", "I"]

    def rows(self):
        for k in range(len(self.t)):
            yield (self.t[k], *self.populations[k], self.p_lr[k], self.concurrence[k],
                   self.indistinguishability)

    def to_csv(self, path):
        return write_csv(path, self.header, self.rows(), self.metadata)


def _context(t: float, config: RunConfig) -> str:
    s = config.spatial
    return (f"at t={float(t)!r} ({config.channel.value}, {s.statistics.value}, "
            f"l={float(s.l)!r}, l'={float(s.lprime)!r}, theta={float(s.theta)!r})")


def _metadata(config: RunConfig, indist: float) -> dict:
    s = config.spatial
    meta = {
        "channel": config.channel.value,
        "statistics": s.statistics.value,
        "theta": fmt(s.theta),
        "l": fmt(s.l), "r": fmt(s.r), "lprime": fmt(s.lprime), "rprime": fmt(s.rprime),
        "l2": fmt(s.l**2),
        "I": fmt(indist),
        "gamma0L": fmt(config.gamma0L), "gamma0R": fmt(config.gamma0R),
        "initial_state": " ".join(f"{u}={fmt(p)}" for u, p in config.initial_state.as_dict().items()),
        "method": config.method,
    }
    if config.target_indistinguishability is not None:
        meta["target_I"] = fmt(config.target_indistinguishability)
    return meta


def run_evolve(config: RunConfig, write: bool = True) -> TrajectoryRecord:
    """Closed-form (or oracle) populations -> sLOCC projection -> concurrence on a time grid."""
    times = np.linspace(0.0, config.t_max, config.samples)
    indist = indistinguishability(config.spatial).value
    pops = np.empty((len(times), 4))
    p_lr = np.empty(len(times))
    conc = np.empty(len(times))

    if config.method != "closed_form":
        rates = channel_rates(config.channel, config.spatial, config.gamma0L, config.gamma0R)
        gen = oracle.build_generator(config.channel, rates)
        rho = populations_to_pseudospin(config.initial_state)
        t_prev = 0.0

    for k, t in enumerate(times):
        try:
            if config.method == "closed_form":
                p = evolve_populations(config.channel, config.initial_state, config.spatial, t,
                                       config.gamma0L, config.gamma0R)
                dist = project(p, config.spatial)
                pops[k] = p.p
            else:
                dt = t - t_prev
                if dt > 0:
                    if config.method == "rk4":
                        rho = oracle.integrate(gen, rho, dt, min(config.dt_oracle, dt))
                    else:
                        rho = oracle.expm_propagate(gen, rho, dt)
                t_prev = t
                dist = project_matrix(rho, config.spatial)
                pops[k] = rho.populations(config.channel.basis)
        except ForbiddenState as exc:
            raise ForbiddenState(exc.label, exc.norm, _context(t, config)) from exc
        except ZeroProbability as exc:
            raise ZeroProbability(f"{exc} {_context(t, config)}") from exc
        p_lr[k] = dist.probability
        conc[k] = concurrence(dist)

    record = TrajectoryRecord(config.channel.basis, times, pops, p_lr, conc, indist,
                              _metadata(config, indist))
    if write and config.output_path:
        record.to_csv(config.output_path)
    return record


@dataclass
class SweepTable:
    channel: ChannelKind
    time: str
    rows: list  # (I, l2, C, P_LR)
    metadata: dict = field(default_factory=dict)

    header = ["I", "l2", "C", "P_LR"]

    def column(self, name: str) -> np.ndarray:
        return np.array([row[self.header.index(name)] for row in self.rows])

    def to_csv(self, path):
        return write_csv(path, self.header, self.rows, self.metadata)


@functools.lru_cache(maxsize=8)
def critical_time(step: float = CRITICAL_STEP, threshold: float = CRITICAL_THRESHOLD,
                  t_limit: float = 100.0) -> float:
    """First grid time where the distinguishable (I = 0) amplitude-damping concurrence
    from |1m> drops below ``threshold``."""
    config = SpatialConfig.from_l_squared(1.0, math.pi / 2, Statistics.FERMION)
    p0 = BellPopulations(Basis.DISSIPATIVE, [1.0, 0, 0, 0])
    n = int(round(t_limit / step))
    for k in range(n + 1):
        t = k * step
        p = evolve_populations(ChannelKind.AMPLITUDE_DAMPING, p0, config, t)
        if concurrence(project(p, config)) < threshold:
            return t
    raise RuntimeError(f"concurrence stays above {threshold} up to t={t_limit}")


def run_sweep(channel, statistics, theta: float, grid, t="stationary") -> SweepTable:
    """Concurrence and P_LR versus indistinguishability on the l = r' branch, from |1m>.

    ``t`` is a time, ``"stationary"`` (closed-form long-time concurrence) or
    ``"critical"`` (the amplitude-damping critical time).
    """
    channel = ChannelKind.parse(channel)
    statistics = Statistics.parse(statistics)
    if t == "critical":
        t_eval = critical_time()
    elif t == "stationary":
        t_eval = math.inf
    else:
        t_eval = float(t)
    p0 = BellPopulations(channel.basis, BellPopulations.pure("1m").p)
    rows = []
    for target in grid:
        target = float(target)
        if not 0 <= target <= 1:
            raise ValueError(f"grid value {target} outside [0, 1]")
        config = config_for_indistinguishability(target, statistics, theta)
        try:
            p = evolve_populations(channel, p0, config, t_eval)
            dist = project(p, config)
        except ForbiddenState as exc:
            raise ForbiddenState(exc.label, exc.norm, f"at I={target!r}") from exc
        except ZeroProbability as exc:
            raise ZeroProbability(f"{exc} at I={target!r}, t={float(t_eval)!r}") from exc
        if t == "stationary":
            c = stationary_concurrence(channel, config)
        else:
            c = concurrence(dist)
        rows.append((indistinguishability(config).value, config.l**2, c, dist.probability))
    meta = {"channel": channel.value, "statistics": statistics.value, "theta": fmt(theta),
            "time": t if isinstance(t, str) else fmt(t)}
    if t == "critical":
        meta["tau"] = fmt(t_eval)
    return SweepTable(channel, str(t), rows, meta)


# -- self-validation ---------------------------------------------------------

@dataclass
class ValidationCase:
    index: int
    channel: ChannelKind
    config: SpatialConfig
    label: str
    gamma0L: float
    gamma0R: float
    population_deviation: float = 0.0
    rk4_expm_deviation: float = 0.0
    probability_deviation: float = 0.0
    concurrence_law_deviation: float | None = None
    error: str | None = None

    def worst(self) -> float:
        devs = [self.population_deviation, self.rk4_expm_deviation, self.probability_deviation]
        if self.concurrence_law_deviation is not None:
            devs.append(self.concurrence_law_deviation)
        return max(devs)


@dataclass
class ValidationReport:
    seed: int
    cases: list
    tol: float = VALIDATION_TOL

    @property
    def max_population_deviation(self) -> float:
        return max((c.population_deviation for c in self.cases), default=0.0)

    @property
    def max_probability_deviation(self) -> float:
        return max((c.probability_deviation for c in self.cases), default=0.0)

    @property
    def failures(self) -> list:
        return [c for c in self.cases if c.error or c.worst() > self.tol]

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        lines = [f"seed={self.seed} cases={len(self.cases)} tol={self.tol:g}"]
        for c in self.cases:
            law = "" if c.concurrence_law_deviation is None else f" law={c.concurrence_law_deviation:.2e}"
            status = "FAIL" if (c.error or c.worst() > self.tol) else "ok"
            lines.append(
                f"  [{status}] #{c.index} {c.channel.value:<17} {c.config.statistics.value:<7} "
                f"l={c.config.l:.4f} l'={c.config.lprime:.4f} theta={c.config.theta:.4f} |{c.label}> "
                f"pop={c.population_deviation:.2e} rk4/expm={c.rk4_expm_deviation:.2e} "
                f"P_LR={c.probability_deviation:.2e}{law}" + (f" error: {c.error}" if c.error else ""))
        lines.append(f"max population deviation: {self.max_population_deviation:.3e}")
        lines.append(f"max probability deviation: {self.max_probability_deviation:.3e}")
        lines.append("PASS" if self.passed else f"FAIL ({len(self.failures)} case(s))")
        return "\n".join(lines)


def _random_case(rng, index, channel=None, target=None, label=None):
    channel = ChannelKind.parse(channel) if channel is not None else \
        list(ChannelKind)[rng.integers(len(ChannelKind))]
    statistics = Statistics.BOSON if rng.integers(2) else Statistics.FERMION
    theta = float(rng.uniform(0, 2 * math.pi))
    for _ in range(1000):
        if target is not None:
            config = config_for_indistinguishability(target, statistics, theta)
        else:
            l, lp = rng.uniform(0, 1, 2)
            config = SpatialConfig.from_l(float(l), float(lp), theta, statistics)
        lab = label if label is not None else channel.basis.labels[rng.integers(4)]
        pops = BellPopulations(channel.basis, [float(u == lab) for u in channel.basis.labels])
        try:
            selection_rule_check(config, pops)
            selection_rule_check(config, BellPopulations(channel.basis, [1.0, 0, 0, 0]))
            probability_closed_form(channel, config, 1.0, 0.0)
        except (ForbiddenState, ZeroProbability):
            if target is not None:
                theta = float(rng.uniform(0, 2 * math.pi))
                config = None
            continue
        break
    else:
        raise RuntimeError("could not draw an admissible configuration")
    if channel is ChannelKind.PHASE_DAMPING:
        g0l, g0r = (float(x) for x in rng.uniform(0.5, 2.0, 2))
    elif channel is ChannelKind.DEPOLARIZING:
        g0l, g0r = float(rng.uniform(0.5, 2.0)), 0.0
    else:
        g0l = g0r = float(rng.uniform(0.5, 2.0))
    return ValidationCase(index, channel, config, lab, g0l, g0r)


def _check_case(case: ValidationCase, times=VALIDATION_TIMES) -> ValidationCase:
    channel, config = case.channel, case.config
    p0 = BellPopulations(channel.basis, [float(u == case.label) for u in channel.basis.labels])
    rates = channel_rates(channel, config, case.gamma0L, case.gamma0R)
    gen = oracle.build_generator(channel, rates)
    g0 = max(case.gamma0L, case.gamma0R)
    rho_rk4 = populations_to_pseudospin(p0)
    t_prev = 0.0
    dt = oracle.default_dt(gen)
    for tau in times:
        t = tau / g0
        closed = evolve_populations(channel, p0, config, t, case.gamma0L, case.gamma0R).p
        rho_rk4 = oracle.integrate(gen, rho_rk4, t - t_prev, min(dt, t - t_prev))
        t_prev = t
        rho_exp = oracle.expm_propagate(gen, populations_to_pseudospin(p0), t)
        a = rho_rk4.populations(channel.basis)
        b = rho_exp.populations(channel.basis)
        case.population_deviation = max(case.population_deviation,
                                         float(np.max(np.abs(a - closed))),
                                         float(np.max(np.abs(b - closed))))
        case.rk4_expm_deviation = max(case.rk4_expm_deviation,
                                      float(np.max(np.abs(rho_rk4.matrix - rho_exp.matrix))))

    # sLOCC probability from |1m> with equal base rates
    start = BellPopulations(channel.basis, [1.0, 0, 0, 0])
    gl, gr = (1.0, 0.0) if channel is ChannelKind.DEPOLARIZING else (1.0, 1.0)
    for t in times:
        p = evolve_populations(channel, start, config, t, gl, gr)
        dev = abs(project(p, config).probability - probability_closed_form(channel, config, 1.0, t))
        case.probability_deviation = max(case.probability_deviation, dev)
        if channel is ChannelKind.PHASE_DAMPING and indistinguishability(config).value == 0:
            law = abs(concurrence(project(p, config)) - math.exp(-t))
            law = max(law, abs(bell_diagonal_concurrence(p) - math.exp(-t)))
            case.concurrence_law_deviation = max(case.concurrence_law_deviation or 0.0, law)
    return case


def run_validate(seed: int = 0, cases: int = 10, channel=None, indistinguishability_target=None,
                 initial_state=None) -> ValidationReport:
    """Closed forms vs the Lindblad oracle, and projected P_LR vs its closed form.

    Deterministic for a given seed. ``channel``, ``indistinguishability_target``
    and ``initial_state`` pin the corresponding random draw.
    """
    if cases < 1:
        raise ValueError("cases must be >= 1")
    rng = np.random.default_rng(seed)
    label = canonical_label(initial_state) if initial_state is not None else None
    out = []
    for k in range(cases):
        case = _random_case(rng, k, channel, indistinguishability_target, label)
        try:
            _check_case(case)
        except IQDynError as exc:
            case.error = str(exc)
        out.append(case)
    return ValidationReport(seed, out)


# -- figure data -------------------------------------------------------------

FIGURE_I = (0.0, 0.5, 0.75, 1.0)
SWEEP_GRID = tuple(np.round(np.linspace(0, 1, 101), 12))

# (channel, t_max) of the time-resolved panels
_CURVE_PANELS = {
    "2a": (ChannelKind.PHASE_DAMPING, 10.0),
    "3a": (ChannelKind.DEPOLARIZING, 10.0),
    "4a": (ChannelKind.AMPLITUDE_DAMPING, 15.0),
}
_SWEEP_PANELS = {
    "2b": (ChannelKind.PHASE_DAMPING, "stationary"),
    "3b": (ChannelKind.DEPOLARIZING, "stationary"),
    "4b": (ChannelKind.AMPLITUDE_DAMPING, "critical"),
}
_PROBABILITY_PANELS = {
    "a": (ChannelKind.PHASE_DAMPING, 10.0),
    "b": (ChannelKind.DEPOLARIZING, 10.0),
    "c": (ChannelKind.AMPLITUDE_DAMPING, 15.0),
}
FIGURES = ("2a", "2b", "3a", "3b", "4a", "4b", "A1", "A2")
CURVE_SAMPLES_PER_UNIT = 50


def figure_theta(channel: ChannelKind, statistics: Statistics) -> float:
    if channel is ChannelKind.AMPLITUDE_DAMPING:
        return math.pi / 2
    return math.pi if statistics is Statistics.BOSON else 0.0


def _label(value: float) -> str:
    return f"{value:g}".replace(".", "p")


def _curve(channel, statistics, target, t_max, path) -> TrajectoryRecord:
    theta = figure_theta(channel, statistics)
    config = RunConfig(
        channel=channel,
        spatial=config_for_indistinguishability(target, statistics, theta),
        initial_state=BellPopulations(channel.basis, [1.0, 0, 0, 0]),
        t_max=t_max,
        samples=int(t_max * CURVE_SAMPLES_PER_UNIT) + 1,
        gamma0R=0.0 if channel is ChannelKind.DEPOLARIZING else 1.0,
        output_path=str(path),
        target_indistinguishability=target,
    )
    return run_evolve(config)


def run_figure(figure_id: str, out_dir=".") -> list:
    """Write the CSV data behind one figure; returns the written paths."""
    fid = str(figure_id).strip()
    fid = fid.upper() if fid.lower().startswith("a") else fid.lower()
    if fid not in FIGURES:
        raise UnknownFigure(f"unknown figure {figure_id!r}; expected one of {', '.join(FIGURES)}")
    out_dir = Path(out_dir)
    paths = []
    if fid in _CURVE_PANELS:
        channel, t_max = _CURVE_PANELS[fid]
        for statistics in (Statistics.FERMION, Statistics.BOSON):
            for target in FIGURE_I:
                path = out_dir / f"fig{fid}_{statistics.value}_I{_label(target)}.csv"
                _curve(channel, statistics, target, t_max, path)
                paths.append(path)
    elif fid in _SWEEP_PANELS:
        channel, when = _SWEEP_PANELS[fid]
        for statistics in (Statistics.FERMION, Statistics.BOSON):
            table = run_sweep(channel, statistics, figure_theta(channel, statistics), SWEEP_GRID, when)
            path = out_dir / f"fig{fid}_{statistics.value}.csv"
            table.to_csv(path)
            paths.append(path)
    else:
        statistics = Statistics.FERMION if fid == "A1" else Statistics.BOSON
        for panel, (channel, t_max) in _PROBABILITY_PANELS.items():
            for target in FIGURE_I:
                path = out_dir / f"fig{fid}{panel}_{statistics.value}_I{_label(target)}.csv"
                _curve(channel, statistics, target, t_max, path)
                paths.append(path)
    return paths
