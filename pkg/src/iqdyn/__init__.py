"""Open-system dynamics of two spatially indistinguishable qubits under localized noise."""
from .channels import (ChannelKind, DecayPair, EffectiveRates, channel_rates, decay_pair,
                       evolve_populations, stationary_concurrence, xi)
from .errors import (ForbiddenState, IQDynError, NegativeRate, StepTooLarge, Undefined,
                     UnknownFigure, ZeroProbability)
from .measures import (IndistinguishabilityDegree, bell_diagonal_concurrence, concurrence,
                       config_for_indistinguishability, indistinguishability)
from .oracle import BACKEND, Superoperator, build_generator, integrate, propagator
from .pipeline import (RunConfig, SweepTable, TrajectoryRecord, ValidationReport, run_evolve,
                       run_figure, run_sweep, run_validate)
from .slocc import DistributedState, probability_closed_form, project, project_matrix
from .states import (Basis, BellPopulations, PseudospinState, SpatialConfig, Statistics,
                     populations_to_pseudospin, selection_rule_check)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Basis", "BellPopulations", "ChannelKind", "DecayPair", "DistributedState",
    "EffectiveRates", "ForbiddenState", "IQDynError", "IndistinguishabilityDegree",
    "NegativeRate", "PseudospinState", "RunConfig", "SpatialConfig", "Statistics",
    "StepTooLarge", "Superoperator", "SweepTable", "TrajectoryRecord", "Undefined",
    "UnknownFigure", "ValidationReport", "ZeroProbability", "bell_diagonal_concurrence",
    "build_generator", "channel_rates", "concurrence", "config_for_indistinguishability",
    "decay_pair", "evolve_populations", "indistinguishability", "integrate",
    "populations_to_pseudospin", "probability_closed_form", "project", "project_matrix",
    "propagator", "run_evolve", "run_figure", "run_sweep", "run_validate",
    "selection_rule_check", "stationary_concurrence", "xi",
]
