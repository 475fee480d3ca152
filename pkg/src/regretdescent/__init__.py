"""(0.5 + delta)-approximate Nash equilibria of polymatrix games by descent on max regret."""

from .game import (
    Edge,
    NormalizationRecord,
    PolymatrixGame,
    Violation,
    as_profile,
    normalize,
    payoff,
    payoff_against,
    payoff_extremes,
    payoff_vector,
    random_profile,
    uniform_profile,
    validate,
)
from .regret import RegretReport, regret_report
from .descent import DescentConfig, SolveResult, solve
from .bayesian import BayesianGame, bayesian_regret, reduce_to_polymatrix, rescale_bayesian
from .generators import generate_bayesian, generate_polymatrix
from .verify import verify_bayesian, verify_epsilon_ne

__all__ = [
    "BayesianGame",
    "DescentConfig",
    "Edge",
    "NormalizationRecord",
    "PolymatrixGame",
    "RegretReport",
    "SolveResult",
    "Violation",
    "as_profile",
    "bayesian_regret",
    "generate_bayesian",
    "generate_polymatrix",
    "normalize",
    "payoff",
    "payoff_against",
    "payoff_extremes",
    "payoff_vector",
    "random_profile",
    "reduce_to_polymatrix",
    "regret_report",
    "rescale_bayesian",
    "solve",
    "uniform_profile",
    "validate",
    "verify_bayesian",
    "verify_epsilon_ne",
]
