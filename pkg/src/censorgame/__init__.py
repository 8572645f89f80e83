"""Censor/distributor blocking game: best responses, equilibrium, figures."""
from .model import (
    CensorAction,
    ConfigError,
    DistributorStrategy,
    Equilibrium,
    Outcome,
    Protocol,
    ProtocolMix,
    UtilityParams,
    dump_mix,
    load_mix,
    paper_mix,
)
from .utility import CurveSpec, eval_utility, utility_curve
from .enumeration import (
    count_distributor_strategies,
    enumerate_censor_actions,
    enumerate_distributor_strategies,
    is_cover_aligned,
)
from .game import (
    BestResponse,
    censor_best_response,
    censor_best_response_separable,
    compute_outcome,
    find_critical_protocols,
    find_equilibrium,
)

__version__ = "0.1.0"
