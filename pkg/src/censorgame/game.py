"""Censor best responses and the distributor-first equilibrium."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .enumeration import MAX_CENSOR_PROTOCOLS, enumerate_distributor_strategies
from .model import (
    CensorAction,
    ConfigError,
    DistributorStrategy,
    Equilibrium,
    Outcome,
    ProtocolMix,
    UtilityParams,
    as_strategy,
)
from .utility import eval_utility


@dataclass(frozen=True)
class BestResponse:
    action: CensorAction
    outcome: Outcome


def compute_outcome(
    mix: ProtocolMix,
    params: UtilityParams,
    strategy: DistributorStrategy | Sequence[int],
    action: CensorAction,
) -> Outcome:
    strategy = as_strategy(strategy, params.quantum)
    strategy.check_for(mix)
    action.check_for(mix)
    t = 0
    f = 0.0
    for p in sorted(action.blocked):
        t += strategy.shares[p]
        f += mix[p].cover_share
    return Outcome(t, f, eval_utility(params, t, f))


def _check_size(mix: ProtocolMix) -> None:
    if len(mix) > MAX_CENSOR_PROTOCOLS:
        raise ConfigError(
            f"{len(mix)} protocols exceeds the exhaustive-search cap of {MAX_CENSOR_PROTOCOLS}"
        )


def _responses(mix, params, strategies, workers=1, backend=None):
    _check_size(mix)
    shares = np.array([s.shares for s in strategies], dtype=np.int64).reshape(-1, len(mix))
    return _kernels.best_responses(shares, mix.covers, params.d, workers=workers, backend=backend)


def censor_best_response(
    mix: ProtocolMix,
    params: UtilityParams,
    strategy: DistributorStrategy | Sequence[int],
) -> BestResponse:
    """Utility-maximizing blocking set over all 2^n subsets.

    Exact ties prefer smaller f, then fewer blocked protocols, then the
    smaller bitmask.
    """
    strategy = as_strategy(strategy, params.quantum)
    strategy.check_for(mix)
    masks, _, _ = _responses(mix, params, [strategy])
    action = CensorAction.from_mask(int(masks[0]))
    return BestResponse(action, compute_outcome(mix, params, strategy, action))


def censor_best_response_separable(
    mix: ProtocolMix,
    params: UtilityParams,
    strategy: DistributorStrategy | Sequence[int],
) -> BestResponse:
    """Per-protocol rule: block p exactly when cover[p] < share[p] / d.

    Only valid for utilities that are monotone in (100 - t) / d + f, which
    holds for every c < 0. Runs in O(n).
    """
    strategy = as_strategy(strategy, params.quantum)
    strategy.check_for(mix)
    blocked = frozenset(
        p for p, (proto, share) in enumerate(zip(mix, strategy.shares))
        if proto.cover_share < share / params.d
    )
    action = CensorAction(blocked)
    return BestResponse(action, compute_outcome(mix, params, strategy, action))


def find_critical_protocols(mix: ProtocolMix, params: UtilityParams) -> set[int]:
    """Protocols the censor would leave open even if they carried all distributor traffic."""
    baseline = eval_utility(params, 0, 0)
    return {p for p, proto in enumerate(mix) if eval_utility(params, 100, proto.cover_share) < baseline}


def _leak(t: int) -> float:
    return 100 - t


def find_equilibrium(
    mix: ProtocolMix,
    params: UtilityParams,
    *,
    leader_utility: Callable[[int], float] | None = None,
    workers: int = 1,
    backend: str | None = None,
) -> Equilibrium:
    """Distributor strategy whose censor best response leaks the most traffic.

    ``leader_utility`` maps the blocked percentage t to the distributor's
    payoff; it defaults to the leak ``100 - t``. Any strictly decreasing
    function selects the same strategy. Equal payoffs prefer a response with
    less collateral f, then the lexicographically greatest share vector.
    """
    strategies = enumerate_distributor_strategies(mix, params.quantum)
    masks, ts, fs = _responses(mix, params, strategies, workers=workers, backend=backend)
    return select_equilibrium(mix, params, strategies, masks, ts, fs, leader_utility)


def select_equilibrium(mix, params, strategies, masks, ts, fs, leader_utility=None) -> Equilibrium:
    """Leader's argmax over precomputed best responses (one entry per strategy)."""
    payoff = leader_utility or _leak
    # strategies come lexicographically descending, so keeping the first of
    # equal (payoff, -f) keys picks the greatest share vector
    best = None
    best_key = None
    for i, (t, f) in enumerate(zip(np.asarray(ts).tolist(), np.asarray(fs).tolist())):
        key = (payoff(t), -f)
        if best_key is None or key > best_key:
            best, best_key = i, key

    strategy = strategies[best]
    action = CensorAction.from_mask(int(masks[best]))
    eq = Equilibrium(strategy, action, compute_outcome(mix, params, strategy, action))

    critical = find_critical_protocols(mix, params)
    if critical:
        top = min(critical)  # canonical order: lowest index has the greatest cover
        expected = tuple(100 if p == top else 0 for p in range(len(mix)))
        assert eq.strategy.shares == expected and not eq.response.blocked, (
            "critical protocol present but the search did not route all traffic over it"
        )
    return eq
