"""Censor and distributor strategy spaces."""
from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Sequence

from .model import CensorAction, ConfigError, DistributorStrategy, ProtocolMix

MAX_CENSOR_PROTOCOLS = 20


def enumerate_censor_actions(mix: ProtocolMix) -> list[CensorAction]:
    """Every subset of protocols, by ascending bitmask over canonical indices."""
    n = len(mix)
    if n > MAX_CENSOR_PROTOCOLS:
        raise ConfigError(
            f"{n} protocols gives 2^{n} censor actions; at most {MAX_CENSOR_PROTOCOLS} supported"
        )
    return [CensorAction.from_mask(m) for m in range(1 << n)]


def is_cover_aligned(shares: Sequence[int], mix: ProtocolMix | None = None) -> bool:
    """True iff no protocol carries more traffic than one with more cover.

    Shares are indexed in canonical order, so only neighbouring positions need
    comparing; raw cover values are never consulted.
    """
    if mix is not None and len(shares) != len(mix):
        raise ConfigError(f"{len(shares)} shares for {len(mix)} protocols")
    return all(a >= b for a, b in zip(shares, shares[1:]))


def _partitions(units: int, parts: int, largest: int) -> Iterator[tuple[int, ...]]:
    # non-increasing tuples of exactly `parts` entries, each <= largest, summing to units;
    # yields in lexicographically descending order
    if parts == 0:
        if units == 0:
            yield ()
        return
    for first in range(min(units, largest), -1, -1):
        if first * parts < units:
            break
        for rest in _partitions(units - first, parts - 1, first):
            yield (first, *rest)


def _check_quantum(quantum: int) -> None:
    if isinstance(quantum, bool) or not isinstance(quantum, int) or quantum <= 0 or 100 % quantum:
        raise ConfigError(f"quantum must be a positive divisor of 100, got {quantum!r}")


def enumerate_distributor_strategies(mix: ProtocolMix | int, quantum: int) -> list[DistributorStrategy]:
    """All cover-aligned quantized distributions, most skewed first."""
    _check_quantum(quantum)
    n = mix if isinstance(mix, int) else len(mix)
    units = 100 // quantum
    return [
        DistributorStrategy(tuple(u * quantum for u in p), quantum)
        for p in _partitions(units, n, units)
    ]


def count_distributor_strategies(n: int, quantum: int) -> int:
    """Partitions of 100/quantum into at most n parts, by recurrence."""
    _check_quantum(quantum)
    if n < 1:
        raise ConfigError(f"need at least one protocol, got {n}")
    units = 100 // quantum
    return _partition_count(units, min(n, units))


@lru_cache(maxsize=None)
def _partition_count(m: int, k: int) -> int:
    # p(m, k) = p(m, k-1) + p(m-k, k): either no part equals k, or remove one column of k
    if m == 0:
        return 1
    if m < 0 or k == 0:
        return 0
    return _partition_count(m, k - 1) + _partition_count(m - k, k)
