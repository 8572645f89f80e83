"""Domain types for the censor/distributor blocking game.

All percentages are plain floats or ints in the 0-100 range. Distributor
shares are always exact integers; only cover shares and utilities are floats.
"""
from __future__ import annotations

import csv
import io
import logging
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

log = logging.getLogger(__name__)

MIX_HEADER = "protocol,cover_share_percent"
SOFT_PROTOCOL_LIMIT = 20

# Top six protocols of the 2014 US traffic survey, percent of total traffic.
PAPER_MIX_CSV = """protocol,cover_share_percent
YouTube,13.25
HTTP,8.47
BitTorrent,5.03
SSL,2.63
MPEG,2.44
AmazonVideo,2.37
"""

_DECIMAL = re.compile(r"^[+-]?\d+(\.\d+)?$")


class ConfigError(ValueError):
    """Invalid configuration or input data (bad mix file, bad parameters)."""


@dataclass(frozen=True)
class Protocol:
    name: str
    cover_share: float

    def __post_init__(self):
        if not self.name:
            raise ConfigError("protocol name must be nonempty")
        if not (0.0 <= self.cover_share <= 100.0):
            raise ConfigError(
                f"cover_share for {self.name!r} must lie in [0, 100], got {self.cover_share}"
            )


@dataclass(frozen=True)
class ProtocolMix:
    """Protocols in canonical order: cover share descending, then name."""

    protocols: tuple[Protocol, ...]

    def __post_init__(self):
        protos = tuple(self.protocols)
        if not protos:
            raise ConfigError("mix must contain at least one protocol")
        seen = set()
        for p in protos:
            if p.name in seen:
                raise ConfigError(f"duplicate protocol name {p.name!r}")
            seen.add(p.name)
        total = math.fsum(p.cover_share for p in protos)
        if total > 100.0 + 1e-9:
            raise ConfigError(f"cover shares sum to {total:g}, which exceeds 100")
        if len(protos) > SOFT_PROTOCOL_LIMIT:
            log.warning(
                "mix has %d protocols; the censor strategy space is 2^%d",
                len(protos), len(protos),
            )
        protos = tuple(sorted(protos, key=lambda p: (-p.cover_share, p.name)))
        object.__setattr__(self, "protocols", protos)

    def __len__(self):
        return len(self.protocols)

    def __iter__(self):
        return iter(self.protocols)

    def __getitem__(self, i):
        return self.protocols[i]

    @property
    def names(self) -> list[str]:
        return [p.name for p in self.protocols]

    @property
    def covers(self) -> list[float]:
        return [p.cover_share for p in self.protocols]

    @property
    def total_cover(self) -> float:
        return math.fsum(self.covers)


@dataclass(frozen=True)
class UtilityParams:
    """Censor tolerance constants and the distributor quantization step.

    ``c`` scales how fast utility drops with the combined damage term and must
    be negative; ``d`` divides the leaked traffic, so a smaller ``d`` means the
    censor is less tolerant of leaks.
    """

    c: float
    d: float
    quantum: int = 5

    def __post_init__(self):
        if not math.isfinite(self.c) or self.c >= 0:
            raise ConfigError(f"c must be a finite value < 0, got {self.c}")
        if not math.isfinite(self.d) or self.d <= 0:
            raise ConfigError(f"d must be a finite value > 0, got {self.d}")
        if isinstance(self.quantum, bool) or not isinstance(self.quantum, int):
            raise ConfigError(f"quantum must be an integer, got {self.quantum!r}")
        if self.quantum <= 0 or 100 % self.quantum:
            raise ConfigError(f"quantum must be a positive divisor of 100, got {self.quantum}")


@dataclass(frozen=True)
class CensorAction:
    """A set of fully blocked protocols, as indices into the canonical mix."""

    blocked: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        blocked = frozenset(self.blocked)
        if any((not isinstance(i, int)) or i < 0 for i in blocked):
            raise ConfigError(f"blocked indices must be non-negative ints: {sorted(blocked)}")
        object.__setattr__(self, "blocked", blocked)

    @classmethod
    def from_mask(cls, mask: int) -> CensorAction:
        return cls(frozenset(i for i in range(mask.bit_length()) if mask >> i & 1))

    @property
    def mask(self) -> int:
        return sum(1 << i for i in self.blocked)

    def bitstring(self, n: int) -> str:
        """Character ``i`` is ``1`` iff protocol ``i`` is blocked."""
        return "".join("1" if i in self.blocked else "0" for i in range(n))

    def check_for(self, mix: ProtocolMix) -> None:
        bad = [i for i in self.blocked if i >= len(mix)]
        if bad:
            raise ConfigError(f"blocked indices {sorted(bad)} out of range for {len(mix)} protocols")

    def names(self, mix: ProtocolMix) -> list[str]:
        return [mix[i].name for i in sorted(self.blocked)]


@dataclass(frozen=True)
class DistributorStrategy:
    """Integer percentages of distributor traffic per protocol (canonical order)."""

    shares: tuple[int, ...]
    quantum: int = 5

    def __post_init__(self):
        shares = tuple(self.shares)
        for s in shares:
            if isinstance(s, bool) or not isinstance(s, int):
                raise ConfigError(f"shares must be integers, got {shares}")
            if s < 0 or s % self.quantum:
                raise ConfigError(
                    f"shares must be non-negative multiples of {self.quantum}, got {shares}"
                )
        if sum(shares) != 100:
            raise ConfigError(f"shares must sum to 100, got {sum(shares)}")
        if any(a < b for a, b in zip(shares, shares[1:])):
            raise ConfigError(f"shares must be non-increasing in cover order, got {shares}")
        object.__setattr__(self, "shares", shares)

    def __len__(self):
        return len(self.shares)

    def label(self) -> str:
        return "/".join(str(s) for s in self.shares)

    def check_for(self, mix: ProtocolMix) -> None:
        if len(self.shares) != len(mix):
            raise ConfigError(
                f"strategy has {len(self.shares)} shares but the mix has {len(mix)} protocols"
            )


@dataclass(frozen=True)
class Outcome:
    t: int  # distributor traffic blocked, percent
    f: float  # cover traffic blocked, percent of total traffic
    utility: float

    @property
    def leak(self) -> int:
        return 100 - self.t


@dataclass(frozen=True)
class Equilibrium:
    strategy: DistributorStrategy
    response: CensorAction
    outcome: Outcome

    @property
    def leak(self) -> int:
        return self.outcome.leak


def _parse_rows(rows: Iterable[tuple[int, list[str]]]) -> list[Protocol]:
    protocols = []
    names: dict[str, int] = {}
    for lineno, row in rows:
        if len(row) != 2:
            raise ConfigError(f"line {lineno}: expected 2 fields 'name,cover_share', got {len(row)}")
        name, raw = row[0].strip(), row[1].strip()
        if not name:
            raise ConfigError(f"line {lineno}: empty protocol name")
        if name in names:
            raise ConfigError(
                f"line {lineno}: duplicate protocol {name!r} (first seen on line {names[name]})"
            )
        if not _DECIMAL.match(raw):
            raise ConfigError(f"line {lineno}: malformed cover share {raw!r}")
        value = float(raw)
        if not 0.0 <= value <= 100.0:
            raise ConfigError(f"line {lineno}: cover share {raw} out of range [0, 100]")
        names[name] = lineno
        protocols.append(Protocol(name, value))
    return protocols


def load_mix(source: TextIO | str) -> ProtocolMix:
    """Read a mix-CSV stream (or string) into a canonical :class:`ProtocolMix`."""
    if isinstance(source, str):
        source = io.StringIO(source)
    lines = source.read().splitlines()
    if not lines or lines[0].strip().lstrip("\ufeff") != MIX_HEADER:
        raise ConfigError(f"line 1: header must be exactly {MIX_HEADER!r}")
    numbered = [(i + 1, line) for i, line in enumerate(lines) if i > 0 and line.strip()]
    rows = ((no, next(csv.reader([line]))) for no, line in numbered)
    protocols = _parse_rows(rows)
    if not protocols:
        raise ConfigError("line 2: mix has no protocol rows")
    try:
        return ProtocolMix(tuple(protocols))
    except ConfigError as exc:
        raise ConfigError(f"line {len(lines)}: {exc}") from None


def dump_mix(mix: ProtocolMix) -> str:
    buf = io.StringIO()
    buf.write(MIX_HEADER + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    for p in mix:
        writer.writerow([p.name, repr(p.cover_share)])
    return buf.getvalue()


def paper_mix() -> ProtocolMix:
    return load_mix(PAPER_MIX_CSV)


def as_strategy(shares: DistributorStrategy | Sequence[int], quantum: int) -> DistributorStrategy:
    if isinstance(shares, DistributorStrategy):
        return shares
    return DistributorStrategy(tuple(shares), quantum)
