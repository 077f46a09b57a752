"""Regrouping of output rails into walker lattice positions.

After T steps the N = 2T output rails collapse onto T+1 sites:

    rail 1            -> -T
    rails 2k, 2k+1    -> -T + 2k      (k = 1..T-1)
    rail 2T           -> +T

Within a two-rail group the lower-numbered rail carries the walker that
arrived moving down (coin D), the higher-numbered one the walker that arrived
moving up (coin U). Probabilities never depend on that labelling.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .distributions import PairDistribution, WalkDistribution
from .errors import InvalidInputError
from .network import CoinState

__all__ = [
    "PositionAxis",
    "port_to_position",
    "port_to_coin_state",
    "regroup_single",
    "regroup_pair",
]


@dataclass(frozen=True)
class PositionAxis:
    steps: int

    def __post_init__(self) -> None:
        if self.steps < 1:
            raise InvalidInputError(f"steps must be >= 1, got {self.steps}")

    @property
    def positions(self) -> tuple[int, ...]:
        return tuple(range(-self.steps, self.steps + 1, 2))

    def __len__(self) -> int:
        return self.steps + 1


def port_to_position(port: int, steps: int) -> int:
    if steps < 1:
        raise InvalidInputError(f"steps must be >= 1, got {steps}")
    if isinstance(port, bool) or not isinstance(port, (int, np.integer)) or not 1 <= port <= 2 * steps:
        raise InvalidInputError(f"port {port!r} out of range 1..{2 * steps}")
    return -steps + 2 * (int(port) // 2)


def port_to_coin_state(port: int, steps: int) -> CoinState:
    position = port_to_position(port, steps)
    # rail = position + T for a down-mover, position + T + 1 for an up-mover
    coin = "D" if port == position + steps else "U"
    return CoinState(position, coin)


def regroup_single(p_bs, steps: int) -> WalkDistribution:
    """Single-particle rail probabilities -> site probabilities."""
    p = np.asarray(p_bs, dtype=float)
    if p.ndim != 1 or p.shape[0] != 2 * steps:
        raise InvalidInputError(f"expected {2 * steps} rail probabilities, got shape {p.shape}")
    probs = dict.fromkeys(PositionAxis(steps).positions, 0.0)
    for port, value in enumerate(p, start=1):
        probs[port_to_position(port, steps)] += float(value)
    return WalkDistribution(steps, probs)


def regroup_pair(dist: PairDistribution, steps: int | None = None) -> PairDistribution:
    """Port-pair distribution -> unordered site-pair distribution."""
    if dist.basis != "bs-ports":
        raise InvalidInputError(f"regroup_pair needs a bs-ports distribution, got basis {dist.basis!r}")
    if steps is None:
        steps = dist.n_ports // 2
    if dist.n_ports != 2 * steps:
        raise InvalidInputError(f"distribution over {dist.n_ports} ports does not fit a {steps}-step walk")
    sites = PositionAxis(steps).positions
    out: dict[tuple[int, int], float] = {
        (a, b): 0.0 for i, a in enumerate(sites) for b in sites[i:]
    }
    for (k, l), value in dist.probs.items():
        j1, j2 = sorted((port_to_position(k, steps), port_to_position(l, steps)))
        out[(j1, j2)] += value
    return PairDistribution(out, "walk-positions", _params(dist.params, steps))


def _params(params: Mapping, steps: int) -> dict:
    merged = dict(params)
    merged.setdefault("steps", steps)
    return merged
