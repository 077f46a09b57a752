"""Probability containers for one- and two-particle outputs."""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import InvalidInputError

__all__ = ["WalkDistribution", "PairDistribution", "BASES"]

BASES = ("bs-ports", "walk-positions")


@dataclass(frozen=True)
class WalkDistribution:
    """Single walker probability over lattice sites -T, -T+2, ..., T."""

    steps: int
    probs: Mapping[int, float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "probs", MappingProxyType(dict(sorted(self.probs.items()))))

    @property
    def positions(self) -> tuple[int, ...]:
        return tuple(self.probs)

    @property
    def total(self) -> float:
        return float(sum(self.probs.values()))

    def as_array(self) -> np.ndarray:
        return np.fromiter(self.probs.values(), dtype=float, count=len(self.probs))


@dataclass(frozen=True)
class PairDistribution:
    """Probability over unordered output pairs {K, L}, stored with K <= L.

    Keys are rail numbers for basis ``"bs-ports"`` and lattice sites for
    ``"walk-positions"``. Entries are kept in lexicographic key order, zeros
    included, so two distributions over the same index set align entry by entry.
    """

    probs: Mapping[tuple[int, int], float]
    basis: str = "bs-ports"
    params: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.basis not in BASES:
            raise InvalidInputError(f"basis must be one of {BASES}, got {self.basis!r}")
        for k, l in self.probs:
            if k > l:
                raise InvalidInputError(f"pair key {(k, l)} must be ordered with K <= L")
        object.__setattr__(self, "probs", MappingProxyType(dict(sorted(self.probs.items()))))
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))

    @property
    def labels(self) -> tuple[int, ...]:
        """Sorted single-site index set the pairs are drawn from."""
        return tuple(sorted({i for kl in self.probs for i in kl}))

    @property
    def n_ports(self) -> int:
        if self.basis != "bs-ports":
            raise InvalidInputError("n_ports is only defined for bs-ports distributions")
        return max(self.labels)

    @property
    def total(self) -> float:
        return float(sum(self.probs.values()))

    def __getitem__(self, key: tuple[int, int]) -> float:
        k, l = key
        return self.probs[(min(k, l), max(k, l))]

    def diagonal(self) -> dict[int, float]:
        return {k: p for (k, l), p in self.probs.items() if k == l}

    def diagonal_mass(self) -> float:
        return float(sum(self.diagonal().values()))

    def as_array(self) -> np.ndarray:
        """Flat vector of probabilities in key order."""
        return np.fromiter(self.probs.values(), dtype=float, count=len(self.probs))

    def matrix(self) -> np.ndarray:
        """Upper-triangular matrix over ``labels`` (the layout of a pair histogram)."""
        labels = self.labels
        index = {v: i for i, v in enumerate(labels)}
        m = np.zeros((len(labels), len(labels)))
        for (k, l), p in self.probs.items():
            m[index[k], index[l]] = p
        return m
