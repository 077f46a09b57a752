"""Comparison of probability distributions."""
from __future__ import annotations

import math
from typing import Mapping

import numpy as np

from .distributions import PairDistribution, WalkDistribution
from .errors import InvalidInputError

__all__ = ["similarity", "max_abs_difference", "aligned"]


def _flatten(d) -> tuple[tuple | None, np.ndarray]:
    if isinstance(d, (PairDistribution, WalkDistribution)):
        return tuple(d.probs), d.as_array()
    if isinstance(d, Mapping):
        items = sorted(d.items())
        return tuple(k for k, _ in items), np.array([float(v) for _, v in items])
    arr = np.asarray(d, dtype=float)
    return None, arr.ravel()


def aligned(d1, d2) -> tuple[np.ndarray, np.ndarray]:
    """Both distributions as flat arrays over the same index set."""
    k1, a1 = _flatten(d1)
    k2, a2 = _flatten(d2)
    if k1 is not None and k2 is not None:
        if k1 != k2:
            raise InvalidInputError("distributions are defined over different index sets")
    elif k1 is None and k2 is None:
        if np.shape(d1) != np.shape(d2):
            raise InvalidInputError(f"shape mismatch: {np.shape(d1)} vs {np.shape(d2)}")
    elif a1.shape != a2.shape:
        raise InvalidInputError(f"size mismatch: {a1.size} vs {a2.size}")
    if isinstance(d1, PairDistribution) and isinstance(d2, PairDistribution) and d1.basis != d2.basis:
        raise InvalidInputError(f"basis mismatch: {d1.basis} vs {d2.basis}")
    return a1, a2


def similarity(d1, d2) -> float:
    """(sum sqrt(D D'))^2 / (sum D sum D').

    Accepts arrays, mappings or distribution objects; neither argument needs to
    be normalized. Pair distributions are compared over their flat list of
    unordered pairs, each diagonal entry counted once.
    """
    a, b = aligned(d1, d2)
    if np.any(a < 0) or np.any(b < 0) or not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise InvalidInputError("distributions must be finite and non-negative")
    ta, tb = math.fsum(a), math.fsum(b)
    if ta <= 0 or tb <= 0:
        raise InvalidInputError("distributions must have positive total mass")
    overlap = math.fsum(np.sqrt(a * b))
    return min(1.0, overlap * overlap / (ta * tb))


def max_abs_difference(d1, d2) -> float:
    a, b = aligned(d1, d2)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b)))
