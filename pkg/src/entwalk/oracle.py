"""Brute-force reference engines.

These deliberately avoid the matrix machinery of :mod:`entwalk.network` and
:mod:`entwalk.two_particle`:

* the single-particle oracle sums amplitudes over every up/down path a photon
  can take through the lattice of couplers;
* the pair oracles evolve two identical particles in second quantization,
  where the amplitude for one particle in K and one in L is the permanent
  (bosons) or determinant (fermions) of the 2x2 block of U on rows {K, L}
  and columns {I, J}.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from .distributions import PairDistribution
from .errors import BudgetExceededError, InvalidInputError
from .network import NetworkSpec, _check_rail, as_matrix, coupler_matrix

__all__ = [
    "MAX_ENUMERATION_STEPS",
    "path_amplitude_table",
    "single_particle_path_oracle",
    "permanent2",
    "determinant2",
    "boson_pair_oracle",
    "fermion_pair_oracle",
]

MAX_ENUMERATION_STEPS = 20

_UP, _DOWN = 0, 1  # index into a coupler matrix: 0 = upper rail, 1 = lower rail


def _entry_point(steps: int, rail: int) -> tuple[int, int, int]:
    """(first step, lattice site, side) where a photon on ``rail`` meets its first coupler.

    Step t has couplers at sites -(t-1), -(t-1)+2, ..., t-1. Rails above the
    centre are picked up by the topmost coupler of a later step from its upper
    side, rails below it by the bottommost coupler from its lower side.
    """
    if rail <= steps:
        t0 = steps - rail + 1
        return t0, 1 - t0, _UP
    t0 = rail - steps
    return t0, t0 - 1, _DOWN


def path_amplitude_table(spec: NetworkSpec, input_rail: int) -> dict[int, complex]:
    """Output rail -> amplitude, summed over all coin sequences.

    Summation order is fixed (lexicographic in the path) so results are
    reproducible bit for bit.
    """
    steps = spec.steps
    if steps > MAX_ENUMERATION_STEPS:
        raise BudgetExceededError(
            f"path enumeration limited to {MAX_ENUMERATION_STEPS} steps, got {steps}"
        )
    _check_rail(input_rail, spec.n_rails)
    t0, site0, side0 = _entry_point(steps, input_rail)
    factors = {
        (t, k): coupler_matrix(spec.coupler(t, k)).tolist()
        for t in range(t0, steps + 1)
        for k in range(1, t + 1)
    }
    table = {rail: 0j for rail in range(1, spec.n_rails + 1)}
    for moves in itertools.product((_UP, _DOWN), repeat=steps - t0 + 1):
        amp = 1 + 0j
        site, side = site0, side0
        for t, move in zip(range(t0, steps + 1), moves):
            k = (site + t + 1) // 2
            amp *= factors[(t, k)][move][side]
            if move == _UP:
                # moving up: arrives at the next coupler from below
                site, side = site - 1, _DOWN
            else:
                site, side = site + 1, _UP
        # a walker at site j leaves on rail j+T if it came down, j+T+1 if it came up
        rail = site + steps + (1 if side == _DOWN else 0)
        table[rail] += amp
    return table


def single_particle_path_oracle(spec: NetworkSpec, input_rail: int) -> np.ndarray:
    table = path_amplitude_table(spec, input_rail)
    return np.array([abs(table[r]) ** 2 for r in sorted(table)])


def permanent2(a: complex, b: complex, c: complex, d: complex) -> complex:
    """Permanent of [[a, b], [c, d]]."""
    return a * d + b * c


def determinant2(a: complex, b: complex, c: complex, d: complex) -> complex:
    """Determinant of [[a, b], [c, d]]."""
    return a * d - b * c


def _pair_oracle(u, i: int, j: int, statistics: str) -> PairDistribution:
    m = as_matrix(u)
    n = m.shape[0]
    _check_rail(i, n)
    _check_rail(j, n)
    if i == j:
        raise InvalidInputError(f"input rails must differ, got I = J = {i}")
    col_i = [complex(x) for x in m[:, i - 1]]
    col_j = [complex(x) for x in m[:, j - 1]]
    probs: dict[tuple[int, int], float] = {}
    for k in range(n):
        for l in range(k, n):
            block = (col_i[k], col_j[k], col_i[l], col_j[l])
            if statistics == "boson":
                amp = permanent2(*block)
                if k == l:
                    # |2_K> = (a_K^dag)^2 |0> / sqrt2
                    amp /= math.sqrt(2.0)
            else:
                amp = determinant2(*block)
            probs[(k + 1, l + 1)] = abs(amp) ** 2
    return PairDistribution(probs, "bs-ports", {"inputs": [i, j], "statistics": statistics})


def boson_pair_oracle(u, i: int, j: int) -> PairDistribution:
    return _pair_oracle(u, i, j, "boson")


def fermion_pair_oracle(u, i: int, j: int) -> PairDistribution:
    return _pair_oracle(u, i, j, "fermion")
