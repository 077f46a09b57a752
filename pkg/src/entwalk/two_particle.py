"""Two photons in a polarization-entangled state walking through the network.

The input (1/sqrt2)(a_I^dag b_J^dag + e^{i phi} a_J^dag b_I^dag)|0>, with a and b
the two polarizations, leaves the network as

    (1/sqrt2) sum_{K,L} psi[K, L] a_K^dag b_L^dag |0>,
    psi[K, L] = Ua[K, I] Ub[L, J] + e^{i phi} Ua[K, J] Ub[L, I].

Detecting without resolving polarization merges (K, L) and (L, K); the
1/sqrt2 of the state supplies the factor 1/2 below. For Ua = Ub, phi = 0 gives
the two-boson walk and phi = pi the two-fermion walk; other phases behave like
anyons with c_i c_j = e^{i phi} c_j c_i.

The same-rail rule (1/2)|psi[K, K]|^2 is used for every phi: the norm of the
output state, (1/2) sum_{K,L} |psi[K, L]|^2, equals 1 for any phase as long as
I != J and both matrices are unitary, so the rule needs no phi-dependent
correction.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .distributions import PairDistribution
from .errors import InvalidInputError
from .network import _check_rail, as_matrix

__all__ = [
    "ExchangePhase",
    "PairAmplitudes",
    "pair_amplitudes",
    "pair_distribution",
    "anyon_sweep",
    "separable_product_distribution",
    "BOSON",
    "FERMION",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ExchangePhase:
    """Exchange phase phi, reduced into [0, 2pi)."""

    phi: float = 0.0

    def __post_init__(self) -> None:
        phi = float(self.phi)
        if not math.isfinite(phi):
            raise InvalidInputError(f"exchange phase must be finite, got {self.phi!r}")
        phi = phi % TWO_PI
        if phi == TWO_PI:  # -tiny % 2pi can round up
            phi = 0.0
        object.__setattr__(self, "phi", phi)

    @classmethod
    def coerce(cls, value) -> "ExchangePhase":
        return value if isinstance(value, cls) else cls(value)

    @property
    def kind(self) -> str:
        if self.phi == 0.0:
            return "boson"
        if self.phi == math.pi:
            return "fermion"
        return "anyon"

    @property
    def factor(self) -> complex:
        """e^{i phi}, exact at the boson and fermion points."""
        if self.phi == 0.0:
            return 1.0 + 0.0j
        if self.phi == math.pi:
            return -1.0 + 0.0j
        return cmath.exp(1j * self.phi)

    def conjugate(self) -> "ExchangePhase":
        return ExchangePhase(-self.phi)


BOSON = ExchangePhase(0.0)
FERMION = ExchangePhase(math.pi)


@dataclass(frozen=True)
class PairAmplitudes:
    """psi[K-1, L-1] for the input rails (I, J) at exchange phase ``phase``."""

    psi: np.ndarray
    inputs: tuple[int, int]
    phase: ExchangePhase

    def __post_init__(self) -> None:
        self.psi.setflags(write=False)

    @property
    def n_rails(self) -> int:
        return self.psi.shape[0]


def _check_pair(n: int, i: int, j: int) -> None:
    _check_rail(i, n)
    _check_rail(j, n)
    if i == j:
        raise InvalidInputError(f"input rails must differ, got I = J = {i}")


def pair_amplitudes(u_a, u_b, i: int, j: int, phi=0.0) -> PairAmplitudes:
    """Output amplitude matrix for the entangled input on rails (i, j).

    ``u_a`` is the transfer matrix seen by the first polarization, ``u_b`` by
    the second; pass the same matrix twice for a polarization-blind device.
    """
    a = as_matrix(u_a)
    b = as_matrix(u_b)
    if a.shape != b.shape:
        raise InvalidInputError(f"polarization matrices differ in shape: {a.shape} vs {b.shape}")
    _check_pair(a.shape[0], i, j)
    phase = ExchangePhase.coerce(phi)
    ai, aj = a[:, i - 1], a[:, j - 1]
    bi, bj = b[:, i - 1], b[:, j - 1]
    psi = np.outer(ai, bj) + phase.factor * np.outer(aj, bi)
    return PairAmplitudes(psi, (i, j), phase)


def pair_distribution(amps: PairAmplitudes) -> PairDistribution:
    """Coincidence probabilities over unordered rail pairs, polarization unresolved."""
    w = np.abs(amps.psi) ** 2
    n = amps.n_rails
    probs: dict[tuple[int, int], float] = {}
    for k in range(n):
        probs[(k + 1, k + 1)] = 0.5 * float(w[k, k])
        for l in range(k + 1, n):
            probs[(k + 1, l + 1)] = 0.5 * (float(w[k, l]) + float(w[l, k]))
    params = {
        "inputs": list(amps.inputs),
        "phi": amps.phase.phi,
        "statistics": amps.phase.kind,
    }
    return PairDistribution(probs, "bs-ports", params)


def anyon_sweep(u, i: int, j: int, phis: Iterable) -> list[PairDistribution]:
    """One port distribution per exchange phase, in the order given."""
    phases = [ExchangePhase.coerce(p) for p in phis]
    if not phases:
        raise InvalidInputError("anyon_sweep needs at least one phase")
    return [pair_distribution(pair_amplitudes(u, u, i, j, p)) for p in phases]


def separable_product_distribution(u, i: int, j: int) -> PairDistribution:
    """Baseline for two distinguishable photons: products of single-particle probabilities."""
    m = as_matrix(u)
    _check_pair(m.shape[0], i, j)
    pi = np.abs(m[:, i - 1]) ** 2
    pj = np.abs(m[:, j - 1]) ** 2
    n = m.shape[0]
    probs: dict[tuple[int, int], float] = {}
    for k in range(n):
        probs[(k + 1, k + 1)] = float(pi[k] * pj[k])
        for l in range(k + 1, n):
            probs[(k + 1, l + 1)] = float(pi[k] * pj[l] + pi[l] * pj[k])
    return PairDistribution(probs, "bs-ports", {"inputs": [i, j], "statistics": "distinguishable"})

