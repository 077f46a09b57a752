"""Beam-splitter pyramid networks and their single-particle mode unitaries.

A T-step network has N = 2T rails, numbered 1..N from top to bottom. Step t
holds t couplers; coupler k of step t acts on rails (T-t+2k-1, T-t+2k), so the
pyramid opens out from the two central rails (T, T+1).

Each coupler acts on the amplitude pair (upper rail, lower rail) as

    [[ sqrt(1-c),              -sqrt(c) e^{-i phase} ],
     [ sqrt(c) e^{i phase},     sqrt(1-c)            ]]

which for c = 1/2, phase = 0 is (1/sqrt2) [[1, -1], [1, 1]]: the balanced
splitter whose two-rail action is the Hadamard coin followed by a shift.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import InvalidInputError, InvalidSpecError

__all__ = [
    "CouplerSpec",
    "NetworkSpec",
    "ModeUnitary",
    "CoinState",
    "BALANCED",
    "coupler_matrix",
    "coupler_rails",
    "layer_unitary",
    "build_network_unitary",
    "single_particle_distribution",
    "verify_unitarity",
    "central_rails",
]

# max-norm of M^dagger M - I accepted for a single coupler
COUPLER_UNITARITY_TOL = 1e-14


@dataclass(frozen=True)
class CouplerSpec:
    """A lossless two-rail directional coupler.

    ``cross_coupling`` is the power fraction transferred to the other rail,
    ``phase`` the relative phase (radians) carried by the cross terms.
    """

    cross_coupling: float = 0.5
    phase: float = 0.0

    def __post_init__(self) -> None:
        c = self.cross_coupling
        if not isinstance(c, (int, float)) or isinstance(c, bool) or not math.isfinite(c):
            raise InvalidSpecError(f"cross_coupling must be a finite real, got {c!r}")
        if not 0.0 <= c <= 1.0:
            raise InvalidSpecError(f"cross_coupling must lie in [0, 1], got {c!r}")
        if not math.isfinite(self.phase):
            raise InvalidSpecError(f"phase must be finite, got {self.phase!r}")

    @classmethod
    def from_coupling_strength(cls, kappa_l: float, phase: float = 0.0) -> "CouplerSpec":
        """Coupler of dimensionless strength kappa*length: cross_coupling = sin^2(kappa_l)."""
        return cls(math.sin(kappa_l) ** 2, phase)


BALANCED = CouplerSpec(0.5, 0.0)


def coupler_matrix(spec: CouplerSpec) -> np.ndarray:
    """2x2 transfer matrix of a coupler, acting on (upper, lower) rail amplitudes."""
    if not isinstance(spec, CouplerSpec):
        raise InvalidSpecError(f"expected CouplerSpec, got {type(spec).__name__}")
    bar = math.sqrt(1.0 - spec.cross_coupling)
    cross = math.sqrt(spec.cross_coupling)
    if spec.phase == 0.0:
        down, up = complex(cross), complex(-cross)
    else:
        down = cross * complex(math.cos(spec.phase), math.sin(spec.phase))
        up = -cross * complex(math.cos(spec.phase), -math.sin(spec.phase))
    m = np.array([[bar, up], [down, bar]], dtype=np.complex128)
    dev = np.max(np.abs(m.conj().T @ m - np.eye(2)))
    if dev > COUPLER_UNITARITY_TOL:
        raise InvalidSpecError(f"coupler matrix not unitary (deviation {dev:.3e})")
    return m


@dataclass(frozen=True)
class NetworkSpec:
    """Declarative T-step pyramid.

    ``couplers`` maps (step t, index k) -> CouplerSpec for the couplers that
    differ from ``default_coupler``. Keys are 1-based with 1 <= k <= t <= steps.
    """

    steps: int
    couplers: Mapping[tuple[int, int], CouplerSpec] = field(default_factory=dict)
    default_coupler: CouplerSpec = BALANCED

    def __post_init__(self) -> None:
        if isinstance(self.steps, bool) or not isinstance(self.steps, (int, np.integer)):
            raise InvalidSpecError(f"steps must be an integer, got {self.steps!r}")
        if self.steps < 1:
            raise InvalidSpecError(f"steps must be >= 1, got {self.steps}")
        if not isinstance(self.default_coupler, CouplerSpec):
            raise InvalidSpecError("default_coupler must be a CouplerSpec")
        for key, c in self.couplers.items():
            try:
                t, k = key
            except (TypeError, ValueError):
                raise InvalidSpecError(f"coupler key must be (step, index), got {key!r}") from None
            if not (1 <= t <= self.steps and 1 <= k <= t):
                raise InvalidSpecError(f"no coupler {k} in step {t} of a {self.steps}-step pyramid")
            if not isinstance(c, CouplerSpec):
                raise InvalidSpecError(f"coupler {key!r} is not a CouplerSpec")
        # freeze the mapping
        object.__setattr__(self, "couplers", dict(sorted(self.couplers.items())))

    @classmethod
    def balanced(cls, steps: int) -> "NetworkSpec":
        return cls(steps)

    @property
    def n_rails(self) -> int:
        return 2 * self.steps

    def coupler(self, t: int, k: int) -> CouplerSpec:
        return self.couplers.get((t, k), self.default_coupler)


def coupler_rails(steps: int, t: int, k: int) -> tuple[int, int]:
    """1-based (upper, lower) rails of coupler k in step t."""
    return steps - t + 2 * k - 1, steps - t + 2 * k


def central_rails(steps: int) -> tuple[int, int]:
    """The two input rails feeding the first coupler."""
    return steps, steps + 1


class ModeUnitary:
    """Read-only N x N single-particle transfer matrix.

    ``matrix[J-1, K-1]`` is the amplitude from input rail K to output rail J.
    """

    __slots__ = ("_m",)

    def __init__(self, matrix) -> None:
        m = np.array(matrix, dtype=np.complex128, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise InvalidInputError(f"mode unitary must be a non-empty square matrix, got shape {m.shape}")
        m.setflags(write=False)
        self._m = m

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    @property
    def dim(self) -> int:
        return self._m.shape[0]

    def entry(self, out_rail: int, in_rail: int) -> complex:
        _check_rail(out_rail, self.dim)
        _check_rail(in_rail, self.dim)
        return complex(self._m[out_rail - 1, in_rail - 1])

    def __array__(self, dtype=None, copy=None):
        return self._m if dtype is None else self._m.astype(dtype)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModeUnitary):
            return NotImplemented
        return self._m.shape == other._m.shape and bool(np.array_equal(self._m, other._m))

    __hash__ = None

    def __repr__(self) -> str:
        return f"ModeUnitary(dim={self.dim})"


def as_matrix(u) -> np.ndarray:
    if isinstance(u, ModeUnitary):
        return u.matrix
    m = np.asarray(u, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {m.shape}")
    return m


def _check_rail(rail: int, n: int) -> None:
    if isinstance(rail, bool) or not isinstance(rail, (int, np.integer)):
        raise InvalidInputError(f"rail index must be an integer, got {rail!r}")
    if not 1 <= rail <= n:
        raise InvalidInputError(f"rail {rail} out of range 1..{n}")


def layer_unitary(spec: NetworkSpec, t: int) -> np.ndarray:
    """Full N x N matrix of step t alone (identity on rails it does not touch)."""
    if not 1 <= t <= spec.steps:
        raise InvalidInputError(f"step {t} out of range 1..{spec.steps}")
    layer = np.eye(spec.n_rails, dtype=np.complex128)
    for k in range(1, t + 1):
        a, b = coupler_rails(spec.steps, t, k)
        layer[a - 1 : b, a - 1 : b] = coupler_matrix(spec.coupler(t, k))
    return layer


def build_network_unitary(spec: NetworkSpec) -> ModeUnitary:
    """Transfer matrix of the whole pyramid, U = L_T ... L_2 L_1."""
    if not isinstance(spec, NetworkSpec):
        raise InvalidSpecError(f"expected NetworkSpec, got {type(spec).__name__}")
    u = np.eye(spec.n_rails, dtype=np.complex128)
    # left-multiplying by a layer only mixes the row pairs its couplers touch
    for t in range(1, spec.steps + 1):
        for k in range(1, t + 1):
            a, b = coupler_rails(spec.steps, t, k)
            m = coupler_matrix(spec.coupler(t, k))
            u[a - 1 : b, :] = m @ u[a - 1 : b, :]
    return ModeUnitary(u)


def single_particle_distribution(u, input_rail: int) -> np.ndarray:
    """Output-rail probabilities |U[J, input_rail]|^2 for one photon."""
    m = as_matrix(u)
    _check_rail(input_rail, m.shape[0])
    return np.abs(m[:, input_rail - 1]) ** 2


def verify_unitarity(u) -> float:
    """max |U^dagger U - I|."""
    m = as_matrix(u)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


@dataclass(frozen=True)
class CoinState:
    """Walker basis state |position, coin>, coin in {"U", "D"}."""

    position: int
    coin: str

    def __post_init__(self) -> None:
        if self.coin not in ("U", "D"):
            raise InvalidInputError(f"coin must be 'U' or 'D', got {self.coin!r}")

    def reachable_at(self, steps: int) -> bool:
        """True if a walker started at site 0 can sit here after ``steps`` steps."""
        return abs(self.position) <= steps and (self.position - steps) % 2 == 0
