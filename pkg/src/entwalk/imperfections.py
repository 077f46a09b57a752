"""Polarization-dependent directional couplers.

A coupler of strength kappa*length transfers sin^2(kappa*length) of the power
for H light and sin^2(ratio_VH * kappa*length) for V light, where ratio_VH is
the ratio of the V and H coupling coefficients. At ratio_VH = 1 the device is
polarization blind and both transfer matrices coincide bit for bit.

How ratio_VH depends on the tilt angle of the coupler has no closed form here;
supply the ratio directly or interpolate it from measured (angle, ratio) pairs
with :func:`ratio_from_tilt`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .distributions import PairDistribution
from .errors import InvalidInputError, InvalidSpecError
from .lattice import regroup_single
from .metrics import similarity
from .network import (
    CouplerSpec,
    ModeUnitary,
    NetworkSpec,
    build_network_unitary,
    single_particle_distribution,
)
from .two_particle import pair_amplitudes, pair_distribution

__all__ = [
    "PolarizedCouplerModel",
    "ratio_from_tilt",
    "polarized_network",
    "polarization_similarity",
    "ratio_sweep",
    "polarization_independence_report",
    "entangled_with_imperfections",
    "port_diagonal_leakage",
]

BALANCED_STRENGTH = math.pi / 4


@dataclass(frozen=True)
class PolarizedCouplerModel:
    """Per-polarization coupler strengths.

    coupling_H: kappa*length for H light, applied to every coupler unless
        ``overrides`` names the (step, index) pair.
    ratio_VH: C_V / C_H, strictly positive.
    birefringent_phase: extra phase on the cross terms of every V coupler.
    """

    coupling_H: float = BALANCED_STRENGTH
    ratio_VH: float = 1.0
    overrides: Mapping[tuple[int, int], float] = field(default_factory=dict)
    birefringent_phase: float = 0.0

    def __post_init__(self) -> None:
        for name in ("coupling_H", "ratio_VH", "birefringent_phase"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise InvalidSpecError(f"{name} must be a finite real, got {value!r}")
        if self.ratio_VH <= 0:
            raise InvalidSpecError(f"ratio_VH must be > 0, got {self.ratio_VH}")
        for key, kl in self.overrides.items():
            if not math.isfinite(kl):
                raise InvalidSpecError(f"override {key!r} must be finite, got {kl!r}")
        object.__setattr__(self, "overrides", dict(sorted(self.overrides.items())))

    @classmethod
    def ideal(cls) -> "PolarizedCouplerModel":
        return cls()

    def strength(self, t: int, k: int) -> float:
        return self.overrides.get((t, k), self.coupling_H)

    def couplers(self, t: int, k: int, phase: float = 0.0) -> tuple[CouplerSpec, CouplerSpec]:
        """(H coupler, V coupler) at position (t, k)."""
        kl = self.strength(t, k)
        h = CouplerSpec(math.sin(kl) ** 2, phase)
        v = CouplerSpec(math.sin(self.ratio_VH * kl) ** 2, phase + self.birefringent_phase)
        return h, v


def ratio_from_tilt(theta: float, table: Sequence[Sequence[float]]) -> float:
    """Linear interpolation of C_V/C_H at tilt ``theta`` from (angle, ratio) rows."""
    rows = sorted((float(a), float(r)) for a, r in table)
    if len(rows) < 2:
        raise InvalidSpecError("tilt lookup table needs at least two rows")
    angles = np.array([a for a, _ in rows])
    if np.any(np.diff(angles) <= 0):
        raise InvalidSpecError("tilt lookup table has repeated angles")
    if not angles[0] <= theta <= angles[-1]:
        raise InvalidInputError(f"tilt {theta} outside table range [{angles[0]}, {angles[-1]}]")
    return float(np.interp(theta, angles, [r for _, r in rows]))


def polarized_network(spec: NetworkSpec, model: PolarizedCouplerModel) -> tuple[ModeUnitary, ModeUnitary]:
    """Transfer matrices (U_H, U_V). Coupler phases are taken from ``spec``."""
    if not isinstance(model, PolarizedCouplerModel):
        raise InvalidSpecError(f"expected PolarizedCouplerModel, got {type(model).__name__}")
    for t, k in model.overrides:
        if not (1 <= t <= spec.steps and 1 <= k <= t):
            raise InvalidSpecError(f"override for nonexistent coupler {(t, k)}")
    h_table, v_table = {}, {}
    for t in range(1, spec.steps + 1):
        for k in range(1, t + 1):
            h_table[(t, k)], v_table[(t, k)] = model.couplers(t, k, spec.coupler(t, k).phase)
    u_h = build_network_unitary(NetworkSpec(spec.steps, h_table, spec.default_coupler))
    u_v = build_network_unitary(NetworkSpec(spec.steps, v_table, spec.default_coupler))
    return u_h, u_v


def _single(u, input_rail: int, steps: int, basis: str) -> np.ndarray:
    p = single_particle_distribution(u, input_rail)
    if basis == "positions":
        return regroup_single(p, steps).as_array()
    if basis == "ports":
        return p
    raise InvalidInputError(f"basis must be 'ports' or 'positions', got {basis!r}")


def polarization_similarity(
    spec: NetworkSpec, model: PolarizedCouplerModel, input_rail: int, basis: str = "positions"
) -> float:
    """Similarity between the H and V single-photon distributions."""
    u_h, u_v = polarized_network(spec, model)
    return similarity(_single(u_h, input_rail, spec.steps, basis), _single(u_v, input_rail, spec.steps, basis))


def ratio_sweep(
    spec: NetworkSpec,
    model: PolarizedCouplerModel,
    ratios: Iterable[float],
    input_rail: int,
    basis: str = "positions",
) -> list[float]:
    """H-vs-V similarity for each ratio, in the order given."""
    out = []
    for r in ratios:
        m = PolarizedCouplerModel(model.coupling_H, float(r), model.overrides, model.birefringent_phase)
        out.append(polarization_similarity(spec, m, input_rail, basis))
    return out


def polarization_independence_report(
    spec: NetworkSpec, model: PolarizedCouplerModel, input_rail: int, basis: str = "positions"
) -> dict[str, float]:
    """Similarity to the nominal network for H, V, diagonal (+) and antidiagonal (-) photons.

    The device keeps the H and V populations separate, so a +/- photon (an
    equal superposition of H and V) lands with the average of the H and V
    distributions.
    """
    u_h, u_v = polarized_network(spec, model)
    ideal = _single(build_network_unitary(spec), input_rail, spec.steps, basis)
    p_h = _single(u_h, input_rail, spec.steps, basis)
    p_v = _single(u_v, input_rail, spec.steps, basis)
    mixed = 0.5 * (p_h + p_v)
    return {
        "H": similarity(p_h, ideal),
        "V": similarity(p_v, ideal),
        "+": similarity(mixed, ideal),
        "-": similarity(mixed, ideal),
    }


def entangled_with_imperfections(
    spec: NetworkSpec, model: PolarizedCouplerModel, i: int, j: int, phi=0.0
) -> PairDistribution:
    """Two-photon port distribution when H and V see different networks."""
    u_h, u_v = polarized_network(spec, model)
    return pair_distribution(pair_amplitudes(u_h, u_v, i, j, phi))


def port_diagonal_leakage(dist: PairDistribution) -> float:
    """Total same-rail probability; zero for ideal fermions."""
    if dist.basis != "bs-ports":
        raise InvalidInputError("leakage is defined on the bs-ports basis")
    return dist.diagonal_mass()
