import math

import numpy as np
import pytest

from entwalk import (
    NetworkSpec,
    PolarizedCouplerModel,
    build_network_unitary,
    entangled_with_imperfections,
    pair_amplitudes,
    pair_distribution,
    polarization_independence_report,
    polarization_similarity,
    polarized_network,
    ratio_from_tilt,
    ratio_sweep,
    similarity,
)
from entwalk.errors import InvalidInputError, InvalidSpecError
from entwalk.imperfections import port_diagonal_leakage

SPEC = NetworkSpec(4)
GRID = [0.8, 0.85, 0.9, 0.95, 1.0, 1.0625, 1.125, 1.1875, 1.25]


def test_unit_ratio_is_polarization_blind():
    u_h, u_v = polarized_network(SPEC, PolarizedCouplerModel(0.63, 1.0))
    assert np.array_equal(u_h.matrix, u_v.matrix)


def test_balanced_strength_gives_balanced_network():
    u_h, u_v = polarized_network(SPEC, PolarizedCouplerModel(math.pi / 4, 1.0))
    np.testing.assert_allclose(u_h.matrix, build_network_unitary(SPEC).matrix, atol=1e-15)


def test_phases_follow_nominal_network():
    from entwalk import CouplerSpec

    spec = NetworkSpec(3, {(2, 1): CouplerSpec(0.5, 0.9)})
    u_h, _ = polarized_network(spec, PolarizedCouplerModel())
    np.testing.assert_allclose(u_h.matrix, build_network_unitary(spec).matrix, atol=1e-15)


def test_overrides():
    model = PolarizedCouplerModel(math.pi / 4, 1.0, {(3, 2): 0.3})
    assert model.strength(3, 2) == 0.3 and model.strength(3, 1) == math.pi / 4
    with pytest.raises(InvalidSpecError):
        polarized_network(NetworkSpec(2), model)


@pytest.mark.parametrize("bad", [dict(ratio_VH=0.0), dict(ratio_VH=-1.0), dict(coupling_H=float("inf"))])
def test_invalid_model(bad):
    with pytest.raises(InvalidSpecError):
        PolarizedCouplerModel(**bad)


def test_mismatch_lowers_similarity():
    assert polarization_similarity(SPEC, PolarizedCouplerModel(ratio_VH=1.2), 4) < 1.0


@pytest.mark.parametrize("rail", [4, 5])
@pytest.mark.parametrize("basis", ["positions", "ports"])
def test_similarity_peaks_at_unit_ratio(rail, basis):
    s = ratio_sweep(SPEC, PolarizedCouplerModel(), GRID, rail, basis)
    assert s[4] == 1.0
    assert all(a < b for a, b in zip(s[:5], s[1:5]))
    assert all(a > b for a, b in zip(s[4:], s[5:]))


def test_birefringent_phase_changes_v_only():
    u_h0, u_v0 = polarized_network(SPEC, PolarizedCouplerModel())
    u_h, u_v = polarized_network(SPEC, PolarizedCouplerModel(birefringent_phase=0.4))
    assert np.array_equal(u_h.matrix, u_h0.matrix)
    assert not np.allclose(u_v.matrix, u_v0.matrix)


class TestReport:
    def test_ideal_all_one(self):
        report = polarization_independence_report(SPEC, PolarizedCouplerModel(), 4)
        assert list(report) == ["H", "V", "+", "-"]
        assert all(abs(s - 1) < 1e-14 for s in report.values())

    @pytest.mark.parametrize("ratio", [0.9, 1.1, 1.3])
    def test_mixed_inputs_bracketed(self, ratio):
        # H sits at the nominal strength, so the mixture is pulled between H and V
        r = polarization_independence_report(SPEC, PolarizedCouplerModel(ratio_VH=ratio), 4)
        assert r["V"] < r["+"] < r["H"]
        assert r["+"] == r["-"]

    def test_ports_basis(self):
        r = polarization_independence_report(SPEC, PolarizedCouplerModel(ratio_VH=1.1), 5, basis="ports")
        assert r["V"] < 1.0


class TestEntangled:
    def test_unit_ratio_reproduces_ideal(self):
        model = PolarizedCouplerModel(0.7, 1.0)
        u_h, _ = polarized_network(SPEC, model)
        for phi in (0.0, math.pi / 3, math.pi):
            ideal = pair_distribution(pair_amplitudes(u_h, u_h, 4, 5, phi))
            assert entangled_with_imperfections(SPEC, model, 4, 5, phi) == ideal

    def test_balanced_model_matches_nominal_fermions(self):
        u = build_network_unitary(SPEC)
        ideal = pair_distribution(pair_amplitudes(u, u, 4, 5, math.pi))
        got = entangled_with_imperfections(SPEC, PolarizedCouplerModel(), 4, 5, math.pi)
        assert similarity(got, ideal) == pytest.approx(1.0, abs=1e-14)
        assert port_diagonal_leakage(got) < 1e-14

    def test_mismatch_breaks_antisymmetry(self):
        d = entangled_with_imperfections(SPEC, PolarizedCouplerModel(ratio_VH=1.3), 4, 5, math.pi)
        assert abs(d.total - 1) < 1e-12
        u_h, u_v = (m.matrix.tolist() for m in polarized_network(SPEC, PolarizedCouplerModel(ratio_VH=1.3)))
        by_hand = sum(0.5 * abs(u_h[k][3] * u_v[k][4] - u_h[k][4] * u_v[k][3]) ** 2 for k in range(8))
        assert port_diagonal_leakage(d) == pytest.approx(by_hand, rel=1e-12)
        assert by_hand == pytest.approx(0.05757100929725994, rel=1e-9)

    @pytest.mark.parametrize("ratio", [0.8, 0.95, 1.05, 1.25])
    def test_leakage_positive_off_unit_ratio(self, ratio):
        d = entangled_with_imperfections(SPEC, PolarizedCouplerModel(ratio_VH=ratio), 4, 5, math.pi)
        assert port_diagonal_leakage(d) > 0


class TestTilt:
    TABLE = [[40, 1.3], [55, 1.08], [70, 0.9]]

    def test_interpolates(self):
        assert ratio_from_tilt(55, self.TABLE) == pytest.approx(1.08)
        assert ratio_from_tilt(62.5, self.TABLE) == pytest.approx(0.99)

    def test_out_of_range(self):
        with pytest.raises(InvalidInputError):
            ratio_from_tilt(80, self.TABLE)

    def test_bad_table(self):
        with pytest.raises(InvalidSpecError):
            ratio_from_tilt(50, [[50, 1.0]])
