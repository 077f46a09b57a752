import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entwalk import (
    BOSON,
    FERMION,
    ExchangePhase,
    NetworkSpec,
    anyon_sweep,
    boson_pair_oracle,
    build_network_unitary,
    central_rails,
    fermion_pair_oracle,
    max_abs_difference,
    pair_amplitudes,
    pair_distribution,
    separable_product_distribution,
)
from entwalk.errors import InvalidInputError


def random_unitary(n, seed):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture(scope="module")
def u1():
    return build_network_unitary(NetworkSpec(1))


@pytest.fixture(scope="module")
def u4():
    return build_network_unitary(NetworkSpec(4))


def dist(u, i, j, phi, u_b=None):
    return pair_distribution(pair_amplitudes(u, u if u_b is None else u_b, i, j, phi))


class TestExchangePhase:
    def test_kinds(self):
        assert BOSON.kind == "boson"
        assert FERMION.kind == "fermion"
        assert ExchangePhase(math.pi / 2).kind == "anyon"
        assert ExchangePhase(3 * math.pi).kind == "fermion"

    def test_reduced_into_range(self):
        assert ExchangePhase(-math.pi / 2).phi == pytest.approx(3 * math.pi / 2)
        assert 0 <= ExchangePhase(-1e-300).phi < 2 * math.pi

    def test_exact_factors(self):
        assert BOSON.factor == 1 and FERMION.factor == -1

    def test_rejects_nan(self):
        with pytest.raises(InvalidInputError):
            ExchangePhase(float("nan"))


class TestPairAmplitudes:
    def test_hom_cancellation(self, u1):
        psi = pair_amplitudes(u1, u1, 1, 2, 0.0).psi
        assert abs(psi[0, 1] + psi[1, 0]) < 1e-15
        assert abs(psi[0, 1]) < 1e-15

    def test_fermion_one_splitter(self, u1):
        psi = pair_amplitudes(u1, u1, 1, 2, math.pi).psi
        assert abs(psi[0, 1]) ** 2 == pytest.approx(1.0, abs=1e-15)
        assert psi[0, 0] == 0 and psi[1, 1] == 0

    def test_boson_symmetric(self, u4):
        psi = pair_amplitudes(u4, u4, 4, 5, 0.0).psi
        np.testing.assert_allclose(psi, psi.T, atol=1e-15)

    def test_fermion_diagonal_vanishes(self, u4):
        psi = pair_amplitudes(u4, u4, 4, 5, math.pi).psi
        assert np.max(np.abs(np.diag(psi))) < 1e-14

    def test_boson_matches_permanents(self, u4):
        # amplitude of one photon in K, one in L is perm of the {K,L} x {I,J} block
        m = u4.matrix
        psi = pair_amplitudes(u4, u4, 4, 5, 0.0).psi
        for k in range(8):
            for l in range(8):
                perm = m[k, 3] * m[l, 4] + m[k, 4] * m[l, 3]
                assert abs(psi[k, l] - perm) < 1e-15

    def test_rejects_equal_rails(self, u4):
        with pytest.raises(InvalidInputError):
            pair_amplitudes(u4, u4, 3, 3, 0.0)

    def test_rejects_shape_mismatch(self, u1, u4):
        with pytest.raises(InvalidInputError):
            pair_amplitudes(u1, u4, 1, 2, 0.0)


class TestPairDistribution:
    def test_hom_bunching(self, u1):
        d = dist(u1, 1, 2, 0.0)
        assert d[1, 1] == pytest.approx(0.5, abs=1e-15)
        assert d[2, 2] == pytest.approx(0.5, abs=1e-15)
        assert d[1, 2] == pytest.approx(0.0, abs=1e-15)

    def test_antibunching(self, u1):
        d = dist(u1, 1, 2, math.pi)
        assert d[1, 2] == pytest.approx(1.0, abs=1e-15)
        assert d[1, 1] == 0 and d[2, 2] == 0

    def test_fermions_never_share_a_rail(self, u4):
        d = dist(u4, 4, 5, math.pi)
        assert all(p < 1e-14 for p in d.diagonal().values())

    @pytest.mark.parametrize("steps", range(1, 7))
    def test_equivalent_to_second_quantization(self, steps):
        u = build_network_unitary(NetworkSpec(steps))
        i, j = central_rails(steps)
        assert max_abs_difference(dist(u, i, j, 0.0), boson_pair_oracle(u, i, j)) < 1e-12
        assert max_abs_difference(dist(u, i, j, math.pi), fermion_pair_oracle(u, i, j)) < 1e-12

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000), st.floats(0, 2 * math.pi), st.integers(3, 8))
    def test_normalized_for_any_phase_and_unitaries(self, seed, phi, n):
        ua, ub = random_unitary(n, seed), random_unitary(n, seed + 1)
        for d in (dist(ua, 1, n, phi), dist(ua, 2, 3, phi, ub)):
            assert abs(d.total - 1) < 1e-12
            assert min(d.probs.values()) >= 0

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000), st.floats(0, 2 * math.pi))
    def test_swap_inputs_with_conjugate_phase(self, seed, phi):
        u = random_unitary(6, seed)
        a = dist(u, 2, 5, phi)
        b = dist(u, 5, 2, -phi)
        assert max_abs_difference(a, b) < 1e-14

    @pytest.mark.parametrize("phi", [0.0, math.pi])
    def test_swap_inputs_alone_at_boson_and_fermion(self, u4, phi):
        assert max_abs_difference(dist(u4, 4, 5, phi), dist(u4, 5, 4, phi)) == 0.0

    def test_params_recorded(self, u4):
        d = dist(u4, 4, 5, math.pi)
        assert d.params["statistics"] == "fermion"
        assert d.basis == "bs-ports"


class TestAnyonSweep:
    def test_endpoints_bit_exact(self, u4):
        sweep = anyon_sweep(u4, 4, 5, [0.0, math.pi])
        assert sweep[0] == dist(u4, 4, 5, 0.0)
        assert sweep[1] == dist(u4, 4, 5, math.pi)

    def test_half_pi_bunches_and_antibunches(self, u4):
        (d,) = anyon_sweep(u4, 4, 5, [math.pi / 2])
        # derived by direct evaluation: 3/32 of the mass on shared rails
        assert d.diagonal_mass() == pytest.approx(3 / 32, abs=1e-12)
        assert d.total - d.diagonal_mass() == pytest.approx(29 / 32, abs=1e-12)

    def test_empty(self, u4):
        with pytest.raises(InvalidInputError):
            anyon_sweep(u4, 4, 5, [])


class TestSeparable:
    def test_one_splitter(self, u1):
        d = separable_product_distribution(u1, 1, 2)
        assert d[1, 1] == pytest.approx(0.25)
        assert d[2, 2] == pytest.approx(0.25)
        assert d[1, 2] == pytest.approx(0.5)

    def test_four_steps_is_neither_statistics(self, u4):
        d = separable_product_distribution(u4, 4, 5)
        # derived: both gaps equal 9/128
        assert max_abs_difference(d, dist(u4, 4, 5, 0.0)) == pytest.approx(9 / 128, abs=1e-12)
        assert max_abs_difference(d, dist(u4, 4, 5, math.pi)) == pytest.approx(9 / 128, abs=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_normalized(self, seed):
        assert abs(separable_product_distribution(random_unitary(5, seed), 1, 3).total - 1) < 1e-12
