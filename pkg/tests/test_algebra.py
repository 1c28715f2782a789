import dataclasses
import math

import numpy as np
import pytest

from mzsim import (
    BasisLabel,
    Channel,
    DimensionError,
    LinearOperator,
    SpaceConfig,
    StateVector,
    annihilation,
    apply,
    basis_state,
    compose,
    dyad,
    fock_identity,
    identity,
    inner_product,
    spatial_identity,
    tensor,
)
from support import random_unitary

H, V = Channel.H, Channel.V
CONFIG = SpaceConfig()


def ket(channel, occupation, config=CONFIG):
    return basis_state(config, BasisLabel(channel, occupation))


# Hand-built spatial matrices, independent of the element factories.
M_SPATIAL = np.array([[0, 1j], [1j, 0]], dtype=complex)
BS_SPATIAL = (np.eye(2) + M_SPATIAL) / math.sqrt(2)


class TestSpaceConfig:
    def test_composite_dimension(self):
        assert CONFIG.dim == 4
        assert SpaceConfig(fock_dim=5).dim == 10

    def test_fock_dim_must_be_at_least_two(self):
        with pytest.raises(DimensionError):
            SpaceConfig(fock_dim=1)

    def test_spatial_dim_is_fixed(self):
        with pytest.raises(DimensionError):
            SpaceConfig(spatial_dim=3)

    def test_canonical_index_is_channel_major(self):
        assert [CONFIG.index_of(label) for label in CONFIG.labels()] == [0, 1, 2, 3]
        assert CONFIG.index_of(BasisLabel(H, 0)) == 0
        assert CONFIG.index_of(BasisLabel(H, 1)) == 1
        assert CONFIG.index_of(BasisLabel(V, 0)) == 2
        assert CONFIG.index_of(BasisLabel(V, 1)) == 3

    def test_occupation_beyond_truncation_rejected(self):
        with pytest.raises(DimensionError):
            CONFIG.index_of(BasisLabel(H, 2))

    def test_negative_occupation_rejected(self):
        with pytest.raises(ValueError):
            BasisLabel(H, -1)


class TestStateVector:
    def test_length_must_match_space(self):
        with pytest.raises(DimensionError):
            StateVector(CONFIG, np.zeros(3))

    def test_amplitudes_are_read_only(self):
        psi = ket(H, 1)
        with pytest.raises((ValueError, RuntimeError)):
            psi.amplitudes[0] = 1.0
        with pytest.raises(dataclasses.FrozenInstanceError):
            psi.config = SpaceConfig(fock_dim=3)

    def test_construction_copies_input(self):
        raw = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
        psi = StateVector(CONFIG, raw)
        raw[0] = 9.0
        assert psi.amplitudes[0] == 1.0

    def test_squared_norm_sums_magnitudes(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            amps = rng.normal(size=4) + 1j * rng.normal(size=4)
            psi = StateVector(CONFIG, amps)
            assert psi.squared_norm() == pytest.approx(np.sum(np.abs(amps) ** 2), abs=1e-14)


class TestDyad:
    def test_entry_placement(self):
        np.testing.assert_array_equal(dyad(H, V).matrix, [[0, 1], [0, 0]])
        np.testing.assert_array_equal(dyad(V, H).matrix, [[0, 0], [1, 0]])

    def test_completeness(self):
        total = dyad(H, H).matrix + dyad(V, V).matrix
        np.testing.assert_array_equal(total, np.eye(2))

    def test_contraction(self):
        product = dyad(H, V).matrix @ dyad(V, H).matrix
        np.testing.assert_array_equal(product, dyad(H, H).matrix)


class TestAnnihilation:
    def test_single_photon_ladder(self):
        a = annihilation(2).matrix
        np.testing.assert_array_equal(a @ [0, 1], [1, 0])
        np.testing.assert_array_equal(a @ [1, 0], [0, 0])

    def test_sqrt_two_on_two_photons(self):
        a = annihilation(3).matrix
        np.testing.assert_allclose(a @ [0, 0, 1], [0, math.sqrt(2), 0], atol=1e-15)

    def test_double_annihilation_vanishes(self):
        a = annihilation(2).matrix
        np.testing.assert_array_equal(a @ a, np.zeros((2, 2)))

    def test_rejects_tiny_truncation(self):
        with pytest.raises(DimensionError):
            annihilation(1)

    @pytest.mark.parametrize("fock_dim", [2, 3, 4, 6])
    def test_ladder_norms(self, fock_dim):
        a = annihilation(fock_dim).matrix
        for n in range(1, fock_dim):
            column = np.zeros(fock_dim)
            column[n] = 1.0
            lowered = a @ column
            assert np.sum(np.abs(lowered) ** 2) == pytest.approx(n, abs=1e-14)


class TestTensor:
    def test_identity_promotes_to_identity(self):
        composite = tensor(spatial_identity(), fock_identity(2))
        np.testing.assert_array_equal(composite.matrix, np.eye(4))

    def test_vertical_annihilation_action(self):
        op = tensor(dyad(V, V), annihilation(2))
        out = apply(op, ket(V, 1))
        np.testing.assert_allclose(out.amplitudes, ket(V, 0).amplitudes, atol=1e-15)

    def test_promoted_mirror_action(self):
        op = tensor(LinearOperator(M_SPATIAL), fock_identity(2))
        out = apply(op, ket(H, 1))
        np.testing.assert_allclose(out.amplitudes, 1j * ket(V, 1).amplitudes, atol=1e-15)

    def test_rejects_non_spatial_first_operand(self):
        with pytest.raises(DimensionError):
            tensor(fock_identity(3), fock_identity(2))

    @pytest.mark.parametrize("fock_dim", [2, 3])
    def test_kron_matches_factorwise_action(self, fock_dim):
        # tensor(Os, Of)|k,n> must equal (Os|k>) (x) (Of|n>) entrywise.
        rng = np.random.default_rng(11)
        config = SpaceConfig(fock_dim=fock_dim)
        for _ in range(5):
            spatial = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            fock = rng.normal(size=(fock_dim, fock_dim)) + 1j * rng.normal(size=(fock_dim, fock_dim))
            op = tensor(LinearOperator(spatial), LinearOperator(fock))
            for label in config.labels():
                composite = apply(op, basis_state(config, label)).amplitudes
                factorwise = np.kron(
                    spatial[:, label.channel.value], fock[:, label.occupation]
                )
                np.testing.assert_allclose(composite, factorwise, atol=1e-14)


class TestApply:
    def test_identity_returns_same_amplitudes(self):
        psi = StateVector(CONFIG, [0.5, 0.5j, -0.5, -0.5j])
        out = apply(identity(CONFIG), psi)
        np.testing.assert_array_equal(out.amplitudes, psi.amplitudes)

    def test_beam_splitter_splits_evenly(self):
        op = tensor(LinearOperator(BS_SPATIAL), fock_identity(2))
        out = apply(op, ket(H, 1))
        expected = (ket(H, 1).amplitudes + 1j * ket(V, 1).amplitudes) / math.sqrt(2)
        np.testing.assert_allclose(out.amplitudes, expected, atol=1e-15)

    def test_zero_operator_gives_zero_vector(self):
        out = apply(LinearOperator(np.zeros((4, 4))), ket(H, 1))
        np.testing.assert_array_equal(out.amplitudes, np.zeros(4))

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(DimensionError):
            apply(LinearOperator(np.eye(6)), ket(H, 1))


class TestCompose:
    def test_two_beam_splitters_make_a_mirror(self):
        bs = tensor(LinearOperator(BS_SPATIAL), fock_identity(2))
        brute_force = np.kron(BS_SPATIAL @ BS_SPATIAL, np.eye(2))
        composed = compose([bs, bs]).matrix
        np.testing.assert_allclose(composed, brute_force, atol=1e-15)
        np.testing.assert_allclose(composed, np.kron(M_SPATIAL, np.eye(2)), atol=1e-14)

    def test_mirror_squared_is_minus_identity(self):
        m = tensor(LinearOperator(M_SPATIAL), fock_identity(2))
        np.testing.assert_allclose(compose([m, m]).matrix, -np.eye(4), atol=1e-15)

    def test_full_interferometer_at_zero_phase(self):
        # bs, phase(0), mirror, bs applied to |r_H,1> lands on -|r_H,1>.
        bs = tensor(LinearOperator(BS_SPATIAL), fock_identity(2))
        m = tensor(LinearOperator(M_SPATIAL), fock_identity(2))
        circuit = compose([bs, identity(CONFIG), m, bs])
        out = apply(circuit, ket(H, 1))
        np.testing.assert_allclose(out.amplitudes, -ket(H, 1).amplitudes, atol=1e-12)

    def test_listed_order_is_application_order(self):
        rng = np.random.default_rng(3)
        o1 = LinearOperator(random_unitary(rng, 4))
        o2 = LinearOperator(random_unitary(rng, 4))
        psi = StateVector(CONFIG, random_unitary(rng, 4)[:, 0])
        left = apply(compose([o1, o2]), psi)
        right = apply(o2, apply(o1, psi))
        np.testing.assert_allclose(left.amplitudes, right.amplitudes, atol=1e-12)

    def test_associativity_on_random_unitaries(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            ops = [LinearOperator(random_unitary(rng, 4)) for _ in range(3)]
            flat = compose(ops).matrix
            nested = compose([compose(ops[:2]), ops[2]]).matrix
            np.testing.assert_allclose(flat, nested, atol=1e-12)

    def test_empty_sequence_rejected(self):
        with pytest.raises(ValueError):
            compose([])

    def test_mixed_dimensions_rejected(self):
        with pytest.raises(DimensionError):
            compose([spatial_identity(), identity(CONFIG)])


class TestInnerProduct:
    def test_orthonormal_basis(self):
        assert inner_product(ket(H, 1), ket(H, 1)) == 1
        assert inner_product(ket(H, 1), ket(V, 1)) == 0

    def test_conjugate_linear_in_first_argument(self):
        rng = np.random.default_rng(13)
        a = rng.normal() + 1j * rng.normal()
        psi1 = StateVector(CONFIG, rng.normal(size=4) + 1j * rng.normal(size=4))
        psi2 = StateVector(CONFIG, rng.normal(size=4) + 1j * rng.normal(size=4))
        scaled = StateVector(CONFIG, a * psi1.amplitudes)
        assert inner_product(scaled, psi2) == pytest.approx(
            np.conj(a) * inner_product(psi1, psi2), abs=1e-12
        )

    def test_self_inner_product_is_squared_norm(self):
        rng = np.random.default_rng(17)
        amps = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi = StateVector(CONFIG, amps)
        value = inner_product(psi, psi)
        assert value.imag == pytest.approx(0.0, abs=1e-14)
        assert value.real == pytest.approx(psi.squared_norm(), abs=1e-14)

    def test_config_mismatch_rejected(self):
        other = SpaceConfig(fock_dim=3)
        with pytest.raises(DimensionError):
            inner_product(ket(H, 1), basis_state(other, BasisLabel(H, 1)))


class TestLinearOperator:
    def test_non_square_rejected(self):
        with pytest.raises(DimensionError):
            LinearOperator(np.zeros((2, 3)))

    def test_adjoint(self):
        rng = np.random.default_rng(19)
        mat = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        np.testing.assert_array_equal(LinearOperator(mat).adjoint().matrix, mat.conj().T)

    def test_matrix_is_read_only(self):
        op = spatial_identity()
        with pytest.raises((ValueError, RuntimeError)):
            op.matrix[0, 0] = 5.0
