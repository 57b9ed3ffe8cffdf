import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pseudoprob import (
    IDENTITY_2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    DimensionMismatch,
    HermitianOperator,
    NonHermitianInput,
    commutator_norm,
    eigenvalues_hermitian,
    idempotency_residual,
    identity,
    projector_from_direction,
    symmetrized_product,
    tensor,
    trace_with,
)

import oracles

PI_Z = projector_from_direction((0, 0, 1), 1)
PI_X = projector_from_direction((1, 0, 0), 1)


def hermitian_pair(dim, seed):
    rng = np.random.default_rng(seed)
    mats = []
    for _ in range(2):
        z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        mats.append(HermitianOperator(0.5 * (z + z.conj().T)))
    return mats


class TestConstruction:
    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            HermitianOperator(np.zeros((2, 3)))

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            HermitianOperator([[np.nan, 0], [0, 1]])

    def test_rejects_inf(self):
        with pytest.raises(ValueError):
            HermitianOperator([[1, np.inf], [0, 1]])

    def test_keeps_hermitian_part_and_records_residual(self):
        drift = 1e-13
        op = HermitianOperator([[1.0, drift * 1j], [drift * 1j, 0.0]])
        assert op.hermiticity_residual == pytest.approx(drift, rel=1e-6)
        assert np.abs(op.matrix - op.matrix.conj().T).max() == 0.0

    def test_loud_failure_on_genuinely_non_hermitian(self):
        with pytest.raises(NonHermitianInput):
            HermitianOperator([[0, 1], [0, 0]])

    def test_immutable(self):
        with pytest.raises(AttributeError):
            IDENTITY_2.matrix = np.zeros((2, 2))
        assert not SIGMA_X.matrix.flags.writeable

    def test_json_round_trip(self):
        op = hermitian_pair(3, 5)[0]
        back = HermitianOperator.from_json(op.to_json())
        assert np.array_equal(back.matrix, op.matrix)

    def test_json_shape_mismatch(self):
        with pytest.raises(ValueError):
            HermitianOperator.from_json({"dim": 3, "re": [[1, 0], [0, 1]], "im": [[0, 0], [0, 0]]})


class TestSymmetrizedProduct:
    def test_sigma_x_squared_is_identity(self):
        out = symmetrized_product(SIGMA_X, SIGMA_X)
        assert np.allclose(out.matrix, np.eye(2), atol=1e-15)

    def test_anticommuting_paulis_vanish(self):
        out = symmetrized_product(SIGMA_X, SIGMA_Y)
        assert np.abs(out.matrix).max() <= 1e-15

    def test_z_x_projector_pair(self):
        out = symmetrized_product(PI_Z, PI_X)
        expected = 0.25 * np.array([[2, 1], [1, 0]], dtype=complex)
        assert np.abs(out.matrix - expected).max() <= 1e-15

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatch):
            symmetrized_product(SIGMA_X, identity(3))

    @settings(max_examples=40, deadline=None)
    @given(
        re=arrays(np.float64, (3, 3), elements=st.floats(-1, 1)),
        im=arrays(np.float64, (3, 3), elements=st.floats(-1, 1)),
        re2=arrays(np.float64, (3, 3), elements=st.floats(-1, 1)),
        im2=arrays(np.float64, (3, 3), elements=st.floats(-1, 1)),
    )
    def test_exactly_symmetric(self, re, im, re2, im2):
        a = HermitianOperator(0.5 * ((re + 1j * im) + (re + 1j * im).conj().T))
        b = HermitianOperator(0.5 * ((re2 + 1j * im2) + (re2 + 1j * im2).conj().T))
        ab = symmetrized_product(a, b)
        ba = symmetrized_product(b, a)
        assert np.array_equal(ab.matrix, ba.matrix)


class TestEigenvalues:
    def test_sigma_z(self):
        assert np.allclose(eigenvalues_hermitian(SIGMA_Z), [-1.0, 1.0])

    def test_identity_three(self):
        assert np.allclose(eigenvalues_hermitian(identity(3)), [1.0, 1.0, 1.0])

    def test_projector_product_closed_form(self):
        # eigenvalues c(c -+ 1)/2 with c = cos(pi/4), from the characteristic
        # polynomial x^2 - x/2 - 1/16 of the z/x symmetrized product
        out = symmetrized_product(PI_Z, PI_X)
        c = math.cos(math.pi / 4)
        expected = sorted([c * (c - 1) / 2, c * (c + 1) / 2])
        vals = eigenvalues_hermitian(out)
        assert np.allclose(vals, expected, atol=1e-14)
        for x in vals:
            assert abs(x * x - 0.5 * x - 1.0 / 16.0) < 1e-14

    def test_sorted_ascending(self):
        vals = eigenvalues_hermitian(hermitian_pair(6, 3)[0])
        assert np.all(np.diff(vals) >= 0)

    def test_reconstruction_residual(self):
        op = hermitian_pair(5, 9)[0]
        vals, vecs = eigenvalues_hermitian(op, vectors=True)
        rebuilt = vecs @ np.diag(vals) @ vecs.conj().T
        assert np.abs(rebuilt - op.matrix).max() <= 1e-10

    def test_projector_spectrum_is_zero_one(self):
        rng = np.random.default_rng(17)
        for dim, rank in ((2, 1), (4, 2), (6, 3)):
            p = HermitianOperator(oracles.haar_projector(rng, dim, rank))
            vals = eigenvalues_hermitian(p)
            assert np.all((np.abs(vals) <= 1e-10) | (np.abs(vals - 1) <= 1e-10))

    def test_eigenvalue_sum_equals_trace(self):
        for seed in range(5):
            op = hermitian_pair(4, seed)[0]
            assert abs(eigenvalues_hermitian(op).sum() - op.trace) <= 1e-10


class TestTraceWith:
    def test_unit_trace_of_state(self):
        half = HermitianOperator(0.5 * np.eye(2))
        assert trace_with(identity(2), half) == pytest.approx(1.0, abs=1e-15)

    def test_eigenstate(self):
        rho = HermitianOperator(np.diag([1.0, 0.0]))
        assert trace_with(PI_Z, rho) == pytest.approx(1.0, abs=1e-15)

    def test_mixed_state_expectation(self):
        out = symmetrized_product(PI_Z, PI_X)
        rho = HermitianOperator(0.5 * np.eye(2))
        assert trace_with(out, rho) == pytest.approx(0.25, abs=1e-15)

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatch):
            trace_with(identity(3), IDENTITY_2)


class TestTensor:
    def test_identity_squares(self):
        assert np.array_equal(tensor(IDENTITY_2, IDENTITY_2).matrix, np.eye(4))

    def test_sigma_z_with_identity(self):
        out = tensor(SIGMA_Z, IDENTITY_2)
        assert np.allclose(out.matrix, np.diag([1, 1, -1, -1]))

    def test_projector_pair(self):
        out = tensor(PI_Z, projector_from_direction((0, 0, 1), -1))
        assert np.allclose(out.matrix, np.diag([0, 1, 0, 0]), atol=1e-15)

    def test_trace_multiplicative(self):
        a, b = hermitian_pair(3, 21)
        assert abs(tensor(a, b).trace - a.trace * b.trace) <= 1e-12


class TestHelpers:
    def test_idempotency_residual_zero_for_projector(self):
        assert idempotency_residual(PI_Z) <= 1e-15

    def test_commutator_norm_zero_for_commuting(self):
        assert commutator_norm(SIGMA_Z, identity(2)) == 0.0

    def test_commutator_norm_pauli(self):
        # [sx, sy] = 2i sz: entrywise max-norm 2
        assert commutator_norm(SIGMA_X, SIGMA_Y) == pytest.approx(2.0)
