"""Tests for liblab.linalg: matrices, Hadamard families and spectra."""
import json

import numpy as np
import pytest

from liblab.config import config
from liblab.errors import CapacityError, ShapeError, ValidationError
from liblab.linalg import (
    ComplexMatrix,
    SpectralSample,
    dft_apply,
    dft_matrix,
    dump_matrix,
    edf_distance,
    edf_eval,
    fwht_apply,
    hadamard_matrix,
    hermitian_eigenvalues,
    hs_norm,
    is_power_of_two,
    matrix_norms,
    numerical_rank,
    operator_norm,
    sylvester_hadamard,
    unitary_hadamard_apply,
    validate_hadamard,
)


class TestComplexMatrix:
    def test_rejects_non_square(self):
        with pytest.raises(ShapeError):
            ComplexMatrix(np.zeros((2, 3)))

    def test_hermitian_tag_is_validated(self):
        with pytest.raises(ValidationError):
            ComplexMatrix(np.array([[0, 1], [0, 0]]), hermitian=True)
        ComplexMatrix(np.array([[1, 1j], [-1j, 2]]), hermitian=True)

    def test_array_is_read_only(self):
        m = ComplexMatrix(np.eye(2))
        with pytest.raises(ValueError):
            m.array[0, 0] = 5

    def test_trusted_wraps_without_copy(self):
        arr = np.eye(3, dtype=np.complex128)
        m = ComplexMatrix.trusted(arr, hermitian=True)
        assert m.array is arr and m.hermitian
        assert not arr.flags.writeable
        with pytest.raises(ValidationError):
            ComplexMatrix.trusted(np.eye(3))
        with pytest.raises(ShapeError):
            ComplexMatrix.trusted(np.zeros((2, 3), dtype=np.complex128))

    def test_json_layout(self):
        m = ComplexMatrix(np.array([[1 + 2j, 0], [3, -1j]]))
        payload = json.loads(m.to_json())
        assert payload == {"n": 2, "entries": [1.0, 2.0, 0.0, 0.0, 3.0, 0.0, 0.0, -1.0]}
        np.testing.assert_array_equal(ComplexMatrix.from_json(m.to_json()).array, m.array)

    def test_from_json_rejects_wrong_length(self):
        with pytest.raises(ShapeError):
            ComplexMatrix.from_json('{"n": 2, "entries": [1, 0, 0, 0]}')
        with pytest.raises(ValidationError):
            ComplexMatrix.from_json('{"entries": []}')

    def test_dump_matrix(self, tmp_path):
        target = dump_matrix(hadamard_matrix("sylvester", 4), tmp_path / "h" / "h4.json")
        restored = ComplexMatrix.from_json(target.read_text())
        np.testing.assert_array_equal(restored.array, sylvester_hadamard(2).array)


class TestNorms:
    def test_operator_and_hs_norm(self):
        a = np.diag([3.0, -4.0, 0.0])
        assert operator_norm(a) == pytest.approx(4.0)
        assert hs_norm(a) == pytest.approx(5.0)
        norms = matrix_norms(a)
        assert norms.trace == pytest.approx(-1.0)

    def test_operator_norm_of_unitary(self):
        assert operator_norm(dft_matrix(7)) == pytest.approx(1.0)


class TestHadamard:
    def test_power_of_two(self):
        assert is_power_of_two(1) and is_power_of_two(512)
        assert not is_power_of_two(0) and not is_power_of_two(12)

    def test_sylvester_orthogonality(self):
        h = sylvester_hadamard(3).array
        np.testing.assert_allclose(h @ h.T, 8 * np.eye(8))
        assert set(np.unique(h.real)) == {-1.0, 1.0}

    def test_sylvester_caps(self):
        with pytest.raises(ValidationError):
            sylvester_hadamard(-1)
        with pytest.raises(CapacityError):
            sylvester_hadamard(config.MAX_SYLVESTER_K + 1)
        assert config.MAX_SYLVESTER_K == 12

    def test_sylvester_is_tagged_and_frozen(self):
        h = sylvester_hadamard(4)
        assert h.hermitian
        assert h.array.dtype == np.complex128
        assert not h.array.flags.writeable

    def test_dft_entries(self):
        f = dft_matrix(5).array
        np.testing.assert_allclose(f[1, 2], np.exp(-2j * np.pi * 2 / 5) / np.sqrt(5))
        np.testing.assert_allclose(f @ f.conj().T, np.eye(5), atol=1e-12)

    def test_hadamard_matrix_kinds(self):
        validate_hadamard(hadamard_matrix("sylvester", 16))
        validate_hadamard(hadamard_matrix("dft", 12))
        with pytest.raises(ValidationError):
            hadamard_matrix("sylvester", 12)
        with pytest.raises(ValidationError):
            hadamard_matrix("paley", 8)

    def test_validate_rejects_non_hadamard(self):
        with pytest.raises(ValidationError):
            validate_hadamard(2 * np.eye(4))
        with pytest.raises(ValidationError):
            validate_hadamard(np.ones((4, 4)))

    def test_fwht_matches_dense(self, generator):
        v = generator.standard_normal(32) + 1j * generator.standard_normal(32)
        np.testing.assert_allclose(fwht_apply(v), sylvester_hadamard(5).array @ v, atol=1e-10)

    def test_fwht_acts_on_columns(self, generator):
        m = generator.standard_normal((8, 3))
        np.testing.assert_allclose(fwht_apply(m), sylvester_hadamard(3).array @ m, atol=1e-10)

    def test_fwht_rejects_bad_length(self):
        with pytest.raises(ShapeError):
            fwht_apply(np.ones(6))

    def test_dft_apply_matches_dense(self, generator):
        v = generator.standard_normal(12) + 1j * generator.standard_normal(12)
        np.testing.assert_allclose(dft_apply(v), dft_matrix(12).array @ v, rtol=1e-10, atol=1e-12)

    def test_unitary_apply(self, generator):
        m = generator.standard_normal((16, 2))
        expected = sylvester_hadamard(4).array @ m / 4.0
        np.testing.assert_allclose(unitary_hadamard_apply("sylvester", m), expected, atol=1e-12)


class TestSpectra:
    def test_eigenvalues_sorted(self):
        sample = hermitian_eigenvalues(np.diag([3.0, -1.0, 2.0]))
        np.testing.assert_allclose(sample.eigenvalues, [-1.0, 2.0, 3.0])

    def test_eigenvectors(self, generator):
        g = generator.standard_normal((5, 5)) + 1j * generator.standard_normal((5, 5))
        h = (g + g.conj().T) / 2
        sample, q = hermitian_eigenvalues(h, eigenvectors=True)
        np.testing.assert_allclose(q @ np.diag(sample.eigenvalues) @ q.conj().T, h, atol=1e-10)

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValidationError):
            hermitian_eigenvalues(np.array([[0, 1], [0, 0]]))

    def test_unsorted_sample_rejected(self):
        with pytest.raises(ValidationError):
            SpectralSample(np.array([2.0, 1.0]))

    def test_edf_is_right_continuous(self):
        sample = SpectralSample(np.array([0.0, 1.0, 1.0, 2.0]))
        assert edf_eval(sample, 1.0) == pytest.approx(0.75)
        assert edf_eval(sample, 0.999) == pytest.approx(0.25)
        np.testing.assert_allclose(edf_eval(sample, np.array([-1.0, 5.0])), [0.0, 1.0])

    def test_numerical_rank(self):
        u = np.array([1.0, 1.0, 0.0, 0.0]) / np.sqrt(2)
        v = np.array([0.0, 0.0, 1.0, 0.0])
        assert numerical_rank(np.outer(u, u) - 2 * np.outer(v, v)) == 2
        assert numerical_rank(np.zeros((3, 3))) == 0

    def test_edf_distance_counts(self):
        first = SpectralSample(np.array([0.0, 1.0, 2.0, 3.0]))
        second = SpectralSample(np.array([0.0, 1.5, 2.5, 3.0]))
        gap = edf_distance(first, second)
        assert gap.count == 1
        assert gap.fraction == pytest.approx(0.25)

    def test_edf_distance_size_mismatch(self):
        with pytest.raises(ShapeError):
            edf_distance(SpectralSample(np.zeros(2)), SpectralSample(np.zeros(3)))
