"""Dense complex linear algebra, Hadamard-type matrices and Hermitian spectra."""

from .hadamard import (
    HADAMARD_KINDS,
    dft_apply,
    dft_matrix,
    fwht_apply,
    hadamard_matrix,
    is_power_of_two,
    sylvester_hadamard,
    unitary_hadamard_apply,
    validate_hadamard,
)
from .matrix import (
    ComplexMatrix,
    MatrixNorms,
    as_array,
    dump_matrix,
    hs_norm,
    matrix_norms,
    operator_norm,
)
from .spectra import (
    EdfDistance,
    SpectralSample,
    edf_distance,
    edf_eval,
    hermitian_eigenvalues,
    numerical_rank,
)

__all__ = [
    "HADAMARD_KINDS",
    "ComplexMatrix",
    "EdfDistance",
    "MatrixNorms",
    "SpectralSample",
    "as_array",
    "dft_apply",
    "dft_matrix",
    "dump_matrix",
    "edf_distance",
    "edf_eval",
    "fwht_apply",
    "hadamard_matrix",
    "hermitian_eigenvalues",
    "hs_norm",
    "is_power_of_two",
    "matrix_norms",
    "numerical_rank",
    "operator_norm",
    "sylvester_hadamard",
    "unitary_hadamard_apply",
    "validate_hadamard",
]
