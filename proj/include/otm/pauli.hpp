#pragma once

#include <string>
#include <vector>

#include "otm/linalg.hpp"

namespace otm {

// -------------------------------------------------- Pauli-string algebra ----
//
// Basis of all n-qubit Pauli strings in canonical base-4 order: each index
// digit (most significant digit = leftmost tensor factor) selects one of
// I, X, Y, Z.  For n = 2 the order is II, IX, IY, IZ, XI, XX, ...  The
// strings are orthogonal under the trace inner product with norm d, which
// gives the coefficient formula below.

// Coefficients of a d x d matrix over the 4^n Pauli strings (d = 2^n),
// alpha_k = tr(M sigma_k) / d.  Hermitian sources yield real coefficients
// (up to roundoff); coefficients are stored complex so the decomposition is
// exact for arbitrary matrices.
struct PauliDecomposition {
    int n_qubits = 0;
    std::vector<Complex> coeffs;  // 4^n entries, canonical order
};

// sigma_k as a dense matrix; index in [0, 4^n).
Matrix pauli_string(int n_qubits, int index);

// Human-readable label, e.g. n=2, k=7 -> "XZ".
std::string pauli_label(int n_qubits, int index);

// Throws NotPowerOfTwoDim unless m is square with dim 2^n, n >= 1.
PauliDecomposition pauli_decompose(const Matrix& m);

// Sum alpha_k sigma_k; inverse of pauli_decompose up to roundoff.
Matrix pauli_reconstruct(const PauliDecomposition& dec);

}  // namespace otm
