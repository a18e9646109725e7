#pragma once

#include <complex>

#include <Eigen/Dense>

#include "otm/errors.hpp"

namespace otm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;  // dense square complex matrices throughout
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Tolerances are absolute-times-scale as documented per function; these are
// the two structural defaults used everywhere.
inline constexpr double hermiticity_tol = 1e-9;
inline constexpr double unitarity_tol = 1e-9;

// Tensor products refuse to grow past this dimension.
inline constexpr int default_dim_cap = 1 << 12;

// ------------------------------------------------------------ predicates ----

// True when every entry is finite (no NaN/Inf).
bool is_finite(const Matrix& m);

// True when m is square, finite, and max|m - m^dag| <= tol.
bool is_hermitian(const Matrix& m, double tol = hermiticity_tol);

// True when m is square, finite, and max|m^dag m - I| <= tol.
bool is_unitary(const Matrix& m, double tol = unitarity_tol);

// --------------------------------------------------------- eigensystems ----

struct EigenSystem {
    RealVector values;  // ascending
    Matrix vectors;     // columns: orthonormal eigenvectors, same order
};

// Hermitian eigendecomposition with deterministic output.
//
// Degenerate clusters (adjacent eigenvalue gap <= 1e-9 * max|H|) are
// re-orthonormalized by projecting the coordinate axes onto the cluster
// subspace in ascending index order, and every eigenvector's phase is fixed
// so its first non-negligible component is real positive.  Two calls on the
// same matrix therefore agree to the bit, independent of solver internals.
//
// Throws NotHermitian when the input fails is_hermitian(H, 1e-9);
// NoConvergence when the underlying iteration fails.
EigenSystem herm_eig(const Matrix& h);

// V diag(exp(c * lambda)) V^dag.  Purely imaginary c gives a unitary result;
// real c gives a Hermitian positive definite one.  Throws on non-finite c
// and propagates herm_eig errors.
Matrix mat_fn_hermitian(const Matrix& h, Complex c);

// Same, reusing an existing decomposition (no validation, no extra solve).
Matrix mat_fn_hermitian(const EigenSystem& es, Complex c);

// ------------------------------------------------------- tensor product ----

// Kronecker product; dim = dim(A) * dim(B).  Throws DimensionOverflow when
// the product dimension exceeds dim_cap.
Matrix kron(const Matrix& a, const Matrix& b, int dim_cap = default_dim_cap);

}  // namespace otm
