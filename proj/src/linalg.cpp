#include "otm/linalg.hpp"

#include <cmath>

namespace otm {

namespace {

// Largest |entry|, 0 for an empty matrix.
double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool square(const Matrix& m) { return m.rows() == m.cols() && m.rows() > 0; }

// Multiply each column by a unit phase so its first component with
// |v_j| > 1e-8 becomes real positive.  A unit vector always has such a
// component (max |v_j| >= 1/sqrt(d)).
void fix_column_phases(Matrix& v) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        for (Eigen::Index r = 0; r < v.rows(); ++r) {
            const double a = std::abs(v(r, c));
            if (a > 1e-8) {
                v.col(c) *= std::conj(v(r, c)) / a;
                break;
            }
        }
    }
}

// Replace the eigenvector columns [begin, end) -- which span a degenerate
// eigenspace -- by the orthonormal basis obtained from projecting the
// coordinate axes e_0, e_1, ... onto that subspace in index order.  The
// result depends only on the subspace, not on the solver's arbitrary basis.
void canonicalize_cluster(Matrix& v, Eigen::Index begin, Eigen::Index end) {
    const Eigen::Index d = v.rows();
    const Eigen::Index r = end - begin;
    if (r < 2) return;

    const Matrix cluster = v.middleCols(begin, r);
    Matrix picked(d, r);
    Eigen::Index taken = 0;
    for (Eigen::Index j = 0; j < d && taken < r; ++j) {
        // Projection of e_j onto the subspace: cluster * (cluster^dag e_j).
        Vector cand = cluster * cluster.row(j).adjoint();
        // Gram-Schmidt against the vectors already picked (twice, for
        // orthogonality at working precision).
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index t = 0; t < taken; ++t)
                cand -= picked.col(t).dot(cand) * picked.col(t);
        const double nrm = cand.norm();
        if (nrm > 1e-7) picked.col(taken++) = cand / nrm;
    }
    // The d coordinate axes span everything, so an r-dimensional subspace
    // always yields r picks; this is a belt-and-suspenders guard.
    if (taken != r)
        throw NoConvergence("degenerate-cluster reorthonormalization failed");
    v.middleCols(begin, r) = picked;
}

}  // namespace

bool is_finite(const Matrix& m) { return m.size() > 0 && m.allFinite(); }

bool is_hermitian(const Matrix& m, double tol) {
    if (!square(m) || !is_finite(m)) return false;
    return max_abs(m - m.adjoint()) <= tol;
}

bool is_unitary(const Matrix& m, double tol) {
    if (!square(m) || !is_finite(m)) return false;
    return max_abs(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())) <= tol;
}

EigenSystem herm_eig(const Matrix& h) {
    if (!is_hermitian(h, hermiticity_tol))
        throw NotHermitian("herm_eig: input is not Hermitian within 1e-9");

    // Symmetrize away the sub-tolerance asymmetry before solving.
    const Matrix hs = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hs);
    if (solver.info() != Eigen::Success)
        throw NoConvergence("herm_eig: eigensolver did not converge");

    EigenSystem es;
    es.values = solver.eigenvalues();  // ascending by contract
    es.vectors = solver.eigenvectors();

    // Deterministic tie-breaking: group near-equal eigenvalues and rebuild
    // each group's basis from coordinate-axis projections.
    const double gap_tol = 1e-9 * max_abs(hs);
    const Eigen::Index d = es.values.size();
    Eigen::Index begin = 0;
    for (Eigen::Index i = 1; i <= d; ++i) {
        if (i == d || es.values(i) - es.values(i - 1) > gap_tol) {
            canonicalize_cluster(es.vectors, begin, i);
            begin = i;
        }
    }
    fix_column_phases(es.vectors);
    return es;
}

Matrix mat_fn_hermitian(const EigenSystem& es, Complex c) {
    const Eigen::Index d = es.values.size();
    Vector f(d);
    for (Eigen::Index i = 0; i < d; ++i) f(i) = std::exp(c * es.values(i));
    return es.vectors * f.asDiagonal() * es.vectors.adjoint();
}

Matrix mat_fn_hermitian(const Matrix& h, Complex c) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw std::invalid_argument("mat_fn_hermitian: non-finite scalar");
    return mat_fn_hermitian(herm_eig(h), c);
}

Matrix kron(const Matrix& a, const Matrix& b, int dim_cap) {
    if (!square(a) || !square(b))
        throw DimensionMismatch("kron: operands must be square and non-empty");
    const Eigen::Index da = a.rows(), db = b.rows();
    if (da * db > dim_cap)
        throw DimensionOverflow("kron: product dimension exceeds cap");
    Matrix out(da * db, da * db);
    for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index j = 0; j < da; ++j)
            out.block(i * db, j * db, db, db) = a(i, j) * b;
    return out;
}

}  // namespace otm
