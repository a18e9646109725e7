#include <cmath>

#include <doctest.h>

#include "otm/linalg.hpp"
#include "support.hpp"

using otm::Complex;
using otm::EigenSystem;
using otm::Matrix;

namespace {

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("predicates classify the obvious cases") {
    CHECK(otm::is_hermitian(pauli_x()));
    CHECK(otm::is_hermitian(pauli_y()));
    CHECK(otm::is_unitary(pauli_y()));
    CHECK_FALSE(otm::is_hermitian(Matrix::Zero(2, 3)));

    Matrix skew(2, 2);
    skew << 0, 1, -1, 0;
    CHECK_FALSE(otm::is_hermitian(skew));
    CHECK(otm::is_unitary(skew));

    Matrix bad = pauli_z();
    bad(0, 0) = std::nan("");
    CHECK_FALSE(otm::is_finite(bad));
    CHECK_FALSE(otm::is_hermitian(bad));
}

TEST_CASE("herm_eig sorts a diagonal matrix and keeps coordinate vectors") {
    Matrix h = Matrix::Zero(4, 4);
    h(0, 0) = 4;
    h(3, 3) = -4;  // spectrum {-4, 0, 0, 4} with a degenerate middle pair
    const EigenSystem es = otm::herm_eig(h);

    CHECK(es.values(0) == doctest::Approx(-4).epsilon(1e-14));
    CHECK(std::abs(es.values(1)) < 1e-13);
    CHECK(std::abs(es.values(2)) < 1e-13);
    CHECK(es.values(3) == doctest::Approx(4).epsilon(1e-14));

    // Deterministic columns: e3, e1, e2, e0.
    Matrix expect = Matrix::Zero(4, 4);
    expect(3, 0) = 1;
    expect(1, 1) = 1;
    expect(2, 2) = 1;
    expect(0, 3) = 1;
    CHECK(max_abs(es.vectors - expect) < 1e-12);
}

TEST_CASE("herm_eig fixes phases on a non-diagonal matrix") {
    const EigenSystem es = otm::herm_eig(pauli_x());
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(es.values(0) == doctest::Approx(-1).epsilon(1e-14));
    CHECK(es.values(1) == doctest::Approx(1).epsilon(1e-14));
    CHECK(std::abs(es.vectors(0, 0) - Complex(s, 0)) < 1e-12);
    CHECK(std::abs(es.vectors(1, 0) - Complex(-s, 0)) < 1e-12);
    CHECK(std::abs(es.vectors(0, 1) - Complex(s, 0)) < 1e-12);
    CHECK(std::abs(es.vectors(1, 1) - Complex(s, 0)) < 1e-12);
}

TEST_CASE("herm_eig is reproducible bit for bit") {
    otm::SplitMix64 g(11);
    const Matrix h = testsup::random_hermitian(g, 6);
    const EigenSystem a = otm::herm_eig(h);
    const EigenSystem b = otm::herm_eig(h);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK(max_abs(a.vectors - b.vectors) == 0.0);
}

TEST_CASE("herm_eig reconstructs and stays orthonormal on random input") {
    otm::SplitMix64 g(17);
    for (int d : {2, 3, 4, 5, 8}) {
        for (int rep = 0; rep < 4; ++rep) {
            const Matrix h = testsup::random_hermitian(g, d, 2.0);
            const EigenSystem es = otm::herm_eig(h);
            const Matrix rebuilt =
                es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
            const double scale = std::max(1.0, max_abs(h));
            CHECK(max_abs(rebuilt - h) < 1e-10 * scale * d);
            CHECK(max_abs(es.vectors.adjoint() * es.vectors - Matrix::Identity(d, d)) < 1e-10);
            for (int i = 1; i < d; ++i) CHECK(es.values(i) >= es.values(i - 1));
        }
    }
}

TEST_CASE("degenerate subspaces come out the same for equivalent inputs") {
    // Build the same projector twice through differently rotated frames; the
    // canonicalized eigenvectors must agree because they depend only on the
    // subspace, not on the solver's arbitrary basis inside it.
    otm::SplitMix64 g(23);
    const Matrix v = testsup::haar_unitary(g, 3);
    otm::RealVector lam(3);
    lam << 1.0, 1.0, 2.0;

    Matrix rot = Matrix::Identity(3, 3);  // rotate within the degenerate pair
    const double c = std::cos(0.7), s = std::sin(0.7);
    rot(0, 0) = c;
    rot(0, 1) = -s;
    rot(1, 0) = s;
    rot(1, 1) = c;

    const Matrix w = v * rot;
    const Matrix h1 = v * lam.cast<Complex>().asDiagonal() * v.adjoint();
    const Matrix h2 = w * lam.cast<Complex>().asDiagonal() * w.adjoint();
    REQUIRE(max_abs(h1 - h2) < 1e-13);

    const EigenSystem a = otm::herm_eig(h1);
    const EigenSystem b = otm::herm_eig(h2);
    CHECK(max_abs(a.vectors - b.vectors) < 1e-6);
}

TEST_CASE("herm_eig rejects bad input") {
    Matrix skew(2, 2);
    skew << 0, 1, -1, 0;
    CHECK_THROWS_AS(otm::herm_eig(skew), otm::NotHermitian);

    Matrix nonsquare = Matrix::Zero(2, 3);
    CHECK_THROWS_AS(otm::herm_eig(nonsquare), otm::NotHermitian);

    Matrix inf = Matrix::Zero(2, 2);
    inf(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(otm::herm_eig(inf), otm::NotHermitian);
}

TEST_CASE("mat_fn_hermitian reproduces closed forms") {
    // exp(i pi Z) = -I
    const Matrix expz = otm::mat_fn_hermitian(pauli_z(), Complex(0, M_PI));
    CHECK(max_abs(expz + Matrix::Identity(2, 2)) < 1e-12);

    // exp(0 * H) = I even for the zero matrix (fully degenerate spectrum).
    const Matrix id = otm::mat_fn_hermitian(Matrix::Zero(3, 3), Complex(1, 1));
    CHECK(max_abs(id - Matrix::Identity(3, 3)) < 1e-14);

    // Real weight on Z: diag(e, 1/e).
    const Matrix boltz = otm::mat_fn_hermitian(pauli_z(), Complex(1, 0));
    CHECK(std::abs(boltz(0, 0) - std::exp(1.0)) < 1e-12);
    CHECK(std::abs(boltz(1, 1) - std::exp(-1.0)) < 1e-12);
    CHECK(std::abs(boltz(0, 1)) < 1e-14);
}

TEST_CASE("mat_fn_hermitian semigroup and unitarity properties") {
    otm::SplitMix64 g(31);
    for (int rep = 0; rep < 5; ++rep) {
        const Matrix h = testsup::random_hermitian(g, 4);
        const Matrix a = otm::mat_fn_hermitian(h, Complex(0.3, 0.2));
        const Matrix b = otm::mat_fn_hermitian(h, Complex(0.5, -0.7));
        const Matrix ab = otm::mat_fn_hermitian(h, Complex(0.8, -0.5));
        CHECK(max_abs(a * b - ab) < 1e-11);

        const Matrix u = otm::mat_fn_hermitian(h, Complex(0, -1.3));
        CHECK(otm::is_unitary(u, 1e-10));
    }
}

TEST_CASE("mat_fn_hermitian rejects a non-finite coefficient") {
    CHECK_THROWS_AS(otm::mat_fn_hermitian(pauli_z(), Complex(std::nan(""), 0)),
                    std::invalid_argument);
}

TEST_CASE("kron reproduces small closed forms and scales traces") {
    const Matrix i2 = Matrix::Identity(2, 2);
    CHECK(max_abs(otm::kron(i2, i2) - Matrix::Identity(4, 4)) == 0.0);

    const Matrix zz = otm::kron(pauli_z(), pauli_z());
    otm::RealVector d(4);
    d << 1, -1, -1, 1;
    CHECK(max_abs(zz - Matrix(d.cast<Complex>().asDiagonal())) == 0.0);

    const Matrix xx = otm::kron(pauli_x(), pauli_x());
    CHECK(std::abs(xx(0, 3) - Complex(1, 0)) == 0.0);
    CHECK(std::abs(xx(1, 2) - Complex(1, 0)) == 0.0);
    CHECK(std::abs(xx(0, 0)) == 0.0);

    otm::SplitMix64 g(41);
    const Matrix a = testsup::random_hermitian(g, 3);
    const Matrix b = testsup::random_hermitian(g, 4);
    CHECK(std::abs(otm::kron(a, b).trace() - a.trace() * b.trace()) < 1e-12);
}

TEST_CASE("kron refuses to overflow the dimension cap") {
    const Matrix big = Matrix::Identity(70, 70);
    CHECK_THROWS_AS(otm::kron(big, big), otm::DimensionOverflow);
    CHECK_NOTHROW(otm::kron(big, big, 70 * 70));
}
