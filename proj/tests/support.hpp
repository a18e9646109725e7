#pragma once

// Shared randomized-input helpers for the test binaries.  Everything is
// driven by the library's own SplitMix64 so failures replay exactly.

#include <cmath>

#include <Eigen/QR>

#include "otm/rng.hpp"
#include "otm/thermo.hpp"

namespace testsup {

using otm::Complex;
using otm::Matrix;
using otm::Vector;

inline double gaussian(otm::SplitMix64& g) {
    // Box-Muller; u1 is pulled away from 0 so the log stays finite.
    const double u1 = 1.0 - g.next_double();
    const double u2 = g.next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

inline Matrix ginibre(otm::SplitMix64& g, int d) {
    Matrix a(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) a(r, c) = Complex(gaussian(g), gaussian(g));
    return a;
}

// Hermitian with entries O(1/sqrt(d)); spectral radius stays O(1), so
// exp(+-beta H) never overflows for the beta range used in tests.
inline Matrix random_hermitian(otm::SplitMix64& g, int d, double scale = 1.0) {
    const Matrix a = ginibre(g, d);
    return (a + a.adjoint()) * (0.5 * scale / std::sqrt(static_cast<double>(d)));
}

inline Matrix haar_unitary(otm::SplitMix64& g, int d) {
    const Matrix a = ginibre(g, d);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ() * Matrix::Identity(d, d);
    const Matrix r = qr.matrixQR().template triangularView<Eigen::Upper>();
    for (int c = 0; c < d; ++c) {
        const Complex rc = r(c, c);
        q.col(c) *= rc / std::abs(rc);
    }
    return q;
}

inline otm::SystemSpec random_spec(otm::SplitMix64& g, int d, bool custom_basis) {
    otm::SystemSpec spec;
    spec.h0 = random_hermitian(g, d);
    spec.h_tau = random_hermitian(g, d);
    spec.u_evol = haar_unitary(g, d);
    spec.beta = 0.1 + 1.9 * g.next_double();
    if (custom_basis) spec.initial_basis = haar_unitary(g, d);
    return spec;
}

}  // namespace testsup
