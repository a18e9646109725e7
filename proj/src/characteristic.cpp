#include "otm/characteristic.hpp"

#include <cmath>

namespace otm {

namespace {

constexpr Complex iu{0.0, 1.0};

// Normalized conditional thermal state from an eigenframe, as a matrix.
Matrix thermal_in_frame(const Matrix& columns, const RealVector& energies,
                        double beta) {
    const double e_min = energies.minCoeff();
    RealVector w(energies.size());
    for (Eigen::Index i = 0; i < energies.size(); ++i)
        w(i) = std::exp(-beta * (energies(i) - e_min));
    w /= w.sum();
    Matrix rho = columns * w.cast<Complex>().asDiagonal() * columns.adjoint();
    return 0.5 * (rho + rho.adjoint());
}

}  // namespace

CharacteristicValue cf_spectral(const WorkDistribution& dist, Complex u_arg,
                                Direction direction) {
    double total = 0.0;
    for (const WorkAtom& atom : dist.atoms) {
        if (!(atom.probability >= 0.0))
            throw std::invalid_argument("cf_spectral: negative probability");
        total += atom.probability;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("cf_spectral: distribution is not normalized");

    const Complex sign = direction == Direction::forward ? iu : -iu;
    Complex sum = 0.0;
    for (const WorkAtom& atom : dist.atoms)
        sum += atom.probability * std::exp(sign * u_arg * atom.work);
    return {u_arg, sum};
}

CharacteristicValue cf_trace(const SystemSpec& spec, double u, TraceForm which) {
    if (!std::isfinite(u)) throw std::invalid_argument("cf_trace: non-finite u");
    const ConditionalFrame frame = conditional_frame(spec);
    const EigenSystem es0 = herm_eig(frame.g0);
    const EigenSystem es_tau = herm_eig(frame.g_tau);
    const double beta = spec.beta;

    if (which == TraceForm::forward) {
        const Matrix rho0 = thermal_in_frame(frame.basis, frame.e_initial, beta);
        const Matrix value = spec.u_evol.adjoint() *
                             mat_fn_hermitian(es_tau, iu * u) * spec.u_evol *
                             mat_fn_hermitian(es0, -iu * u) * rho0;
        return {Complex(u, 0.0), value.trace()};
    }

    // Backward at the shifted argument -u + i beta, written with explicit
    // one-parameter exponentials (real angle, real weight).
    const Matrix rho_tau = thermal_in_frame(Matrix(spec.u_evol * frame.basis),
                                            frame.e_final, beta);
    const Matrix value = spec.u_evol * mat_fn_hermitian(es0, -iu * u) *
                         mat_fn_hermitian(es0, Complex(-beta, 0.0)) *
                         spec.u_evol.adjoint() * mat_fn_hermitian(es_tau, iu * u) *
                         mat_fn_hermitian(es_tau, Complex(beta, 0.0)) * rho_tau;
    return {Complex(-u, beta), value.trace()};
}

Complex symmetry_ratio(const SystemSpec& spec, double u) {
    const Complex num = cf_trace(spec, u, TraceForm::forward).value;
    const Complex den = cf_trace(spec, u, TraceForm::backward_shifted).value;
    if (std::abs(den) <= 1e-14)
        throw DivisionNearZero("symmetry_ratio: |C_b(-u+i beta)| <= 1e-14");
    return num / den;
}

}  // namespace otm
