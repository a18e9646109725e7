#include "otm/thermo.hpp"

#include <cmath>

namespace otm {

namespace {

constexpr double support_cutoff = 1e-14;  // eigenvalues below this are "zero"

// Boltzmann weights e^{-beta E_i} relative to the smallest energy, plus the
// unshifted partition sum.  Shifting by E_min keeps the normalized weights
// finite for any beta the exponentials themselves can survive.
struct BoltzmannWeights {
    std::vector<double> normalized;  // sums to 1 exactly up to roundoff
    double partition = 0.0;          // sum_i e^{-beta E_i}, unshifted
};

BoltzmannWeights boltzmann(const RealVector& energies, double beta) {
    const double e_min = energies.minCoeff();
    BoltzmannWeights w;
    w.normalized.resize(static_cast<std::size_t>(energies.size()));
    double shifted_sum = 0.0;
    for (Eigen::Index i = 0; i < energies.size(); ++i) {
        const double t = std::exp(-beta * (energies(i) - e_min));
        w.normalized[static_cast<std::size_t>(i)] = t;
        shifted_sum += t;
    }
    for (double& t : w.normalized) t /= shifted_sum;
    w.partition = std::exp(-beta * e_min) * shifted_sum;
    return w;
}

// Density matrix from an orthonormal column frame and normalized weights.
Matrix mixture(const Matrix& columns, const std::vector<double>& weights) {
    Matrix rho = Matrix::Zero(columns.rows(), columns.rows());
    for (Eigen::Index i = 0; i < columns.cols(); ++i)
        rho += weights[static_cast<std::size_t>(i)] *
               (columns.col(i) * columns.col(i).adjoint());
    return 0.5 * (rho + rho.adjoint());
}

void check_density(const Matrix& rho, const char* who) {
    if (!is_hermitian(rho, 1e-9))
        throw std::invalid_argument(std::string(who) + ": not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-6 ||
        std::abs(rho.trace().imag()) > 1e-9)
        throw std::invalid_argument(std::string(who) + ": trace is not 1");
}

}  // namespace

// -------------------------------------------------------------- validate ----

void validate_spec(const SystemSpec& spec) {
    if (!is_hermitian(spec.h0, hermiticity_tol))
        throw NotHermitian("SystemSpec: h0 is not Hermitian within 1e-9");
    if (!is_hermitian(spec.h_tau, hermiticity_tol))
        throw NotHermitian("SystemSpec: h_tau is not Hermitian within 1e-9");
    const Eigen::Index d = spec.h0.rows();
    if (spec.h_tau.rows() != d || spec.u_evol.rows() != d ||
        spec.u_evol.cols() != d)
        throw DimensionMismatch("SystemSpec: h0/h_tau/u_evol dimensions differ");
    if (!is_unitary(spec.u_evol, unitarity_tol))
        throw std::invalid_argument("SystemSpec: u_evol is not unitary within 1e-9");
    if (!(spec.beta > 0.0) || !std::isfinite(spec.beta))
        throw std::invalid_argument("SystemSpec: beta must be positive");
    if (spec.initial_basis) {
        const Matrix& b = *spec.initial_basis;
        if (b.rows() != d || b.cols() != d)
            throw DimensionMismatch("SystemSpec: initial_basis must be d x d");
        if (!is_finite(b) ||
            (b.adjoint() * b - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9)
            throw std::invalid_argument(
                "SystemSpec: initial_basis columns are not orthonormal within 1e-9");
    }
}

SystemSpec preset_two_qubit_quench() {
    Matrix eye = Matrix::Identity(2, 2);
    Matrix z(2, 2), x(2, 2), y(2, 2);
    z << 1, 0, 0, -1;
    x << 0, 1, 1, 0;
    y << 0, Complex(0, -1), Complex(0, 1), 0;

    const double w = 2.0, big_omega = 3.0, j = 1.0, t = M_PI / 4.0;
    SystemSpec spec;
    spec.h0 = w * (kron(z, eye) + kron(eye, z));
    spec.h_tau = j * kron(x, x);
    // exp(-i (W t / 2) (Y0 + Y1)): a global Y rotation by angle W t.
    spec.u_evol = mat_fn_hermitian(kron(y, eye) + kron(eye, y),
                                   Complex(0, -big_omega * t / 2.0));
    spec.beta = 0.5;
    return spec;
}

// ----------------------------------------------------------------- frame ----

ConditionalFrame conditional_frame(const SystemSpec& spec) {
    validate_spec(spec);
    ConditionalFrame frame;
    frame.default_basis = !spec.initial_basis.has_value();

    const Eigen::Index d = spec.h0.rows();
    if (frame.default_basis) {
        const EigenSystem es0 = herm_eig(spec.h0);
        frame.basis = es0.vectors;
        frame.e_initial = es0.values;
        frame.g0 = spec.h0;  // the basis diagonalizes H0, so G0 *is* H0
    } else {
        frame.basis = *spec.initial_basis;
        frame.e_initial.resize(d);
        for (Eigen::Index i = 0; i < d; ++i)
            frame.e_initial(i) =
                (frame.basis.col(i).adjoint() * spec.h0 * frame.basis.col(i))(0).real();
        Matrix g0 = frame.basis * frame.e_initial.cast<Complex>().asDiagonal() *
                    frame.basis.adjoint();
        frame.g0 = 0.5 * (g0 + g0.adjoint());
    }

    const Matrix h_heis = spec.u_evol.adjoint() * spec.h_tau * spec.u_evol;
    frame.e_final.resize(d);
    for (Eigen::Index i = 0; i < d; ++i)
        frame.e_final(i) =
            (frame.basis.col(i).adjoint() * h_heis * frame.basis.col(i))(0).real();

    const Matrix evolved = spec.u_evol * frame.basis;  // columns U|psi_i>
    Matrix g_tau = evolved * frame.e_final.cast<Complex>().asDiagonal() *
                   evolved.adjoint();
    frame.g_tau = 0.5 * (g_tau + g_tau.adjoint());
    return frame;
}

// ---------------------------------------------------------------- states ----

std::pair<Matrix, double> gibbs_state(const Matrix& h, double beta) {
    if (beta < 0.0 || !std::isfinite(beta))
        throw std::invalid_argument("gibbs_state: beta must be >= 0");
    if (!is_hermitian(h, hermiticity_tol))
        throw NotHermitian("gibbs_state: h is not Hermitian within 1e-9");
    const Eigen::Index d = h.rows();
    if (beta == 0.0)  // infinite-temperature limit
        return {Matrix::Identity(d, d) / static_cast<double>(d),
                static_cast<double>(d)};

    const EigenSystem es = herm_eig(h);
    const BoltzmannWeights w = boltzmann(es.values, beta);
    return {mixture(es.vectors, w.normalized), w.partition};
}

Matrix conditional_hamiltonian(const SystemSpec& spec, Endpoint endpoint) {
    const ConditionalFrame frame = conditional_frame(spec);
    return endpoint == Endpoint::initial ? frame.g0 : frame.g_tau;
}

std::pair<Matrix, double> conditional_thermal_state(const SystemSpec& spec,
                                                    Endpoint endpoint) {
    const ConditionalFrame frame = conditional_frame(spec);
    const bool initial = endpoint == Endpoint::initial;
    const RealVector& energies = initial ? frame.e_initial : frame.e_final;
    const BoltzmannWeights w = boltzmann(energies, spec.beta);
    // exp(-beta G)/Z~ expressed directly in the frame that diagonalizes G:
    // weights over |psi_i> (initial) or U|psi_i> (final).
    const Matrix columns =
        initial ? frame.basis : Matrix(spec.u_evol * frame.basis);
    return {mixture(columns, w.normalized), w.partition};
}

// --------------------------------------------------------- distributions ----

WorkDistribution work_distribution(const SystemSpec& spec, Direction direction) {
    const ConditionalFrame frame = conditional_frame(spec);
    const bool forward = direction == Direction::forward;
    const BoltzmannWeights w =
        boltzmann(forward ? frame.e_initial : frame.e_final, spec.beta);

    WorkDistribution dist;
    dist.direction = direction;
    dist.atoms.resize(static_cast<std::size_t>(frame.e_initial.size()));
    for (Eigen::Index i = 0; i < frame.e_initial.size(); ++i) {
        WorkAtom& atom = dist.atoms[static_cast<std::size_t>(i)];
        atom.index = static_cast<int>(i);
        atom.work = frame.e_final(i) - frame.e_initial(i);
        atom.probability = w.normalized[static_cast<std::size_t>(i)];
    }
    return dist;
}

TtmDistribution ttm_distribution(const SystemSpec& spec) {
    validate_spec(spec);
    if (spec.initial_basis)
        throw BasisNotSupported(
            "ttm_distribution: defined only for the default (H0 eigen) basis");

    const EigenSystem es0 = herm_eig(spec.h0);
    const EigenSystem es_tau = herm_eig(spec.h_tau);
    const BoltzmannWeights w0 = boltzmann(es0.values, spec.beta);
    const Matrix amplitudes = es_tau.vectors.adjoint() * spec.u_evol * es0.vectors;

    const Eigen::Index d = es0.values.size();
    TtmDistribution dist;
    dist.atoms.reserve(static_cast<std::size_t>(d * d));
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            dist.atoms.push_back(
                {static_cast<int>(i), static_cast<int>(j), es0.values(i),
                 es_tau.values(j),
                 w0.normalized[static_cast<std::size_t>(i)] *
                     std::norm(amplitudes(j, i))});
    return dist;
}

// -------------------------------------------------------------- entropies ----

double von_neumann_entropy(const Matrix& rho) {
    check_density(rho, "von_neumann_entropy");
    const EigenSystem es = herm_eig(rho);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.values.size(); ++i)
        if (es.values(i) > support_cutoff)
            s -= es.values(i) * std::log(es.values(i));
    return s;
}

double relative_entropy(const Matrix& rho, const Matrix& sigma) {
    check_density(rho, "relative_entropy: rho");
    check_density(sigma, "relative_entropy: sigma");
    if (rho.rows() != sigma.rows())
        throw DimensionMismatch("relative_entropy: dimension mismatch");

    const EigenSystem er = herm_eig(rho);
    const EigenSystem es = herm_eig(sigma);

    // Weight of rho outside sigma's support must be negligible, else the
    // divergence is +infinity.
    double leak = 0.0;
    double tr_rho_ln_sigma = 0.0;
    for (Eigen::Index j = 0; j < es.values.size(); ++j) {
        const double overlap =
            (es.vectors.col(j).adjoint() * rho * es.vectors.col(j))(0).real();
        if (es.values(j) <= support_cutoff)
            leak += overlap;
        else
            tr_rho_ln_sigma += overlap * std::log(es.values(j));
    }
    if (leak > 1e-10)
        throw SupportMismatch(
            "relative_entropy: rho has weight outside sigma's support");

    double tr_rho_ln_rho = 0.0;
    for (Eigen::Index i = 0; i < er.values.size(); ++i)
        if (er.values(i) > support_cutoff)
            tr_rho_ln_rho += er.values(i) * std::log(er.values(i));

    return tr_rho_ln_rho - tr_rho_ln_sigma;
}

// ----------------------------------------------------------------- report ----

ThermoReport thermo_report(const SystemSpec& spec) {
    const ConditionalFrame frame = conditional_frame(spec);
    const double beta = spec.beta;

    const auto [rho0_eq, z0] = gibbs_state(spec.h0, beta);
    const auto [rho_tau_eq, z_tau] = gibbs_state(spec.h_tau, beta);
    const BoltzmannWeights fwd = boltzmann(frame.e_initial, beta);
    const BoltzmannWeights bwd = boltzmann(frame.e_final, beta);

    ThermoReport rep;
    rep.z0 = z0;
    rep.z_tau = z_tau;
    rep.z_tilde_0 = fwd.partition;
    rep.z_tilde_tau = bwd.partition;
    rep.delta_f = -std::log(z_tau / z0) / beta;

    // Conditional thermal states, assembled in their own eigenframes.
    const Matrix rho_tilde_0 = mixture(frame.basis, fwd.normalized);
    const Matrix evolved = spec.u_evol * frame.basis;
    const Matrix rho_tilde_tau = mixture(evolved, bwd.normalized);
    // Roundoff can leave these a hair below zero; they are nonnegative.
    rep.rel_ent_0 = std::max(0.0, relative_entropy(rho_tilde_0, rho0_eq));
    rep.rel_ent_tau = std::max(0.0, relative_entropy(rho_tilde_tau, rho_tau_eq));

    double avg_work = 0.0;
    double kl = 0.0;
    for (Eigen::Index i = 0; i < frame.e_initial.size(); ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const double p = fwd.normalized[k];
        const double q = bwd.normalized[k];
        avg_work += p * (frame.e_final(i) - frame.e_initial(i));
        if (p > 0.0) {
            if (q == 0.0)
                throw DegenerateDistribution(
                    "thermo_report: backward probability underflowed to zero "
                    "against nonzero forward weight");
            kl += p * std::log(p / q);
        }
    }
    rep.avg_work = avg_work;
    rep.excess_work = avg_work - rep.delta_f;
    rep.kl_fb = kl;
    rep.crossing_work = rep.delta_f + (rep.rel_ent_tau - rep.rel_ent_0) / beta;
    return rep;
}

}  // namespace otm
