#include "otm/interferometry.hpp"

#include <cmath>
#include <set>

namespace otm {

namespace {

constexpr Complex iu{0.0, 1.0};

// Ancilla (x) target register as four d x d blocks:
//   rho = [[r00, r01], [r10, r11]],  r_ab = <a|_anc rho |b>_anc.
struct JointState {
    Matrix r00, r01, r10, r11;
};

// State after preparing |0>|psi> and the opening ancilla Hadamard.
JointState prepare(const Vector& psi) {
    const Matrix rho = 0.5 * (psi * psi.adjoint());
    return {rho, rho, rho, rho};
}

// Ancilla depolarizing: rho -> (1-p) rho + p (I/2 (x) tr_anc rho).
void depol_ancilla(JointState& s, double p) {
    if (p <= 0.0) return;
    const Matrix half_rest = 0.5 * (s.r00 + s.r11);
    s.r00 = (1.0 - p) * s.r00 + p * half_rest;
    s.r11 = (1.0 - p) * s.r11 + p * half_rest;
    s.r01 *= 1.0 - p;
    s.r10 *= 1.0 - p;
}

// Joint depolarizing on ancilla+target: rho -> (1-p) rho + p tr(rho) I/(2d).
void depol_joint(JointState& s, double p) {
    if (p <= 0.0) return;
    const Eigen::Index d = s.r00.rows();
    const double fill = p * (s.r00.trace() + s.r11.trace()).real() /
                        static_cast<double>(2 * d);
    s.r00 = (1.0 - p) * s.r00 + fill * Matrix::Identity(d, d);
    s.r11 = (1.0 - p) * s.r11 + fill * Matrix::Identity(d, d);
    s.r01 *= 1.0 - p;
    s.r10 *= 1.0 - p;
}

void apply_both_arms(JointState& s, const Matrix& v) {
    const Matrix vd = v.adjoint();
    s.r00 = v * s.r00 * vd;
    s.r01 = v * s.r01 * vd;
    s.r10 = v * s.r10 * vd;
    s.r11 = v * s.r11 * vd;
}

void apply_controlled(JointState& s, const Matrix& v) {
    const Matrix vd = v.adjoint();
    s.r01 = s.r01 * vd;
    s.r10 = v * s.r10;
    s.r11 = v * s.r11 * vd;
}

// Exact two-branch block (ancilla-|0> arm gets b0, |1> arm gets b1); used
// when a job carries no explicit gate plan.
void apply_branch_pair(JointState& s, const Matrix& b0, const Matrix& b1) {
    s.r00 = b0 * s.r00 * b0.adjoint();
    s.r01 = b0 * s.r01 * b1.adjoint();
    s.r10 = b1 * s.r10 * b0.adjoint();
    s.r11 = b1 * s.r11 * b1.adjoint();
}

void check_job_dims(const CircuitJob& job) {
    const Eigen::Index d = job.input_state.size();
    if (d == 0 || job.branch0.rows() != d || job.branch0.cols() != d ||
        job.branch1.rows() != d || job.branch1.cols() != d)
        throw DimensionMismatch("CircuitJob: branch/state dimensions differ");
    for (const Segment& seg : job.segments)
        if (seg.op.rows() != d || seg.op.cols() != d)
            throw DimensionMismatch("CircuitJob: segment dimension differs");
}

// P(measured 0) for one observable after folding in the final-rotation
// ancilla depolarizing and the classical readout flips.
//
// After the rotation H (X) or H S^dag (Y), the ancilla-0 population is
//   (tr rho +/- 2 Re/Im' tr r01) / 2
// and the final ancilla depolarizing pulls it toward tr(rho)/2; readout then
// mixes measured-0 and measured-1 probabilities affinely.  Tiny excursions
// past [0, 1] are pure roundoff (the inputs are trace expressions), so the
// value is snapped; this is what makes degenerate outcomes sample exactly.
double measured_zero(double interference, double total, double depol_1q,
                     const NoiseModel* noise) {
    double p0 = 0.5 * ((1.0 - depol_1q) * (total + interference) +
                       depol_1q * total);
    if (p0 > 1.0 - 1e-12) p0 = 1.0;
    if (p0 < 1e-12) p0 = 0.0;
    if (noise)
        p0 = p0 * (1.0 - noise->readout_p10) + (1.0 - p0) * noise->readout_p01;
    return p0;
}

}  // namespace

// ------------------------------------------------------------ noise model ----

NoiseModel NoiseModel::ibm_like() { return {3e-4, 1e-2, 3e-2, 1.5e-2}; }

void validate_noise(const NoiseModel& noise) {
    for (double p : {noise.depol_1q, noise.depol_ctrl, noise.readout_p01,
                     noise.readout_p10})
        if (!(p >= 0.0 && p <= 1.0))
            throw InvalidNoise("NoiseModel: probabilities must lie in [0, 1]");
}

bool is_noiseless(const NoiseModel& noise) {
    return noise.depol_1q == 0.0 && noise.depol_ctrl == 0.0 &&
           noise.readout_p01 == 0.0 && noise.readout_p10 == 0.0;
}

// ------------------------------------------------------------- exact value ----

Complex hadamard_test_exact(const CircuitJob& job) {
    check_job_dims(job);
    const double nrm2 = job.input_state.squaredNorm();
    if (nrm2 <= 0.0)
        throw std::invalid_argument("hadamard_test_exact: zero input state");
    // tr[b1 |psi><psi| b0^dag] = <b0 psi | b1 psi>
    return (job.branch0 * job.input_state)
               .dot(job.branch1 * job.input_state) / nrm2;
}

// ---------------------------------------------------------------- builders ----

std::vector<CircuitJob> build_forward_jobs(const SystemSpec& spec, double u) {
    const ConditionalFrame frame = conditional_frame(spec);
    const WorkDistribution fwd = work_distribution(spec, Direction::forward);

    const Matrix e0u = mat_fn_hermitian(herm_eig(frame.g0), -iu * u);
    const Matrix etau_u = mat_fn_hermitian(herm_eig(frame.g_tau), iu * u);
    const Matrix branch1 = etau_u * spec.u_evol * e0u;

    std::vector<CircuitJob> jobs;
    jobs.reserve(fwd.atoms.size());
    for (const WorkAtom& atom : fwd.atoms) {
        CircuitJob job;
        job.branch0 = spec.u_evol;
        job.branch1 = branch1;
        job.segments = {{e0u, true}, {spec.u_evol, false}, {etau_u, true}};
        job.input_state = frame.basis.col(atom.index);
        job.weight = atom.probability;
        jobs.push_back(std::move(job));
    }
    return jobs;
}

std::vector<BackwardJob> build_backward_jobs(const SystemSpec& spec, double u) {
    const ConditionalFrame frame = conditional_frame(spec);
    const WorkDistribution bwd = work_distribution(spec, Direction::backward);

    const EigenSystem es0 = herm_eig(frame.g0);
    const EigenSystem es_tau = herm_eig(frame.g_tau);
    const Matrix e0u = mat_fn_hermitian(es0, -iu * u);
    const Matrix etau_u = mat_fn_hermitian(es_tau, iu * u);

    // Classical preprocessing: Pauli coefficients of the two Boltzmann
    // factors.  Hermitian sources make these real.
    const PauliDecomposition a0 = pauli_decompose(
        mat_fn_hermitian(es0, Complex(-spec.beta, 0.0)));
    const PauliDecomposition a_tau = pauli_decompose(
        mat_fn_hermitian(es_tau, Complex(spec.beta, 0.0)));

    const Matrix udag = spec.u_evol.adjoint();
    const Matrix evolved = spec.u_evol * frame.basis;  // components of rho~_tau
    const int n_strings = static_cast<int>(a0.coeffs.size());

    // Pre-assembled per-string factors of branch1 = (sig_k e0u)(udag sig_l etau_u).
    // A string is live only if it can survive the pair cutoff with the best
    // possible partner from the other decomposition.
    double max0 = 0.0, max_tau = 0.0;
    for (int s = 0; s < n_strings; ++s) {
        max0 = std::max(max0, std::abs(a0.coeffs[s]));
        max_tau = std::max(max_tau, std::abs(a_tau.coeffs[s]));
    }
    std::vector<Matrix> left(n_strings), right(n_strings), sigma(n_strings);
    std::vector<bool> left_live(n_strings, false), right_live(n_strings, false);
    for (int s = 0; s < n_strings; ++s) {
        const bool lk = std::abs(a0.coeffs[s]) * max_tau > pauli_pair_cutoff;
        const bool rl = std::abs(a_tau.coeffs[s]) * max0 > pauli_pair_cutoff;
        if (lk || rl) sigma[s] = pauli_string(a0.n_qubits, s);
        if (lk) { left[s] = sigma[s] * e0u; left_live[s] = true; }
        if (rl) { right[s] = udag * sigma[s] * etau_u; right_live[s] = true; }
    }

    std::vector<BackwardJob> jobs;
    for (int k = 0; k < n_strings; ++k) {
        if (!left_live[k]) continue;
        for (int l = 0; l < n_strings; ++l) {
            if (!right_live[l]) continue;
            if (std::abs(a0.coeffs[k]) * std::abs(a_tau.coeffs[l]) <=
                pauli_pair_cutoff)
                continue;
            const Matrix branch1 = left[k] * right[l];
            const double coeff =
                (a0.coeffs[k] * a_tau.coeffs[l]).real();
            for (const WorkAtom& atom : bwd.atoms) {
                BackwardJob bj;
                bj.k = k;
                bj.l = l;
                bj.coeff = coeff;
                bj.job.branch0 = udag;
                bj.job.branch1 = branch1;
                bj.job.segments = {{etau_u, true},
                                   {sigma[l], true},
                                   {udag, false},
                                   {e0u, true},
                                   {sigma[k], true}};
                bj.job.input_state = evolved.col(atom.index);
                bj.job.weight = atom.probability;
                jobs.push_back(std::move(bj));
            }
        }
    }
    return jobs;
}

int backward_pair_count(const std::vector<BackwardJob>& jobs) {
    std::set<std::pair<int, int>> pairs;
    for (const BackwardJob& bj : jobs) pairs.insert({bj.k, bj.l});
    return static_cast<int>(pairs.size());
}

// ---------------------------------------------------------------- sampling ----

std::pair<double, double> measured_zero_probabilities(const CircuitJob& job,
                                                      const NoiseModel* noise) {
    if (noise) validate_noise(*noise);
    check_job_dims(job);
    const double nrm = job.input_state.norm();
    if (nrm <= 0.0)
        throw std::invalid_argument("measured_zero_probabilities: zero state");

    const double p1q = noise ? noise->depol_1q : 0.0;
    const double pctrl = noise ? noise->depol_ctrl : 0.0;

    JointState s = prepare(job.input_state / nrm);
    depol_ancilla(s, p1q);  // after the opening Hadamard
    if (job.segments.empty()) {
        apply_branch_pair(s, job.branch0, job.branch1);
        depol_joint(s, pctrl);
    } else {
        for (const Segment& seg : job.segments) {
            if (seg.controlled) {
                apply_controlled(s, seg.op);
                depol_joint(s, pctrl);
            } else {
                apply_both_arms(s, seg.op);
            }
        }
    }

    // Final rotations only shuffle traces; see measured_zero().
    const Complex z = s.r01.trace();
    const double total = (s.r00.trace() + s.r11.trace()).real();
    const double px = measured_zero(2.0 * z.real(), total, p1q, noise);
    const double py = measured_zero(-2.0 * z.imag(), total, p1q, noise);
    return {px, py};
}

double sampled_mean(double p0, std::int64_t shots, SplitMix64 g) {
    const BernoulliGate gate(p0);
    std::int64_t zeros = 0;
    if (gate.always) {
        zeros = shots;
    } else if (gate.threshold != 0) {
        for (std::int64_t s = 0; s < shots; ++s)
            zeros += g.next() < gate.threshold;
    }
    return static_cast<double>(2 * zeros - shots) / static_cast<double>(shots);
}

ShotEstimate sample_job(const CircuitJob& job, std::int64_t shots,
                        std::uint64_t seed,
                        const std::optional<NoiseModel>& noise) {
    if (shots < 1) throw std::invalid_argument("sample_job: shots must be >= 1");
    const NoiseModel* np = noise ? &*noise : nullptr;
    const auto [px, py] = measured_zero_probabilities(job, np);

    ShotEstimate est;
    est.shots = shots;
    est.mean_x = sampled_mean(px, shots, SplitMix64(derive_stream(seed, 0)));
    est.mean_y = sampled_mean(py, shots, SplitMix64(derive_stream(seed, 1)));
    est.value = Complex(est.mean_x, est.mean_y);
    return est;
}

}  // namespace otm
