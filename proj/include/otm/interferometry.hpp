#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "otm/pauli.hpp"
#include "otm/rng.hpp"
#include "otm/thermo.hpp"

namespace otm {

// ----------------------------------------------------------- noise model ----

// Stylized device-noise model: one joint depolarizing channel after every
// controlled block, one ancilla depolarizing channel after every ancilla
// Hadamard (the opening one and the one inside each measurement-basis
// rotation), and classical readout bit-flips.  Magnitudes for the bundled
// "ibm-like" preset sit in the range reported for current superconducting
// hardware; the channel placement is this library's own modeling choice.
struct NoiseModel {
    double depol_1q = 0.0;      // ancilla depolarizing, per ancilla Hadamard
    double depol_ctrl = 0.0;    // joint depolarizing, per controlled block
    double readout_p01 = 0.0;   // P(measured 0 | prepared 1)
    double readout_p10 = 0.0;   // P(measured 1 | prepared 0)

    static NoiseModel ibm_like();
};

// Throws InvalidNoise unless every probability is finite and in [0, 1].
void validate_noise(const NoiseModel& noise);

bool is_noiseless(const NoiseModel& noise);

// ----------------------------------------------------------- circuit jobs ----

enum class Observable { x, y };

// One gate of the time-ordered plan; controlled ops act only in the
// ancilla-|1> arm, uncontrolled ops act in both.
struct Segment {
    Matrix op;       // unitary on the target register
    bool controlled = false;
};

// A two-branch interferometry instance: the ancilla starts in |+>, applies
// branch0 in its |0> arm and branch1 in its |1> arm, and its X/Y
// expectations estimate Re/Im of tr[branch1 rho branch0^dag].
//
// `segments`, when present, is the physical gate plan and must compose to
// the branch pair (builders guarantee it); it determines where controlled-
// block noise strikes.  An empty plan is simulated as a single controlled
// two-branch block.
struct CircuitJob {
    Matrix branch0;
    Matrix branch1;
    std::vector<Segment> segments;
    Vector input_state;  // pure component of the (possibly mixed) input
    double weight = 1.0; // mixture weight of this component
    std::optional<Observable> observable;  // set when denoting one physical circuit
};

// tr[branch1 rho branch0^dag] for rho = |psi><psi| (input normalized);
// equals <X> + i <Y> of the ideal circuit.  Throws DimensionMismatch.
Complex hadamard_test_exact(const CircuitJob& job);

// ---------------------------------------------------------- job builders ----

// Forward family: one job per initial component |psi_i> with weight
// e^{-beta <psi_i|H0|psi_i>}/Z~_0,
//   branch0 = U,  branch1 = e^{i u G_tau} U e^{-i u G0}.
// The weighted exact sum over jobs is C_f(u).  Circuits = 2 * jobs
// (each job is measured in both X and Y).
std::vector<CircuitJob> build_forward_jobs(const SystemSpec& spec, double u);

// Backward family: for every Pauli-string pair (k, l) whose coefficient
// product survives pruning, one job per component U|psi_i> of rho~_tau with
// weight e^{-beta <psi_i|U^dag H_tau U|psi_i>}/Z~_tau,
//   branch0 = U^dag,  branch1 = sigma_k e^{-i u G0} U^dag sigma_l e^{i u G_tau}.
// coeff = alpha_k^{(0)} alpha_l^{(tau)} from the classical decompositions of
// e^{-beta G0} and e^{+beta G_tau}; sum_kl coeff * F_kl = C_b(-u + i beta)
// where F_kl is the weighted exact sum over the pair's jobs.
struct BackwardJob {
    int k = 0;           // Pauli index into the e^{-beta G0} decomposition
    int l = 0;           // Pauli index into the e^{+beta G_tau} decomposition
    double coeff = 0.0;  // alpha_k^(0) * alpha_l^(tau) (real: Hermitian sources)
    CircuitJob job;
};

// Pruning threshold on |alpha_k^(0) * alpha_l^(tau)|.
inline constexpr double pauli_pair_cutoff = 1e-12;

std::vector<BackwardJob> build_backward_jobs(const SystemSpec& spec, double u);

// Number of distinct (k, l) pairs present.
int backward_pair_count(const std::vector<BackwardJob>& jobs);

// Physical circuit count: every job is run once per observable.
inline std::int64_t circuit_count(std::size_t n_jobs) {
    return 2 * static_cast<std::int64_t>(n_jobs);
}

// -------------------------------------------------------------- sampling ----

struct ShotEstimate {
    double mean_x = 0.0;  // in [-1, 1]
    double mean_y = 0.0;  // in [-1, 1]
    std::int64_t shots = 0;
    Complex value;        // mean_x + i mean_y
};

// Exact P(ancilla reads 0) for the X and Y measurements of a job, noise
// channels and readout flips included (nullptr noise = ideal).  This is the
// density-matrix simulation of the full ancilla+target circuit; sampling is
// then a Bernoulli draw per shot against these probabilities.
std::pair<double, double> measured_zero_probabilities(const CircuitJob& job,
                                                      const NoiseModel* noise);

// Mean of `shots` +/-1 outcomes at measured-0 probability p0, drawn from the
// given stream.  This is the one true draw loop: sample_job and the campaign
// layer both use it, which is what makes their results bit-identical.
double sampled_mean(double p0, std::int64_t shots, SplitMix64 stream);

// Samples `shots` outcomes per observable (X stream and Y stream derived
// from the seed) and returns the +/-1 means.  Deterministic for fixed
// (job, shots, seed, noise), independent of thread count or call order.
// Throws InvalidNoise / DimensionMismatch / invalid_argument (shots < 1).
ShotEstimate sample_job(const CircuitJob& job, std::int64_t shots,
                        std::uint64_t seed,
                        const std::optional<NoiseModel>& noise = {});

}  // namespace otm
