#include <cmath>
#include <set>

#include <doctest.h>

#include "otm/characteristic.hpp"
#include "otm/interferometry.hpp"
#include "support.hpp"

using otm::CircuitJob;
using otm::Complex;
using otm::Matrix;
using otm::NoiseModel;
using otm::SystemSpec;
using otm::Vector;

namespace {

CircuitJob trivial_job(int d = 2) {
    CircuitJob job;
    job.branch0 = Matrix::Identity(d, d);
    job.branch1 = Matrix::Identity(d, d);
    job.input_state = Vector::Zero(d);
    job.input_state(0) = 1;
    return job;
}

// F_kl for one backward pair, assembled from the pair's component jobs.
Complex pair_value(const std::vector<otm::BackwardJob>& jobs, int k, int l) {
    Complex sum = 0;
    for (const otm::BackwardJob& bj : jobs)
        if (bj.k == k && bj.l == l) sum += bj.job.weight * otm::hadamard_test_exact(bj.job);
    return sum;
}

}  // namespace

TEST_CASE("noise model validation and the bundled preset") {
    const NoiseModel ibm = NoiseModel::ibm_like();
    CHECK(ibm.depol_1q == doctest::Approx(3e-4).epsilon(1e-15));
    CHECK(ibm.depol_ctrl == doctest::Approx(1e-2).epsilon(1e-15));
    CHECK(ibm.readout_p01 == doctest::Approx(3e-2).epsilon(1e-15));
    CHECK(ibm.readout_p10 == doctest::Approx(1.5e-2).epsilon(1e-15));
    CHECK_NOTHROW(otm::validate_noise(ibm));
    CHECK_FALSE(otm::is_noiseless(ibm));
    CHECK(otm::is_noiseless(NoiseModel{}));

    NoiseModel bad;
    bad.depol_ctrl = 1.5;
    CHECK_THROWS_AS(otm::validate_noise(bad), otm::InvalidNoise);
    bad.depol_ctrl = -0.1;
    CHECK_THROWS_AS(otm::validate_noise(bad), otm::InvalidNoise);
    bad.depol_ctrl = std::nan("");
    CHECK_THROWS_AS(otm::validate_noise(bad), otm::InvalidNoise);
}

TEST_CASE("hadamard_test_exact on elementary branch pairs") {
    CircuitJob job = trivial_job();
    CHECK(std::abs(otm::hadamard_test_exact(job) - Complex(1, 0)) < 1e-15);

    job.branch1 = Matrix(2, 2);
    job.branch1 << 1, 0, 0, -1;  // Z
    CHECK(std::abs(otm::hadamard_test_exact(job) - Complex(1, 0)) < 1e-15);
    job.input_state << 0, 1;
    CHECK(std::abs(otm::hadamard_test_exact(job) - Complex(-1, 0)) < 1e-15);

    // Unnormalized input is normalized internally.
    job.input_state << 0, 2;
    CHECK(std::abs(otm::hadamard_test_exact(job) - Complex(-1, 0)) < 1e-15);

    job.branch1 = Matrix::Identity(3, 3);
    CHECK_THROWS_AS(otm::hadamard_test_exact(job), otm::DimensionMismatch);
}

TEST_CASE("forward jobs: counts, weights, and the assembled characteristic value") {
    const SystemSpec spec = otm::preset_two_qubit_quench();
    const double u = 1.0;
    const std::vector<CircuitJob> jobs = otm::build_forward_jobs(spec, u);
    REQUIRE(jobs.size() == 4);
    CHECK(otm::circuit_count(jobs.size()) == 8);

    // Job weights are the forward conditional-thermal weights.
    const otm::WorkDistribution f = otm::work_distribution(spec, otm::Direction::forward);
    double total = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        CHECK(jobs[i].weight == doctest::Approx(f.atoms[i].probability).epsilon(1e-12));
        total += jobs[i].weight;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    // Per-job exact value is e^{i u W~_i}; the weighted sum is C_f(u).
    Complex sum = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const Complex per = otm::hadamard_test_exact(jobs[i]);
        CHECK(std::abs(per - std::exp(Complex(0, u * f.atoms[i].work))) < 1e-10);
        sum += jobs[i].weight * per;
    }
    CHECK(std::abs(sum - otm::cf_trace(spec, u, otm::TraceForm::forward).value) < 1e-10);

    // Plan shape: controlled rotation, free evolution, controlled rotation.
    for (const CircuitJob& job : jobs) {
        REQUIRE(job.segments.size() == 3);
        CHECK(job.segments[0].controlled);
        CHECK_FALSE(job.segments[1].controlled);
        CHECK(job.segments[2].controlled);
    }
}

TEST_CASE("backward jobs: pair census and the assembled characteristic value") {
    const SystemSpec spec = otm::preset_two_qubit_quench();
    const double u = 1.0;
    const std::vector<otm::BackwardJob> jobs = otm::build_backward_jobs(spec, u);

    // 4 surviving strings for e^{-beta G0} x 5 for e^{+beta G_tau}.
    CHECK(otm::backward_pair_count(jobs) == 20);
    REQUIRE(jobs.size() == 80);  // 4 components per pair
    CHECK(otm::circuit_count(jobs.size()) == 160);

    Complex cb = 0;
    for (const otm::BackwardJob& bj : jobs)
        cb += bj.coeff * bj.job.weight * otm::hadamard_test_exact(bj.job);
    CHECK(std::abs(cb - otm::cf_trace(spec, u, otm::TraceForm::backward_shifted).value) <
          1e-10);

    // Five controlled blocks... the evolution between them is the only
    // uncontrolled segment.
    for (const otm::BackwardJob& bj : jobs) {
        REQUIRE(bj.job.segments.size() == 5);
        int controlled = 0;
        for (const otm::Segment& s : bj.job.segments) controlled += s.controlled ? 1 : 0;
        CHECK(controlled == 4);
        CHECK_FALSE(bj.job.segments[2].controlled);
    }
}

TEST_CASE("backward pair (I, I) at u = 0 reduces to the identity test") {
    const SystemSpec spec = otm::preset_two_qubit_quench();
    const std::vector<otm::BackwardJob> jobs = otm::build_backward_jobs(spec, 0.0);
    CHECK(std::abs(pair_value(jobs, 0, 0) - Complex(1, 0)) < 1e-12);
}

TEST_CASE("backward pair values match the direct trace on random two-qubit specs") {
    otm::SplitMix64 g(113);
    for (int rep = 0; rep < 3; ++rep) {
        const SystemSpec spec = testsup::random_spec(g, 4, false);
        const double u = 0.7;
        const otm::ConditionalFrame frame = otm::conditional_frame(spec);
        const auto [rho_tau, zt] =
            otm::conditional_thermal_state(spec, otm::Endpoint::final_state);
        const Matrix e0u = otm::mat_fn_hermitian(frame.g0, Complex(0, -u));
        const Matrix etau_u = otm::mat_fn_hermitian(frame.g_tau, Complex(0, u));

        const std::vector<otm::BackwardJob> jobs = otm::build_backward_jobs(spec, u);
        std::set<std::pair<int, int>> pairs;
        for (const otm::BackwardJob& bj : jobs) pairs.insert({bj.k, bj.l});
        for (const auto& [k, l] : pairs) {
            const Matrix sk = otm::pauli_string(2, k);
            const Matrix sl = otm::pauli_string(2, l);
            const Complex direct =
                (spec.u_evol * sk * e0u * spec.u_evol.adjoint() * sl * etau_u * rho_tau)
                    .trace();
            CHECK(std::abs(pair_value(jobs, k, l) - direct) < 1e-10);
        }
    }
}

TEST_CASE("degenerate identity job samples exactly +1 in X") {
    CircuitJob job = trivial_job();
    const otm::ShotEstimate est = otm::sample_job(job, 7, 12345);
    CHECK(est.mean_x == 1.0);  // p0 = 1 exactly; every draw must agree
    CHECK(est.shots == 7);
    CHECK(std::abs(est.value - Complex(est.mean_x, est.mean_y)) == 0.0);
}

TEST_CASE("sampling is deterministic in the seed") {
    const SystemSpec spec = otm::preset_two_qubit_quench();
    const CircuitJob job = otm::build_forward_jobs(spec, 1.0)[0];
    const otm::ShotEstimate a = otm::sample_job(job, 5000, 77);
    const otm::ShotEstimate b = otm::sample_job(job, 5000, 77);
    const otm::ShotEstimate c = otm::sample_job(job, 5000, 78);
    CHECK(a.mean_x == b.mean_x);
    CHECK(a.mean_y == b.mean_y);
    CHECK(a.value != c.value);  // adjacent seeds give different draws
}

TEST_CASE("sample_job validates its inputs") {
    const CircuitJob job = trivial_job();
    CHECK_THROWS_AS(otm::sample_job(job, 0, 1), std::invalid_argument);
    NoiseModel bad;
    bad.readout_p01 = 2.0;
    CHECK_THROWS_AS(otm::sample_job(job, 10, 1, bad), otm::InvalidNoise);
}

TEST_CASE("noiseless estimates concentrate within the shot-noise envelope") {
    const SystemSpec spec = otm::preset_two_qubit_quench();
    const CircuitJob job = otm::build_forward_jobs(spec, 1.0)[0];
    const Complex exact = otm::hadamard_test_exact(job);
    const std::int64_t shots = 20000;

    int inside = 0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s) {
        const otm::ShotEstimate est = otm::sample_job(job, shots, 1000 + s);
        if (std::abs(est.value - exact) < 0.03) ++inside;
    }
    // 0.03 is > 3 combined-component sigmas at 20000 shots; 200 seeds leave
    // comfortable slack under any fixed seed base.
    CHECK(inside >= 192);
}

TEST_CASE("shot estimates are unbiased") {
    const SystemSpec spec = otm::preset_two_qubit_quench();
    const CircuitJob job = otm::build_forward_jobs(spec, 1.0)[1];
    const Complex exact = otm::hadamard_test_exact(job);

    const int seeds = 1000;
    const std::int64_t shots = 2000;
    double sum = 0, sum_sq = 0;
    for (int s = 0; s < seeds; ++s) {
        const otm::ShotEstimate est = otm::sample_job(job, shots, 50000 + s);
        const double dev = est.mean_x - exact.real();
        sum += dev;
        sum_sq += dev * dev;
    }
    const double mean = sum / seeds;
    const double sd = std::sqrt((sum_sq - seeds * mean * mean) / (seeds - 1));
    CHECK(std::abs(mean) < 4 * sd / std::sqrt(static_cast<double>(seeds)));
}

TEST_CASE("fifty-fifty readout destroys the signal") {
    CircuitJob job = trivial_job();
    NoiseModel noise;
    noise.readout_p01 = 0.5;
    noise.readout_p10 = 0.5;
    const auto [p0x, p0y] = otm::measured_zero_probabilities(job, &noise);
    CHECK(p0x == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p0y == doctest::Approx(0.5).epsilon(1e-15));

    const otm::ShotEstimate est = otm::sample_job(job, 100000, 31, noise);
    CHECK(std::abs(est.mean_x) < 0.02);
    CHECK(std::abs(est.mean_y) < 0.02);
}

TEST_CASE("vanishing noise converges to the noiseless probabilities") {
    const SystemSpec spec = otm::preset_two_qubit_quench();
    const std::vector<otm::BackwardJob> jobs = otm::build_backward_jobs(spec, 1.0);
    const CircuitJob& job = jobs[17].job;

    const auto [ix, iy] = otm::measured_zero_probabilities(job, nullptr);
    NoiseModel tiny;
    tiny.depol_1q = 1e-9;
    tiny.depol_ctrl = 1e-9;
    const auto [nx, ny] = otm::measured_zero_probabilities(job, &tiny);
    CHECK(std::abs(nx - ix) < 1e-7);
    CHECK(std::abs(ny - iy) < 1e-7);
}

TEST_CASE("ideal measured-zero probabilities reproduce the exact test value") {
    otm::SplitMix64 g(127);
    const SystemSpec spec = testsup::random_spec(g, 4, false);
    for (const CircuitJob& job : otm::build_forward_jobs(spec, 0.9)) {
        const Complex exact = otm::hadamard_test_exact(job);
        const auto [p0x, p0y] = otm::measured_zero_probabilities(job, nullptr);
        CHECK(2 * p0x - 1 == doctest::Approx(exact.real()).epsilon(1e-10));
        CHECK(2 * p0y - 1 == doctest::Approx(exact.imag()).epsilon(1e-10));
    }
}

TEST_CASE("controlled-block depolarization biases the backward family harder") {
    // The backward plan has twice as many controlled blocks as the forward
    // plan, so the same depol_ctrl shrinks its interference term twice as
    // fast (in the exponent).
    const SystemSpec spec = otm::preset_two_qubit_quench();
    NoiseModel noise;
    noise.depol_ctrl = 0.05;

    // Pick jobs whose ideal X signal is safely away from zero before taking
    // the damping ratio.
    auto shrink_of = [&](const CircuitJob& job) {
        const auto [px_i, py_i] = otm::measured_zero_probabilities(job, nullptr);
        const auto [px_n, py_n] = otm::measured_zero_probabilities(job, &noise);
        (void)py_i;
        (void)py_n;
        return std::pair<double, double>{2 * px_i - 1, (2 * px_n - 1) / (2 * px_i - 1)};
    };

    bool checked_forward = false;
    for (const CircuitJob& job : otm::build_forward_jobs(spec, 1.0)) {
        const auto [signal, shrink] = shrink_of(job);
        if (std::abs(signal) < 0.1) continue;
        CHECK(shrink == doctest::Approx(std::pow(1 - 0.05, 2)).epsilon(1e-9));
        checked_forward = true;
    }
    CHECK(checked_forward);

    bool checked_backward = false;
    for (const otm::BackwardJob& bj : otm::build_backward_jobs(spec, 1.0)) {
        const auto [signal, shrink] = shrink_of(bj.job);
        if (std::abs(signal) < 0.1) continue;
        CHECK(shrink == doctest::Approx(std::pow(1 - 0.05, 4)).epsilon(1e-9));
        checked_backward = true;
    }
    CHECK(checked_backward);
}
