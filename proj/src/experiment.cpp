#include "otm/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace otm {

namespace {

constexpr double z_99 = 2.5758;  // two-sided 99% normal quantile

// Sampling plan: everything trial-independent, computed once per campaign.
// A trial then only derives its streams and draws bits -- that, plus the
// per-trial seed hierarchy, is why thread count cannot change results.
struct PlannedJob {
    double weight = 0.0;
    double p0x = 0.0, p0y = 0.0;  // measured-0 probabilities, noise included
};

struct PlannedPair {
    double coeff = 0.0;       // alpha_k^(0) * alpha_l^(tau)
    std::size_t first = 0;    // range into CampaignPlan::backward
    std::size_t count = 0;
};

struct CampaignPlan {
    std::vector<PlannedJob> forward;
    std::vector<PlannedJob> backward;  // grouped by (k, l) pair
    std::vector<PlannedPair> pairs;
    double r_true = 0.0;
};

PlannedJob plan_job(const CircuitJob& job, const NoiseModel* noise) {
    const auto [px, py] = measured_zero_probabilities(job, noise);
    return {job.weight, px, py};
}

CampaignPlan build_plan(const CampaignConfig& config) {
    if (config.trials < 1)
        throw std::invalid_argument("CampaignConfig: trials must be >= 1");
    if (config.shots < 1)
        throw std::invalid_argument("CampaignConfig: shots must be >= 1");
    if (config.noise) validate_noise(*config.noise);
    const NoiseModel* noise = config.noise ? &*config.noise : nullptr;

    CampaignPlan plan;
    plan.r_true = std::abs(symmetry_ratio(config.spec, config.u));

    for (const CircuitJob& job : build_forward_jobs(config.spec, config.u))
        plan.forward.push_back(plan_job(job, noise));

    const std::vector<BackwardJob> backward =
        build_backward_jobs(config.spec, config.u);
    plan.backward.reserve(backward.size());
    for (const BackwardJob& bj : backward)
        plan.backward.push_back(plan_job(bj.job, noise));

    // Pair ranges from the builder's output (components of one (k, l) pair
    // are emitted contiguously).
    std::size_t i = 0;
    while (i < backward.size()) {
        std::size_t j = i;
        while (j < backward.size() && backward[j].k == backward[i].k &&
               backward[j].l == backward[i].l)
            ++j;
        plan.pairs.push_back({backward[i].coeff, i, j - i});
        i = j;
    }
    return plan;
}

// One trial against a prebuilt plan.  Job ordinals run over the forward jobs
// first, then the backward jobs in pair-grouped order; each job's X/Y streams
// are derived exactly as sample_job derives them.
double trial_r(const CampaignPlan& plan, const CampaignConfig& config,
               int trial_index, Complex* cf_out, Complex* cb_out) {
    const std::uint64_t trial_seed =
        derive_stream(config.seed, static_cast<std::uint64_t>(trial_index));
    std::uint64_t ordinal = 0;

    const auto estimate = [&](const PlannedJob& pj) {
        const std::uint64_t job_seed = derive_stream(trial_seed, ordinal++);
        const double mx = sampled_mean(pj.p0x, config.shots,
                                       SplitMix64(derive_stream(job_seed, 0)));
        const double my = sampled_mean(pj.p0y, config.shots,
                                       SplitMix64(derive_stream(job_seed, 1)));
        return pj.weight * Complex(mx, my);
    };

    Complex cf = 0.0;
    for (const PlannedJob& pj : plan.forward) cf += estimate(pj);

    Complex cb = 0.0;
    for (const PlannedPair& pair : plan.pairs) {
        Complex f_kl = 0.0;
        for (std::size_t c = 0; c < pair.count; ++c)
            f_kl += estimate(plan.backward[pair.first + c]);
        cb += pair.coeff * f_kl;
    }

    if (cf_out) *cf_out = cf;
    if (cb_out) *cb_out = cb;
    if (std::abs(cb) < 1e-12)
        throw DivisionNearZero("run_trial: sampled |C_b| < 1e-12");
    return std::abs(cf) / std::abs(cb);
}

// Running mean / CI / error-rate arrays from the raw per-trial values.
CampaignResult finish(std::vector<double> per_trial_r, double r_true) {
    const std::size_t n = per_trial_r.size();
    CampaignResult res;
    res.r_true = r_true;
    res.per_trial_r = std::move(per_trial_r);
    res.running_mean.resize(n);
    res.ci99_halfwidth.resize(n);
    res.error_rate_pct.resize(n);

    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double r = res.per_trial_r[j];
        sum += r;
        sum_sq += r * r;
        const double count = static_cast<double>(j + 1);
        const double mean = sum / count;
        res.running_mean[j] = mean;
        if (j == 0) {
            res.ci99_halfwidth[j] = 0.0;  // undefined sample spread at N = 1
        } else {
            const double var =
                std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0));
            res.ci99_halfwidth[j] = z_99 * std::sqrt(var / count);
        }
        res.error_rate_pct[j] = std::abs(1.0 - mean / r_true) * 100.0;
    }
    return res;
}

}  // namespace

double run_trial(const CampaignConfig& config, int trial_index) {
    const CampaignPlan plan = build_plan(config);
    return trial_r(plan, config, trial_index, nullptr, nullptr);
}

TrialEstimate run_trial_detailed(const CampaignConfig& config, int trial_index) {
    const CampaignPlan plan = build_plan(config);
    TrialEstimate est;
    est.r = trial_r(plan, config, trial_index, &est.cf, &est.cb);
    return est;
}

CampaignResult run_campaign_serial(const CampaignConfig& config) {
    const CampaignPlan plan = build_plan(config);
    std::vector<double> r(static_cast<std::size_t>(config.trials));
    for (int j = 0; j < config.trials; ++j)
        r[static_cast<std::size_t>(j)] = trial_r(plan, config, j, nullptr, nullptr);
    return finish(std::move(r), plan.r_true);
}

CampaignResult run_campaign(const CampaignConfig& config) {
    const CampaignPlan plan = build_plan(config);
    std::vector<double> r(static_cast<std::size_t>(config.trials));

    // Abort-on-failure policy: remember the earliest trial's exception and
    // rethrow it after the loop (an exception must not cross thread bounds).
    std::exception_ptr first_error = nullptr;
    int first_error_trial = config.trials;

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = 0; j < config.trials; ++j) {
        try {
            r[static_cast<std::size_t>(j)] =
                trial_r(plan, config, j, nullptr, nullptr);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            {
                if (j < first_error_trial) {
                    first_error_trial = j;
                    first_error = std::current_exception();
                }
            }
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    return finish(std::move(r), plan.r_true);
}

std::string campaign_csv(const CampaignResult& result) {
    std::string csv = "trial_index,r_j,running_mean,ci99_low,ci99_high,error_rate_pct\n";
    char row[256];
    for (std::size_t j = 0; j < result.per_trial_r.size(); ++j) {
        const double mean = result.running_mean[j];
        const double hw = result.ci99_halfwidth[j];
        std::snprintf(row, sizeof row, "%zu,%.9g,%.9g,%.9g,%.9g,%.9g\n", j,
                      result.per_trial_r[j], mean, mean - hw, mean + hw,
                      result.error_rate_pct[j]);
        csv += row;
    }
    return csv;
}

}  // namespace otm
