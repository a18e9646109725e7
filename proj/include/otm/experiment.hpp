#pragma once

#include <cstdint>
#include <string>

#include "otm/characteristic.hpp"
#include "otm/interferometry.hpp"

namespace otm {

// ------------------------------------------------------------- campaigns ----
//
// A campaign repeats the full interferometric estimation of
// R = |C_f(u) / C_b(-u + i beta)| over independent trials and tracks the
// running mean, its 99% confidence interval, and the error rate against the
// exact ratio.  Per-trial seeds are derived from (campaign seed, trial
// index), so results are bit-identical whether trials run serially, in
// parallel, or one at a time via run_trial.

struct CampaignConfig {
    SystemSpec spec;
    double u = 1.0;
    std::int64_t shots = 20000;  // per circuit (each observable separately)
    int trials = 1;
    std::optional<NoiseModel> noise;
    std::uint64_t seed = 0;
};

struct CampaignResult {
    std::vector<double> per_trial_r;     // R_j
    std::vector<double> running_mean;    // mean of per_trial_r[0..j]
    std::vector<double> ci99_halfwidth;  // 2.5758 * s_N / sqrt(N); 0 at N = 1
    std::vector<double> error_rate_pct;  // |1 - running_mean/r_true| * 100
    double r_true = 0.0;                 // |symmetry_ratio(spec, u)|
};

// One complete estimate of R: builds both job families at config.u, samples
// every circuit with streams derived from (config.seed, trial_index),
// assembles the C_f and C_b estimates, and returns |C_f| / |C_b|.  Throws
// DivisionNearZero when the sampled |C_b| < 1e-12.
double run_trial(const CampaignConfig& config, int trial_index);

// The same, exposing the assembled complex estimates.
struct TrialEstimate {
    Complex cf;      // sampled C_f(u)
    Complex cb;      // sampled C_b(-u + i beta)
    double r = 0.0;  // |cf| / |cb|
};
TrialEstimate run_trial_detailed(const CampaignConfig& config, int trial_index);

// Full campaign.  run_campaign distributes trials across OpenMP threads when
// available; run_campaign_serial is the plain-loop reference.  Both produce
// bit-identical results (asserted in tests, timed in the benchmark tool).
// A failed trial aborts the whole campaign -- no resampling.
CampaignResult run_campaign(const CampaignConfig& config);
CampaignResult run_campaign_serial(const CampaignConfig& config);

// CSV with header, one row per trial, 9 significant digits:
// trial_index,r_j,running_mean,ci99_low,ci99_high,error_rate_pct
std::string campaign_csv(const CampaignResult& result);

}  // namespace otm
