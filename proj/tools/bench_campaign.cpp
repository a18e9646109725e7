// Times the OpenMP campaign loop against the serial reference and checks
// that they produce byte-identical CSV output.
//
//   bench_campaign [trials] [shots]     (defaults: 40 trials, 20000 shots)

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "otm/experiment.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    otm::CampaignConfig config;
    config.spec = otm::preset_two_qubit_quench();
    config.u = 1.0;
    config.trials = argc > 1 ? std::atoi(argv[1]) : 40;
    config.shots = argc > 2 ? std::atoll(argv[2]) : 20000;
    config.seed = 42;

    if (config.trials < 1 || config.shots < 1) {
        std::fprintf(stderr, "usage: bench_campaign [trials >= 1] [shots >= 1]\n");
        return 2;
    }

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("campaign: %d trials x %lld shots, seed %llu, %d thread(s)\n", config.trials,
                static_cast<long long>(config.shots),
                static_cast<unsigned long long>(config.seed), threads);

    auto t0 = std::chrono::steady_clock::now();
    const otm::CampaignResult serial = otm::run_campaign_serial(config);
    const double t_serial = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const otm::CampaignResult parallel = otm::run_campaign(config);
    const double t_parallel = seconds_since(t0);

    const std::string csv_serial = otm::campaign_csv(serial);
    const std::string csv_parallel = otm::campaign_csv(parallel);
    const bool identical = csv_serial == csv_parallel;

    std::printf("serial    %8.3f s\n", t_serial);
    std::printf("parallel  %8.3f s   (speedup %.2fx)\n", t_parallel,
                t_parallel > 0 ? t_serial / t_parallel : 0.0);
    std::printf("outputs   %s\n", identical ? "byte-identical" : "DIFFER");

    if (!identical) return 1;
    return 0;
}
