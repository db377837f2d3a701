// Timing comparison: full tracing simulator vs the lean kernels, serial vs
// parallel batch execution. Round-count sums are printed so the compiler
// cannot drop the work and so serial/parallel agreement is visible.
#include <chrono>
#include <cstdint>
#include <iostream>
#include <numeric>
#include <string>

#include "CLI11.hpp"
#include "rumorlab/kernels.hpp"
#include "rumorlab/simulator.hpp"

using namespace rumorlab;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const std::string& name, double secs, std::size_t trials, std::int64_t checksum) {
    std::cout << name << ": " << secs << " s, " << static_cast<double>(trials) / secs
              << " trials/s, checksum=" << checksum << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmark the lean kernels against the tracing simulator"};
    std::uint32_t n = 1025;
    std::size_t trials = 20000;
    std::size_t sim_trials = 200;
    double p = 0.5;
    std::uint64_t seed = 1;
    int threads = 0;
    app.add_option("--n", n, "total processors");
    app.add_option("--trials", trials, "kernel trials");
    app.add_option("--sim-trials", sim_trials, "full-simulator trials");
    app.add_option("--p", p, "success rate");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--threads", threads, "parallel thread count (0 = default)");
    CLI11_PARSE(app, argc, argv);

    const BatchOptions serial{0, true};
    const BatchOptions parallel{threads, false};

    {
        auto t0 = Clock::now();
        const auto r = batch_wu_rounds(n, p, seed, trials, kDefaultRoundCap, serial);
        report("wu kernel serial    ", seconds_since(t0), trials,
               std::accumulate(r.begin(), r.end(), std::int64_t{0}));
    }
    {
        auto t0 = Clock::now();
        const auto r = batch_wu_rounds(n, p, seed, trials, kDefaultRoundCap, parallel);
        report("wu kernel parallel  ", seconds_since(t0), trials,
               std::accumulate(r.begin(), r.end(), std::int64_t{0}));
    }
    {
        auto t0 = Clock::now();
        std::int64_t checksum = 0;
        for (std::size_t i = 0; i < sim_trials; ++i)
            checksum += simulate_wu(n, p, derive_seed(seed, i)).termination_round;
        report("wu simulator        ", seconds_since(t0), sim_trials, checksum);
    }

    const auto mask = mask_from_set(n, [&] {
        std::vector<std::uint32_t> F;
        for (std::uint32_t i = 1; i <= (n - 1) / 2; ++i) F.push_back(i);
        return F;
    }());
    {
        auto t0 = Clock::now();
        const auto r = batch_rgp_rounds(n, mask, seed, trials, serial);
        report("rgp kernel serial   ", seconds_since(t0), trials,
               std::accumulate(r.begin(), r.end(), std::int64_t{0}));
    }
    {
        auto t0 = Clock::now();
        const auto r = batch_rgp_rounds(n, mask, seed, trials, parallel);
        report("rgp kernel parallel ", seconds_since(t0), trials,
               std::accumulate(r.begin(), r.end(), std::int64_t{0}));
    }
    {
        auto t0 = Clock::now();
        std::int64_t checksum = 0;
        std::vector<std::uint32_t> F;
        for (std::uint32_t i = 1; i <= (n - 1) / 2; ++i) F.push_back(i);
        for (std::size_t i = 0; i < sim_trials; ++i)
            checksum += simulate_rgp(n, F, derive_seed(seed, i), AppendixMode::EXPLICIT)
                            .termination_round;
        report("rgp simulator       ", seconds_since(t0), sim_trials, checksum);
    }
    return 0;
}
