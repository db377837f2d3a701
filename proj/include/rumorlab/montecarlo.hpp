#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rumorlab/kernels.hpp"

namespace rumorlab {

enum class McProtocol { WU, GP_RANDOM, RGP, TABLEGP };

struct McConfig {
    McProtocol protocol = McProtocol::WU;
    std::uint32_t n = 3;
    double p = 0.5;                       // WU attempt rate / GP_RANDOM survival rate
    std::vector<std::uint32_t> fail_set;  // RGP, TABLEGP
    double c = 3.5;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    std::int64_t round_cap = kDefaultRoundCap;
    std::size_t table_t = 1;        // TABLEGP
    std::uint64_t table_seed = 0;   // TABLEGP
};

struct TailReport {
    std::string protocol;
    std::uint32_t n = 0;
    std::size_t trials = 0;
    double c = 0;
    double p = 0;
    std::int64_t f = 0;
    double bound_T = 0;
    double theoretical_bound = 0;
    double empirical_violation_rate = 0;
    std::int64_t p50 = 0, p90 = 0, p99 = 0, max_rounds = 0;
    std::uint64_t seed = 0;
    std::vector<std::int64_t> rounds;  // per-trial results, trial order
};

/// Runs `trials` independent seeded simulations of the chosen protocol,
/// derives the round bound T and its failure probability from the matching
/// bound evaluator, and reports the empirical rate of trials exceeding T.
/// WU and GP_RANDOM are measured against the retry-protocol bound; RGP and
/// TABLEGP against the randomized-protocol bound with f = |fail_set|.
TailReport montecarlo_tail(const McConfig& cfg, BatchOptions opt = {});

std::string tail_report_to_json(const TailReport& rep);

/// CSV with header "rounds,count", ascending by rounds.
std::string histogram_csv(const std::vector<std::int64_t>& rounds);

}  // namespace rumorlab
