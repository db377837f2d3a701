#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rumorlab/kernels.hpp"
#include "rumorlab/perm_table.hpp"

namespace rumorlab {

struct SafetySample {
    std::string generator;  // uniform | prefix | greedy
    std::vector<std::uint32_t> fail_set;
    double violation_fraction = 0;
};

struct SafetyReport {
    std::uint32_t n = 0;
    std::size_t t = 0;
    std::int64_t f = 0;
    double T = 0;
    std::uint64_t table_seed = 0;
    std::uint64_t seed = 0;
    double delta = 0;
    std::int64_t t0 = 0;
    std::vector<SafetySample> samples;
    double worst_fraction = 0;
    std::size_t worst_index = 0;
    bool pass = true;  // worst_fraction <= delta; a sampled verdict, not a proof
};

/// Estimates how safe a stored-permutation table is against size-f failure
/// sets: samples failure sets from three generators (uniform; the first f
/// ids contacted under a random row; a table-wide early-contact greedy) and
/// for each computes the exact fraction of rows whose run exceeds T rounds.
/// The verdict compares the worst fraction against delta from derand_params
/// (falling back to e/n when the table is too small for a valid delta).
SafetyReport safety_estimate(const PermTable& table, std::int64_t f, double T,
                             std::size_t sample_budget, std::uint64_t seed,
                             BatchOptions opt = {});

std::string safety_report_to_json(const SafetyReport& rep);

}  // namespace rumorlab
