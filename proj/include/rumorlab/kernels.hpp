#pragma once

#include <cstdint>
#include <vector>

#include "rumorlab/exec_tree.hpp"
#include "rumorlab/perm_table.hpp"

namespace rumorlab {

/// Thread/parallelism knobs for the batch kernels. threads == 0 picks the
/// runtime default; serial forces the single-threaded reference path.
struct BatchOptions {
    int threads = 0;
    bool serial = false;
};

/// Height of the halving recursion over a materialized success-bit window:
/// bits[i-1] is the outcome of the i-th contact in list order. Equivalent to
/// hgp(k, b) but allocation-free; the positional index map replaces stream
/// views. bits must hold at least k entries.
std::int64_t hgp_prefix(std::int64_t k, const std::uint8_t* bits);

/// Round count of the deterministic protocol under a crash mask drawn once at
/// setup (ids ascending), matching simulate_gp with a RANDOM failure model.
std::int64_t gp_random_rounds(std::uint32_t n, double p, std::uint64_t seed);

/// Round count of the randomized protocol: draws the list permutation from
/// pi_seed and runs the halving recursion against the given crash mask
/// (indexed by processor id). Matches simulate_rgp in EXPLICIT mode.
std::int64_t rgp_rounds(std::uint32_t n, const std::vector<std::uint8_t>& faulty,
                        std::uint64_t pi_seed);

/// Round count of the retry protocol; reproduces simulate_wu's draw order
/// exactly, so equal seeds give equal results.
Height wu_rounds(std::uint32_t n, double p, std::uint64_t seed,
                 std::int64_t round_cap = kDefaultRoundCap);

/// Round count of the table protocol for a fixed row.
std::int64_t tablegp_rounds_row(const PermTable& table, const std::vector<std::uint8_t>& faulty,
                                std::size_t r);

/// Batch drivers: trial i uses the seed derived from (master_seed, i) and
/// writes result slot i, so outputs are identical for every thread count.
std::vector<std::int64_t> batch_wu_rounds(std::uint32_t n, double p, std::uint64_t master_seed,
                                          std::size_t trials,
                                          std::int64_t round_cap = kDefaultRoundCap,
                                          BatchOptions opt = {});
std::vector<std::int64_t> batch_gp_random_rounds(std::uint32_t n, double p,
                                                 std::uint64_t master_seed, std::size_t trials,
                                                 BatchOptions opt = {});
std::vector<std::int64_t> batch_rgp_rounds(std::uint32_t n, const std::vector<std::uint8_t>& faulty,
                                           std::uint64_t master_seed, std::size_t trials,
                                           BatchOptions opt = {});

/// Round counts for every stored permutation against one crash mask.
std::vector<std::int64_t> tablegp_rounds_all_rows(const PermTable& table,
                                                  const std::vector<std::uint8_t>& faulty,
                                                  BatchOptions opt = {});

/// Crash mask over ids 0..n-1 from an explicit failure set.
std::vector<std::uint8_t> mask_from_set(std::uint32_t n, const std::vector<std::uint32_t>& F);

}  // namespace rumorlab
