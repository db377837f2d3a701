#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rumorlab/permutation.hpp"
#include "rumorlab/rng.hpp"

namespace rumorlab {

/// Preprocessing artifact for the table-driven protocol: t stored permutations
/// of the ids {1..n-1} plus the seed they were drawn from. Internally each
/// permutation acts on {0..n-2}; map() shifts to 1-based processor ids.
class PermTable {
public:
    PermTable(std::size_t n, std::size_t t, std::uint64_t seed) : n_(n), seed_(seed) {
        if (n < 1) throw std::invalid_argument("PermTable: n must be >= 1");
        if (t < 1) throw std::invalid_argument("PermTable: t must be >= 1");
        RandomEngine rng(seed);
        perms_.reserve(t);
        for (std::size_t i = 0; i < t; ++i) perms_.push_back(random_permutation(n - 1, rng));
    }

    static PermTable single(std::size_t n, Permutation pi) {
        if (pi.size() != n - 1) throw std::invalid_argument("PermTable::single: size mismatch");
        PermTable tab(n);
        tab.perms_.push_back(std::move(pi));
        return tab;
    }

    std::size_t n() const { return n_; }
    std::size_t t() const { return perms_.size(); }
    std::uint64_t seed() const { return seed_; }

    /// Image of processor id j in {1..n-1} under permutation r in [0..t).
    std::uint32_t map(std::size_t r, std::uint32_t j) const {
        if (r >= perms_.size()) throw std::out_of_range("PermTable::map: row");
        if (j < 1 || j >= n_) throw std::out_of_range("PermTable::map: id");
        return perms_[r](j - 1) + 1;
    }

    const Permutation& row(std::size_t r) const { return perms_.at(r); }

private:
    explicit PermTable(std::size_t n) : n_(n) {}

    std::size_t n_;
    std::uint64_t seed_ = 0;
    std::vector<Permutation> perms_;
};

}  // namespace rumorlab
