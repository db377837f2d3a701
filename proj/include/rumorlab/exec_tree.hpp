#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "rumorlab/bitstream.hpp"

namespace rumorlab {

/// Height of a configuration tree, infinity representing a run that never
/// terminates. NONTERMINATING compares greater than every finite height.
struct Height {
    static constexpr std::int64_t kInfinite = std::numeric_limits<std::int64_t>::max();
    std::int64_t value = 0;

    static Height finite(std::int64_t v) { return {v}; }
    static Height nonterminating() { return {kInfinite}; }
    bool is_nonterminating() const { return value == kInfinite; }

    auto operator<=>(const Height&) const = default;
};

enum class TreeKind { GP, WU };

inline constexpr std::int64_t kDefaultRoundCap = 1'000'000;

/// Height of the halving-protocol configuration tree rooted at (k, b): a
/// 0 bit drops the head (k-1, suffix), a 1 bit splits into the odd and even
/// halves with the corresponding bit subsequences. Consumes exactly the
/// first k bits of b.
std::int64_t hgp(std::int64_t k, const BitStream& b);

/// Same recursion but a 0 bit retries: child of (k, 0c) is (k, c). Returns
/// NONTERMINATING if any path exceeds round_cap edges. A provably all-zero
/// pattern with k > 0 short-circuits to NONTERMINATING.
Height hwu(std::int64_t k, const BitStream& b, std::int64_t round_cap = kDefaultRoundCap);

/// Retry semantics can only slow a run down: hgp(k,b) <= hwu(k,b).
bool check_coupling(std::int64_t k, const BitStream& b, std::int64_t round_cap = kDefaultRoundCap);

/// Height is monotone increasing in the processor count: h(k,b) <= h(k+1,b).
bool check_monotone_k(std::int64_t k, const BitStream& b, TreeKind kind,
                      std::int64_t round_cap = kDefaultRoundCap);

/// Turning a failed request into a successful one cannot slow the run down.
/// Requires b[flip_pos] == 0.
bool check_monotone_b(std::int64_t k, const BitStream& b, std::int64_t flip_pos);

/// Retry-variant analogue of check_monotone_b, exercised as a falsifiable
/// check alongside the proven one.
bool check_monotone_b_wu(std::int64_t k, const BitStream& b, std::int64_t flip_pos,
                         std::int64_t round_cap = kDefaultRoundCap);

/// Handing half the work to a second processor up front cannot slow the run:
/// hgp(k,b) >= max(hgp(ceil(k/2), ODD(b)), hgp(floor(k/2), EVEN(b))).
bool check_splitting(std::int64_t k, const BitStream& b);

/// DOT rendering of the configuration tree; nodes labeled "(k; consumed
/// prefix)". Throws if a WU tree fails to terminate within round_cap.
std::string export_tree(std::int64_t k, const BitStream& b, TreeKind kind,
                        std::int64_t round_cap = kDefaultRoundCap);

/// Node count of the exported tree (exercised by tests).
std::int64_t tree_node_count(std::int64_t k, const BitStream& b, TreeKind kind,
                             std::int64_t round_cap = kDefaultRoundCap);

}  // namespace rumorlab
