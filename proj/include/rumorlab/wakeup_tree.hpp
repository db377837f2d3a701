#pragma once

#include <cstdint>
#include <vector>

#include "rumorlab/rng.hpp"

namespace rumorlab {

/// Full binary tree over n leaves describing who wakes whom: each internal
/// node x carries the label L(x) = min of its children's labels (the waker)
/// and the contact target j(x) = max of its children's labels. REQ(x) counts
/// the attempts the waker spends on that contact. The nodes labeled by one
/// processor form a root-to-leaf path, and the run's round count is the
/// maximum path sum of REQ values.
class WakeupLabeledTree {
public:
    struct Node {
        std::int64_t left = -1;   // -1 for leaves
        std::int64_t right = -1;
        std::uint32_t label = 0;      // L(x)
        std::uint32_t target = 0;     // j(x), internal only
        std::int64_t req = 1;         // REQ(x), internal only
    };

    const std::vector<Node>& nodes() const { return nodes_; }
    std::int64_t root() const { return root_; }
    std::size_t leaf_count() const { return leaves_; }

    /// Contact targets of processor `label` in root-to-leaf order along its path.
    std::vector<std::uint32_t> targets_of(std::uint32_t label) const;

    /// Assigns REQ(x) for every internal node; order is DFS preorder.
    void set_reqs(const std::vector<std::int64_t>& reqs);

    /// Draws each REQ(x) geometrically with success rate p.
    void sample_reqs(double p, RandomEngine& rng);

    std::size_t internal_count() const;

    friend WakeupLabeledTree build_wakeup_tree(std::size_t n,
                                               const std::vector<std::uint32_t>& leaf_order);

private:
    std::vector<Node> nodes_;
    std::int64_t root_ = -1;
    std::size_t leaves_ = 0;
};

/// Builds the labeled tree over the given left-to-right leaf order (a
/// permutation of 0..n-1). The shape splits m leaves into ceil(m/2) on the
/// left and floor(m/2) on the right, matching the protocol's halving.
/// With the default identity leaf order the min rule makes processor 0
/// contact the midpoint leaf of each level first (for n=5: 3, then 2, then 1).
WakeupLabeledTree build_wakeup_tree(std::size_t n, const std::vector<std::uint32_t>& leaf_order);

std::vector<std::uint32_t> default_leaf_order(std::size_t n);

/// Max over leaves of the sum of REQ(x) along the root-to-leaf path.
std::int64_t wu_time_from_path_sums(const WakeupLabeledTree& tree);

}  // namespace rumorlab
