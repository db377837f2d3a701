#include "rumorlab/wakeup_tree.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace rumorlab {
namespace {

std::int64_t build_range(std::vector<WakeupLabeledTree::Node>& nodes,
                         const std::vector<std::uint32_t>& order, std::size_t lo, std::size_t hi) {
    const std::size_t m = hi - lo;
    if (m == 1) {
        nodes.push_back({-1, -1, order[lo], 0, 1});
        return static_cast<std::int64_t>(nodes.size() - 1);
    }
    const std::size_t mid = lo + (m + 1) / 2;
    nodes.push_back({});
    const auto id = static_cast<std::int64_t>(nodes.size() - 1);
    const std::int64_t left = build_range(nodes, order, lo, mid);
    const std::int64_t right = build_range(nodes, order, mid, hi);
    nodes[id].left = left;
    nodes[id].right = right;
    const std::uint32_t ll = nodes[left].label;
    const std::uint32_t rl = nodes[right].label;
    nodes[id].label = std::min(ll, rl);
    nodes[id].target = std::max(ll, rl);
    nodes[id].req = 1;
    return id;
}

}  // namespace

WakeupLabeledTree build_wakeup_tree(std::size_t n, const std::vector<std::uint32_t>& leaf_order) {
    if (n < 1) throw std::invalid_argument("build_wakeup_tree: n must be >= 1");
    if (leaf_order.size() != n)
        throw std::invalid_argument("build_wakeup_tree: leaf_order must have n entries");
    std::vector<std::uint8_t> seen(n, 0);
    for (auto v : leaf_order) {
        if (v >= n || seen[v])
            throw std::invalid_argument("build_wakeup_tree: leaf_order must be a permutation");
        seen[v] = 1;
    }
    WakeupLabeledTree tree;
    tree.leaves_ = n;
    tree.nodes_.reserve(2 * n - 1);
    tree.root_ = build_range(tree.nodes_, leaf_order, 0, n);
    return tree;
}

std::vector<std::uint32_t> default_leaf_order(std::size_t n) {
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    return order;
}

std::vector<std::uint32_t> WakeupLabeledTree::targets_of(std::uint32_t label) const {
    std::vector<std::uint32_t> out;
    std::int64_t cur = root_;
    if (cur < 0 || nodes_[static_cast<std::size_t>(cur)].label != label) {
        // Walk down to the highest node carrying this label.
        std::vector<std::int64_t> stack{root_};
        cur = -1;
        while (!stack.empty()) {
            const std::int64_t id = stack.back();
            stack.pop_back();
            if (id < 0) continue;
            const Node& nd = nodes_[static_cast<std::size_t>(id)];
            if (nd.label == label) {
                cur = id;
                break;
            }
            stack.push_back(nd.left);
            stack.push_back(nd.right);
        }
        if (cur < 0) throw std::invalid_argument("targets_of: label not present");
    }
    while (true) {
        const Node& nd = nodes_[static_cast<std::size_t>(cur)];
        if (nd.left < 0) break;
        out.push_back(nd.target);
        const Node& lc = nodes_[static_cast<std::size_t>(nd.left)];
        cur = (lc.label == label) ? nd.left : nd.right;
    }
    return out;
}

std::size_t WakeupLabeledTree::internal_count() const {
    std::size_t c = 0;
    for (const auto& nd : nodes_)
        if (nd.left >= 0) ++c;
    return c;
}

void WakeupLabeledTree::set_reqs(const std::vector<std::int64_t>& reqs) {
    if (reqs.size() != internal_count())
        throw std::invalid_argument("set_reqs: need one value per internal node");
    std::size_t i = 0;
    for (auto& nd : nodes_)
        if (nd.left >= 0) {
            if (reqs[i] < 1) throw std::invalid_argument("set_reqs: REQ must be >= 1");
            nd.req = reqs[i++];
        }
}

void WakeupLabeledTree::sample_reqs(double p, RandomEngine& rng) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("sample_reqs: p must be in (0,1]");
    for (auto& nd : nodes_)
        if (nd.left >= 0) {
            std::int64_t r = 1;
            while (!bernoulli(rng, p)) ++r;
            nd.req = r;
        }
}

std::int64_t wu_time_from_path_sums(const WakeupLabeledTree& tree) {
    struct Item {
        std::int64_t id;
        std::int64_t sum;
    };
    std::int64_t best = 0;
    std::vector<Item> stack{{tree.root(), 0}};
    while (!stack.empty()) {
        const Item it = stack.back();
        stack.pop_back();
        const auto& nd = tree.nodes()[static_cast<std::size_t>(it.id)];
        if (nd.left < 0) {
            best = std::max(best, it.sum);
            continue;
        }
        stack.push_back({nd.left, it.sum + nd.req});
        stack.push_back({nd.right, it.sum + nd.req});
    }
    return best;
}

}  // namespace rumorlab
