#include "rumorlab/exec_tree.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace rumorlab {
namespace {

struct Frame {
    std::int64_t k;
    BitStream b;
    std::int64_t depth;
};

}  // namespace

std::int64_t hgp(std::int64_t k, const BitStream& b) {
    if (k < 0) throw std::invalid_argument("hgp: k must be >= 0");
    std::int64_t best = 0;
    std::vector<Frame> stack;
    stack.push_back({k, b, 0});
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        while (f.k > 0) {
            if (f.b.at(1) == 0) {
                f.b = f.b.suffix();
                f.k -= 1;
                f.depth += 1;
            } else {
                const std::int64_t rest = f.k - 1;
                const BitStream c = f.b.suffix();
                stack.push_back({rest / 2, c.even(), f.depth + 1});
                f.b = c.odd();
                f.k = (rest + 1) / 2;
                f.depth += 1;
            }
        }
        best = std::max(best, f.depth);
    }
    return best;
}

Height hwu(std::int64_t k, const BitStream& b, std::int64_t round_cap) {
    if (k < 0) throw std::invalid_argument("hwu: k must be >= 0");
    if (round_cap < 1) throw std::invalid_argument("hwu: round_cap must be >= 1");
    std::int64_t best = 0;
    std::vector<Frame> stack;
    stack.push_back({k, b, 0});
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        while (f.k > 0) {
            if (f.depth >= round_cap) return Height::nonterminating();
            if (f.b.at(1) == 0) {
                if (f.b.is_all_zeros()) return Height::nonterminating();
                f.b = f.b.suffix();
                f.depth += 1;
            } else {
                const std::int64_t rest = f.k - 1;
                const BitStream c = f.b.suffix();
                stack.push_back({rest / 2, c.even(), f.depth + 1});
                f.b = c.odd();
                f.k = (rest + 1) / 2;
                f.depth += 1;
            }
        }
        best = std::max(best, f.depth);
    }
    return Height::finite(best);
}

bool check_coupling(std::int64_t k, const BitStream& b, std::int64_t round_cap) {
    const Height w = hwu(k, b, round_cap);
    if (w.is_nonterminating()) return true;
    return hgp(k, b) <= w.value;
}

bool check_monotone_k(std::int64_t k, const BitStream& b, TreeKind kind, std::int64_t round_cap) {
    if (kind == TreeKind::GP) return hgp(k, b) <= hgp(k + 1, b);
    const Height larger = hwu(k + 1, b, round_cap);
    if (larger.is_nonterminating()) return true;
    const Height smaller = hwu(k, b, round_cap);
    return !smaller.is_nonterminating() && smaller.value <= larger.value;
}

bool check_monotone_b(std::int64_t k, const BitStream& b, std::int64_t flip_pos) {
    if (b.at(flip_pos) != 0)
        throw std::invalid_argument("check_monotone_b: bit at flip_pos must be 0");
    return hgp(k, b) >= hgp(k, b.with_bit(flip_pos, 1));
}

bool check_monotone_b_wu(std::int64_t k, const BitStream& b, std::int64_t flip_pos,
                         std::int64_t round_cap) {
    if (b.at(flip_pos) != 0)
        throw std::invalid_argument("check_monotone_b_wu: bit at flip_pos must be 0");
    const Height orig = hwu(k, b, round_cap);
    if (orig.is_nonterminating()) return true;
    const Height flipped = hwu(k, b.with_bit(flip_pos, 1), round_cap);
    return !flipped.is_nonterminating() && orig.value >= flipped.value;
}

bool check_splitting(std::int64_t k, const BitStream& b) {
    const std::int64_t whole = hgp(k, b);
    return whole >= hgp((k + 1) / 2, b.odd()) && whole >= hgp(k / 2, b.even());
}

namespace {

struct DotNode {
    std::int64_t id;
    std::int64_t k;
    std::string consumed;
};

/// Walks the tree, emitting nodes and edges in DFS preorder.
void walk_dot(std::int64_t k, const BitStream& b, TreeKind kind, std::int64_t round_cap,
              std::int64_t depth, std::string consumed, std::int64_t parent,
              std::int64_t& next_id, std::ostringstream& out, std::int64_t& count) {
    if (depth > round_cap) throw std::runtime_error("export_tree: round cap exceeded");
    const std::int64_t id = next_id++;
    count += 1;
    out << "  n" << id << " [label=\"(" << k << "; " << (consumed.empty() ? "-" : consumed)
        << ")\"];\n";
    if (parent >= 0) out << "  n" << parent << " -> n" << id << ";\n";
    if (k == 0) return;
    const int bit = b.at(1);
    if (bit == 0) {
        if (kind == TreeKind::WU && b.is_all_zeros())
            throw std::runtime_error("export_tree: nonterminating tree");
        const std::int64_t child_k = (kind == TreeKind::GP) ? k - 1 : k;
        walk_dot(child_k, b.suffix(), kind, round_cap, depth + 1, consumed + "0", id, next_id, out,
                 count);
    } else {
        const std::int64_t rest = k - 1;
        const BitStream c = b.suffix();
        walk_dot((rest + 1) / 2, c.odd(), kind, round_cap, depth + 1, consumed + "1", id, next_id,
                 out, count);
        walk_dot(rest / 2, c.even(), kind, round_cap, depth + 1, consumed + "1", id, next_id, out,
                 count);
    }
}

}  // namespace

std::string export_tree(std::int64_t k, const BitStream& b, TreeKind kind,
                        std::int64_t round_cap) {
    if (k < 0) throw std::invalid_argument("export_tree: k must be >= 0");
    if (kind == TreeKind::WU && hwu(k, b, round_cap).is_nonterminating())
        throw std::runtime_error("export_tree: nonterminating tree");
    std::ostringstream out;
    out << "digraph exec_tree {\n";
    std::int64_t next_id = 0;
    std::int64_t count = 0;
    walk_dot(k, b, kind, round_cap, 0, "", -1, next_id, out, count);
    out << "}\n";
    return out.str();
}

std::int64_t tree_node_count(std::int64_t k, const BitStream& b, TreeKind kind,
                             std::int64_t round_cap) {
    if (kind == TreeKind::WU && hwu(k, b, round_cap).is_nonterminating())
        throw std::runtime_error("tree_node_count: nonterminating tree");
    std::ostringstream sink;
    std::int64_t next_id = 0;
    std::int64_t count = 0;
    walk_dot(k, b, kind, round_cap, 0, "", -1, next_id, sink, count);
    return count;
}

}  // namespace rumorlab
