#include "rumorlab/kernels.hpp"

#include <algorithm>
#include <stdexcept>

#include "rumorlab/permutation.hpp"
#include "rumorlab/rng.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace rumorlab {

namespace {

int resolve_threads(const BatchOptions& opt) {
    if (opt.serial) return 1;
#if defined(_OPENMP)
    return opt.threads > 0 ? opt.threads : omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace

std::int64_t hgp_prefix(std::int64_t k, const std::uint8_t* bits) {
    if (k < 0) throw std::invalid_argument("hgp_prefix: k must be >= 0");
    struct Frame {
        std::int64_t k, pos, step, depth;
    };
    Frame stack[72];
    int top = 0;
    stack[top++] = {k, 1, 1, 0};
    std::int64_t best = 0;
    while (top > 0) {
        Frame f = stack[--top];
        while (f.k > 0) {
            if (bits[f.pos - 1]) {
                const std::int64_t rest = f.k - 1;
                stack[top++] = {rest / 2, f.pos + 2 * f.step, 2 * f.step, f.depth + 1};
                f.k = (rest + 1) / 2;
                f.pos += f.step;
                f.step *= 2;
                f.depth += 1;
            } else {
                f.k -= 1;
                f.pos += f.step;
                f.depth += 1;
            }
        }
        best = std::max(best, f.depth);
    }
    return best;
}

std::int64_t gp_random_rounds(std::uint32_t n, double p, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gp_random_rounds: n must be >= 1");
    if (n == 1) return 0;
    RandomEngine rng(seed);
    std::vector<std::uint8_t> bits(n - 1);
    for (std::uint32_t i = 0; i < n - 1u; ++i) bits[i] = bernoulli(rng, p) ? 1 : 0;
    return hgp_prefix(n - 1, bits.data());
}

std::int64_t rgp_rounds(std::uint32_t n, const std::vector<std::uint8_t>& faulty,
                        std::uint64_t pi_seed) {
    if (n < 1) throw std::invalid_argument("rgp_rounds: n must be >= 1");
    if (faulty.size() != n) throw std::invalid_argument("rgp_rounds: mask size mismatch");
    if (n == 1) return 0;
    RandomEngine rng(pi_seed);
    const Permutation pi = random_permutation(n - 1u, rng);
    std::vector<std::uint8_t> bits(n - 1);
    for (std::uint32_t i = 0; i < n - 1u; ++i) bits[i] = faulty[pi(i) + 1] ? 0 : 1;
    return hgp_prefix(n - 1, bits.data());
}

std::int64_t tablegp_rounds_row(const PermTable& table, const std::vector<std::uint8_t>& faulty,
                                std::size_t r) {
    const auto n = static_cast<std::uint32_t>(table.n());
    if (faulty.size() != n) throw std::invalid_argument("tablegp_rounds_row: mask size mismatch");
    if (n == 1) return 0;
    const Permutation& pi = table.row(r);
    std::vector<std::uint8_t> bits(n - 1);
    for (std::uint32_t i = 0; i < n - 1u; ++i) bits[i] = faulty[pi(i) + 1] ? 0 : 1;
    return hgp_prefix(n - 1, bits.data());
}

Height wu_rounds(std::uint32_t n, double p, std::uint64_t seed, std::int64_t round_cap) {
    if (n < 1) throw std::invalid_argument("wu_rounds: n must be >= 1");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("wu_rounds: p must be in (0,1]");
    if (round_cap < 1) throw std::invalid_argument("wu_rounds: round_cap must be >= 1");
    if (n == 1) return Height::finite(0);
    RandomEngine rng(seed);
    struct Entry {
        std::uint32_t proc;
        std::uint64_t first;
        std::uint64_t len;
        std::uint32_t log2_step;
    };
    std::vector<Entry> active{{0, 1, n - 1u, 0}};
    std::vector<Entry> next, newcomers;
    std::int64_t t = 0;
    while (!active.empty()) {
        if (t >= round_cap) return Height::nonterminating();
        ++t;
        next.clear();
        newcomers.clear();
        for (auto& e : active) {
            if (bernoulli(rng, p)) {
                const std::uint64_t step = std::uint64_t{1} << e.log2_step;
                const auto head = static_cast<std::uint32_t>(e.first);
                const std::uint64_t tail_first = e.first + step;
                const std::uint64_t tail_len = e.len - 1;
                const std::uint64_t give_len = tail_len / 2;
                if (give_len > 0)
                    newcomers.push_back({head, tail_first + step, give_len, e.log2_step + 1});
                e.first = tail_first;
                e.len = (tail_len + 1) / 2;
                e.log2_step += 1;
            }
            if (e.len > 0) next.push_back(e);
        }
        next.insert(next.end(), newcomers.begin(), newcomers.end());
        std::sort(next.begin(), next.end(),
                  [](const Entry& a, const Entry& b) { return a.proc < b.proc; });
        active.swap(next);
    }
    return Height::finite(t);
}

std::vector<std::uint8_t> mask_from_set(std::uint32_t n, const std::vector<std::uint32_t>& F) {
    std::vector<std::uint8_t> mask(n, 0);
    for (auto id : F) {
        if (id == 0 || id >= n) throw std::invalid_argument("mask_from_set: ids must be in [1,n-1]");
        mask[id] = 1;
    }
    return mask;
}

std::vector<std::int64_t> batch_wu_rounds(std::uint32_t n, double p, std::uint64_t master_seed,
                                          std::size_t trials, std::int64_t round_cap,
                                          BatchOptions opt) {
    std::vector<std::int64_t> out(trials);
    const int threads = resolve_threads(opt);
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(trials); ++i)
        out[static_cast<std::size_t>(i)] =
            wu_rounds(n, p, derive_seed(master_seed, static_cast<std::uint64_t>(i)), round_cap)
                .value;
    return out;
}

std::vector<std::int64_t> batch_gp_random_rounds(std::uint32_t n, double p,
                                                 std::uint64_t master_seed, std::size_t trials,
                                                 BatchOptions opt) {
    std::vector<std::int64_t> out(trials);
    const int threads = resolve_threads(opt);
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(trials); ++i)
        out[static_cast<std::size_t>(i)] =
            gp_random_rounds(n, p, derive_seed(master_seed, static_cast<std::uint64_t>(i)));
    return out;
}

std::vector<std::int64_t> batch_rgp_rounds(std::uint32_t n, const std::vector<std::uint8_t>& faulty,
                                           std::uint64_t master_seed, std::size_t trials,
                                           BatchOptions opt) {
    std::vector<std::int64_t> out(trials);
    const int threads = resolve_threads(opt);
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(trials); ++i)
        out[static_cast<std::size_t>(i)] =
            rgp_rounds(n, faulty, derive_seed(master_seed, static_cast<std::uint64_t>(i)));
    return out;
}

std::vector<std::int64_t> tablegp_rounds_all_rows(const PermTable& table,
                                                  const std::vector<std::uint8_t>& faulty,
                                                  BatchOptions opt) {
    std::vector<std::int64_t> out(table.t());
    const int threads = resolve_threads(opt);
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(table.t()); ++r)
        out[static_cast<std::size_t>(r)] =
            tablegp_rounds_row(table, faulty, static_cast<std::size_t>(r));
    return out;
}

}  // namespace rumorlab
