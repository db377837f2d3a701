#include "rumorlab/montecarlo.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "rumorlab/bounds.hpp"
#include "rumorlab/rng.hpp"

namespace rumorlab {

namespace {

std::int64_t nearest_rank(const std::vector<std::int64_t>& sorted, double q) {
    if (sorted.empty()) return 0;
    auto idx = static_cast<std::size_t>(q * static_cast<double>(sorted.size()));
    if (idx >= sorted.size()) idx = sorted.size() - 1;
    return sorted[idx];
}

const char* mc_name(McProtocol p) {
    switch (p) {
        case McProtocol::WU: return "wu";
        case McProtocol::GP_RANDOM: return "gp_random";
        case McProtocol::RGP: return "rgp";
        case McProtocol::TABLEGP: return "tablegp";
    }
    return "?";
}

}  // namespace

TailReport montecarlo_tail(const McConfig& cfg, BatchOptions opt) {
    if (cfg.trials < 1) throw std::invalid_argument("montecarlo_tail: trials must be >= 1");
    TailReport rep;
    rep.protocol = mc_name(cfg.protocol);
    rep.n = cfg.n;
    rep.trials = cfg.trials;
    rep.c = cfg.c;
    rep.seed = cfg.seed;

    switch (cfg.protocol) {
        case McProtocol::WU: {
            rep.p = cfg.p;
            const WuBound b = wu_runtime_bound(cfg.n, cfg.p, cfg.c);
            rep.bound_T = b.T;
            rep.theoretical_bound = b.failure_probability;
            rep.rounds = batch_wu_rounds(cfg.n, cfg.p, cfg.seed, cfg.trials, cfg.round_cap, opt);
            break;
        }
        case McProtocol::GP_RANDOM: {
            rep.p = cfg.p;
            const WuBound b = wu_runtime_bound(cfg.n, cfg.p, cfg.c);
            rep.bound_T = b.T;
            rep.theoretical_bound = b.failure_probability;
            rep.rounds = batch_gp_random_rounds(cfg.n, cfg.p, cfg.seed, cfg.trials, opt);
            break;
        }
        case McProtocol::RGP: {
            rep.f = static_cast<std::int64_t>(cfg.fail_set.size());
            const RgpBound b = rgp_runtime_bound(cfg.n, rep.f, cfg.c);
            rep.p = b.p;
            rep.bound_T = b.T;
            rep.theoretical_bound = b.failure_probability;
            const auto mask = mask_from_set(cfg.n, cfg.fail_set);
            rep.rounds = batch_rgp_rounds(cfg.n, mask, cfg.seed, cfg.trials, opt);
            break;
        }
        case McProtocol::TABLEGP: {
            rep.f = static_cast<std::int64_t>(cfg.fail_set.size());
            const RgpBound b = rgp_runtime_bound(cfg.n, rep.f, cfg.c);
            rep.p = b.p;
            rep.bound_T = b.T;
            rep.theoretical_bound = b.failure_probability;
            const auto mask = mask_from_set(cfg.n, cfg.fail_set);
            const PermTable table(cfg.n, cfg.table_t, cfg.table_seed);
            rep.rounds.resize(cfg.trials);
            for (std::size_t i = 0; i < cfg.trials; ++i) {
                RandomEngine rng(derive_seed(cfg.seed, i));
                const auto r = static_cast<std::size_t>(uniform_below(rng, table.t()));
                rep.rounds[i] = tablegp_rounds_row(table, mask, r);
            }
            break;
        }
    }

    std::size_t violations = 0;
    for (auto r : rep.rounds)
        if (static_cast<double>(r) > rep.bound_T) ++violations;
    rep.empirical_violation_rate =
        static_cast<double>(violations) / static_cast<double>(cfg.trials);

    std::vector<std::int64_t> sorted = rep.rounds;
    std::sort(sorted.begin(), sorted.end());
    rep.p50 = nearest_rank(sorted, 0.50);
    rep.p90 = nearest_rank(sorted, 0.90);
    rep.p99 = nearest_rank(sorted, 0.99);
    rep.max_rounds = sorted.back();
    return rep;
}

std::string tail_report_to_json(const TailReport& rep) {
    nlohmann::ordered_json j;
    j["protocol"] = rep.protocol;
    j["n"] = rep.n;
    j["trials"] = rep.trials;
    j["c"] = rep.c;
    j["p"] = rep.p;
    j["f"] = rep.f;
    j["seed"] = rep.seed;
    j["bound_T"] = rep.bound_T;
    j["theoretical_bound"] = rep.theoretical_bound;
    j["empirical_violation_rate"] = rep.empirical_violation_rate;
    j["quantiles"] = {{"p50", rep.p50}, {"p90", rep.p90}, {"p99", rep.p99}, {"max", rep.max_rounds}};
    return j.dump(2) + "\n";
}

std::string histogram_csv(const std::vector<std::int64_t>& rounds) {
    std::map<std::int64_t, std::int64_t> hist;
    for (auto r : rounds) hist[r] += 1;
    std::ostringstream out;
    out << "rounds,count\n";
    for (const auto& [r, count] : hist) out << r << "," << count << "\n";
    return out.str();
}

}  // namespace rumorlab
