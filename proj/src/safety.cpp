#include "rumorlab/safety.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "rumorlab/bounds.hpp"
#include "rumorlab/rng.hpp"

namespace rumorlab {

namespace {

std::vector<std::uint32_t> uniform_fail_set(std::uint32_t n, std::int64_t f, RandomEngine& rng) {
    std::vector<std::uint32_t> ids(n - 1);
    std::iota(ids.begin(), ids.end(), 1u);
    for (std::int64_t i = 0; i < f; ++i) {
        const auto j =
            i + static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(
                                                                 static_cast<std::int64_t>(ids.size()) - i)));
        std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]);
    }
    ids.resize(static_cast<std::size_t>(f));
    std::sort(ids.begin(), ids.end());
    return ids;
}

/// Kills the images of the first f list positions under one stored row; for
/// the identity permutation this is the prefix set {1..f}, the worst case of
/// the deterministic protocol.
std::vector<std::uint32_t> prefix_fail_set(const PermTable& table, std::int64_t f,
                                           RandomEngine& rng) {
    const auto r = static_cast<std::size_t>(uniform_below(rng, table.t()));
    std::vector<std::uint32_t> ids;
    ids.reserve(static_cast<std::size_t>(f));
    for (std::int64_t j = 1; j <= f; ++j)
        ids.push_back(table.map(r, static_cast<std::uint32_t>(j)));
    std::sort(ids.begin(), ids.end());
    return ids;
}

/// Scores each id by how early it tends to be contacted across the whole
/// table (weight 1/position), then fails f ids drawn greedily; variant 0 is
/// the deterministic top-f, later variants sample proportionally to score.
std::vector<std::uint32_t> greedy_fail_set(const PermTable& table,
                                           const std::vector<double>& score, std::int64_t f,
                                           std::size_t variant, RandomEngine& rng) {
    const auto n = static_cast<std::uint32_t>(table.n());
    std::vector<std::uint32_t> ids(n - 1);
    std::iota(ids.begin(), ids.end(), 1u);
    if (variant == 0) {
        std::sort(ids.begin(), ids.end(), [&score](std::uint32_t a, std::uint32_t b) {
            if (score[a] != score[b]) return score[a] > score[b];
            return a < b;
        });
        ids.resize(static_cast<std::size_t>(f));
        std::sort(ids.begin(), ids.end());
        return ids;
    }
    std::vector<double> weight;
    weight.reserve(ids.size());
    for (auto id : ids) weight.push_back(score[id]);
    std::vector<std::uint32_t> chosen;
    chosen.reserve(static_cast<std::size_t>(f));
    for (std::int64_t pick = 0; pick < f; ++pick) {
        const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
        double x = uniform01(rng) * total;
        std::size_t sel = 0;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            x -= weight[i];
            if (x <= 0.0) {
                sel = i;
                break;
            }
            sel = i;
        }
        chosen.push_back(ids[sel]);
        ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(sel));
        weight.erase(weight.begin() + static_cast<std::ptrdiff_t>(sel));
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

}  // namespace

SafetyReport safety_estimate(const PermTable& table, std::int64_t f, double T,
                             std::size_t sample_budget, std::uint64_t seed, BatchOptions opt) {
    const auto n = static_cast<std::uint32_t>(table.n());
    if (f < 0 || f > static_cast<std::int64_t>(n) - 1)
        throw std::invalid_argument("safety_estimate: f out of range");
    if (sample_budget < 1) throw std::invalid_argument("safety_estimate: sample_budget must be >= 1");

    SafetyReport rep;
    rep.n = n;
    rep.t = table.t();
    rep.f = f;
    rep.T = T;
    rep.table_seed = table.seed();
    rep.seed = seed;
    try {
        const DerandSettings ds = derand_params(n, static_cast<std::int64_t>(table.t()));
        rep.delta = ds.delta;
        rep.t0 = ds.t0;
    } catch (const std::exception&) {
        rep.delta = std::exp(1.0) / static_cast<double>(n);
        rep.t0 = static_cast<std::int64_t>(
            std::ceil(rep.delta * static_cast<double>(table.t())));
    }

    // Budget split: half uniform, two fifths prefix attacks, rest greedy.
    const std::size_t n_uniform = (sample_budget + 1) / 2;
    const std::size_t n_prefix = sample_budget * 2 / 5;
    const std::size_t n_greedy = sample_budget - n_uniform - n_prefix;

    std::vector<double> score(n, 0.0);
    if (n_greedy > 0)
        for (std::size_t r = 0; r < table.t(); ++r)
            for (std::uint32_t j = 1; j < n; ++j)
                score[table.map(r, j)] += 1.0 / static_cast<double>(j);

    rep.samples.reserve(sample_budget);
    for (std::size_t i = 0; i < sample_budget; ++i) {
        RandomEngine rng(derive_seed(seed, i));
        SafetySample sample;
        if (f == 0) {
            sample.generator = "uniform";
        } else if (i < n_uniform) {
            sample.generator = "uniform";
            sample.fail_set = uniform_fail_set(n, f, rng);
        } else if (i < n_uniform + n_prefix) {
            sample.generator = "prefix";
            sample.fail_set = prefix_fail_set(table, f, rng);
        } else {
            sample.generator = "greedy";
            sample.fail_set = greedy_fail_set(table, score, f, i - n_uniform - n_prefix, rng);
        }
        rep.samples.push_back(std::move(sample));
    }

    for (auto& sample : rep.samples) {
        const auto mask = mask_from_set(n, sample.fail_set);
        const auto rounds = tablegp_rounds_all_rows(table, mask, opt);
        std::size_t violations = 0;
        for (auto r : rounds)
            if (static_cast<double>(r) > T) ++violations;
        sample.violation_fraction =
            static_cast<double>(violations) / static_cast<double>(table.t());
    }

    rep.worst_fraction = 0;
    rep.worst_index = 0;
    for (std::size_t i = 0; i < rep.samples.size(); ++i)
        if (rep.samples[i].violation_fraction > rep.worst_fraction) {
            rep.worst_fraction = rep.samples[i].violation_fraction;
            rep.worst_index = i;
        }
    rep.pass = rep.worst_fraction <= rep.delta;
    return rep;
}

std::string safety_report_to_json(const SafetyReport& rep) {
    nlohmann::ordered_json j;
    j["n"] = rep.n;
    j["t"] = rep.t;
    j["f"] = rep.f;
    j["T"] = rep.T;
    j["table_seed"] = rep.table_seed;
    j["seed"] = rep.seed;
    j["delta"] = rep.delta;
    j["t0"] = rep.t0;
    j["worst_fraction"] = rep.worst_fraction;
    j["worst_index"] = rep.worst_index;
    j["pass"] = rep.pass;
    nlohmann::ordered_json samples = nlohmann::ordered_json::array();
    for (const auto& sample : rep.samples) {
        nlohmann::ordered_json s;
        s["generator"] = sample.generator;
        s["violation_fraction"] = sample.violation_fraction;
        s["fail_set"] = sample.fail_set;
        samples.push_back(std::move(s));
    }
    j["samples"] = std::move(samples);
    return j.dump(2) + "\n";
}

}  // namespace rumorlab
