#include "rumorlab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "rumorlab/bitstream.hpp"
#include "rumorlab/progression.hpp"
#include "rumorlab/rng.hpp"
#include "rumorlab/util.hpp"

namespace rumorlab {

FailureModel FailureModel::adversarial(std::vector<std::uint32_t> ids) {
    FailureModel fm;
    fm.kind = Kind::ADVERSARIAL_SET;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    fm.fail_set = std::move(ids);
    return fm;
}

FailureModel FailureModel::random(double p, std::uint64_t seed) {
    if (!(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("FailureModel::random: p must be in (0,1]");
    FailureModel fm;
    fm.kind = Kind::RANDOM;
    fm.p = p;
    fm.seed = seed;
    return fm;
}

std::int64_t appendix_bits_progression(std::uint32_t n) {
    return 3 * (ceil_log2(n) + 1);
}

std::int64_t appendix_bits_rgp(std::int64_t k, std::uint32_t n, AppendixMode mode) {
    if (k < 0 || k > static_cast<std::int64_t>(n) - 1)
        throw std::invalid_argument("appendix_bits_rgp: k out of range");
    const std::int64_t id_bits = ceil_log2(n);
    const std::int64_t explicit_cost = k * id_bits + (id_bits + 1);
    if (mode == AppendixMode::EXPLICIT) return explicit_cost;
    if (n >= 2 && static_cast<double>(k) > static_cast<double>(n) / std::log2(n))
        return static_cast<std::int64_t>(n) - 1;
    return explicit_cost;
}

namespace {

/// Resolves the failure model to a per-processor crash mask. Processor 0
/// never fails; under RANDOM the mask is drawn once, ids ascending.
std::vector<std::uint8_t> crash_mask(std::uint32_t n, const FailureModel& fm) {
    std::vector<std::uint8_t> faulty(n, 0);
    switch (fm.kind) {
        case FailureModel::Kind::NONE:
            break;
        case FailureModel::Kind::ADVERSARIAL_SET:
            for (auto id : fm.fail_set) {
                if (id == 0 || id >= n)
                    throw std::invalid_argument("failure set: ids must lie in [1, n-1]");
                faulty[id] = 1;
            }
            break;
        case FailureModel::Kind::RANDOM: {
            RandomEngine rng(fm.seed);
            for (std::uint32_t id = 1; id < n; ++id) faulty[id] = bernoulli(rng, fm.p) ? 0 : 1;
            break;
        }
    }
    return faulty;
}

struct ProgressionEntry {
    std::uint32_t proc;
    TodoProgression todo;
};

/// Shared round loop for the protocols whose todo lists stay arithmetic
/// progressions. `target_of` maps a list element to the processor actually
/// contacted; `attempt_ok` decides one attempt (drawing from rng only in the
/// retry variant, ids ascending within a round).
ExecTrace run_progression_protocol(
    Protocol proto, std::uint32_t n, bool retry_on_failure, std::int64_t per_transfer_bits,
    std::int64_t round_cap, const std::function<std::uint32_t(std::uint64_t)>& target_of,
    const std::function<bool(std::uint32_t)>& attempt_ok) {
    ExecTrace trace;
    trace.protocol = proto;
    trace.n = n;
    std::vector<std::uint8_t> informed(n, 0);
    informed[0] = 1;

    std::vector<ProgressionEntry> active;
    if (n >= 2) active.push_back({0, {1, n - 1u, 0}});

    std::int64_t t = 0;
    while (!active.empty()) {
        if (retry_on_failure && t >= round_cap) {
            trace.nonterminating = true;
            break;
        }
        RoundRecord rec;
        rec.round_index = ++t;
        std::vector<ProgressionEntry> next;
        std::vector<ProgressionEntry> newcomers;
        next.reserve(active.size());
        for (auto& e : active) {
            const std::uint32_t target = target_of(e.todo.head());
            rec.requests.emplace_back(e.proc, target);
            if (attempt_ok(target)) {
                const TodoProgression tail = e.todo.rest();
                rec.transfers.emplace_back(e.proc, target);
                rec.appendix_bits += per_transfer_bits;
                trace.max_appendix_bits = std::max(trace.max_appendix_bits, per_transfer_bits);
                informed[target] = 1;
                const TodoProgression give = tail.even_half();
                if (give.len > 0) newcomers.push_back({target, give});
                e.todo = tail.odd_half();
            } else if (!retry_on_failure) {
                e.todo = e.todo.rest();
            }
            if (e.todo.len > 0) next.push_back(e);
        }
        next.insert(next.end(), newcomers.begin(), newcomers.end());
        std::sort(next.begin(), next.end(),
                  [](const ProgressionEntry& a, const ProgressionEntry& b) { return a.proc < b.proc; });
        active = std::move(next);
        trace.total_requests += static_cast<std::int64_t>(rec.requests.size());
        trace.total_transfers += static_cast<std::int64_t>(rec.transfers.size());
        trace.total_appendix_bits += rec.appendix_bits;
        trace.rounds.push_back(std::move(rec));
    }
    trace.termination_round = t;
    for (std::uint32_t id = 0; id < n; ++id)
        if (informed[id]) trace.informed.push_back(id);
    return trace;
}

}  // namespace

ExecTrace simulate_gp(std::uint32_t n, const FailureModel& fm) {
    if (n < 1) throw std::invalid_argument("simulate_gp: n must be >= 1");
    const auto faulty = crash_mask(n, fm);
    ExecTrace trace = run_progression_protocol(
        Protocol::GP, n, false, appendix_bits_progression(n), kDefaultRoundCap,
        [](std::uint64_t id) { return static_cast<std::uint32_t>(id); },
        [&faulty](std::uint32_t target) { return faulty[target] == 0; });
    trace.failure = fm;
    if (fm.kind == FailureModel::Kind::RANDOM) trace.seeds.emplace_back("failure_seed", fm.seed);
    return trace;
}

ExecTrace simulate_wu(std::uint32_t n, double p, std::uint64_t seed, std::int64_t round_cap) {
    if (n < 1) throw std::invalid_argument("simulate_wu: n must be >= 1");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("simulate_wu: p must be in (0,1]");
    if (round_cap < 1) throw std::invalid_argument("simulate_wu: round_cap must be >= 1");
    RandomEngine rng(seed);
    ExecTrace trace = run_progression_protocol(
        Protocol::WU, n, true, appendix_bits_progression(n), round_cap,
        [](std::uint64_t id) { return static_cast<std::uint32_t>(id); },
        [&rng, p](std::uint32_t) { return bernoulli(rng, p); });
    trace.failure = FailureModel::random(p, seed);
    trace.seeds.emplace_back("seed", seed);
    return trace;
}

ExecTrace simulate_tablegp_row(std::uint32_t n, const PermTable& table,
                               const std::vector<std::uint32_t>& F, std::size_t r) {
    if (n < 1) throw std::invalid_argument("simulate_tablegp: n must be >= 1");
    if (table.n() != n) throw std::invalid_argument("simulate_tablegp: table built for different n");
    if (r >= table.t()) throw std::out_of_range("simulate_tablegp: row out of range");
    const FailureModel fm = FailureModel::adversarial(F);
    const auto faulty = crash_mask(n, fm);
    const std::int64_t bits =
        appendix_bits_progression(n) + ceil_log2(static_cast<std::uint64_t>(table.t())) + 1;
    ExecTrace trace = run_progression_protocol(
        Protocol::TABLEGP, n, false, bits, kDefaultRoundCap,
        [&table, r](std::uint64_t id) { return table.map(r, static_cast<std::uint32_t>(id)); },
        [&faulty](std::uint32_t target) { return faulty[target] == 0; });
    trace.failure = fm;
    trace.seeds.emplace_back("row", static_cast<std::uint64_t>(r));
    return trace;
}

ExecTrace simulate_tablegp(std::uint32_t n, const PermTable& table,
                           const std::vector<std::uint32_t>& F, std::uint64_t r_seed) {
    RandomEngine rng(r_seed);
    const auto r = static_cast<std::size_t>(uniform_below(rng, table.t()));
    ExecTrace trace = simulate_tablegp_row(n, table, F, r);
    trace.seeds.emplace_back("r_seed", r_seed);
    return trace;
}

ExecTrace simulate_rgp_with(std::uint32_t n, const Permutation& pi,
                            const std::vector<std::uint32_t>& F, std::uint64_t run_seed,
                            AppendixMode mode) {
    if (n < 1) throw std::invalid_argument("simulate_rgp: n must be >= 1");
    if (pi.size() != n - 1u) throw std::invalid_argument("simulate_rgp: permutation size mismatch");
    const FailureModel fm = FailureModel::adversarial(F);
    const auto faulty = crash_mask(n, fm);
    const double threshold = (n >= 2) ? static_cast<double>(n) / std::log2(n) : 0.0;

    ExecTrace trace;
    trace.protocol = Protocol::RGP;
    trace.n = n;
    trace.failure = fm;
    std::vector<std::uint8_t> informed(n, 0);
    informed[0] = 1;

    struct VecEntry {
        std::uint32_t proc;
        std::vector<std::uint32_t> todo;
    };
    std::vector<VecEntry> active;
    if (n >= 2) {
        std::vector<std::uint32_t> initial(n - 1);
        for (std::uint32_t i = 0; i < n - 1u; ++i) initial[i] = pi(i) + 1;
        active.push_back({0, std::move(initial)});
    }

    std::int64_t t = 0;
    while (!active.empty()) {
        RoundRecord rec;
        rec.round_index = ++t;
        std::vector<VecEntry> next;
        std::vector<VecEntry> newcomers;
        next.reserve(active.size());
        for (auto& e : active) {
            const std::uint32_t target = e.todo.front();
            rec.requests.emplace_back(e.proc, target);
            std::vector<std::uint32_t> tail(e.todo.begin() + 1, e.todo.end());
            if (faulty[target] == 0) {
                rec.transfers.emplace_back(e.proc, target);
                informed[target] = 1;
                std::vector<std::uint32_t> give = even_split(tail);
                const std::int64_t bits =
                    appendix_bits_rgp(static_cast<std::int64_t>(give.size()), n, mode);
                rec.appendix_bits += bits;
                trace.max_appendix_bits = std::max(trace.max_appendix_bits, bits);
                if (!give.empty()) {
                    if (mode == AppendixMode::THRESHOLD &&
                        static_cast<double>(give.size()) > threshold) {
                        // The incidence vector loses the order, so the
                        // receiver rebuilds its list in a seeded random order.
                        RandomEngine rx(derive_seed(run_seed, target));
                        for (std::size_t i = give.size(); i > 1; --i)
                            std::swap(give[i - 1], give[static_cast<std::size_t>(
                                                       uniform_below(rx, i))]);
                    }
                    newcomers.push_back({target, std::move(give)});
                }
                e.todo = odd_split(tail);
            } else {
                e.todo = std::move(tail);
            }
            if (!e.todo.empty()) next.push_back(std::move(e));
        }
        for (auto& nc : newcomers) next.push_back(std::move(nc));
        std::sort(next.begin(), next.end(),
                  [](const VecEntry& a, const VecEntry& b) { return a.proc < b.proc; });
        active = std::move(next);
        trace.total_requests += static_cast<std::int64_t>(rec.requests.size());
        trace.total_transfers += static_cast<std::int64_t>(rec.transfers.size());
        trace.total_appendix_bits += rec.appendix_bits;
        trace.rounds.push_back(std::move(rec));
    }
    trace.termination_round = t;
    for (std::uint32_t id = 0; id < n; ++id)
        if (informed[id]) trace.informed.push_back(id);
    return trace;
}

ExecTrace simulate_rgp(std::uint32_t n, const std::vector<std::uint32_t>& F,
                       std::uint64_t pi_seed, AppendixMode mode) {
    if (n < 1) throw std::invalid_argument("simulate_rgp: n must be >= 1");
    RandomEngine rng(pi_seed);
    const Permutation pi = random_permutation(n - 1u, rng);
    ExecTrace trace = simulate_rgp_with(n, pi, F, pi_seed, mode);
    trace.seeds.emplace_back("pi_seed", pi_seed);
    return trace;
}

void validate_trace(const ExecTrace& trace) {
    const auto fail = [](const std::string& what) { throw std::logic_error("trace invariant: " + what); };
    const std::uint32_t n = trace.n;
    // WU randomness is per attempt, not a crash mask; nobody is faulty there.
    const auto faulty = (trace.protocol == Protocol::WU) ? std::vector<std::uint8_t>(n, 0)
                                                         : crash_mask(n, trace.failure);

    std::int64_t requests = 0, transfers = 0, bits = 0;
    std::map<std::uint32_t, int> target_hits;
    for (std::size_t i = 0; i < trace.rounds.size(); ++i) {
        const RoundRecord& rec = trace.rounds[i];
        if (rec.round_index != static_cast<std::int64_t>(i) + 1) fail("round indices not 1..R");
        std::set<std::uint32_t> senders, targets;
        for (const auto& [s, tgt] : rec.requests) {
            if (s >= n || tgt >= n || tgt == 0) fail("request ids out of range");
            if (faulty[s]) fail("faulty sender");
            if (!senders.insert(s).second) fail("processor sent twice in one round");
            if (!targets.insert(tgt).second) fail("processor contacted twice in one round");
            target_hits[tgt] += 1;
        }
        const std::set<std::pair<std::uint32_t, std::uint32_t>> reqset(rec.requests.begin(),
                                                                       rec.requests.end());
        for (const auto& tr : rec.transfers) {
            if (!reqset.count(tr)) fail("transfer without matching request");
            if (faulty[tr.second]) fail("faulty processor informed");
        }
        requests += static_cast<std::int64_t>(rec.requests.size());
        transfers += static_cast<std::int64_t>(rec.transfers.size());
        bits += rec.appendix_bits;
    }
    if (requests != trace.total_requests) fail("total_requests mismatch");
    if (transfers != trace.total_transfers) fail("total_transfers mismatch");
    if (bits != trace.total_appendix_bits) fail("total_appendix_bits mismatch");
    if (!trace.nonterminating &&
        trace.termination_round != static_cast<std::int64_t>(trace.rounds.size()))
        fail("termination_round mismatch");

    if (trace.protocol != Protocol::WU) {
        if (requests != static_cast<std::int64_t>(n) - 1) fail("one-shot protocol request count");
        for (const auto& [tgt, hits] : target_hits)
            if (hits > 1) fail("processor contacted more than once over the run");
    }

    std::vector<std::uint8_t> informed(n, 0);
    for (auto id : trace.informed) {
        if (id >= n) fail("informed id out of range");
        if (faulty[id]) fail("faulty processor listed informed");
        informed[id] = 1;
    }
    if (n >= 1 && !informed[0]) fail("processor 0 must be informed");
    if (!trace.nonterminating)
        for (std::uint32_t id = 0; id < n; ++id)
            if (!faulty[id] && !informed[id]) fail("surviving processor left uninformed");
}

std::int64_t wu_path_sum_rounds(const ExecTrace& trace) {
    if (trace.protocol != Protocol::WU)
        throw std::invalid_argument("wu_path_sum_rounds: WU trace required");
    if (trace.nonterminating)
        throw std::invalid_argument("wu_path_sum_rounds: trace did not terminate");
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::int64_t> attempts;
    for (const auto& rec : trace.rounds)
        for (const auto& rq : rec.requests) attempts[rq] += 1;

    struct Node {
        std::uint32_t proc;
        TodoProgression todo;
        std::int64_t sum;
    };
    std::int64_t best = 0;
    std::vector<Node> stack;
    if (trace.n >= 2) stack.push_back({0, {1, trace.n - 1u, 0}, 0});
    while (!stack.empty()) {
        Node nd = stack.back();
        stack.pop_back();
        if (nd.todo.len == 0) {
            best = std::max(best, nd.sum);
            continue;
        }
        const auto head = static_cast<std::uint32_t>(nd.todo.head());
        const auto it = attempts.find({nd.proc, head});
        if (it == attempts.end())
            throw std::logic_error("wu_path_sum_rounds: contact missing from trace");
        const TodoProgression tail = nd.todo.rest();
        stack.push_back({nd.proc, tail.odd_half(), nd.sum + it->second});
        stack.push_back({head, tail.even_half(), nd.sum + it->second});
    }
    return best;
}

std::string protocol_name(Protocol p) {
    switch (p) {
        case Protocol::GP: return "gp";
        case Protocol::WU: return "wu";
        case Protocol::RGP: return "rgp";
        case Protocol::TABLEGP: return "tablegp";
    }
    return "?";
}

std::string trace_to_json(const ExecTrace& trace) {
    nlohmann::ordered_json j;
    j["protocol"] = protocol_name(trace.protocol);
    j["n"] = trace.n;
    nlohmann::ordered_json seeds = nlohmann::ordered_json::object();
    for (const auto& [name, value] : trace.seeds) seeds[name] = value;
    j["seeds"] = seeds;
    nlohmann::ordered_json fs;
    switch (trace.failure.kind) {
        case FailureModel::Kind::NONE:
            fs["kind"] = "none";
            break;
        case FailureModel::Kind::ADVERSARIAL_SET:
            fs["kind"] = "set";
            fs["ids"] = trace.failure.fail_set;
            break;
        case FailureModel::Kind::RANDOM:
            fs["kind"] = "random";
            fs["p"] = trace.failure.p;
            fs["seed"] = trace.failure.seed;
            break;
    }
    j["failure_spec"] = fs;
    nlohmann::ordered_json rounds = nlohmann::ordered_json::array();
    for (const auto& rec : trace.rounds) {
        nlohmann::ordered_json r;
        r["t"] = rec.round_index;
        r["requests"] = rec.requests;
        r["transfers"] = rec.transfers;
        r["appendix_bits"] = rec.appendix_bits;
        rounds.push_back(std::move(r));
    }
    j["rounds"] = std::move(rounds);
    j["totals"] = {{"requests", trace.total_requests},
                   {"transfers", trace.total_transfers},
                   {"appendix_bits", trace.total_appendix_bits},
                   {"max_appendix_bits", trace.max_appendix_bits}};
    j["termination_round"] = trace.termination_round;
    j["nonterminating"] = trace.nonterminating;
    return j.dump(2) + "\n";
}

}  // namespace rumorlab
