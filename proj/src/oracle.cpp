#include "rumorlab/oracle.hpp"

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "rumorlab/exec_tree.hpp"
#include "rumorlab/kernels.hpp"
#include "rumorlab/simulator.hpp"
#include "rumorlab/util.hpp"

namespace rumorlab {

namespace {

BitStream pattern_stream(std::uint64_t word, int len) {
    std::vector<std::uint8_t> prefix(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) prefix[static_cast<std::size_t>(i)] = (word >> i) & 1u;
    return BitStream::from_bits(std::move(prefix), Tail::ones());
}

std::string describe_pattern(std::uint64_t word, int len) {
    std::string s;
    for (int i = 0; i < len; ++i) s.push_back(((word >> i) & 1u) ? '1' : '0');
    return s.empty() ? "(empty)" : s;
}

void record(OracleCheck& chk, bool ok, const std::string& instance) {
    chk.cases += 1;
    if (!ok && chk.pass) {
        chk.pass = false;
        chk.counterexample = instance;
    }
}

}  // namespace

OracleReport exhaustive_oracle(int n_max) {
    if (n_max < 1) throw std::invalid_argument("exhaustive_oracle: n_max must be >= 1");
    if (n_max > 14)
        throw std::invalid_argument("exhaustive_oracle: n_max capped at 14 (2^(n-1) enumeration)");

    OracleReport rep;
    rep.n_max = n_max;
    OracleCheck coupling{"coupling", 0, true, ""};
    OracleCheck monotone_k{"monotone_k", 0, true, ""};
    OracleCheck monotone_b{"monotone_b", 0, true, ""};
    OracleCheck splitting{"splitting", 0, true, ""};
    OracleCheck pointwise{"event_tree_pointwise", 0, true, ""};
    OracleCheck distribution{"distribution_equivalence", 0, true, ""};
    OracleCheck worst_case{"worst_case_exactness", 0, true, ""};
    OracleCheck requests{"request_count", 0, true, ""};

    // Tree-level checks over every success pattern of every length <= n_max.
    for (int k = 0; k <= n_max; ++k) {
        const std::uint64_t limit = std::uint64_t{1} << k;
        for (std::uint64_t word = 0; word < limit; ++word) {
            const BitStream b = pattern_stream(word, k);
            const std::string inst = "k=" + std::to_string(k) + " b=" + describe_pattern(word, k);
            record(coupling, check_coupling(k, b), inst);
            record(monotone_k, check_monotone_k(k, b, TreeKind::GP), inst + " kind=gp");
            record(monotone_k, check_monotone_k(k, b, TreeKind::WU), inst + " kind=wu");
            record(splitting, check_splitting(k, b), inst);
            for (int pos = 1; pos <= k; ++pos) {
                if (b.at(pos) != 0) continue;
                const std::string finst = inst + " flip=" + std::to_string(pos);
                record(monotone_b, check_monotone_b(k, b, pos), finst + " kind=gp");
                record(monotone_b, check_monotone_b_wu(k, b, pos), finst + " kind=wu");
            }
        }
    }

    // Event semantics vs tree semantics over every failure set.
    for (int n = 1; n <= n_max; ++n) {
        const int k = n - 1;
        // rounds of simulate_gp keyed by failure-set size
        std::map<int, std::map<std::int64_t, std::int64_t>> sim_hist;
        std::map<int, std::map<std::int64_t, std::int64_t>> tree_hist;
        const std::uint64_t limit = std::uint64_t{1} << k;
        for (std::uint64_t word = 0; word < limit; ++word) {
            // word bit i-1 set = processor i is in the failure set F
            std::vector<std::uint32_t> F;
            std::vector<std::uint8_t> bits(static_cast<std::size_t>(k));
            for (int i = 1; i <= k; ++i) {
                const bool failed = (word >> (i - 1)) & 1u;
                if (failed) F.push_back(static_cast<std::uint32_t>(i));
                bits[static_cast<std::size_t>(i - 1)] = failed ? 0 : 1;
            }
            const int f = static_cast<int>(F.size());
            const ExecTrace trace =
                simulate_gp(static_cast<std::uint32_t>(n), FailureModel::adversarial(F));
            validate_trace(trace);
            const std::int64_t h = (k > 0) ? hgp_prefix(k, bits.data()) : 0;
            const std::string inst =
                "n=" + std::to_string(n) + " F-bits=" + describe_pattern(word, k);
            record(requests, trace.total_requests == n - 1, inst);
            record(pointwise, trace.termination_round == h, inst);
            sim_hist[f][trace.termination_round] += 1;
            tree_hist[f][h] += 1;
        }
        for (int f = 0; f <= k; ++f)
            record(distribution, sim_hist[f] == tree_hist[f],
                   "n=" + std::to_string(n) + " f=" + std::to_string(f));

        if (n >= 2) {
            for (int f = 0; f <= k; ++f) {
                std::vector<std::uint32_t> F;
                for (int i = 1; i <= f; ++i) F.push_back(static_cast<std::uint32_t>(i));
                const ExecTrace trace =
                    simulate_gp(static_cast<std::uint32_t>(n), FailureModel::adversarial(F));
                const std::int64_t expect =
                    f + ceil_log2(static_cast<std::uint64_t>(n - f));
                record(worst_case, trace.termination_round == expect,
                       "n=" + std::to_string(n) + " f=" + std::to_string(f));
            }
        }
    }

    rep.checks = {coupling, monotone_k, monotone_b, splitting,
                  pointwise, distribution, worst_case, requests};
    for (const auto& chk : rep.checks) rep.pass = rep.pass && chk.pass;
    return rep;
}

std::string oracle_report_to_json(const OracleReport& rep) {
    nlohmann::ordered_json j;
    j["n_max"] = rep.n_max;
    j["pass"] = rep.pass;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& chk : rep.checks) {
        nlohmann::ordered_json c;
        c["name"] = chk.name;
        c["cases"] = chk.cases;
        c["pass"] = chk.pass;
        if (!chk.pass) c["counterexample"] = chk.counterexample;
        checks.push_back(std::move(c));
    }
    j["checks"] = std::move(checks);
    return j.dump(2) + "\n";
}

}  // namespace rumorlab
