#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rumorlab/exec_tree.hpp"
#include "rumorlab/perm_table.hpp"
#include "rumorlab/permutation.hpp"

namespace rumorlab {

enum class Protocol { GP, WU, RGP, TABLEGP };

/// Appendix encoding for handing a to-inform list to the receiver: EXPLICIT
/// always lists the ids; THRESHOLD switches to an n-1 bit incidence vector
/// once the list is longer than n / log2(n).
enum class AppendixMode { EXPLICIT, THRESHOLD };

struct FailureModel {
    enum class Kind { NONE, ADVERSARIAL_SET, RANDOM };
    Kind kind = Kind::NONE;
    std::vector<std::uint32_t> fail_set;  // ADVERSARIAL_SET, sorted unique
    double p = 1.0;                       // RANDOM per-processor survival rate
    std::uint64_t seed = 0;               // RANDOM

    static FailureModel none() { return {}; }
    static FailureModel adversarial(std::vector<std::uint32_t> ids);
    static FailureModel random(double p, std::uint64_t seed);
};

struct RoundRecord {
    std::int64_t round_index = 0;  // 1-based
    std::vector<std::pair<std::uint32_t, std::uint32_t>> requests;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> transfers;
    std::int64_t appendix_bits = 0;
};

struct ExecTrace {
    Protocol protocol = Protocol::GP;
    std::uint32_t n = 0;
    std::vector<std::pair<std::string, std::uint64_t>> seeds;
    FailureModel failure;
    std::vector<RoundRecord> rounds;
    std::int64_t total_requests = 0;
    std::int64_t total_transfers = 0;
    std::int64_t total_appendix_bits = 0;
    std::int64_t max_appendix_bits = 0;
    std::int64_t termination_round = 0;
    std::vector<std::uint32_t> informed;  // sorted ids holding the rumor at the end
    bool nonterminating = false;
};

/// Cost of attaching a length-k to-inform list to a rumor: EXPLICIT is
/// k*ceil(log2 n) id bits plus a (ceil(log2 n)+1)-bit length field; THRESHOLD
/// falls back to the n-1 bit incidence vector when k > n/log2(n).
std::int64_t appendix_bits_rgp(std::int64_t k, std::uint32_t n, AppendixMode mode);

/// Per-transfer cost of the three progression fields (first, length, step).
std::int64_t appendix_bits_progression(std::uint32_t n);

/// Deterministic halving protocol: processor 0 starts with list (1..n-1);
/// each informed processor contacts its list head, drops it, and on success
/// hands over the even half of the tail while keeping the odd half.
ExecTrace simulate_gp(std::uint32_t n, const FailureModel& fm);

/// Same recursion but a failed contact is retried next round; each attempt
/// succeeds independently with probability p.
ExecTrace simulate_wu(std::uint32_t n, double p, std::uint64_t seed,
                      std::int64_t round_cap = kDefaultRoundCap);

/// GP over a uniformly random relabeling of processor 0's list, defeating
/// adversarial placement of the failure set F.
ExecTrace simulate_rgp(std::uint32_t n, const std::vector<std::uint32_t>& F,
                       std::uint64_t pi_seed, AppendixMode mode = AppendixMode::THRESHOLD);

/// As simulate_rgp but with a caller-supplied permutation (pi acts on
/// {0..n-2}; list position i holds pi(i-1)+1). run_seed feeds the receivers'
/// list re-randomization in THRESHOLD mode.
ExecTrace simulate_rgp_with(std::uint32_t n, const Permutation& pi,
                            const std::vector<std::uint32_t>& F, std::uint64_t run_seed,
                            AppendixMode mode = AppendixMode::THRESHOLD);

/// GP where contact targets are filtered through a stored permutation chosen
/// uniformly from the table; the row index rides along in each appendix.
ExecTrace simulate_tablegp(std::uint32_t n, const PermTable& table,
                           const std::vector<std::uint32_t>& F, std::uint64_t r_seed);

/// As simulate_tablegp with a fixed row.
ExecTrace simulate_tablegp_row(std::uint32_t n, const PermTable& table,
                               const std::vector<std::uint32_t>& F, std::size_t r);

/// Throws std::logic_error if any trace invariant fails: per-round matching,
/// no faulty senders, no informed faulty processors, totals consistent,
/// request-count identity for the one-shot protocols.
void validate_trace(const ExecTrace& trace);

/// Round count implied by summing per-contact attempt counts along the
/// halving recursion's paths; for a terminating WU trace this must equal
/// termination_round.
std::int64_t wu_path_sum_rounds(const ExecTrace& trace);

std::string protocol_name(Protocol p);

/// Stable JSON rendering (used for artifacts; key order fixed).
std::string trace_to_json(const ExecTrace& trace);

}  // namespace rumorlab
