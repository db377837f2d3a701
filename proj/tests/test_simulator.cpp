#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "rumorlab/exec_tree.hpp"
#include "rumorlab/simulator.hpp"
#include "rumorlab/util.hpp"
#include "rumorlab/wakeup_tree.hpp"

using namespace rumorlab;

namespace {

BitStream success_pattern(std::uint32_t n, const std::vector<std::uint32_t>& F) {
    std::set<std::uint32_t> fs(F.begin(), F.end());
    std::vector<std::uint8_t> bits;
    for (std::uint32_t id = 1; id < n; ++id) bits.push_back(fs.count(id) ? 0 : 1);
    return BitStream::from_bits(std::move(bits), Tail::ones());
}

}  // namespace

TEST_CASE("drop-head runs on fixed instances") {
    const ExecTrace a = simulate_gp(8, FailureModel::adversarial({1, 2, 3}));
    CHECK(a.termination_round == 6);
    CHECK(a.total_requests == 7);
    CHECK(a.total_transfers == 4);
    validate_trace(a);

    const ExecTrace b = simulate_gp(5, FailureModel::none());
    CHECK(b.termination_round == 3);
    CHECK(b.total_requests == 4);
    CHECK(b.total_transfers == 4);
    CHECK(b.informed == std::vector<std::uint32_t>{0, 1, 2, 3, 4});
    validate_trace(b);

    const ExecTrace c = simulate_gp(1, FailureModel::none());
    CHECK(c.termination_round == 0);
    CHECK(c.total_requests == 0);
    CHECK(c.rounds.empty());
    CHECK(c.informed == std::vector<std::uint32_t>{0});
    validate_trace(c);

    CHECK_THROWS_AS(simulate_gp(4, FailureModel::adversarial({0})), std::invalid_argument);
    CHECK_THROWS_AS(simulate_gp(4, FailureModel::adversarial({4})), std::invalid_argument);
}

TEST_CASE("round count equals the configuration-tree height") {
    RandomEngine rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<std::uint32_t>(2 + uniform_below(rng, 40));
        std::vector<std::uint32_t> F;
        for (std::uint32_t id = 1; id < n; ++id)
            if (bernoulli(rng, 0.3)) F.push_back(id);
        const ExecTrace tr = simulate_gp(n, FailureModel::adversarial(F));
        validate_trace(tr);
        CHECK(tr.termination_round == hgp(n - 1, success_pattern(n, F)));
        CHECK(tr.total_requests == static_cast<std::int64_t>(n) - 1);
        CHECK(tr.total_transfers == static_cast<std::int64_t>(n) - 1 -
                                        static_cast<std::int64_t>(F.size()));
    }
}

TEST_CASE("worst case is a forward prefix of failures") {
    for (std::uint32_t n = 2; n <= 40; ++n) {
        for (std::uint32_t f = 0; f < n; ++f) {
            std::vector<std::uint32_t> F(f);
            for (std::uint32_t i = 0; i < f; ++i) F[i] = i + 1;
            const ExecTrace tr = simulate_gp(n, FailureModel::adversarial(F));
            const std::int64_t expect = f + ((n - f > 1) ? ceil_log2(n - f) : 0);
            CHECK(tr.termination_round == expect);
        }
    }
}

TEST_CASE("appendix cost formulas") {
    CHECK(appendix_bits_progression(8) == 12);
    CHECK(appendix_bits_progression(1024) == 33);
    // Explicit list: k ids plus a length field.
    CHECK(appendix_bits_rgp(50, 1024, AppendixMode::EXPLICIT) == 511);
    CHECK(appendix_bits_rgp(0, 1024, AppendixMode::EXPLICIT) == 11);
    // Threshold mode: n / log2(n) = 102.4 for n = 1024.
    CHECK(appendix_bits_rgp(102, 1024, AppendixMode::THRESHOLD) == 102 * 10 + 11);
    CHECK(appendix_bits_rgp(103, 1024, AppendixMode::THRESHOLD) == 1023);
    CHECK(appendix_bits_rgp(600, 1024, AppendixMode::THRESHOLD) == 1023);
    CHECK_THROWS_AS(appendix_bits_rgp(-1, 8, AppendixMode::EXPLICIT), std::invalid_argument);
    CHECK_THROWS_AS(appendix_bits_rgp(8, 8, AppendixMode::EXPLICIT), std::invalid_argument);
}

TEST_CASE("stored-table runs: identity row reduces to plain drop-head") {
    const PermTable ident = PermTable::single(16, Permutation::identity(15));
    const std::vector<std::uint32_t> F{2, 5, 9};
    const ExecTrace tab = simulate_tablegp_row(16, ident, F, 0);
    const ExecTrace gp = simulate_gp(16, FailureModel::adversarial(F));
    validate_trace(tab);
    CHECK(tab.termination_round == gp.termination_round);
    CHECK(tab.total_transfers == gp.total_transfers);
    for (std::size_t r = 0; r < tab.rounds.size(); ++r)
        CHECK(tab.rounds[r].requests == gp.rounds[r].requests);
    // Row index rides in every transfer appendix.
    CHECK(tab.rounds[0].appendix_bits == appendix_bits_progression(16) + 1);

    const PermTable big(1024, 4096, 99);
    const ExecTrace tr = simulate_tablegp(1024, big, {}, 7);
    validate_trace(tr);
    CHECK(tr.max_appendix_bits == 46);
    CHECK(tr.termination_round == 10);
    CHECK(tr.total_transfers == 1023);
    // Row choice is recorded and in range.
    bool saw_row = false;
    for (const auto& [name, value] : tr.seeds)
        if (name == "row") {
            saw_row = true;
            CHECK(value < 4096);
        }
    CHECK(saw_row);
    CHECK_THROWS_AS(simulate_tablegp_row(1024, big, {}, 4096), std::out_of_range);
    CHECK_THROWS_AS(simulate_tablegp_row(512, big, {}, 0), std::invalid_argument);
}

TEST_CASE("relabeled runs: identity permutation in explicit mode matches drop-head") {
    const std::vector<std::uint32_t> F{3, 4, 8, 11};
    const ExecTrace rgp =
        simulate_rgp_with(16, Permutation::identity(15), F, 5, AppendixMode::EXPLICIT);
    const ExecTrace gp = simulate_gp(16, FailureModel::adversarial(F));
    validate_trace(rgp);
    CHECK(rgp.termination_round == gp.termination_round);
    CHECK(rgp.total_transfers == gp.total_transfers);
    for (std::size_t r = 0; r < rgp.rounds.size(); ++r) {
        CHECK(rgp.rounds[r].requests == gp.rounds[r].requests);
        CHECK(rgp.rounds[r].transfers == gp.rounds[r].transfers);
    }
}

TEST_CASE("relabeled runs: seeds, fault-free depth, validation") {
    // No failures and a power-of-two n: exactly log2(n) rounds whatever the
    // relabeling.
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const ExecTrace tr = simulate_rgp(16, {}, seed);
        validate_trace(tr);
        CHECK(tr.termination_round == 4);
        CHECK(tr.total_transfers == 15);
    }
    // Same seed reproduces the run bit for bit; different seeds relabel.
    const ExecTrace x = simulate_rgp(64, {5, 6, 7}, 11);
    const ExecTrace y = simulate_rgp(64, {5, 6, 7}, 11);
    CHECK(trace_to_json(x) == trace_to_json(y));
    const ExecTrace z = simulate_rgp(64, {5, 6, 7}, 12);
    CHECK(trace_to_json(x) != trace_to_json(z));

    // Threshold mode on a big fault-free run: the first transfers ship
    // incidence vectors, later ones explicit lists, and totals add up.
    const ExecTrace big = simulate_rgp(1024, {}, 3, AppendixMode::THRESHOLD);
    validate_trace(big);
    CHECK(big.rounds[0].appendix_bits == 1023);
    CHECK(big.max_appendix_bits == 1023);
    const ExecTrace big_explicit = simulate_rgp(1024, {}, 3, AppendixMode::EXPLICIT);
    CHECK(big_explicit.rounds[0].appendix_bits == 511 * 10 + 11);
    CHECK(big.termination_round == big_explicit.termination_round);
}

TEST_CASE("retry runs terminate like fault-free when every attempt succeeds") {
    for (std::uint32_t n : {1u, 2u, 5u, 16u, 33u, 100u}) {
        const ExecTrace wu = simulate_wu(n, 1.0, 77);
        const ExecTrace gp = simulate_gp(n, FailureModel::none());
        validate_trace(wu);
        CHECK(wu.termination_round == gp.termination_round);
        CHECK(wu.total_transfers == static_cast<std::int64_t>(n) - 1);
        CHECK(wu.total_requests == static_cast<std::int64_t>(n) - 1);
        CHECK(wu.informed.size() == n);
    }
}

TEST_CASE("retry runs: path sums reproduce the round count") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const ExecTrace tr = simulate_wu(33, 0.7, seed);
        validate_trace(tr);
        CHECK_FALSE(tr.nonterminating);
        CHECK(tr.total_transfers == 32);
        CHECK(tr.total_requests >= tr.total_transfers);
        CHECK(wu_path_sum_rounds(tr) == tr.termination_round);
    }
    const ExecTrace one = simulate_wu(1, 0.5, 3);
    CHECK(wu_path_sum_rounds(one) == 0);
}

TEST_CASE("retry runs hit the round cap and say so") {
    const ExecTrace tr = simulate_wu(64, 0.01, 5, 10);
    CHECK(tr.nonterminating);
    CHECK(tr.rounds.size() == 10);
    validate_trace(tr);
    CHECK_THROWS_AS(wu_path_sum_rounds(tr), std::invalid_argument);
    CHECK_THROWS_AS(simulate_wu(4, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(simulate_wu(4, 0.5, 1, 0), std::invalid_argument);
}

TEST_CASE("trace JSON is stable and complete") {
    const ExecTrace tr = simulate_gp(8, FailureModel::adversarial({2, 6}));
    const std::string text = trace_to_json(tr);
    CHECK(text == trace_to_json(tr));
    const auto j = nlohmann::json::parse(text);
    CHECK(j["protocol"] == "gp");
    CHECK(j["n"] == 8);
    CHECK(j["failure_spec"]["kind"] == "set");
    CHECK(j["failure_spec"]["ids"] == std::vector<std::uint32_t>{2, 6});
    CHECK(j["totals"]["requests"] == 7);
    CHECK(j["totals"]["transfers"] == 5);
    CHECK(j["termination_round"] == tr.termination_round);
    CHECK(j["rounds"].size() == tr.rounds.size());
    CHECK(j["nonterminating"] == false);

    const auto jr = nlohmann::json::parse(trace_to_json(simulate_rgp(8, {}, 4)));
    CHECK(jr["protocol"] == "rgp");
    CHECK(jr["seeds"]["pi_seed"] == 4);
    const auto jw = nlohmann::json::parse(trace_to_json(simulate_wu(8, 0.9, 6)));
    CHECK(jw["protocol"] == "wu");
    CHECK(jw["failure_spec"]["kind"] == "random");
}

TEST_CASE("validation catches corrupted traces") {
    ExecTrace tr = simulate_gp(8, FailureModel::adversarial({2}));
    validate_trace(tr);

    ExecTrace bad = tr;
    bad.total_requests += 1;
    CHECK_THROWS_AS(validate_trace(bad), std::logic_error);

    bad = tr;
    bad.rounds[0].transfers.emplace_back(5, 7);
    CHECK_THROWS_AS(validate_trace(bad), std::logic_error);

    bad = tr;
    bad.informed.push_back(2);  // the faulty processor
    CHECK_THROWS_AS(validate_trace(bad), std::logic_error);

    bad = tr;
    bad.rounds[0].round_index = 7;
    CHECK_THROWS_AS(validate_trace(bad), std::logic_error);
}

TEST_CASE("wakeup tree structure for the five-processor example") {
    const WakeupLabeledTree tree = build_wakeup_tree(5, default_leaf_order(5));
    CHECK(tree.leaf_count() == 5);
    CHECK(tree.internal_count() == 4);
    CHECK(tree.targets_of(0) == std::vector<std::uint32_t>{3, 2, 1});
    CHECK(tree.targets_of(3) == std::vector<std::uint32_t>{4});
    CHECK(tree.targets_of(2).empty());

    WakeupLabeledTree timed = tree;
    timed.set_reqs({3, 2, 7, 1});
    CHECK(wu_time_from_path_sums(timed) == 12);
    timed.set_reqs({1, 1, 1, 1});
    CHECK(wu_time_from_path_sums(timed) == 3);
    CHECK_THROWS_AS(timed.set_reqs({1, 1}), std::invalid_argument);

    const WakeupLabeledTree solo = build_wakeup_tree(1, default_leaf_order(1));
    CHECK(solo.internal_count() == 0);
    CHECK(wu_time_from_path_sums(solo) == 0);
}

TEST_CASE("wakeup tree with a shuffled leaf order") {
    const WakeupLabeledTree tree = build_wakeup_tree(5, {4, 2, 0, 1, 3});
    CHECK(tree.internal_count() == 4);
    CHECK(tree.targets_of(0) == std::vector<std::uint32_t>{1, 2});
    CHECK(tree.targets_of(2) == std::vector<std::uint32_t>{4});
    CHECK(tree.targets_of(1) == std::vector<std::uint32_t>{3});
    CHECK_THROWS_AS(build_wakeup_tree(3, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(build_wakeup_tree(3, {0, 1, 1}), std::invalid_argument);
}

TEST_CASE("sampled attempt counts are seed-deterministic geometrics") {
    WakeupLabeledTree a = build_wakeup_tree(33, default_leaf_order(33));
    WakeupLabeledTree b = build_wakeup_tree(33, default_leaf_order(33));
    RandomEngine ra(5), rb(5), rc(6);
    a.sample_reqs(0.3, ra);
    b.sample_reqs(0.3, rb);
    std::vector<std::int64_t> va, vb;
    for (const auto& nd : a.nodes())
        if (nd.left >= 0) va.push_back(nd.req);
    for (const auto& nd : b.nodes())
        if (nd.left >= 0) vb.push_back(nd.req);
    CHECK(va == vb);
    for (auto r : va) CHECK(r >= 1);
    CHECK(wu_time_from_path_sums(a) == wu_time_from_path_sums(b));
    b.sample_reqs(0.3, rc);
    std::vector<std::int64_t> vc;
    for (const auto& nd : b.nodes())
        if (nd.left >= 0) vc.push_back(nd.req);
    CHECK(va != vc);
}
