#include <string>
#include <vector>

#include "doctest.h"
#include "rumorlab/kernels.hpp"
#include "rumorlab/rng.hpp"
#include "rumorlab/simulator.hpp"

using namespace rumorlab;

TEST_CASE("positional kernel equals the stream recursion") {
    CHECK(hgp_prefix(0, nullptr) == 0);
    RandomEngine rng(31);
    for (int trial = 0; trial < 400; ++trial) {
        const auto k = static_cast<std::int64_t>(uniform_below(rng, 64));
        std::vector<std::uint8_t> bits(static_cast<std::size_t>(k));
        std::string pat;
        for (auto& b : bits) {
            b = bernoulli(rng, 0.5) ? 1 : 0;
            pat.push_back(b ? '1' : '0');
        }
        CHECK(hgp_prefix(k, bits.data()) == hgp(k, BitStream::parse(pat, Tail::ones())));
    }
    // Large k exercises the fixed-size frame stack.
    std::vector<std::uint8_t> ones(4000, 1);
    CHECK(hgp_prefix(4000, ones.data()) == hgp(4000, BitStream::all_ones()));
    std::vector<std::uint8_t> zeros(4000, 0);
    CHECK(hgp_prefix(4000, zeros.data()) == 4000);
}

TEST_CASE("lean kernels reproduce the full simulator samplewise") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        CHECK(gp_random_rounds(97, 0.6, seed) ==
              simulate_gp(97, FailureModel::random(0.6, seed)).termination_round);

        const ExecTrace wu = simulate_wu(64, 0.55, seed);
        CHECK(wu_rounds(64, 0.55, seed) == Height::finite(wu.termination_round));

        const std::vector<std::uint32_t> F{3, 9, 17, 40, 41};
        const ExecTrace rgp = simulate_rgp(64, F, seed, AppendixMode::EXPLICIT);
        CHECK(rgp_rounds(64, mask_from_set(64, F), seed) == rgp.termination_round);
    }
    const PermTable table(64, 32, 5);
    const std::vector<std::uint32_t> F{1, 2, 3, 50};
    for (std::size_t r = 0; r < table.t(); ++r)
        CHECK(tablegp_rounds_row(table, mask_from_set(64, F), r) ==
              simulate_tablegp_row(64, table, F, r).termination_round);
}

TEST_CASE("retry kernel nontermination matches the simulator") {
    const Height h = wu_rounds(64, 0.01, 5, 10);
    CHECK(h.is_nonterminating());
    CHECK(simulate_wu(64, 0.01, 5, 10).nonterminating);
    const Height ok = wu_rounds(64, 0.9, 5, kDefaultRoundCap);
    CHECK_FALSE(ok.is_nonterminating());
    CHECK(wu_rounds(1, 0.5, 0) == Height::finite(0));
}

TEST_CASE("batches equal per-trial calls with derived seeds") {
    const std::uint64_t master = 4242;
    const std::size_t trials = 64;

    const auto wu = batch_wu_rounds(129, 0.5, master, trials);
    const auto gp = batch_gp_random_rounds(129, 0.5, master, trials);
    const auto rgp = batch_rgp_rounds(129, mask_from_set(129, {1, 2, 3, 4, 5}), master, trials);
    REQUIRE(wu.size() == trials);
    REQUIRE(gp.size() == trials);
    REQUIRE(rgp.size() == trials);
    for (std::size_t i = 0; i < trials; ++i) {
        const std::uint64_t s = derive_seed(master, i);
        CHECK(wu[i] == wu_rounds(129, 0.5, s).value);
        CHECK(gp[i] == gp_random_rounds(129, 0.5, s));
        CHECK(rgp[i] == rgp_rounds(129, mask_from_set(129, {1, 2, 3, 4, 5}), s));
    }

    // Capped trials surface as the infinite marker.
    const auto capped = batch_wu_rounds(64, 0.01, 5, 3, 10);
    CHECK(capped[0] == Height::kInfinite);
}

TEST_CASE("serial and parallel batches are identical") {
    BatchOptions serial;
    serial.serial = true;
    BatchOptions par;
    par.threads = 4;

    CHECK(batch_wu_rounds(200, 0.5, 9, 300, kDefaultRoundCap, serial) ==
          batch_wu_rounds(200, 0.5, 9, 300, kDefaultRoundCap, par));
    CHECK(batch_gp_random_rounds(200, 0.5, 9, 300, serial) ==
          batch_gp_random_rounds(200, 0.5, 9, 300, par));
    const auto mask = mask_from_set(200, {10, 20, 30});
    CHECK(batch_rgp_rounds(200, mask, 9, 300, serial) == batch_rgp_rounds(200, mask, 9, 300, par));

    const PermTable table(128, 257, 12);
    const auto rows_serial = tablegp_rounds_all_rows(table, mask_from_set(128, {1, 64}), serial);
    const auto rows_par = tablegp_rounds_all_rows(table, mask_from_set(128, {1, 64}), par);
    CHECK(rows_serial == rows_par);
    REQUIRE(rows_serial.size() == 257);
    for (std::size_t r = 0; r < 257; ++r)
        CHECK(rows_serial[r] == tablegp_rounds_row(table, mask_from_set(128, {1, 64}), r));
}

TEST_CASE("mask construction validates ids") {
    const auto mask = mask_from_set(6, {1, 5});
    CHECK(mask == std::vector<std::uint8_t>{0, 1, 0, 0, 0, 1});
    CHECK_THROWS_AS(mask_from_set(6, {0}), std::invalid_argument);
    CHECK_THROWS_AS(mask_from_set(6, {6}), std::invalid_argument);
    CHECK_THROWS_AS(rgp_rounds(6, {0, 0, 0}, 1), std::invalid_argument);
}
