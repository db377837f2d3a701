#include <cmath>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "rumorlab/bounds.hpp"
#include "rumorlab/montecarlo.hpp"
#include "rumorlab/oracle.hpp"
#include "rumorlab/safety.hpp"

using namespace rumorlab;

TEST_CASE("binomial tail bounds") {
    CHECK(chernoff_bound(0.0, 100, 10.0, ChernoffVariant::ADDITIVE) ==
          doctest::Approx(0.1353352832366127).epsilon(1e-13));
    CHECK(chernoff_bound(0.0, 100, 0.0, ChernoffVariant::ADDITIVE) == 1.0);
    CHECK(chernoff_bound(16.0, 0, 0.5, ChernoffVariant::MULT_LOWER) ==
          doctest::Approx(0.1353352832366127).epsilon(1e-13));
    CHECK(chernoff_bound(27.0, 0, 0.5, ChernoffVariant::MULT_UPPER) ==
          doctest::Approx(0.10539922456186433).epsilon(1e-13));
    CHECK(chernoff_bound(1.0, 0, 64.0, ChernoffVariant::CROSSOVER) ==
          doctest::Approx(5.421010862427522e-20).epsilon(1e-13));

    CHECK_THROWS_AS(chernoff_bound(0.0, 0, 1.0, ChernoffVariant::ADDITIVE),
                    std::invalid_argument);
    CHECK_THROWS_AS(chernoff_bound(10.0, 0, 1.5, ChernoffVariant::MULT_LOWER),
                    std::invalid_argument);
    CHECK_THROWS_AS(chernoff_bound(10.0, 0, 0.0, ChernoffVariant::MULT_UPPER),
                    std::invalid_argument);
    // The crossover form needs t comfortably past the mean.
    CHECK_THROWS_AS(chernoff_bound(10.0, 0, 5.0, ChernoffVariant::CROSSOVER),
                    std::invalid_argument);
}

TEST_CASE("geometric sum tail bound") {
    CHECK(geometric_sum_bound(28, 0.5) ==
          doctest::Approx(0.10539922456186433).epsilon(1e-13));
    CHECK(geometric_sum_bound(1, 0.5) == 1.0);
    CHECK_THROWS_AS(geometric_sum_bound(0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(geometric_sum_bound(10, 0.0), std::invalid_argument);
}

TEST_CASE("retry-protocol runtime bound") {
    const WuBound b = wu_runtime_bound(1025, 0.5, 3.5);
    CHECK(b.T == doctest::Approx(77.0).epsilon(1e-13));
    CHECK(b.failure_probability == doctest::Approx(0.33178556936429365).epsilon(1e-12));
    // Tighter constant, lower probability, longer T.
    const WuBound b2 = wu_runtime_bound(1025, 0.5, 4.0);
    CHECK(b2.T > b.T);
    CHECK(b2.failure_probability < b.failure_probability);
    CHECK_THROWS_AS(wu_runtime_bound(2, 0.5, 3.5), std::invalid_argument);
    CHECK_THROWS_AS(wu_runtime_bound(1025, 0.0, 3.5), std::invalid_argument);
    CHECK_THROWS_AS(wu_runtime_bound(1025, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("randomized-protocol runtime bound") {
    const RgpBound b = rgp_runtime_bound(1025, 512, 3.5);
    CHECK(b.eps == doctest::Approx(0.08227981917890789).epsilon(1e-13));
    CHECK(b.p == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(b.T == doctest::Approx(92.1669619225062).epsilon(1e-12));
    CHECK(b.failure_probability == doctest::Approx(0.3317858851628756).epsilon(1e-12));
    // No failures: p = 1 and the bound shrinks toward the retry bound's shape.
    const RgpBound clean = rgp_runtime_bound(1025, 0, 3.5);
    CHECK(clean.p == 1.0);
    CHECK(clean.T < b.T);
    // f too close to n-1 starves the success margin.
    CHECK_THROWS_AS(rgp_runtime_bound(1025, 1000, 3.5), std::invalid_argument);
    CHECK_THROWS_AS(rgp_runtime_bound(1025, -1, 3.5), std::invalid_argument);
}

TEST_CASE("stored-table parameter solve") {
    const DerandSettings s = derand_params(256, 16384);
    CHECK(s.delta == doctest::Approx(0.010618288392418145).epsilon(1e-13));
    CHECK(s.c == doctest::Approx(6.601533645780695).epsilon(1e-12));
    CHECK(s.t0 == 174);
    const double n2 = 1.0 / (256.0 * 256.0);
    CHECK(s.q < n2);
    CHECK(s.q == doctest::Approx(n2).epsilon(1e-9));
    // Minimality: c sits on the closed-form solution of q = n^-2, so backing
    // off even a hair pushes the bound back over the target.
    const double L = 7.0;  // ceil(log2(255)) - 1
    const double backed = s.c * (1.0 - 1e-9);
    const double q_backed = 256.0 * 256.0 * 256.0 / (256.0 * 256.0 - 1.0) *
                            std::exp(-(backed - 1.0) * (backed - 1.0) / (2.0 * backed) * L);
    CHECK(q_backed >= n2);

    // delta floor: a huge table is limited by e/n, a small one by 2n/log2(n)/t,
    // nudged so delta * t clears the floor strictly.
    const DerandSettings tight = derand_params(256, 4096);
    CHECK(tight.delta == doctest::Approx(2.0 * 256.0 / 8.0 / 4096.0).epsilon(1e-12));
    CHECK(tight.delta * 4096.0 > 2.0 * 256.0 / 8.0);

    CHECK_THROWS_AS(derand_params(256, 64), std::invalid_argument);   // delta would be 1
    CHECK_THROWS_AS(derand_params(3, 16384), std::invalid_argument);  // no tail levels
    CHECK_THROWS_AS(derand_params(4, 1024), std::logic_error);        // c solves above 8
}

TEST_CASE("monte carlo with certain success never violates the bound") {
    McConfig cfg;
    cfg.protocol = McProtocol::WU;
    cfg.n = 1025;
    cfg.p = 1.0;
    cfg.c = 2.0;
    cfg.trials = 50;
    cfg.seed = 3;
    const TailReport rep = montecarlo_tail(cfg);
    CHECK(rep.protocol == "wu");
    CHECK(rep.bound_T == doctest::Approx(22.0));
    CHECK(rep.empirical_violation_rate == 0.0);
    CHECK(rep.p50 == 11);
    CHECK(rep.max_rounds == 11);
    CHECK(rep.rounds.size() == 50);

    cfg.trials = 0;
    CHECK_THROWS_AS(montecarlo_tail(cfg), std::invalid_argument);
}

TEST_CASE("monte carlo reports are reproducible and protocol-complete") {
    McConfig cfg;
    cfg.protocol = McProtocol::RGP;
    cfg.n = 129;
    cfg.fail_set = {1, 2, 3, 4, 5, 6, 7, 8};
    cfg.c = 3.5;
    cfg.trials = 500;
    cfg.seed = 17;
    const TailReport a = montecarlo_tail(cfg);
    const TailReport b = montecarlo_tail(cfg);
    CHECK(tail_report_to_json(a) == tail_report_to_json(b));
    CHECK(a.f == 8);
    CHECK(a.p50 <= a.p90);
    CHECK(a.p90 <= a.p99);
    CHECK(a.p99 <= a.max_rounds);

    BatchOptions serial;
    serial.serial = true;
    const TailReport c = montecarlo_tail(cfg, serial);
    CHECK(tail_report_to_json(a) == tail_report_to_json(c));

    cfg.protocol = McProtocol::TABLEGP;
    cfg.table_t = 64;
    cfg.table_seed = 4;
    const TailReport t = montecarlo_tail(cfg);
    CHECK(t.protocol == "tablegp");
    CHECK(t.rounds.size() == 500);

    cfg.protocol = McProtocol::GP_RANDOM;
    cfg.p = 0.9;
    const TailReport g = montecarlo_tail(cfg);
    CHECK(g.protocol == "gp_random");
    // One-shot runs cannot be shorter than the fault-free depth or longer
    // than the list.
    for (auto r : g.rounds) {
        CHECK(r >= 8);
        CHECK(r <= 128);
    }

    const auto j = nlohmann::json::parse(tail_report_to_json(a));
    CHECK(j["protocol"] == "rgp");
    CHECK(j["trials"] == 500);
    CHECK(j["quantiles"]["max"] == a.max_rounds);
}

TEST_CASE("histogram csv") {
    CHECK(histogram_csv({5, 3, 5, 5, 3, 9}) == "rounds,count\n3,2\n5,3\n9,1\n");
    CHECK(histogram_csv({}) == "rounds,count\n");
}

TEST_CASE("exhaustive small-instance verification passes") {
    const OracleReport rep = exhaustive_oracle(5);
    CHECK(rep.pass);
    CHECK(rep.checks.size() >= 7);
    for (const auto& chk : rep.checks) {
        CHECK(chk.pass);
        CHECK(chk.cases > 0);
        CHECK(chk.counterexample.empty());
    }
    const auto j = nlohmann::json::parse(oracle_report_to_json(rep));
    CHECK(j["pass"] == true);
    CHECK(j["n_max"] == 5);

    CHECK_THROWS_AS(exhaustive_oracle(0), std::invalid_argument);
    CHECK_THROWS_AS(exhaustive_oracle(15), std::invalid_argument);
}

TEST_CASE("table safety: a one-row identity table is maximally attackable") {
    const PermTable ident = PermTable::single(16, Permutation::identity(15));
    // T below the prefix-attack round count 8 + ceil(log2(8)) = 11.
    const SafetyReport rep = safety_estimate(ident, 8, 10.0, 5, 21);
    CHECK(rep.worst_fraction == 1.0);
    CHECK_FALSE(rep.pass);
    CHECK(rep.delta == doctest::Approx(std::exp(1.0) / 16.0));
    bool saw_prefix_hit = false;
    for (const auto& sample : rep.samples)
        if (sample.generator == "prefix") {
            CHECK(sample.fail_set == std::vector<std::uint32_t>{1, 2, 3, 4, 5, 6, 7, 8});
            CHECK(sample.violation_fraction == 1.0);
            saw_prefix_hit = true;
        }
    CHECK(saw_prefix_hit);
}

TEST_CASE("table safety: no failures, generous budget, clean verdict") {
    const PermTable table(16, 8, 3);
    const SafetyReport rep = safety_estimate(table, 0, 10.0, 4, 9);
    CHECK(rep.worst_fraction == 0.0);
    CHECK(rep.pass);
    CHECK(rep.samples.size() == 4);
    for (const auto& sample : rep.samples) CHECK(sample.fail_set.empty());

    const std::string text = safety_report_to_json(rep);
    CHECK(text == safety_report_to_json(rep));
    const auto j = nlohmann::json::parse(text);
    CHECK(j["pass"] == true);
    CHECK(j["samples"].size() == 4);

    CHECK_THROWS_AS(safety_estimate(table, 16, 10.0, 4, 9), std::invalid_argument);
    CHECK_THROWS_AS(safety_estimate(table, 0, 10.0, 0, 9), std::invalid_argument);
}

TEST_CASE("table safety is deterministic in the seed") {
    const PermTable table(32, 16, 7);
    const SafetyReport a = safety_estimate(table, 10, 12.0, 10, 5);
    const SafetyReport b = safety_estimate(table, 10, 12.0, 10, 5);
    CHECK(safety_report_to_json(a) == safety_report_to_json(b));
    BatchOptions serial;
    serial.serial = true;
    const SafetyReport c = safety_estimate(table, 10, 12.0, 10, 5, serial);
    CHECK(safety_report_to_json(a) == safety_report_to_json(c));
    // Budget split covers all three generators at this size.
    bool u = false, pr = false, gr = false;
    for (const auto& sample : a.samples) {
        u = u || sample.generator == "uniform";
        pr = pr || sample.generator == "prefix";
        gr = gr || sample.generator == "greedy";
        CHECK(sample.fail_set.size() == 10);
    }
    CHECK(u);
    CHECK(pr);
    CHECK(gr);
}
