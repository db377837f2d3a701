#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rumorlab/bounds.hpp"
#include "rumorlab/exec_tree.hpp"
#include "rumorlab/montecarlo.hpp"
#include "rumorlab/oracle.hpp"
#include "rumorlab/safety.hpp"
#include "rumorlab/simulator.hpp"
#include "rumorlab/util.hpp"

namespace {

using namespace rumorlab;

std::vector<std::uint32_t> parse_fail_list(const std::string& csv) {
    std::vector<std::uint32_t> ids;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        const unsigned long v = std::stoul(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad failure id: " + item);
        ids.push_back(static_cast<std::uint32_t>(v));
    }
    return ids;
}

std::vector<std::uint32_t> load_fail_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read failure file: " + path);
    std::vector<std::uint32_t> ids;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ids.push_back(static_cast<std::uint32_t>(std::stoul(line)));
    }
    return ids;
}

/// Failure ids from --fail-set / --fail-file / --f (prefix set {1..f}).
std::vector<std::uint32_t> resolve_fail_set(const std::string& csv, const std::string& file,
                                            std::int64_t prefix_f) {
    if (!csv.empty()) return parse_fail_list(csv);
    if (!file.empty()) return load_fail_file(file);
    std::vector<std::uint32_t> ids;
    for (std::int64_t i = 1; i <= prefix_f; ++i) ids.push_back(static_cast<std::uint32_t>(i));
    return ids;
}

/// Round cap precedence: --cap flag, then RUMORLAB_MAX_ROUNDS, then default.
std::int64_t resolve_cap(std::int64_t flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("RUMORLAB_MAX_ROUNDS")) {
        const std::string s(env);
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used != s.size() || v < 1)
            throw std::invalid_argument("RUMORLAB_MAX_ROUNDS must be a positive integer");
        return v;
    }
    return kDefaultRoundCap;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
}

Tail make_tail(const std::string& kind, double p, std::uint64_t seed) {
    if (kind == "ones") return Tail::ones();
    if (kind == "zeros") return Tail::zeros();
    if (kind == "bern") return Tail::bern(p, seed);
    throw std::invalid_argument("tail must be ones, zeros, or bern");
}

struct SimulateArgs {
    std::string protocol;
    std::uint32_t n = 2;
    std::string fail_set, fail_file;
    double fail_random = 0.0;  // 0 = not requested
    double p = 0.5;
    std::uint64_t seed = 0;
    std::size_t t = 1;
    std::uint64_t table_seed = 0;
    bool table_seed_set = false;
    std::string appendix_mode = "threshold";
    std::int64_t cap = 0;
    std::string out;
};

int run_simulate(const SimulateArgs& a) {
    ExecTrace trace;
    const AppendixMode mode =
        (a.appendix_mode == "explicit") ? AppendixMode::EXPLICIT : AppendixMode::THRESHOLD;
    if (a.protocol == "gp") {
        FailureModel fm = FailureModel::none();
        if (a.fail_random > 0.0)
            fm = FailureModel::random(a.fail_random, a.seed);
        else if (!a.fail_set.empty() || !a.fail_file.empty())
            fm = FailureModel::adversarial(resolve_fail_set(a.fail_set, a.fail_file, 0));
        trace = simulate_gp(a.n, fm);
    } else if (a.protocol == "wu") {
        trace = simulate_wu(a.n, a.p, a.seed, resolve_cap(a.cap));
    } else if (a.protocol == "rgp") {
        trace = simulate_rgp(a.n, resolve_fail_set(a.fail_set, a.fail_file, 0), a.seed, mode);
    } else if (a.protocol == "tablegp") {
        const std::uint64_t tseed = a.table_seed_set ? a.table_seed : a.seed;
        const PermTable table(a.n, a.t, tseed);
        trace = simulate_tablegp(a.n, table, resolve_fail_set(a.fail_set, a.fail_file, 0),
                                 derive_seed(a.seed, 1));
    } else {
        throw std::invalid_argument("protocol must be gp, wu, rgp, or tablegp");
    }
    if (!a.out.empty()) write_text_atomic(a.out, trace_to_json(trace));
    std::cout << "rounds=" << trace.termination_round << " requests=" << trace.total_requests
              << " max_appendix_bits=" << trace.max_appendix_bits
              << (trace.nonterminating ? " nonterminating=true" : "") << "\n";
    return 0;
}

struct TreeArgs {
    std::string kind;
    std::int64_t k = 0;
    std::string pattern;
    std::string tail = "ones";
    double tail_p = 0.5;
    std::uint64_t tail_seed = 0;
    std::int64_t cap = 0;
    std::string out;
};

int run_tree(const TreeArgs& a) {
    const BitStream b = BitStream::parse(a.pattern, make_tail(a.tail, a.tail_p, a.tail_seed));
    const std::int64_t cap = resolve_cap(a.cap);
    bool nonterminating = false;
    std::int64_t height = 0;
    TreeKind kind;
    if (a.kind == "gp") {
        kind = TreeKind::GP;
        height = hgp(a.k, b);
    } else if (a.kind == "wu") {
        kind = TreeKind::WU;
        const Height h = hwu(a.k, b, cap);
        nonterminating = h.is_nonterminating();
        height = nonterminating ? 0 : h.value;
    } else {
        throw std::invalid_argument("kind must be gp or wu");
    }
    if (nonterminating) {
        std::cout << "NONTERMINATING\n";
        if (!a.out.empty()) throw std::invalid_argument("cannot export a nonterminating tree");
        return 0;
    }
    std::cout << "height=" << height << "\n";
    if (!a.out.empty()) write_text_atomic(a.out, export_tree(a.k, b, kind, cap));
    return 0;
}

struct McArgs {
    std::string protocol;
    std::uint32_t n = 3;
    double p = 0.5;
    std::string fail_set, fail_file;
    std::int64_t f = 0;
    double c = 3.5;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::size_t t = 1;
    std::uint64_t table_seed = 0;
    bool table_seed_set = false;
    std::int64_t cap = 0;
    int threads = 0;
    bool serial = false;
    std::string out, hist;
};

int run_montecarlo(const McArgs& a) {
    if (a.trials < 1) throw std::invalid_argument("trials must be >= 1");
    McConfig cfg;
    if (a.protocol == "wu")
        cfg.protocol = McProtocol::WU;
    else if (a.protocol == "gp-random")
        cfg.protocol = McProtocol::GP_RANDOM;
    else if (a.protocol == "rgp")
        cfg.protocol = McProtocol::RGP;
    else if (a.protocol == "tablegp")
        cfg.protocol = McProtocol::TABLEGP;
    else
        throw std::invalid_argument("protocol must be wu, gp-random, rgp, or tablegp");
    cfg.n = a.n;
    cfg.p = a.p;
    cfg.fail_set = resolve_fail_set(a.fail_set, a.fail_file, a.f);
    cfg.c = a.c;
    cfg.trials = a.trials;
    cfg.seed = a.seed;
    cfg.round_cap = resolve_cap(a.cap);
    cfg.table_t = a.t;
    cfg.table_seed = a.table_seed_set ? a.table_seed : a.seed;
    const TailReport rep = montecarlo_tail(cfg, BatchOptions{a.threads, a.serial});
    if (!a.out.empty()) write_text_atomic(a.out, tail_report_to_json(rep));
    if (!a.hist.empty()) write_text_atomic(a.hist, histogram_csv(rep.rounds));
    const bool pass = rep.empirical_violation_rate <= rep.theoretical_bound;
    std::cout << "empirical=" << fmt(rep.empirical_violation_rate)
              << " theoretical=" << fmt(rep.theoretical_bound)
              << " verdict=" << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 1;
}

struct OracleArgs {
    int n_max = 0;
    std::string out;
};

int run_oracle(const OracleArgs& a) {
    const OracleReport rep = exhaustive_oracle(a.n_max);
    if (!a.out.empty()) write_text_atomic(a.out, oracle_report_to_json(rep));
    for (const auto& chk : rep.checks) {
        std::cout << "check " << chk.name << ": " << (chk.pass ? "PASS" : "FAIL")
                  << " (cases=" << chk.cases << ")";
        if (!chk.pass) std::cout << " counterexample: " << chk.counterexample;
        std::cout << "\n";
    }
    std::cout << "oracle: " << (rep.pass ? "PASS" : "FAIL") << "\n";
    return rep.pass ? 0 : 1;
}

struct SafetyArgs {
    std::uint32_t n = 3;
    std::size_t t = 1;
    std::int64_t f = 0;
    std::size_t samples = 1;
    std::uint64_t seed = 0;
    std::uint64_t table_seed = 0;
    bool table_seed_set = false;
    double T = 0.0;
    int threads = 0;
    bool serial = false;
    std::string out;
};

int run_safety(const SafetyArgs& a) {
    const std::uint64_t tseed = a.table_seed_set ? a.table_seed : a.seed;
    const PermTable table(a.n, a.t, tseed);
    double T = a.T;
    if (T <= 0.0) {
        const DerandSettings ds = derand_params(a.n, static_cast<std::int64_t>(a.t));
        T = rgp_runtime_bound(a.n, a.f, ds.c).T;
    }
    const SafetyReport rep =
        safety_estimate(table, a.f, T, a.samples, a.seed, BatchOptions{a.threads, a.serial});
    if (!a.out.empty()) write_text_atomic(a.out, safety_report_to_json(rep));
    std::cout << "worst_fraction=" << fmt(rep.worst_fraction) << " delta=" << fmt(rep.delta)
              << " T=" << fmt(rep.T) << " verdict=" << (rep.pass ? "PASS" : "FAIL") << "\n";
    return rep.pass ? 0 : 1;
}

struct BoundsArgs {
    std::string op;
    std::uint32_t n = 3;
    double p = 0.5;
    double c = 3.5;
    std::int64_t f = 0;
    std::int64_t t = 1;
    std::string variant = "additive";
    double expectation = 0.0;
    std::int64_t n_vars = 1;
    double x = 0.0;
    double delta = 0.0;
    std::string out;
};

int run_bounds(const BoundsArgs& a) {
    nlohmann::ordered_json j;
    if (a.op == "wu") {
        const WuBound b = wu_runtime_bound(a.n, a.p, a.c);
        j["op"] = "wu";
        j["n"] = a.n;
        j["p"] = a.p;
        j["c"] = a.c;
        j["T"] = b.T;
        j["failure_probability"] = b.failure_probability;
    } else if (a.op == "rgp") {
        const RgpBound b = rgp_runtime_bound(a.n, a.f, a.c);
        j["op"] = "rgp";
        j["n"] = a.n;
        j["f"] = a.f;
        j["c"] = a.c;
        j["eps"] = b.eps;
        j["p"] = b.p;
        j["T"] = b.T;
        j["failure_probability"] = b.failure_probability;
    } else if (a.op == "derand") {
        const DerandSettings s = derand_params(a.n, a.t);
        j["op"] = "derand";
        j["n"] = a.n;
        j["t"] = a.t;
        j["delta"] = s.delta;
        j["c"] = s.c;
        j["q"] = s.q;
        j["t0"] = s.t0;
    } else if (a.op == "chernoff") {
        ChernoffVariant v;
        if (a.variant == "additive")
            v = ChernoffVariant::ADDITIVE;
        else if (a.variant == "mult-lower")
            v = ChernoffVariant::MULT_LOWER;
        else if (a.variant == "mult-upper")
            v = ChernoffVariant::MULT_UPPER;
        else if (a.variant == "crossover")
            v = ChernoffVariant::CROSSOVER;
        else
            throw std::invalid_argument("variant must be additive, mult-lower, mult-upper, crossover");
        j["op"] = "chernoff";
        j["variant"] = a.variant;
        j["bound"] = chernoff_bound(a.expectation, a.n_vars, a.x, v);
    } else if (a.op == "geom") {
        j["op"] = "geom";
        j["n_vars"] = a.n_vars;
        j["delta"] = a.delta;
        j["bound"] = geometric_sum_bound(a.n_vars, a.delta);
    } else {
        throw std::invalid_argument("op must be wu, rgp, derand, chernoff, or geom");
    }
    const std::string text = j.dump(2) + "\n";
    std::cout << text;
    if (!a.out.empty()) write_text_atomic(a.out, text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic simulator and analysis toolkit for list-halving rumor spreading"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* cmd_sim = app.add_subcommand("simulate", "Run one protocol execution and record its trace");
    cmd_sim->add_option("--protocol", sim.protocol, "gp | wu | rgp | tablegp")->required();
    cmd_sim->add_option("--n", sim.n, "total processors")->required();
    cmd_sim->add_option("--fail-set", sim.fail_set, "comma-separated failed ids");
    cmd_sim->add_option("--fail-file", sim.fail_file, "file of failed ids, one per line");
    cmd_sim->add_option("--fail-random", sim.fail_random,
                        "survival rate; crash each processor independently at setup");
    cmd_sim->add_option("--p", sim.p, "per-attempt success rate (wu)");
    cmd_sim->add_option("--seed", sim.seed, "seed");
    cmd_sim->add_option("--t", sim.t, "stored-permutation count (tablegp)");
    cmd_sim->add_option("--table-seed", sim.table_seed, "table seed (defaults to --seed)")
        ->each([&sim](const std::string&) { sim.table_seed_set = true; });
    cmd_sim->add_option("--appendix-mode", sim.appendix_mode, "explicit | threshold (rgp)");
    cmd_sim->add_option("--cap", sim.cap, "round cap (wu)");
    cmd_sim->add_option("--out", sim.out, "trace JSON path");

    TreeArgs tree;
    auto* cmd_tree = app.add_subcommand("tree", "Evaluate a configuration-tree height");
    cmd_tree->add_option("--kind", tree.kind, "gp | wu")->required();
    cmd_tree->add_option("--k", tree.k, "uninformed count")->required();
    cmd_tree->add_option("--pattern", tree.pattern, "0/1 prefix of the success pattern");
    cmd_tree->add_option("--tail", tree.tail, "ones | zeros | bern");
    cmd_tree->add_option("--tail-p", tree.tail_p, "Bernoulli tail rate");
    cmd_tree->add_option("--tail-seed", tree.tail_seed, "Bernoulli tail seed");
    cmd_tree->add_option("--cap", tree.cap, "round cap");
    cmd_tree->add_option("--out", tree.out, "DOT output path");

    McArgs mc;
    auto* cmd_mc = app.add_subcommand("montecarlo", "Empirical runtime tail vs the round bound");
    cmd_mc->add_option("--protocol", mc.protocol, "wu | gp-random | rgp | tablegp")->required();
    cmd_mc->add_option("--n", mc.n, "total processors")->required();
    cmd_mc->add_option("--p", mc.p, "success rate (wu, gp-random)");
    cmd_mc->add_option("--fail-set", mc.fail_set, "comma-separated failed ids (rgp, tablegp)");
    cmd_mc->add_option("--fail-file", mc.fail_file, "file of failed ids");
    cmd_mc->add_option("--f", mc.f, "fail the prefix {1..f}");
    cmd_mc->add_option("--c", mc.c, "bound constant");
    cmd_mc->add_option("--trials", mc.trials, "number of trials")->required();
    cmd_mc->add_option("--seed", mc.seed, "master seed");
    cmd_mc->add_option("--t", mc.t, "stored-permutation count (tablegp)");
    cmd_mc->add_option("--table-seed", mc.table_seed, "table seed (defaults to --seed)")
        ->each([&mc](const std::string&) { mc.table_seed_set = true; });
    cmd_mc->add_option("--cap", mc.cap, "round cap (wu)");
    cmd_mc->add_option("--threads", mc.threads, "worker threads (0 = default)");
    cmd_mc->add_flag("--serial", mc.serial, "single-threaded reference path");
    cmd_mc->add_option("--out", mc.out, "report JSON path");
    cmd_mc->add_option("--hist", mc.hist, "histogram CSV path");

    OracleArgs orc;
    auto* cmd_orc = app.add_subcommand("oracle", "Exhaustive small-instance verification");
    cmd_orc->add_option("--n-max", orc.n_max, "largest instance size")->required();
    cmd_orc->add_option("--out", orc.out, "report JSON path");

    SafetyArgs saf;
    auto* cmd_saf = app.add_subcommand("safety", "Table safety estimate against size-f failure sets");
    cmd_saf->add_option("--n", saf.n, "total processors")->required();
    cmd_saf->add_option("--t", saf.t, "stored-permutation count")->required();
    cmd_saf->add_option("--f", saf.f, "failure-set size")->required();
    cmd_saf->add_option("--samples", saf.samples, "failure sets to try")->required();
    cmd_saf->add_option("--seed", saf.seed, "sampling seed");
    cmd_saf->add_option("--table-seed", saf.table_seed, "table seed (defaults to --seed)")
        ->each([&saf](const std::string&) { saf.table_seed_set = true; });
    cmd_saf->add_option("--T", saf.T, "round bound override");
    cmd_saf->add_option("--threads", saf.threads, "worker threads (0 = default)");
    cmd_saf->add_flag("--serial", saf.serial, "single-threaded reference path");
    cmd_saf->add_option("--out", saf.out, "report JSON path");

    BoundsArgs bnd;
    auto* cmd_bnd = app.add_subcommand("bounds", "Evaluate the bound formulas");
    cmd_bnd->add_option("--op", bnd.op, "wu | rgp | derand | chernoff | geom")->required();
    cmd_bnd->add_option("--n", bnd.n, "total processors");
    cmd_bnd->add_option("--p", bnd.p, "success rate");
    cmd_bnd->add_option("--c", bnd.c, "bound constant");
    cmd_bnd->add_option("--f", bnd.f, "failure count");
    cmd_bnd->add_option("--t", bnd.t, "stored-permutation count");
    cmd_bnd->add_option("--variant", bnd.variant,
                        "additive | mult-lower | mult-upper | crossover");
    cmd_bnd->add_option("--expectation", bnd.expectation, "expected value E");
    cmd_bnd->add_option("--n-vars", bnd.n_vars, "variable count");
    cmd_bnd->add_option("--x", bnd.x, "deviation t or eps");
    cmd_bnd->add_option("--delta", bnd.delta, "relative deviation");
    cmd_bnd->add_option("--out", bnd.out, "JSON output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_sim->parsed()) return run_simulate(sim);
        if (cmd_tree->parsed()) return run_tree(tree);
        if (cmd_mc->parsed()) return run_montecarlo(mc);
        if (cmd_orc->parsed()) return run_oracle(orc);
        if (cmd_saf->parsed()) return run_safety(saf);
        if (cmd_bnd->parsed()) return run_bounds(bnd);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
