#include "fbl/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fbl/analysis.hpp"
#include "fbl/experiments.hpp"
#include "fbl/generators.hpp"
#include "fbl/instance_io.hpp"
#include "fbl/offline.hpp"
#include "fbl/online.hpp"
#include "fbl/theory.hpp"

namespace fbl::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Rat parse_rat(const std::string& text, const std::string& what) {
    try {
        return Rat::parse(text);
    } catch (const std::exception&) {
        throw UsageError(what + ": cannot parse '" + text + "' as a rational");
    }
}

std::vector<Rat> parse_rats(const std::vector<std::string>& texts, const std::string& what) {
    std::vector<Rat> out;
    for (const std::string& t : texts) out.push_back(parse_rat(t, what));
    return out;
}

std::uint64_t default_seed() {
    const char* env = std::getenv("FBL_SEED");
    if (!env || !*env) return 1;
    try {
        std::size_t used = 0;
        const std::uint64_t seed = std::stoull(env, &used, 10);
        if (used != std::string(env).size()) throw std::invalid_argument("trailing text");
        return seed;
    } catch (const std::exception&) {
        throw UsageError(std::string("FBL_SEED: not an unsigned integer: '") + env + "'");
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

// Writes to `path`, or to `out` when the path is empty or "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
    } else {
        write_file(path, text);
    }
}

std::string ratio_text(const std::optional<Rat>& r) {
    return r ? r->str() + " (" + r->decimal(6) + ")" : "inf";
}

// Generator flags shared by fuzz, search and gen random.
struct GenFlags {
    std::int64_t min_capacity = 1;
    std::int64_t max_capacity = 5;
    std::int64_t horizon = 12;
    std::vector<std::string> alphas{"3/2", "2", "5", "10"};
    std::int64_t max_burst = 4;
    std::string alpha_weight = "1/2";
    std::size_t max_packets = 14;

    void attach(CLI::App* app) {
        app->add_option("--min-capacity", min_capacity, "Smallest buffer size")->capture_default_str();
        app->add_option("--max-capacity", max_capacity, "Largest buffer size")->capture_default_str();
        app->add_option("--horizon", horizon, "Last step that may carry arrivals")->capture_default_str();
        app->add_option("--alphas", alphas, "Comma-separated alpha choices")->delimiter(',')->capture_default_str();
        app->add_option("--max-burst", max_burst, "Arrivals per step drawn from [0, max]")->capture_default_str();
        app->add_option("--alpha-weight", alpha_weight, "Probability of an alpha packet")->capture_default_str();
        app->add_option("--max-packets", max_packets, "Packet cap per instance")->capture_default_str();
    }

    gen::GenConfig config(std::uint64_t seed) const {
        gen::GenConfig cfg;
        cfg.min_capacity = min_capacity;
        cfg.max_capacity = max_capacity;
        cfg.max_horizon = horizon;
        cfg.alphas = parse_rats(alphas, "--alphas");
        cfg.max_burst = max_burst;
        cfg.alpha_weight = parse_rat(alpha_weight, "--alpha-weight");
        cfg.max_packets = max_packets;
        cfg.seed = seed;
        try {
            gen::validate(cfg);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        return cfg;
    }
};

Policy make_policy(const std::string& name, const std::string& beta) {
    if (name == "on") return Policy::on(parse_rat(beta, "--beta"));
    if (name == "greedy") return Policy::greedy();
    throw UsageError("--policy must be 'on' or 'greedy'");
}

int cmd_simulate(const std::string& file, const std::string& policy, const std::string& beta,
                 const std::string& trace_out, std::ostream& out) {
    const Policy p = make_policy(policy, beta);
    const RunTrace trace = run(p, load_instance(file));
    if (trace_out.empty()) {
        out << format_trace(trace);
    } else {
        write_file(trace_out, format_trace(trace));
        out << "total " << trace.totals.str() << "\n";
    }
    return kExitOk;
}

int cmd_compare(const std::string& file, const std::string& beta, std::ostream& out) {
    const Instance inst = load_instance(file);
    const Rat b = parse_rat(beta, "--beta");
    for (const Policy& p : {Policy::on(b), Policy::greedy()}) {
        const analysis::RatioReport r = analysis::policy_ratio_report(p, inst);
        out << p.describe() << " value " << r.policy_value.str() << " ratio " << ratio_text(r.ratio) << "\n";
    }
    out << "opt value " << dp_opt(inst).str() << "\n";
    return kExitOk;
}

int cmd_opt(const std::string& file, std::ostream& out) {
    const Instance inst = load_instance(file);
    const std::optional<OptResult> best = opt_containing(inst, {});
    out << "value " << best->value.str() << "\n";
    out << "subset";
    for (const Packet& p : best->subset) out << " " << p.id.value;
    out << "\n";
    for (const auto& [id, step] : best->schedule) out << "send " << id.value << " at " << step << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& file, const std::string& beta, const std::string& ledger_out, std::ostream& out) {
    const Instance inst = load_instance(file);
    const analysis::Verification v = analysis::verify_instance(inst, parse_rat(beta, "--beta"));
    out << "on " << v.ratio.policy_value.str() << " opt " << v.ratio.opt_value.str() << " ratio "
        << ratio_text(v.ratio.ratio) << " bound " << v.ratio.bound->bound.str() << " ("
        << v.ratio.bound->bound.decimal(6) << ")\n";
    out << analysis::format_report(v.report);
    if (!ledger_out.empty()) write_file(ledger_out, analysis::format_ledger(v.ledger));
    return v.report.hard_ok() ? kExitOk : kExitCheckFailed;
}

int cmd_bound(const std::string& alpha, const std::string& beta, std::ostream& out) {
    const Rat a = parse_rat(alpha, "--alpha");
    const Rat b = parse_rat(beta, "--beta");
    theory::BoundBreakdown br;
    try {
        br = theory::competitive_bound(a, b);
    } catch (const std::domain_error& e) {
        throw UsageError(e.what());
    }
    out << "first_term " << br.first_term.str() << " (" << br.first_term.decimal(6) << ")\n";
    out << "second_term " << br.second_term.str() << " (" << br.second_term.decimal(6) << ")\n";
    out << "bound " << br.bound.str() << " (" << br.bound.decimal(6) << ")\n";
    out << "stable " << (theory::stability_condition(a, b) ? "yes" : "no") << "\n";
    return kExitOk;
}

int cmd_optimal_beta(const std::string& tol, std::ostream& out) {
    const Rat t = parse_rat(tol, "--tol");
    if (t.sign() <= 0) throw UsageError("--tol must be positive");
    const Rat beta = theory::optimal_beta(t);
    const Rat ratio = (Rat(1) + beta) / beta;
    out << "beta " << beta.str() << " (" << beta.decimal(6) << ")\n";
    out << "ratio " << ratio.str() << " (" << ratio.decimal(6) << ")\n";
    return kExitOk;
}

int cmd_sweep(const std::vector<std::string>& alphas, const std::vector<std::string>& betas,
              const std::string& csv_out, std::ostream& out) {
    const std::vector<Rat> a = parse_rats(alphas, "--alphas");
    const std::vector<Rat> b = parse_rats(betas, "--betas");
    std::vector<experiments::SweepRow> rows;
    try {
        rows = experiments::sweep_beta(a, b);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    emit(csv_out, experiments::format_sweep(rows), out);
    return kExitOk;
}

int cmd_fuzz(const GenFlags& flags, std::uint64_t count, std::uint64_t seed, const std::string& beta,
             const std::string& csv_out, unsigned threads, std::ostream& out, std::ostream& err) {
    if (count == 0) throw UsageError("--count must be positive");
    const Rat b = parse_rat(beta, "--beta");
    if (b.sign() <= 0) throw UsageError("--beta must be positive");
    const experiments::FuzzSummary s = experiments::run_fuzz(flags.config(seed), count, b, threads);
    const bool csv_on_stdout = csv_out.empty() || csv_out == "-";
    emit(csv_out, experiments::format_csv(s.rows), out);
    (csv_on_stdout ? err : out) << experiments::format_summary(s);
    return s.ok() ? kExitOk : kExitCheckFailed;
}

int cmd_search(const GenFlags& flags, const std::string& policy, const std::string& beta, std::uint64_t budget,
               std::uint64_t seed, const std::string& inst_out, std::ostream& out, std::ostream& err) {
    if (budget == 0) throw UsageError("--budget must be positive");
    const Policy p = make_policy(policy, beta);
    const gen::SearchResult best = gen::adversarial_search(p, flags.config(seed), budget);
    const analysis::RatioReport& r = best.report;

    std::ostringstream report;
    report << "policy " << p.describe() << "\n";
    report << "evaluations " << best.evaluations << "\n";
    report << "policy value " << r.policy_value.str() << "\n";
    report << "opt value " << r.opt_value.str() << "\n";
    report << "ratio " << ratio_text(r.ratio) << "\n";
    if (r.bound) report << "bound " << r.bound->bound.str() << " (" << r.bound->bound.decimal(6) << ")\n";

    emit(inst_out, format_instance(best.instance), out);
    out << report.str();
    if (!r.within_bound) {
        const std::string alert = "red-alert-" + std::to_string(seed) + ".inst";
        write_file(alert, "# ratio exceeds the competitive bound\n" + format_instance(best.instance));
        err << "red alert: ratio above bound, reproducer written to " << alert << "\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}

int cmd_gen(const std::string& kind, const std::string& alpha, const GenFlags& flags, std::uint64_t seed,
            const std::string& inst_out, std::ostream& out) {
    Instance inst;
    if (kind == "example" || kind == "blocking") {
        const Rat a = parse_rat(alpha, "--alpha");
        if (a <= Rat(1)) throw UsageError("--alpha must exceed 1");
        inst = kind == "example" ? gen::paper_example(a) : gen::greedy_blocking(a);
    } else if (kind == "random") {
        inst = gen::random_instance(flags.config(seed));
    } else {
        throw UsageError("gen kind must be example, blocking or random");
    }
    emit(inst_out, format_instance(inst), out);
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-value FIFO packet buffering: simulation, optimum and analysis checks", "fbl"};
    app.require_subcommand(1);

    std::string file, policy = "on", beta = kDefaultBeta.str(), path, ledger_out;
    std::string alpha = "2", tol = "1/1000000", kind;
    std::vector<std::string> alphas, betas;
    std::uint64_t count = 10000, budget = 10000, seed = 0;
    unsigned threads = 0;
    GenFlags flags;

    auto* simulate = app.add_subcommand("simulate", "Run a policy and print its trace");
    simulate->add_option("instance", file, "Instance file")->required();
    simulate->add_option("--policy", policy, "on or greedy")->capture_default_str();
    simulate->add_option("--beta", beta, "Preemption threshold")->capture_default_str();
    simulate->add_option("--trace", path, "Write the trace here and print only the total");

    auto* compare = app.add_subcommand("compare", "ON, greedy and the optimum side by side");
    compare->add_option("instance", file, "Instance file")->required();
    compare->add_option("--beta", beta, "Preemption threshold")->capture_default_str();

    auto* opt = app.add_subcommand("opt", "Offline optimum value and subset");
    opt->add_option("instance", file, "Instance file")->required();

    auto* verify = app.add_subcommand("verify", "Run every analysis check on one instance");
    verify->add_option("instance", file, "Instance file")->required();
    verify->add_option("--beta", beta, "Preemption threshold")->capture_default_str();
    verify->add_option("--emit-ledger", ledger_out, "Write the charge ledger here");

    auto* bound = app.add_subcommand("bound", "Competitive bound for (alpha, beta)");
    bound->add_option("--alpha", alpha, "Alpha value")->required();
    bound->add_option("--beta", beta, "Preemption threshold")->required();

    auto* optimal = app.add_subcommand("optimal-beta", "Threshold minimizing the bound over all alpha");
    optimal->add_option("--tol", tol, "Bisection width")->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "Bound table over alpha and beta grids");
    sweep->add_option("--alphas", alphas, "Comma-separated alpha values")->delimiter(',')->required();
    sweep->add_option("--betas", betas, "Comma-separated beta values")->delimiter(',')->required();
    sweep->add_option("--csv", path, "Write the table here instead of stdout");

    auto* fuzz = app.add_subcommand("fuzz", "Verify ON on a seeded random corpus");
    fuzz->add_option("--count", count, "Number of instances")->capture_default_str();
    fuzz->add_option("--seed", seed, "Corpus seed (default FBL_SEED or 1)");
    fuzz->add_option("--beta", beta, "Preemption threshold")->capture_default_str();
    fuzz->add_option("--csv", path, "Write rows here; summary then goes to stdout");
    fuzz->add_option("--threads", threads, "Worker threads (0: hardware)")->capture_default_str();
    flags.attach(fuzz);

    auto* search = app.add_subcommand("search", "Hill-climb for instances with a large ratio");
    search->add_option("--policy", policy, "on or greedy")->capture_default_str();
    search->add_option("--beta", beta, "Preemption threshold")->capture_default_str();
    search->add_option("--budget", budget, "Instances to evaluate")->capture_default_str();
    search->add_option("--seed", seed, "Search seed (default FBL_SEED or 1)");
    search->add_option("--out", path, "Write the best instance here");
    flags.attach(search);

    auto* gen = app.add_subcommand("gen", "Write an instance file");
    gen->add_option("kind", kind, "example, blocking or random")->required();
    gen->add_option("--alpha", alpha, "Alpha for example and blocking")->capture_default_str();
    gen->add_option("--seed", seed, "Seed for random (default FBL_SEED or 1)");
    gen->add_option("--out", path, "Write here instead of stdout");
    flags.attach(gen);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help("", CLI::AppFormatMode::Normal);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        auto seed_given = [&](CLI::App* sub) { return sub->count("--seed") > 0; };
        if (simulate->parsed()) return cmd_simulate(file, policy, beta, path, out);
        if (compare->parsed()) return cmd_compare(file, beta, out);
        if (opt->parsed()) return cmd_opt(file, out);
        if (verify->parsed()) return cmd_verify(file, beta, ledger_out, out);
        if (bound->parsed()) return cmd_bound(alpha, beta, out);
        if (optimal->parsed()) return cmd_optimal_beta(tol, out);
        if (sweep->parsed()) return cmd_sweep(alphas, betas, path, out);
        if (fuzz->parsed()) {
            return cmd_fuzz(flags, count, seed_given(fuzz) ? seed : default_seed(), beta, path, threads, out, err);
        }
        if (search->parsed()) {
            return cmd_search(flags, policy, beta, budget, seed_given(search) ? seed : default_seed(), path, out,
                              err);
        }
        if (gen->parsed()) return cmd_gen(kind, alpha, flags, seed_given(gen) ? seed : default_seed(), path, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace fbl::cli
