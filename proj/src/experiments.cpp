#include "fbl/experiments.hpp"

#include <atomic>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fbl/offline.hpp"

namespace fbl::experiments {

std::string csv_line(const ExperimentRow& r) {
    std::ostringstream out;
    out << r.index << "," << r.seed << "," << r.packets << "," << r.capacity << "," << r.alpha.str() << ","
        << r.beta.str() << "," << r.policy << "," << r.policy_value.str() << "," << r.opt_value.str() << ","
        << r.brute_value.str() << ",";
    if (r.ratio) {
        out << r.ratio->str() << "," << r.ratio->decimal(6);
    } else {
        out << "inf,inf";
    }
    out << "," << r.bound.str() << "," << r.bound.decimal(6) << "," << (r.within_bound ? 1 : 0) << ","
        << (r.lemma0_holds ? 1 : 0) << "," << r.lemma_flags;
    return out.str();
}

std::string format_csv(const std::vector<ExperimentRow>& rows) {
    std::string out = std::string(kCsvHeader) + "\n";
    for (const ExperimentRow& r : rows) out += csv_line(r) + "\n";
    return out;
}

ExperimentRow evaluate(const Instance& inst, const Rat& beta, analysis::LemmaReport* report) {
    ExperimentRow row;
    row.packets = inst.size();
    row.capacity = inst.capacity;
    row.alpha = inst.alpha;
    row.beta = beta;
    row.policy = Policy::on(beta).describe();

    const analysis::Verification v = analysis::verify_instance(inst, beta);
    row.policy_value = v.ratio.policy_value;
    row.opt_value = v.ratio.opt_value;
    row.brute_value = inst.size() <= kBruteForceLimit ? brute_force_opt(inst).value : v.ratio.opt_value;
    row.ratio = v.ratio.ratio;
    row.bound = v.ratio.bound->bound;
    row.within_bound = v.ratio.within_bound;
    row.lemma0_holds = v.report.find("lemma0") && v.report.find("lemma0")->passed;
    row.hard_ok = v.report.hard_ok();

    std::string flags;
    for (const analysis::CheckResult& c : v.report.checks) {
        if (c.passed) continue;
        if (!flags.empty()) flags += ";";
        flags += (c.severity == analysis::Severity::Hard ? "" : "warn:") + c.name;
    }
    row.lemma_flags = flags.empty() ? "ok" : flags;
    if (report) *report = v.report;
    return row;
}

FuzzSummary run_fuzz(const gen::GenConfig& cfg, std::uint64_t count, const Rat& beta, unsigned threads) {
    gen::validate(cfg);
    FuzzSummary summary;
    summary.rows.resize(count);
    std::vector<analysis::LemmaReport> reports(count);

    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t i = next++; i < count; i = next++) {
            gen::GenConfig c = cfg;
            c.seed = gen::corpus_seed(cfg.seed, i);
            const Instance inst = gen::random_instance(c);
            ExperimentRow row = evaluate(inst, beta, &reports[i]);
            row.index = i;
            row.seed = c.seed;
            reports[i].reproducer.clear();
            summary.rows[i] = std::move(row);
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    for (std::uint64_t i = 0; i < count; ++i) {
        const ExperimentRow& row = summary.rows[i];
        summary.report.merge(reports[i]);
        if (row.opt_value != row.brute_value) ++summary.oracle_disagreements;
        if (!row.lemma0_holds) ++summary.lemma0_failures;
        if (!row.within_bound) ++summary.bound_violations;
        if (!row.hard_ok) ++summary.hard_failures;
        if (!row.ratio) {
            ++summary.unbounded;
        } else if (!summary.max_ratio || *row.ratio > *summary.max_ratio) {
            summary.max_ratio = row.ratio;
            summary.max_ratio_index = i;
        }
    }
    return summary;
}

std::string format_summary(const FuzzSummary& s) {
    std::ostringstream out;
    out << "instances " << s.rows.size() << "\n";
    if (s.max_ratio) {
        out << "max ratio " << s.max_ratio->str() << " (" << s.max_ratio->decimal(6) << ") at index "
            << s.max_ratio_index << " seed " << s.rows[s.max_ratio_index].seed << "\n";
    }
    out << "bound violations " << s.bound_violations << "\n";
    out << "oracle disagreements " << s.oracle_disagreements << "\n";
    out << "lemma0 failures " << s.lemma0_failures << "\n";
    out << "instances with hard-check failures " << s.hard_failures << "\n";
    out << analysis::format_report(s.report);
    return out.str();
}

std::vector<SweepRow> sweep_beta(const std::vector<Rat>& alphas, const std::vector<Rat>& betas) {
    if (alphas.empty() || betas.empty()) throw std::invalid_argument("sweep grids must be nonempty");
    std::vector<SweepRow> rows;
    std::optional<Rat> best;
    std::size_t best_beta = 0;
    for (std::size_t b = 0; b < betas.size(); ++b) {
        Rat worst;
        for (const Rat& a : alphas) {
            SweepRow row{a, betas[b], theory::competitive_bound(a, betas[b]), false};
            worst = max(worst, row.breakdown.bound);
            rows.push_back(row);
        }
        if (!best || worst < *best) {
            best = worst;
            best_beta = b;
        }
    }
    for (SweepRow& row : rows) row.minimizer = row.beta == betas[best_beta];
    return rows;
}

std::string format_sweep(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << kSweepHeader << "\n";
    for (const SweepRow& r : rows) {
        out << r.alpha.str() << "," << r.beta.str() << "," << r.breakdown.first_term.str() << ","
            << r.breakdown.second_term.str() << "," << r.breakdown.bound.str() << ","
            << r.breakdown.bound.decimal(6) << "," << (r.minimizer ? 1 : 0) << "\n";
    }
    return out.str();
}

}  // namespace fbl::experiments
