#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fbl/analysis.hpp"
#include "fbl/generators.hpp"
#include "fbl/theory.hpp"

namespace fbl::experiments {

/// One fuzz instance. Ratio and bound travel as exact rationals, with
/// decimal copies (6 places) for reading only.
struct ExperimentRow {
    std::uint64_t index = 0;
    std::uint64_t seed = 0;
    std::size_t packets = 0;
    std::int64_t capacity = 0;
    Rat alpha;
    Rat beta;
    std::string policy;
    Rat policy_value;
    Rat opt_value;         // dynamic program
    Rat brute_value;       // exhaustive oracle
    std::optional<Rat> ratio;
    Rat bound;
    bool within_bound = true;
    bool lemma0_holds = true;  // optimum containing ON's alpha sends is optimal
    std::string lemma_flags;   // "ok" or ';'-joined failing checks, "warn:lemma2" for the diagnostic
    bool hard_ok = true;
};

inline constexpr const char* kCsvHeader =
    "index,seed,packets,capacity,alpha,beta,policy,policy_value,opt_value,brute_value,"
    "ratio,ratio_decimal,bound,bound_decimal,within_bound,lemma0,lemma_flags";

std::string csv_line(const ExperimentRow& row);
std::string format_csv(const std::vector<ExperimentRow>& rows);

struct FuzzSummary {
    std::vector<ExperimentRow> rows;  // ordered by index
    analysis::LemmaReport report;     // merged over all instances
    std::optional<Rat> max_ratio;     // largest finite ratio
    std::uint64_t max_ratio_index = 0;
    std::uint64_t unbounded = 0;      // policy sent nothing while OPT > 0
    std::uint64_t oracle_disagreements = 0;
    std::uint64_t lemma0_failures = 0;
    std::uint64_t bound_violations = 0;
    std::uint64_t hard_failures = 0;  // instances with any failing hard check

    bool ok() const { return oracle_disagreements == 0 && bound_violations == 0 && hard_failures == 0 && unbounded == 0; }
};

/// Runs the full verification pipeline on `count` instances seeded by
/// gen::corpus_seed(cfg.seed, i). Rows are independent; `threads` workers
/// only change wall time, never output.
FuzzSummary run_fuzz(const gen::GenConfig& cfg, std::uint64_t count, const Rat& beta, unsigned threads = 0);

/// Pipeline for a single instance (row index/seed left to the caller).
ExperimentRow evaluate(const Instance& inst, const Rat& beta, analysis::LemmaReport* report = nullptr);

std::string format_summary(const FuzzSummary& summary);

struct SweepRow {
    Rat alpha;
    Rat beta;
    theory::BoundBreakdown breakdown;
    bool minimizer = false;  // beta minimizes the max-over-alpha bound
};

/// Rows for every (alpha, beta) pair, beta-major. The minimizing beta is the
/// first in grid order on ties. Throws std::invalid_argument on empty grids.
std::vector<SweepRow> sweep_beta(const std::vector<Rat>& alphas, const std::vector<Rat>& betas);

inline constexpr const char* kSweepHeader =
    "alpha,beta,first_term,second_term,bound,bound_decimal,minimizer";

std::string format_sweep(const std::vector<SweepRow>& rows);

}  // namespace fbl::experiments
