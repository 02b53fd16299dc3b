#pragma once

#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fbl/model.hpp"
#include "fbl/online.hpp"
#include "fbl/theory.hpp"

namespace fbl::analysis {

// ---------------------------------------------------------------------------
// Relaxed optimum
// ---------------------------------------------------------------------------

struct RoptStep {
    Step step = 1;
    std::vector<Packet> accepted;
    std::optional<Packet> sent;
    std::int64_t occupancy = 0;  // after this step's arrivals, before the send
};

/// Execution of the relaxed optimum: it buffers every packet of the optimal
/// set and, each step, sends the packet ON sends if it still holds it,
/// otherwise its earliest buffered packet. FIFO order is not enforced.
struct RoptTrace {
    std::vector<RoptStep> steps;
    std::map<PacketId, Step> send_time;

    std::optional<Step> time_of(PacketId id) const;
    std::optional<Packet> sent_at(Step step) const;
};

/// Throws std::invalid_argument when `opt_set` is not feasible for `inst`.
RoptTrace run_ropt(const Instance& inst, std::span<const Packet> opt_set, const RunTrace& on);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

enum class Severity { Hard, Diagnostic };

struct CheckResult {
    std::string name;
    Severity severity = Severity::Hard;
    bool passed = true;
    std::int64_t failures = 0;
    std::string detail;         // first failure, empty when passed
    std::optional<Step> step;   // step of the first failure
};

/// Counts behind the strict bound B*beta/(alpha+beta) on O-packets that sit
/// in ON's buffer after the relaxed optimum already sent them.
struct Lemma2Stats {
    Rat bound;
    std::int64_t steps_checked = 0;
    std::int64_t max_alpha_count = 0;  // alpha-value O-packets only
    std::int64_t max_all_count = 0;    // every O-packet
    std::int64_t alpha_violations = 0;
    std::int64_t all_violations = 0;
};

struct LemmaReport {
    std::deque<CheckResult> checks;  // deque: references from check() stay valid
    std::optional<Lemma2Stats> lemma2;
    std::string reproducer;  // instance text, set when a hard check fails

    bool hard_ok() const;
    const CheckResult* find(const std::string& name) const;
    CheckResult& check(const std::string& name, Severity severity = Severity::Hard);

    /// Combines per-instance reports. Associative and commutative: counts
    /// add up, verdicts are conjoined, the smallest failure detail is kept.
    void merge(const LemmaReport& other);
};

std::string format_report(const LemmaReport& report);

/// (a) relaxed-optimum occupancy never exceeds B, (b) it sends every
/// O-packet, (c) every O-packet ON sends at step t was sent by it at or
/// before t.
LemmaReport verify_ropt(const Instance& inst, std::span<const Packet> opt_set, const RunTrace& on,
                        const RoptTrace& ropt);

/// Trace-level invariants of an ON run: capacity, FIFO delivery, one fate
/// per packet, alpha packets never preempted, alpha evictions only from a
/// full all-alpha buffer followed by B alpha sends, and preemption payback.
LemmaReport verify_on_trace(const Instance& inst, const RunTrace& on);

// ---------------------------------------------------------------------------
// Chains and charging
// ---------------------------------------------------------------------------

enum class ChainStatus { Open, Closed };

/// Steps c1 < ... < ck where ON sends a non-O packet at c1 and, for i < k,
/// the relaxed optimum's packet at c_i is ON's packet at c_{i+1}.
struct Chain {
    std::vector<Step> steps;
    ChainStatus status = ChainStatus::Open;
    std::optional<Packet> closing_charge;

    Step head() const { return steps.front(); }
};

/// Walks back from the step the relaxed optimum sent `p` until a step where
/// ON sends a non-O packet (or nothing). Requires p in O, p in ON's buffer at
/// `t` and already sent by the relaxed optimum before `t`; throws
/// std::logic_error otherwise.
Chain build_chain(const Instance& inst, const RunTrace& on, const RoptTrace& ropt,
                  std::span<const Packet> opt_set, const Packet& p, Step t);

enum class ChargeCase {
    Case2,             // O-packet sent by ON, charged at ON's send step
    EvictAlpha,        // evicted alpha O-packet, lump over [d, l-1]
    PreemptOpenChain,  // preempted 1, closes an open chain of a preempting packet
    PreemptInterval,   // preempted 1, spread over [d, d+h-1]
    Evict1Chain,       // evicted 1 already sent by the relaxed optimum
    Reject1Chain,      // 1 rejected on arrival, closes the earliest open chain
};

std::string to_string(ChargeCase c);

struct StepInterval {
    Step first = 0;
    Step last = 0;
    bool contains(Step s) const { return first <= s && s <= last; }
};

struct RoptCharge {
    Packet packet;
    ChargeCase tag = ChargeCase::Case2;
    Rat value;
    Step at = 0;  // charge step; first step of the interval for interval charges
    std::optional<StepInterval> interval;
};

/// A charging rule whose prerequisites did not hold on this trace.
struct LedgerError {
    Packet packet;
    Step step = 0;
    std::string rule;
    std::string message;
};

struct ChargeLedger {
    std::map<Step, Rat> on_charges;
    std::vector<RoptCharge> ropt_charges;
    std::vector<Chain> chains;  // one per head step, longest form seen
    std::vector<LedgerError> errors;
    std::int64_t interval_fallthroughs = 0;  // interval charges with chainless O preempting packets
};

ChargeLedger build_ledger(const Instance& inst, std::span<const Packet> opt_set, const RunTrace& on,
                          const RoptTrace& ropt);

LemmaReport verify_ledger(const ChargeLedger& ledger, const Instance& inst, std::span<const Packet> opt_set,
                          const RunTrace& on, const RoptTrace& ropt);

/// Ledger in the trace text style: one charge per line, then chains and totals.
std::string format_ledger(const ChargeLedger& ledger);

// ---------------------------------------------------------------------------
// Ratios and the full pipeline
// ---------------------------------------------------------------------------

struct RatioReport {
    Policy policy;
    Rat policy_value;
    Rat opt_value;
    std::optional<Rat> ratio;  // nullopt stands for an unbounded ratio
    std::optional<theory::BoundBreakdown> bound;  // present for ON policies
    bool within_bound = true;
};

/// Largest instance for which ratio reports cross-check the DP optimum
/// against brute force.
inline constexpr std::size_t kCrossCheckLimit = 14;

/// OPT/policy with OPT from dp_opt, cross-checked by brute force for small
/// instances (std::logic_error on disagreement). 0/0 is reported as 1.
RatioReport policy_ratio_report(const Policy& policy, const Instance& inst);
RatioReport ratio_report(const Instance& inst, const Rat& beta);

/// Optimal set containing every alpha packet ON sends (which always exists at
/// full optimal value); among such sets the one keeping the most ON-sent
/// packets, then the lexicographically greatest by key.
std::vector<Packet> canonical_opt_set(const Instance& inst, const RunTrace& on);

struct Verification {
    RunTrace on;
    std::vector<Packet> opt_set;
    RoptTrace ropt;
    ChargeLedger ledger;
    RatioReport ratio;
    LemmaReport report;
};

/// Runs ON(beta), the canonical optimum, the relaxed optimum, the ledger and
/// every check, including "ratio" (OPT/ON within the competitive bound).
Verification verify_instance(const Instance& inst, const Rat& beta);

}  // namespace fbl::analysis
