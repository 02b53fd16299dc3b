#include "fbl/analysis.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fbl/instance_io.hpp"
#include "fbl/offline.hpp"

namespace fbl::analysis {

namespace {

// Index-based view of one instance, its optimal set and the ON run.
struct Context {
    const Instance& inst;
    std::map<PacketId, std::size_t> index;
    std::vector<bool> in_opt;
    std::vector<std::optional<std::size_t>> on_send;  // by step, slot 0 unused
    std::vector<std::optional<Step>> admitted_at;
    std::vector<std::optional<Step>> left_at;         // sent, evicted or preempted

    Context(const Instance& i, std::span<const Packet> opt_set, const RunTrace& on) : inst(i) {
        for (std::size_t k = 0; k < inst.size(); ++k) index[inst.arrivals[k].id] = k;
        in_opt.assign(inst.size(), false);
        for (const Packet& p : opt_set) in_opt[idx(p)] = true;
        on_send.assign(static_cast<std::size_t>(on.horizon()) + 2, std::nullopt);
        admitted_at.assign(inst.size(), std::nullopt);
        left_at.assign(inst.size(), std::nullopt);
        for (const StepEvent& e : on.events) {
            if (!e.packet) continue;
            const std::size_t k = idx(*e.packet);
            switch (e.kind) {
                case EventKind::Admitted: admitted_at[k] = e.step; break;
                case EventKind::Sent:
                    on_send[static_cast<std::size_t>(e.step)] = k;
                    left_at[k] = e.step;
                    break;
                case EventKind::Evicted:
                case EventKind::Preempted: left_at[k] = e.step; break;
                default: break;
            }
        }
    }

    std::size_t idx(const Packet& p) const {
        auto it = index.find(p.id);
        if (it == index.end() || !(inst.arrivals[it->second] == p)) {
            throw std::invalid_argument("packet " + std::to_string(p.id.value) + " is not part of the instance");
        }
        return it->second;
    }
    const Packet& packet(std::size_t k) const { return inst.arrivals[k]; }

    std::optional<std::size_t> on_sent_at(Step s) const {
        if (s < 1 || static_cast<std::size_t>(s) >= on_send.size()) return std::nullopt;
        return on_send[static_cast<std::size_t>(s)];
    }
    bool on_buffered_at(std::size_t k, Step t) const {
        return admitted_at[k] && *admitted_at[k] <= t && left_at[k] && *left_at[k] >= t;
    }
};

// Relaxed-optimum send times and per-step sends, by packet index.
struct RoptView {
    std::vector<std::optional<Step>> time;
    std::map<Step, std::size_t> send;

    RoptView(const Context& ctx, const RoptTrace& ropt) : time(ctx.inst.size()) {
        for (const auto& [id, step] : ropt.send_time) {
            auto it = ctx.index.find(id);
            if (it == ctx.index.end()) throw std::invalid_argument("relaxed optimum sent a foreign packet");
            time[it->second] = step;
            send[step] = it->second;
        }
    }
    bool sent_before(std::size_t k, Step t) const { return time[k] && *time[k] < t; }
};

std::string pkt(const Packet& p) {
    return "packet " + std::to_string(p.id.value) + " (" + to_string(p.key) + ", " + to_string(p.klass) + ")";
}

void fail(CheckResult& c, Step step, std::string detail) {
    if (c.passed) {
        c.detail = std::move(detail);
        c.step = step;
    }
    c.passed = false;
    ++c.failures;
}

// Follows the chain backwards from the step the relaxed optimum sent packet k.
std::vector<Step> chain_steps(const Context& ctx, const RoptView& rv, std::size_t k) {
    std::vector<Step> steps{*rv.time[k]};
    for (;;) {
        auto on_pkt = ctx.on_sent_at(steps.front());
        if (!on_pkt || !ctx.in_opt[*on_pkt]) break;
        auto prev = rv.time[*on_pkt];
        if (!prev || *prev >= steps.front()) {
            throw std::logic_error("chain walk reached an O-packet the relaxed optimum did not send earlier");
        }
        steps.insert(steps.begin(), *prev);
    }
    return steps;
}

}  // namespace

// ---------------------------------------------------------------------------
// Relaxed optimum
// ---------------------------------------------------------------------------

std::optional<Step> RoptTrace::time_of(PacketId id) const {
    auto it = send_time.find(id);
    if (it == send_time.end()) return std::nullopt;
    return it->second;
}

std::optional<Packet> RoptTrace::sent_at(Step step) const {
    if (step < 1 || static_cast<std::size_t>(step) > steps.size()) return std::nullopt;
    return steps[static_cast<std::size_t>(step) - 1].sent;
}

RoptTrace run_ropt(const Instance& inst, std::span<const Packet> opt_set, const RunTrace& on) {
    if (!feasible(inst, opt_set).feasible) throw std::invalid_argument("optimal set is not feasible");
    const Context ctx(inst, opt_set, on);

    RoptTrace trace;
    std::vector<std::size_t> buffer;  // ascending by key
    std::size_t next = 0;
    for (Step t = 1; next < inst.size() || !buffer.empty() || t <= on.horizon(); ++t) {
        RoptStep row;
        row.step = t;
        for (; next < inst.size() && inst.arrivals[next].key.step == t; ++next) {
            if (!ctx.in_opt[next]) continue;
            buffer.push_back(next);
            row.accepted.push_back(inst.arrivals[next]);
        }
        row.occupancy = static_cast<std::int64_t>(buffer.size());

        auto chosen = buffer.begin();
        if (auto on_pkt = ctx.on_sent_at(t); on_pkt && ctx.in_opt[*on_pkt]) {
            auto it = std::find(buffer.begin(), buffer.end(), *on_pkt);
            if (it != buffer.end()) chosen = it;
        }
        if (chosen != buffer.end()) {
            row.sent = inst.arrivals[*chosen];
            trace.send_time[row.sent->id] = t;
            buffer.erase(chosen);
        }
        trace.steps.push_back(std::move(row));
    }
    return trace;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

bool LemmaReport::hard_ok() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.severity != Severity::Hard || c.passed; });
}

const CheckResult* LemmaReport::find(const std::string& name) const {
    auto it = std::find_if(checks.begin(), checks.end(), [&](const CheckResult& c) { return c.name == name; });
    return it == checks.end() ? nullptr : &*it;
}

CheckResult& LemmaReport::check(const std::string& name, Severity severity) {
    auto it = std::find_if(checks.begin(), checks.end(), [&](const CheckResult& c) { return c.name == name; });
    if (it != checks.end()) return *it;
    checks.push_back(CheckResult{name, severity, true, 0, {}, std::nullopt});
    return checks.back();
}

void LemmaReport::merge(const LemmaReport& other) {
    for (const CheckResult& theirs : other.checks) {
        CheckResult& mine = check(theirs.name, theirs.severity);
        if (!theirs.passed) {
            const bool take = mine.passed || theirs.detail < mine.detail;
            if (take) {
                mine.detail = theirs.detail;
                mine.step = theirs.step;
            }
            mine.passed = false;
        }
        mine.failures += theirs.failures;
    }
    std::sort(checks.begin(), checks.end(),
              [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    if (other.lemma2) {
        if (!lemma2) {
            lemma2 = other.lemma2;
        } else {
            lemma2->steps_checked += other.lemma2->steps_checked;
            lemma2->max_alpha_count = std::max(lemma2->max_alpha_count, other.lemma2->max_alpha_count);
            lemma2->max_all_count = std::max(lemma2->max_all_count, other.lemma2->max_all_count);
            lemma2->alpha_violations += other.lemma2->alpha_violations;
            lemma2->all_violations += other.lemma2->all_violations;
            lemma2->bound = min(lemma2->bound, other.lemma2->bound);
        }
    }
    if (reproducer.empty() || (!other.reproducer.empty() && other.reproducer < reproducer)) {
        reproducer = other.reproducer;
    }
}

std::string format_report(const LemmaReport& report) {
    std::ostringstream out;
    out << std::left << std::setw(24) << "check" << std::setw(12) << "kind" << std::setw(8) << "status"
        << std::setw(10) << "failures" << "detail\n";
    for (const CheckResult& c : report.checks) {
        const char* status = c.passed ? "pass" : (c.severity == Severity::Hard ? "FAIL" : "warn");
        out << std::left << std::setw(24) << c.name << std::setw(12)
            << (c.severity == Severity::Hard ? "hard" : "diagnostic") << std::setw(8) << status << std::setw(10)
            << c.failures;
        if (!c.passed) {
            if (c.step) out << "step " << *c.step << ": ";
            out << c.detail;
        }
        out << "\n";
    }
    if (report.lemma2) {
        const Lemma2Stats& s = *report.lemma2;
        out << "lemma2: bound " << s.bound.str() << " (" << s.bound.decimal(4) << "), steps " << s.steps_checked
            << ", max alpha count " << s.max_alpha_count << ", max O count " << s.max_all_count
            << ", alpha violations " << s.alpha_violations << ", O violations " << s.all_violations << "\n";
    }
    if (!report.reproducer.empty()) out << "reproducer:\n" << report.reproducer;
    return out.str();
}

LemmaReport verify_ropt(const Instance& inst, std::span<const Packet> opt_set, const RunTrace& on,
                        const RoptTrace& ropt) {
    const Context ctx(inst, opt_set, on);
    LemmaReport report;
    CheckResult& capacity = report.check("ropt_capacity");
    CheckResult& sends_all = report.check("ropt_sends_all");
    CheckResult& remark0 = report.check("remark0");

    for (const RoptStep& row : ropt.steps) {
        if (row.occupancy > inst.capacity) {
            fail(capacity, row.step, "occupancy " + std::to_string(row.occupancy) + " exceeds B");
        }
    }
    for (const Packet& p : opt_set) {
        if (!ropt.time_of(p.id)) fail(sends_all, p.key.step, pkt(p) + " never sent");
    }
    for (const StepEvent& e : on.events) {
        if (e.kind != EventKind::Sent || !ctx.in_opt[ctx.idx(*e.packet)]) continue;
        auto t = ropt.time_of(e.packet->id);
        if (!t || *t > e.step) {
            fail(remark0, e.step, "ON sends " + pkt(*e.packet) + " before the relaxed optimum does");
        }
    }
    return report;
}

LemmaReport verify_on_trace(const Instance& inst, const RunTrace& on) {
    LemmaReport report;
    CheckResult& capacity = report.check("on_capacity");
    CheckResult& fifo = report.check("on_fifo");
    CheckResult& conservation = report.check("on_conservation");
    CheckResult& no_alpha_preempt = report.check("on_no_alpha_preempt");
    CheckResult& alpha_eviction = report.check("on_alpha_eviction");
    CheckResult& payback = report.check("on_preempt_payback");

    std::map<PacketId, int> fates;
    std::vector<Packet> buffer;
    std::optional<ArrivalKey> last_sent;
    std::optional<Step> pending_alpha_eviction;

    for (std::size_t i = 0; i < on.events.size(); ++i) {
        const StepEvent& e = on.events[i];
        auto remove = [&](const Packet& p) {
            auto it = std::find(buffer.begin(), buffer.end(), p);
            if (it == buffer.end()) {
                fail(conservation, e.step, pkt(p) + " left the buffer without being buffered");
                return;
            }
            buffer.erase(it);
        };
        switch (e.kind) {
            case EventKind::Admitted:
                buffer.push_back(*e.packet);
                if (pending_alpha_eviction) {
                    const bool all_alpha = std::all_of(buffer.begin(), buffer.end(),
                                                       [](const Packet& p) { return p.is_alpha(); });
                    if (static_cast<std::int64_t>(buffer.size()) != inst.capacity || !all_alpha) {
                        fail(alpha_eviction, e.step, "alpha evicted from a buffer that is not B alpha packets");
                    }
                    for (Step s = e.step; s < e.step + inst.capacity; ++s) {
                        auto sent = on.sent_at(s);
                        if (!sent || !sent->is_alpha()) {
                            fail(alpha_eviction, s, "no alpha send within B steps of an alpha eviction");
                            break;
                        }
                    }
                    pending_alpha_eviction.reset();
                }
                break;
            case EventKind::Evicted:
                ++fates[e.packet->id];
                remove(*e.packet);
                if (e.packet->is_alpha()) pending_alpha_eviction = e.step;
                break;
            case EventKind::Rejected: ++fates[e.packet->id]; break;
            case EventKind::Preempted: {
                ++fates[e.packet->id];
                if (e.packet->is_alpha()) fail(no_alpha_preempt, e.step, pkt(*e.packet) + " preempted");
                const bool first_of_step = i == 0 || on.events[i - 1].kind != EventKind::Preempted ||
                                           on.events[i - 1].step != e.step;
                if (first_of_step) {
                    std::int64_t count = 0;
                    for (std::size_t j = i; j < on.events.size() && on.events[j].kind == EventKind::Preempted &&
                                            on.events[j].step == e.step;
                         ++j) {
                        ++count;
                    }
                    std::int64_t alphas = 0;
                    for (const Packet& p : buffer) alphas += p.is_alpha() ? 1 : 0;
                    if (Rat(alphas) * inst.alpha < on.policy.beta * Rat(count)) {
                        fail(payback, e.step, "preempted mass exceeds alpha mass / beta");
                    }
                }
                remove(*e.packet);
                break;
            }
            case EventKind::Sent:
                ++fates[e.packet->id];
                if (buffer.empty() || !(buffer.front() == *e.packet)) {
                    fail(fifo, e.step, pkt(*e.packet) + " sent but not at the head");
                }
                if (last_sent && !(*last_sent < e.packet->key)) fail(fifo, e.step, "sends not ascending by key");
                last_sent = e.packet->key;
                remove(*e.packet);
                break;
            case EventKind::Idle:
                if (!buffer.empty()) fail(fifo, e.step, "idle with a nonempty buffer");
                break;
        }
        if (static_cast<std::int64_t>(buffer.size()) > inst.capacity) {
            fail(capacity, e.step, "occupancy " + std::to_string(buffer.size()) + " exceeds B");
        }
    }
    for (const Packet& p : inst.arrivals) {
        auto it = fates.find(p.id);
        if (it == fates.end() || it->second != 1) fail(conservation, p.key.step, pkt(p) + " not classified exactly once");
    }
    if (!buffer.empty()) fail(conservation, on.horizon(), "buffer not drained at the end of the run");
    return report;
}

// ---------------------------------------------------------------------------
// Chains and charging
// ---------------------------------------------------------------------------

Chain build_chain(const Instance& inst, const RunTrace& on, const RoptTrace& ropt, std::span<const Packet> opt_set,
                  const Packet& p, Step t) {
    const Context ctx(inst, opt_set, on);
    const RoptView rv(ctx, ropt);
    const std::size_t k = ctx.idx(p);
    if (!ctx.in_opt[k]) throw std::logic_error("build_chain: " + pkt(p) + " is not an O-packet");
    if (!ctx.on_buffered_at(k, t)) throw std::logic_error("build_chain: " + pkt(p) + " is not in ON's buffer");
    if (!rv.sent_before(k, t)) throw std::logic_error("build_chain: " + pkt(p) + " not yet sent by the relaxed optimum");
    return Chain{chain_steps(ctx, rv, k), ChainStatus::Open, std::nullopt};
}

std::string to_string(ChargeCase c) {
    switch (c) {
        case ChargeCase::Case2: return "C2";
        case ChargeCase::EvictAlpha: return "C3-evict-alpha";
        case ChargeCase::PreemptOpenChain: return "C3-preempt-openchain";
        case ChargeCase::PreemptInterval: return "C3-preempt-interval";
        case ChargeCase::Evict1Chain: return "C3-evict1-chain";
        case ChargeCase::Reject1Chain: return "C3-reject1-chain";
    }
    return "?";
}

ChargeLedger build_ledger(const Instance& inst, std::span<const Packet> opt_set, const RunTrace& on,
                          const RoptTrace& ropt) {
    const Context ctx(inst, opt_set, on);
    const RoptView rv(ctx, ropt);
    ChargeLedger ledger;
    std::map<Step, Chain> chains;  // by head step

    auto value_of = [&](std::size_t k) { return class_value(inst, ctx.packet(k).klass); };
    auto record_chain = [&](std::vector<Step> steps) -> Chain& {
        Chain& c = chains[steps.front()];
        if (steps.size() > c.steps.size()) c.steps = std::move(steps);
        return c;
    };
    auto error = [&](std::size_t k, Step step, std::string rule, std::string message) {
        ledger.errors.push_back(LedgerError{ctx.packet(k), step, std::move(rule), std::move(message)});
    };
    // Earliest-released candidate whose chain is still open; closes it.
    auto close_first_open = [&](const std::vector<std::size_t>& candidates, std::size_t charged) -> std::optional<Step> {
        for (std::size_t q : candidates) {
            Chain& c = record_chain(chain_steps(ctx, rv, q));
            if (c.status == ChainStatus::Open) {
                c.status = ChainStatus::Closed;
                c.closing_charge = ctx.packet(charged);
                return c.head();
            }
        }
        return std::nullopt;
    };

    std::vector<std::size_t> buffer;  // ON's buffer, replayed
    auto erase = [&](std::size_t k) { std::erase(buffer, k); };

    for (const StepEvent& e : on.events) {
        if (!e.packet) continue;
        const std::size_t k = ctx.idx(*e.packet);
        const Step d = e.step;
        const bool opt = ctx.in_opt[k];
        const Packet& p = ctx.packet(k);

        switch (e.kind) {
            case EventKind::Admitted: buffer.push_back(k); break;

            case EventKind::Sent:
                // Case 1 and Case 2.
                ledger.on_charges[d] += value_of(k);
                if (opt) ledger.ropt_charges.push_back({p, ChargeCase::Case2, value_of(k), d, std::nullopt});
                erase(k);
                break;

            case EventKind::Evicted:
                if (opt && p.is_alpha()) {
                    Step l = d + 1;
                    while (auto s = ctx.on_sent_at(l)) {
                        if (!ctx.packet(*s).is_alpha()) break;
                        ++l;
                    }
                    ledger.ropt_charges.push_back(
                        {p, ChargeCase::EvictAlpha, value_of(k), d, StepInterval{d, l - 1}});
                } else if (opt) {
                    if (!rv.sent_before(k, d)) {
                        error(k, d, "evict1", "evicted 1-value O-packet not yet sent by the relaxed optimum");
                    } else {
                        Chain& c = record_chain(chain_steps(ctx, rv, k));
                        if (c.status == ChainStatus::Closed) {
                            error(k, d, "evict1", "chain headed at step " + std::to_string(c.head()) +
                                                      " is already closed");
                        }
                        c.status = ChainStatus::Closed;
                        c.closing_charge = p;
                        ledger.ropt_charges.push_back({p, ChargeCase::Evict1Chain, value_of(k), c.head(), std::nullopt});
                    }
                }
                erase(k);
                break;

            case EventKind::Rejected:
                if (opt) {
                    std::vector<std::size_t> candidates;
                    for (std::size_t q : buffer) {
                        if (ctx.packet(q).is_alpha() && ctx.in_opt[q] && rv.sent_before(q, d)) candidates.push_back(q);
                    }
                    if (auto head = close_first_open(candidates, k)) {
                        ledger.ropt_charges.push_back({p, ChargeCase::Reject1Chain, value_of(k), *head, std::nullopt});
                    } else {
                        error(k, d, "reject1", "no open chain among buffered alpha O-packets");
                    }
                }
                break;

            case EventKind::Preempted:
                if (opt) {
                    std::vector<std::size_t> preempting;
                    std::vector<std::size_t> candidates;
                    for (std::size_t q : buffer) {
                        if (!ctx.packet(q).is_alpha()) continue;
                        preempting.push_back(q);
                        if (ctx.in_opt[q] && rv.sent_before(q, d)) candidates.push_back(q);
                    }
                    if (auto head = close_first_open(candidates, k)) {
                        ledger.ropt_charges.push_back(
                            {p, ChargeCase::PreemptOpenChain, value_of(k), *head, std::nullopt});
                    } else {
                        const auto h = static_cast<Step>(preempting.size());
                        ledger.ropt_charges.push_back(
                            {p, ChargeCase::PreemptInterval, value_of(k), d, StepInterval{d, d + h - 1}});
                        const bool chainless = std::any_of(preempting.begin(), preempting.end(), [&](std::size_t q) {
                            return ctx.in_opt[q] && !rv.sent_before(q, d);
                        });
                        if (chainless) ++ledger.interval_fallthroughs;
                    }
                }
                erase(k);
                break;

            case EventKind::Idle: break;
        }
    }
    for (auto& [head, chain] : chains) ledger.chains.push_back(std::move(chain));
    return ledger;
}

LemmaReport verify_ledger(const ChargeLedger& ledger, const Instance& inst, std::span<const Packet> opt_set,
                          const RunTrace& on, const RoptTrace& ropt) {
    const Context ctx(inst, opt_set, on);
    const RoptView rv(ctx, ropt);
    LemmaReport report;
    CheckResult& conservation = report.check("conservation");
    CheckResult& exclusive = report.check("interval_exclusive");
    CheckResult& alpha_sends = report.check("interval_alpha_sends");
    CheckResult& disjoint = report.check("chain_disjoint");
    CheckResult& heads = report.check("chain_heads");
    CheckResult& rules = report.check("ledger_rules");

    // Conservation.
    std::vector<int> records(inst.size(), 0);
    Rat ropt_sum;
    for (const RoptCharge& c : ledger.ropt_charges) {
        const std::size_t k = ctx.idx(c.packet);
        if (!ctx.in_opt[k]) fail(conservation, c.at, pkt(c.packet) + " charged to ROPT but not in O");
        ++records[k];
        ropt_sum += c.value;
    }
    for (std::size_t k = 0; k < inst.size(); ++k) {
        if (ctx.in_opt[k] && records[k] != 1) {
            fail(conservation, ctx.packet(k).key.step,
                 pkt(ctx.packet(k)) + " has " + std::to_string(records[k]) + " ROPT charges");
        }
    }
    if (ropt_sum != total_value(inst, opt_set)) {
        fail(conservation, 0, "ROPT charges " + ropt_sum.str() + " != value(O) " + total_value(inst, opt_set).str());
    }
    Rat on_sum;
    for (const auto& [step, v] : ledger.on_charges) on_sum += v;
    if (on_sum != on.totals || ledger.on_charges.size() != on.sent.size()) {
        fail(conservation, 0, "ON charges " + on_sum.str() + " != ON total " + on.totals.str());
    }

    // Interval exclusivity and alpha-only sends inside Case-3 intervals.
    std::set<Step> evict_steps;
    std::set<Step> preempt_steps;
    for (const RoptCharge& c : ledger.ropt_charges) {
        if (!c.interval) continue;
        for (Step s = c.interval->first; s <= c.interval->last; ++s) {
            auto sent = ctx.on_sent_at(s);
            if (!sent || !ctx.packet(*sent).is_alpha()) {
                fail(alpha_sends, s, to_string(c.tag) + " interval of " + pkt(c.packet) + " has no alpha send");
            }
            (c.tag == ChargeCase::EvictAlpha ? evict_steps : preempt_steps).insert(s);
        }
    }
    for (Step s : evict_steps) {
        if (preempt_steps.count(s)) {
            fail(exclusive, s, "step carries both an evicted-alpha and a preempted-1 interval charge");
        }
    }
    // Weaker form: no alpha O-packet is evicted while preempting packets of
    // an interval charge are still being sent.
    CheckResult& eviction_free = report.check("interval_eviction_free", Severity::Diagnostic);
    for (const RoptCharge& p : ledger.ropt_charges) {
        if (p.tag != ChargeCase::PreemptInterval || !p.interval) continue;
        for (const RoptCharge& e : ledger.ropt_charges) {
            if (e.tag == ChargeCase::EvictAlpha && p.interval->contains(e.at)) {
                fail(eviction_free, e.at, pkt(e.packet) + " evicted inside the preempt interval of " + pkt(p.packet));
            }
        }
    }

    // Chains: well-formed, linked, pairwise step-disjoint.
    std::map<Step, Step> owner;  // step -> head of the chain using it
    for (const Chain& c : ledger.chains) {
        if (c.steps.empty()) {
            fail(disjoint, 0, "empty chain");
            continue;
        }
        if (!std::is_sorted(c.steps.begin(), c.steps.end()) ||
            std::adjacent_find(c.steps.begin(), c.steps.end()) != c.steps.end()) {
            fail(disjoint, c.head(), "chain steps not strictly ascending");
        }
        auto head_pkt = ctx.on_sent_at(c.head());
        if (head_pkt && ctx.in_opt[*head_pkt]) fail(disjoint, c.head(), "ON sends an O-packet at the chain head");
        for (std::size_t i = 0; i + 1 < c.steps.size(); ++i) {
            auto r = rv.send.find(c.steps[i]);
            auto o = ctx.on_sent_at(c.steps[i + 1]);
            if (r == rv.send.end() || !o || r->second != *o) fail(disjoint, c.steps[i], "chain link broken");
        }
        for (Step s : c.steps) {
            auto [it, inserted] = owner.emplace(s, c.head());
            if (!inserted && it->second != c.head()) {
                fail(disjoint, s, "step shared by chains headed at " + std::to_string(it->second) + " and " +
                                      std::to_string(c.head()));
            }
        }
    }

    // Chain heads: closed at most once, head sends a 1-value non-O packet.
    std::map<Step, int> closings;
    for (const RoptCharge& c : ledger.ropt_charges) {
        if (c.tag == ChargeCase::PreemptOpenChain || c.tag == ChargeCase::Evict1Chain ||
            c.tag == ChargeCase::Reject1Chain) {
            if (++closings[c.at] > 1) fail(heads, c.at, "chain closed more than once");
            auto sent = ctx.on_sent_at(c.at);
            if (!sent || ctx.in_opt[*sent] || ctx.packet(*sent).is_alpha()) {
                fail(heads, c.at, "closed chain head does not send a 1-value non-O packet");
            }
        }
    }

    for (const LedgerError& e : ledger.errors) fail(rules, e.step, e.rule + ": " + pkt(e.packet) + ": " + e.message);

    // lemma2 diagnostic, sampled after every step's delivery.
    CheckResult& lemma2 = report.check("lemma2", Severity::Diagnostic);
    Lemma2Stats stats;
    stats.bound = Rat(inst.capacity) * on.policy.beta / (inst.alpha + on.policy.beta);
    std::vector<std::size_t> buffer;
    for (std::size_t i = 0; i < on.events.size(); ++i) {
        const StepEvent& e = on.events[i];
        if (e.packet) {
            const std::size_t k = ctx.idx(*e.packet);
            if (e.kind == EventKind::Admitted) {
                buffer.push_back(k);
            } else if (e.kind != EventKind::Rejected) {
                std::erase(buffer, k);
            }
        }
        if (e.kind != EventKind::Sent && e.kind != EventKind::Idle) continue;
        std::int64_t alpha_count = 0;
        std::int64_t all_count = 0;
        for (std::size_t k : buffer) {
            if (!ctx.in_opt[k] || !rv.time[k] || *rv.time[k] > e.step) continue;
            ++all_count;
            if (ctx.packet(k).is_alpha()) ++alpha_count;
        }
        ++stats.steps_checked;
        stats.max_alpha_count = std::max(stats.max_alpha_count, alpha_count);
        stats.max_all_count = std::max(stats.max_all_count, all_count);
        if (Rat(alpha_count) >= stats.bound) {
            ++stats.alpha_violations;
            fail(lemma2, e.step, std::to_string(alpha_count) + " alpha O-packets already sent by ROPT, bound " +
                                     stats.bound.str());
        }
        if (Rat(all_count) >= stats.bound) ++stats.all_violations;
    }
    report.lemma2 = stats;
    return report;
}

std::string format_ledger(const ChargeLedger& ledger) {
    std::ostringstream out;
    for (const auto& [step, v] : ledger.on_charges) out << step << " on " << v.str() << "\n";
    Rat ropt_total;
    for (const RoptCharge& c : ledger.ropt_charges) {
        if (c.interval) {
            out << c.interval->first << ".." << c.interval->last;
        } else {
            out << c.at;
        }
        out << " " << to_string(c.tag) << " " << c.packet.id.value << " " << c.value.str() << "\n";
        ropt_total += c.value;
    }
    for (const Chain& c : ledger.chains) {
        out << "chain ";
        for (std::size_t i = 0; i < c.steps.size(); ++i) out << (i ? "," : "") << c.steps[i];
        out << " " << (c.status == ChainStatus::Closed ? "closed" : "open");
        if (c.closing_charge) out << " " << c.closing_charge->id.value;
        out << "\n";
    }
    for (const LedgerError& e : ledger.errors) {
        out << "error " << e.step << " " << e.rule << " " << e.packet.id.value << " " << e.message << "\n";
    }
    Rat on_total;
    for (const auto& [step, v] : ledger.on_charges) on_total += v;
    out << "total-on " << on_total.str() << "\n";
    out << "total-ropt " << ropt_total.str() << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Ratios and the full pipeline
// ---------------------------------------------------------------------------

RatioReport policy_ratio_report(const Policy& policy, const Instance& inst) {
    require_valid(inst);
    RatioReport r;
    r.policy = policy;
    r.policy_value = run(policy, inst).totals;
    r.opt_value = dp_opt(inst);
    if (inst.size() <= kCrossCheckLimit) {
        const Rat brute = brute_force_opt(inst).value;
        if (brute != r.opt_value) {
            throw std::logic_error("oracle disagreement: dp " + r.opt_value.str() + " vs brute force " + brute.str());
        }
    }
    if (r.policy_value.is_zero()) {
        r.ratio = r.opt_value.is_zero() ? std::optional<Rat>(Rat(1)) : std::nullopt;
    } else {
        r.ratio = r.opt_value / r.policy_value;
    }
    if (policy.kind == Policy::Kind::On) {
        r.bound = theory::competitive_bound(inst.alpha, policy.beta);
        r.within_bound = r.ratio && *r.ratio <= r.bound->bound;
    }
    return r;
}

RatioReport ratio_report(const Instance& inst, const Rat& beta) { return policy_ratio_report(Policy::on(beta), inst); }

std::vector<Packet> canonical_opt_set(const Instance& inst, const RunTrace& on) {
    std::vector<Packet> alpha_sent;
    std::copy_if(on.sent.begin(), on.sent.end(), std::back_inserter(alpha_sent),
                 [](const Packet& p) { return p.is_alpha(); });
    auto result = opt_containing(inst, alpha_sent, on.sent);
    if (!result) throw std::logic_error("no feasible set contains ON's alpha sends");
    return result->subset;
}

Verification verify_instance(const Instance& inst, const Rat& beta) {
    require_valid(inst);
    Verification v;
    v.on = run(Policy::on(beta), inst);
    v.opt_set = canonical_opt_set(inst, v.on);
    v.ropt = run_ropt(inst, v.opt_set, v.on);
    v.ledger = build_ledger(inst, v.opt_set, v.on, v.ropt);
    v.ratio = ratio_report(inst, beta);

    v.report = verify_on_trace(inst, v.on);
    v.report.merge(verify_ropt(inst, v.opt_set, v.on, v.ropt));
    v.report.merge(verify_ledger(v.ledger, inst, v.opt_set, v.on, v.ropt));

    CheckResult& lemma0 = v.report.check("lemma0");
    if (total_value(inst, v.opt_set) != v.ratio.opt_value) {
        fail(lemma0, 0, "optimum containing ON's alpha sends has value " + total_value(inst, v.opt_set).str() +
                            ", OPT is " + v.ratio.opt_value.str());
    }
    CheckResult& ratio = v.report.check("ratio");
    if (!v.ratio.within_bound) {
        fail(ratio, 0, "OPT/ON " + (v.ratio.ratio ? v.ratio.ratio->str() : std::string("inf")) + " exceeds bound " +
                           v.ratio.bound->bound.str());
    }
    std::sort(v.report.checks.begin(), v.report.checks.end(),
              [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    if (!v.report.hard_ok()) v.report.reproducer = format_instance(inst);
    return v;
}

}  // namespace fbl::analysis
