#include "fbl/online.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace fbl {

std::size_t Buffer::alpha_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(slots.begin(), slots.end(), [](const Packet& p) { return p.is_alpha(); }));
}

AdmitOutcome admit(Buffer& buf, const Packet& p) {
    if (!buf.slots.empty() && !(buf.slots.back().key < p.key)) {
        throw std::invalid_argument("arrival " + to_string(p.key) + " is not after buffered packet " +
                                    to_string(buf.slots.back().key));
    }
    if (!buf.full()) {
        buf.slots.push_back(p);
        return Appended{};
    }
    // Candidates are the buffer plus p; the earliest minimum-value one goes.
    // Values are ordered One < Alpha, so the first 1-value slot wins if any.
    auto victim = std::find_if(buf.slots.begin(), buf.slots.end(),
                               [](const Packet& q) { return !q.is_alpha(); });
    if (victim == buf.slots.end()) {
        if (!p.is_alpha()) return RejectedSelf{};
        victim = buf.slots.begin();
    }
    Packet evicted = *victim;
    buf.slots.erase(victim);
    buf.slots.push_back(p);
    return EvictedOther{evicted};
}

std::vector<Packet> ejectable_set(const Buffer& buf) {
    auto last_alpha = std::find_if(buf.slots.rbegin(), buf.slots.rend(),
                                   [](const Packet& p) { return p.is_alpha(); });
    std::vector<Packet> out;
    if (last_alpha == buf.slots.rend()) return out;
    auto end = last_alpha.base();  // one past the last alpha
    std::copy_if(buf.slots.begin(), end, std::back_inserter(out),
                 [](const Packet& p) { return !p.is_alpha(); });
    return out;
}

DeliverResult deliver_on(Buffer& buf, const Rat& alpha, const Rat& beta) {
    DeliverResult result;
    if (buf.empty()) return result;
    if (!buf.slots.front().is_alpha()) {
        auto ejectable = ejectable_set(buf);
        const Rat alpha_mass = Rat(static_cast<std::int64_t>(buf.alpha_count())) * alpha;
        const Rat ejectable_mass = beta * Rat(static_cast<std::int64_t>(ejectable.size()));
        if (!ejectable.empty() && alpha_mass >= ejectable_mass) {
            std::erase_if(buf.slots, [&](const Packet& p) {
                return std::find(ejectable.begin(), ejectable.end(), p) != ejectable.end();
            });
            result.preempted = std::move(ejectable);
        }
    }
    result.sent = buf.slots.front();
    buf.slots.erase(buf.slots.begin());
    return result;
}

std::optional<Packet> deliver_greedy(Buffer& buf) {
    if (buf.empty()) return std::nullopt;
    Packet head = buf.slots.front();
    buf.slots.erase(buf.slots.begin());
    return head;
}

std::string Policy::describe() const {
    return kind == Kind::On ? "on(" + beta.str() + ")" : "greedy";
}

std::string to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Admitted: return "admitted";
        case EventKind::Evicted: return "evicted";
        case EventKind::Rejected: return "rejected";
        case EventKind::Preempted: return "preempted";
        case EventKind::Sent: return "sent";
        case EventKind::Idle: return "idle";
    }
    return "?";
}

Step RunTrace::horizon() const noexcept { return events.empty() ? 0 : events.back().step; }

std::optional<Packet> RunTrace::sent_at(Step step) const {
    for (const StepEvent& e : events) {
        if (e.step == step && e.kind == EventKind::Sent) return e.packet;
        if (e.step > step) break;
    }
    return std::nullopt;
}

RunTrace run(const Policy& policy, const Instance& inst) {
    require_valid(inst);
    RunTrace trace;
    trace.policy = policy;
    Buffer buf{inst.capacity, {}};
    std::int64_t ones = 0;
    std::int64_t alphas = 0;

    std::size_t next = 0;
    for (Step t = 1; next < inst.arrivals.size() || !buf.empty(); ++t) {
        for (; next < inst.arrivals.size() && inst.arrivals[next].key.step == t; ++next) {
            const Packet& p = inst.arrivals[next];
            AdmitOutcome outcome = admit(buf, p);
            if (auto* ev = std::get_if<EvictedOther>(&outcome)) {
                trace.events.push_back({t, EventKind::Evicted, ev->victim});
            }
            trace.events.push_back({t, std::holds_alternative<RejectedSelf>(outcome) ? EventKind::Rejected
                                                                                    : EventKind::Admitted,
                                    p});
        }

        std::optional<Packet> sent;
        if (policy.kind == Policy::Kind::On) {
            DeliverResult r = deliver_on(buf, inst.alpha, policy.beta);
            for (const Packet& q : r.preempted) trace.events.push_back({t, EventKind::Preempted, q});
            sent = r.sent;
        } else {
            sent = deliver_greedy(buf);
        }

        if (sent) {
            trace.events.push_back({t, EventKind::Sent, sent});
            trace.sent.push_back(*sent);
            (sent->is_alpha() ? alphas : ones) += 1;
        } else {
            trace.events.push_back({t, EventKind::Idle, std::nullopt});
        }
    }
    trace.totals = Rat(ones) + Rat(alphas) * inst.alpha;
    return trace;
}

std::string format_trace(const RunTrace& trace) {
    std::ostringstream out;
    for (const StepEvent& e : trace.events) {
        out << e.step << " " << to_string(e.kind) << " ";
        if (e.packet) {
            out << e.packet->id.value;
        } else {
            out << "-";
        }
        out << "\n";
    }
    out << "total " << trace.totals.str() << "\n";
    return out.str();
}

}  // namespace fbl
