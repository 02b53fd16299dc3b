#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fbl/model.hpp"

namespace fbl {

/// FIFO buffer: slots are kept strictly ascending by arrival key and never
/// exceed `capacity` between operations.
struct Buffer {
    std::int64_t capacity = 1;
    std::vector<Packet> slots;

    bool empty() const noexcept { return slots.empty(); }
    bool full() const noexcept { return static_cast<std::int64_t>(slots.size()) >= capacity; }
    std::size_t alpha_count() const noexcept;
};

struct Appended {};
struct EvictedOther {
    Packet victim;
};
struct RejectedSelf {};
using AdmitOutcome = std::variant<Appended, EvictedOther, RejectedSelf>;

/// Greedy admission shared by ON and the greedy baseline. When the buffer is
/// full, the minimum-value packet among the buffered ones and `p` is dropped,
/// ties going against the earliest-released packet. Since `p` is released
/// last it never loses a tie, so a 1-value arrival is rejected only when the
/// buffer holds nothing but alpha packets.
///
/// Throws std::invalid_argument if `p` is not released after every buffered packet.
AdmitOutcome admit(Buffer& buf, const Packet& p);

/// Buffered 1-value packets released before at least one buffered alpha packet.
std::vector<Packet> ejectable_set(const Buffer& buf);

struct DeliverResult {
    std::optional<Packet> sent;
    std::vector<Packet> preempted;
};

/// Preempt-then-send stage of ON(beta). With a 1-value head, every ejectable
/// packet is preempted when the buffered alpha mass is at least beta times
/// their count; then the head is sent.
DeliverResult deliver_on(Buffer& buf, const Rat& alpha, const Rat& beta);

/// Sends the head, if any.
std::optional<Packet> deliver_greedy(Buffer& buf);

struct Policy {
    enum class Kind { On, Greedy };
    Kind kind = Kind::On;
    Rat beta{821, 250};

    static Policy on(Rat beta) { return Policy{Kind::On, beta}; }
    static Policy greedy() { return Policy{Kind::Greedy, Rat(0)}; }

    std::string describe() const;
    friend bool operator==(const Policy&, const Policy&) = default;
};

/// Default preemption threshold 3.284.
inline const Rat kDefaultBeta{821, 250};

enum class EventKind { Admitted, Evicted, Rejected, Preempted, Sent, Idle };

std::string to_string(EventKind kind);

struct StepEvent {
    Step step = 1;
    EventKind kind = EventKind::Idle;
    std::optional<Packet> packet;
    friend bool operator==(const StepEvent&, const StepEvent&) = default;
};

/// Full record of one run. Events are in execution order: within a step,
/// admissions (with their evictions or rejections) in seq order, then
/// preemptions, then exactly one Sent or Idle event.
struct RunTrace {
    Policy policy;
    std::vector<StepEvent> events;
    std::vector<Packet> sent;
    Rat totals;

    /// Number of simulated steps (last step carrying a Sent/Idle event).
    Step horizon() const noexcept;

    /// Packet sent at `step`, nullopt when idle or outside the horizon.
    std::optional<Packet> sent_at(Step step) const;
};

/// Runs `policy` on a valid instance until the last arrival has been
/// processed and the buffer has drained. Throws InvalidInstance otherwise.
RunTrace run(const Policy& policy, const Instance& inst);

/// Line-oriented export: "<step> <kind> <packet-id>" per event ("-" for an
/// idle step), then "total <num>/<den>".
std::string format_trace(const RunTrace& trace);

}  // namespace fbl
