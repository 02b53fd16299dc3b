#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbl/rational.hpp"

namespace fbl {

using Step = std::int64_t;

struct PacketId {
    std::uint32_t value = 0;
    friend auto operator<=>(const PacketId&, const PacketId&) = default;
};

/// Release position of a packet. Packets released in the same step are
/// ordered by `seq`, so (step, seq) is a strict total order over an instance.
struct ArrivalKey {
    Step step = 1;
    std::int64_t seq = 0;
    friend auto operator<=>(const ArrivalKey&, const ArrivalKey&) = default;
};

enum class PacketClass { One, Alpha };

struct Packet {
    PacketId id;
    ArrivalKey key;
    PacketClass klass = PacketClass::One;

    bool is_alpha() const noexcept { return klass == PacketClass::Alpha; }
    friend bool operator==(const Packet&, const Packet&) = default;
};

/// Problem input: buffer capacity B, the high value alpha and the arrivals,
/// sorted ascending by key.
struct Instance {
    std::int64_t capacity = 1;
    Rat alpha{2};
    std::vector<Packet> arrivals;

    std::size_t size() const noexcept { return arrivals.size(); }
    bool empty() const noexcept { return arrivals.empty(); }

    /// Position of the packet in `arrivals`, or nullopt for a foreign id.
    std::optional<std::size_t> index_of(PacketId id) const noexcept;

    /// Last release step, 0 for an empty instance.
    Step last_step() const noexcept { return arrivals.empty() ? 0 : arrivals.back().key.step; }
};

struct Violation {
    std::string field;  // "alpha", "capacity", or "packet <id>"
    std::string message;
};

struct ValidationVerdict {
    std::vector<Violation> violations;
    bool ok() const noexcept { return violations.empty(); }
};

ValidationVerdict validate_instance(const Instance& inst);

/// Thrown when an instance that must be valid is not.
class InvalidInstance : public std::invalid_argument {
public:
    explicit InvalidInstance(const ValidationVerdict& verdict);
};

/// Throws InvalidInstance unless validate_instance(inst) is ok.
void require_valid(const Instance& inst);

/// 1 for a One packet, alpha for an Alpha packet. Throws
/// std::invalid_argument if `p` is not part of `inst`.
Rat packet_value(const Instance& inst, const Packet& p);

/// Exact sum of values. Throws std::invalid_argument on a foreign packet.
Rat total_value(const Instance& inst, std::span<const Packet> packets);

/// Value of a packet by class only; callers must already know it belongs.
inline Rat class_value(const Instance& inst, PacketClass klass) {
    return klass == PacketClass::Alpha ? inst.alpha : Rat(1);
}

std::string to_string(PacketClass klass);
std::string to_string(const ArrivalKey& key);

/// Builds an instance from (step, class) pairs, assigning seq numbers in
/// order within each step and ids 0..n-1.
Instance make_instance(std::int64_t capacity, Rat alpha,
                       const std::vector<std::pair<Step, PacketClass>>& arrivals);

/// Re-sorts arrivals by key, renumbers seq within each step from 0 and
/// reassigns ids 0..n-1 in key order.
Instance normalized(Instance inst);

}  // namespace fbl
