#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fbl/model.hpp"

namespace fbl {

/// An offline solution: the kept packets (in key order) and the step each
/// one is sent in.
struct OptResult {
    Rat value;
    std::vector<Packet> subset;
    std::map<PacketId, Step> schedule;
};

struct Feasibility {
    bool feasible = false;
    std::map<PacketId, Step> schedule;  // filled only when feasible
};

/// Decides whether `subset` can all be sent: arrivals of a step are admitted
/// first, then the earliest buffered packet is sent. Occupancy above B at any
/// arrival instant makes the set infeasible. Sending the head every step is
/// complete for feasibility, because delaying a send never lowers later
/// occupancy. Throws std::invalid_argument for packets outside `inst`.
Feasibility feasible(const Instance& inst, std::span<const Packet> subset);

/// Largest instance accepted by brute_force_opt.
inline constexpr std::size_t kBruteForceLimit = 20;

class InstanceTooLarge : public std::length_error {
public:
    InstanceTooLarge(std::size_t n, std::size_t limit);
};

/// Exhaustive optimum over all 2^n subsets. Among maximum-value subsets the
/// one whose ascending key sequence is lexicographically greatest is returned.
/// Throws InstanceTooLarge when n > kBruteForceLimit.
OptResult brute_force_opt(const Instance& inst);

/// Optimal value by dynamic programming over (packet index, occupancy).
Rat dp_opt(const Instance& inst);

/// Maximum-value feasible subset containing every packet of `required`, or
/// nullopt when no feasible superset exists. Ties are broken first by the
/// number of `preferred` packets kept (more is better), then by the same
/// lexicographic rule as brute_force_opt. Runs in O(n * B).
std::optional<OptResult> opt_containing(const Instance& inst, std::span<const Packet> required,
                                        std::span<const Packet> preferred = {});

}  // namespace fbl
