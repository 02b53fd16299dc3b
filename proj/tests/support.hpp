#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fbl/model.hpp"

namespace fbl::test {

inline const Packet& at(const Instance& inst, Step step, std::int64_t seq) {
    for (const Packet& p : inst.arrivals) {
        if (p.key.step == step && p.key.seq == seq) return p;
    }
    throw std::out_of_range("no packet " + std::to_string(step) + "." + std::to_string(seq));
}

inline std::vector<Packet> pick(const Instance& inst, std::initializer_list<std::pair<Step, std::int64_t>> keys) {
    std::vector<Packet> out;
    for (auto [s, q] : keys) out.push_back(at(inst, s, q));
    return out;
}

// Hand-built fixtures need free-standing packets for buffer-level tests.
inline Packet one(Step step, std::int64_t seq, std::uint32_t id = 0) {
    return Packet{PacketId{id}, ArrivalKey{step, seq}, PacketClass::One};
}
inline Packet alpha(Step step, std::int64_t seq, std::uint32_t id = 0) {
    return Packet{PacketId{id}, ArrivalKey{step, seq}, PacketClass::Alpha};
}

}  // namespace fbl::test
