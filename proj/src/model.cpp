#include "fbl/model.hpp"

#include <algorithm>
#include <set>

namespace fbl {

std::optional<std::size_t> Instance::index_of(PacketId id) const noexcept {
    for (std::size_t i = 0; i < arrivals.size(); ++i) {
        if (arrivals[i].id == id) return i;
    }
    return std::nullopt;
}

std::string to_string(PacketClass klass) { return klass == PacketClass::Alpha ? "alpha" : "one"; }

std::string to_string(const ArrivalKey& key) {
    return std::to_string(key.step) + "." + std::to_string(key.seq);
}

ValidationVerdict validate_instance(const Instance& inst) {
    ValidationVerdict verdict;
    auto add = [&](std::string field, std::string message) {
        verdict.violations.push_back({std::move(field), std::move(message)});
    };

    if (inst.capacity < 1) add("capacity", "capacity must be at least 1");
    if (inst.alpha <= Rat(1)) add("alpha", "alpha must exceed 1");

    std::set<PacketId> ids;
    for (std::size_t i = 0; i < inst.arrivals.size(); ++i) {
        const Packet& p = inst.arrivals[i];
        const std::string field = "packet " + std::to_string(p.id.value);
        if (p.key.step < 1) add(field, "step must be positive");
        if (p.key.seq < 0) add(field, "seq must be non-negative");
        if (!ids.insert(p.id).second) add(field, "duplicate id");
        if (i > 0) {
            const ArrivalKey& prev = inst.arrivals[i - 1].key;
            if (prev == p.key) {
                add(field, "duplicate key " + to_string(p.key));
            } else if (p.key < prev) {
                add(field, "arrivals not ascending at key " + to_string(p.key));
            }
        }
    }
    return verdict;
}

namespace {

std::string describe(const ValidationVerdict& verdict) {
    std::string msg = "invalid instance:";
    for (const auto& v : verdict.violations) msg += " [" + v.field + ": " + v.message + "]";
    return msg;
}

}  // namespace

InvalidInstance::InvalidInstance(const ValidationVerdict& verdict)
    : std::invalid_argument(describe(verdict)) {}

void require_valid(const Instance& inst) {
    auto verdict = validate_instance(inst);
    if (!verdict.ok()) throw InvalidInstance(verdict);
}

Rat packet_value(const Instance& inst, const Packet& p) {
    auto idx = inst.index_of(p.id);
    if (!idx || !(inst.arrivals[*idx] == p)) {
        throw std::invalid_argument("packet " + std::to_string(p.id.value) + " is not part of the instance");
    }
    return class_value(inst, p.klass);
}

Rat total_value(const Instance& inst, std::span<const Packet> packets) {
    std::int64_t ones = 0;
    std::int64_t alphas = 0;
    for (const Packet& p : packets) {
        packet_value(inst, p);  // membership check
        (p.is_alpha() ? alphas : ones) += 1;
    }
    return Rat(ones) + Rat(alphas) * inst.alpha;
}

Instance make_instance(std::int64_t capacity, Rat alpha,
                       const std::vector<std::pair<Step, PacketClass>>& arrivals) {
    Instance inst;
    inst.capacity = capacity;
    inst.alpha = alpha;
    for (const auto& [step, klass] : arrivals) {
        inst.arrivals.push_back(Packet{PacketId{0}, ArrivalKey{step, 0}, klass});
    }
    std::stable_sort(inst.arrivals.begin(), inst.arrivals.end(),
                     [](const Packet& a, const Packet& b) { return a.key.step < b.key.step; });
    return normalized(std::move(inst));
}

Instance normalized(Instance inst) {
    std::stable_sort(inst.arrivals.begin(), inst.arrivals.end(),
                     [](const Packet& a, const Packet& b) { return a.key < b.key; });
    std::int64_t seq = 0;
    for (std::size_t i = 0; i < inst.arrivals.size(); ++i) {
        Packet& p = inst.arrivals[i];
        seq = (i > 0 && inst.arrivals[i - 1].key.step == p.key.step) ? seq + 1 : 0;
        p.key.seq = seq;
        p.id = PacketId{static_cast<std::uint32_t>(i)};
    }
    return inst;
}

}  // namespace fbl
