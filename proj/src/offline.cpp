#include "fbl/offline.hpp"

#include <algorithm>
#include <cstdint>
#include <utility>

namespace fbl {

namespace {

// Packet values scaled by alpha's denominator: 1 -> den, alpha -> num.
// Within one instance this integer score orders subsets exactly as Rat would.
struct Scale {
    std::int64_t one;
    std::int64_t alpha;

    explicit Scale(const Rat& a) : one(a.den()), alpha(a.num()) {}
    std::int64_t of(const Packet& p) const { return p.is_alpha() ? alpha : one; }
    Rat to_rat(std::int64_t score) const { return Rat(score, one); }
};

std::vector<bool> membership(const Instance& inst, std::span<const Packet> packets) {
    std::vector<bool> in(inst.size(), false);
    for (const Packet& p : packets) {
        auto idx = inst.index_of(p.id);
        if (!idx || !(inst.arrivals[*idx] == p)) {
            throw std::invalid_argument("packet " + std::to_string(p.id.value) + " is not part of the instance");
        }
        in[*idx] = true;
    }
    return in;
}

std::int64_t drain(std::int64_t occupancy, Step elapsed) {
    return std::max<std::int64_t>(0, occupancy - elapsed);
}

bool mask_feasible(const Instance& inst, std::uint32_t mask) {
    std::int64_t occ = 0;
    Step t = 0;
    for (std::size_t i = 0; mask != 0; ++i, mask >>= 1) {
        if (!(mask & 1u)) continue;
        const Step s = inst.arrivals[i].key.step;
        occ = drain(occ, s - t);
        t = s;
        if (++occ > inst.capacity) return false;
    }
    return true;
}

// True when the ascending index sequence of `a` is lexicographically greater
// than that of `b` (a proper prefix is smaller).
bool lex_greater(std::uint32_t a, std::uint32_t b) {
    while (a != 0 && b != 0) {
        const int ia = __builtin_ctz(a);
        const int ib = __builtin_ctz(b);
        if (ia != ib) return ia > ib;
        a &= a - 1;
        b &= b - 1;
    }
    return a != 0;
}

OptResult make_result(const Instance& inst, const Scale& scale, const std::vector<bool>& keep) {
    OptResult result;
    std::int64_t score = 0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        if (!keep[i]) continue;
        result.subset.push_back(inst.arrivals[i]);
        score += scale.of(inst.arrivals[i]);
    }
    result.value = scale.to_rat(score);
    result.schedule = feasible(inst, result.subset).schedule;
    return result;
}

}  // namespace

InstanceTooLarge::InstanceTooLarge(std::size_t n, std::size_t limit)
    : std::length_error("instance has " + std::to_string(n) + " packets; brute force is limited to " +
                        std::to_string(limit)) {}

Feasibility feasible(const Instance& inst, std::span<const Packet> subset) {
    const std::vector<bool> keep = membership(inst, subset);
    Feasibility out;
    std::vector<std::size_t> queue;  // buffered indices, FIFO
    std::size_t head = 0;
    std::size_t next = 0;
    auto advance_to_kept = [&] {
        while (next < inst.size() && !keep[next]) ++next;
    };
    advance_to_kept();
    for (Step t = 1; next < inst.size() || head < queue.size(); ++t) {
        for (; next < inst.size() && inst.arrivals[next].key.step == t; ++next, advance_to_kept()) {
            queue.push_back(next);
            if (static_cast<std::int64_t>(queue.size() - head) > inst.capacity) return Feasibility{};
        }
        if (head < queue.size()) {
            out.schedule[inst.arrivals[queue[head]].id] = t;
            ++head;
        }
    }
    out.feasible = true;
    return out;
}

OptResult brute_force_opt(const Instance& inst) {
    if (inst.size() > kBruteForceLimit) throw InstanceTooLarge(inst.size(), kBruteForceLimit);
    const Scale scale(inst.alpha);
    const auto n = static_cast<std::uint32_t>(inst.size());

    std::uint32_t best_mask = 0;
    std::int64_t best_score = 0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::int64_t score = 0;
        for (std::uint32_t m = mask; m != 0; m &= m - 1) score += scale.of(inst.arrivals[__builtin_ctz(m)]);
        if (score < best_score) continue;
        if (score == best_score && !lex_greater(mask, best_mask)) continue;
        if (!mask_feasible(inst, mask)) continue;
        best_mask = mask;
        best_score = score;
    }

    std::vector<bool> keep(n);
    for (std::uint32_t i = 0; i < n; ++i) keep[i] = (best_mask >> i) & 1u;
    return make_result(inst, scale, keep);
}

Rat dp_opt(const Instance& inst) {
    require_valid(inst);
    const Scale scale(inst.alpha);
    const auto cap = static_cast<std::size_t>(inst.capacity);
    constexpr std::int64_t kUnreachable = -1;

    // best[o]: best score over decisions so far with occupancy o.
    std::vector<std::int64_t> best(cap + 1, kUnreachable);
    best[0] = 0;
    Step t = inst.empty() ? 0 : inst.arrivals.front().key.step;
    for (const Packet& p : inst.arrivals) {
        if (p.key.step > t) {
            std::vector<std::int64_t> drained(cap + 1, kUnreachable);
            for (std::size_t o = 0; o <= cap; ++o) {
                if (best[o] == kUnreachable) continue;
                auto d = static_cast<std::size_t>(drain(static_cast<std::int64_t>(o), p.key.step - t));
                drained[d] = std::max(drained[d], best[o]);
            }
            best = std::move(drained);
            t = p.key.step;
        }
        for (std::size_t o = cap; o-- > 0;) {
            if (best[o] != kUnreachable) best[o + 1] = std::max(best[o + 1], best[o] + scale.of(p));
        }
    }
    return scale.to_rat(*std::max_element(best.begin(), best.end()));
}

std::optional<OptResult> opt_containing(const Instance& inst, std::span<const Packet> required,
                                        std::span<const Packet> preferred) {
    require_valid(inst);
    const std::vector<bool> must = membership(inst, required);
    const std::vector<bool> pref = membership(inst, preferred);
    const Scale scale(inst.alpha);
    const std::size_t n = inst.size();
    const auto cap = static_cast<std::size_t>(inst.capacity);

    // Objective: (score, preferred packets kept), compared lexicographically.
    using Objective = std::pair<std::int64_t, std::int64_t>;
    const std::optional<Objective> none;

    // table[i][o]: best objective for packets i..n-1 when o packets are
    // buffered at packet i's arrival instant, before it is admitted.
    std::vector<std::vector<std::optional<Objective>>> table(n + 1,
                                                             std::vector<std::optional<Objective>>(cap + 1));
    for (auto& cell : table[n]) cell = Objective{0, 0};

    auto gap_after = [&](std::size_t i) -> Step {
        return i + 1 < n ? inst.arrivals[i + 1].key.step - inst.arrivals[i].key.step : 0;
    };
    auto exclude_value = [&](std::size_t i, std::size_t o) -> std::optional<Objective> {
        if (must[i]) return none;
        return table[i + 1][static_cast<std::size_t>(drain(static_cast<std::int64_t>(o), gap_after(i)))];
    };
    auto include_value = [&](std::size_t i, std::size_t o) -> std::optional<Objective> {
        if (o + 1 > cap) return none;
        auto rest = table[i + 1][static_cast<std::size_t>(drain(static_cast<std::int64_t>(o + 1), gap_after(i)))];
        if (!rest) return none;
        return Objective{rest->first + scale.of(inst.arrivals[i]), rest->second + (pref[i] ? 1 : 0)};
    };
    // Excluding wins ties: the excluded branch's next kept packet is released
    // later, which makes its key sequence lexicographically greater.
    auto include_wins = [&](const std::optional<Objective>& incl, const std::optional<Objective>& excl) {
        return incl && (!excl || *incl > *excl);
    };

    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t o = 0; o <= cap; ++o) {
            auto incl = include_value(i, o);
            auto excl = exclude_value(i, o);
            table[i][o] = include_wins(incl, excl) ? incl : excl;
        }
    }
    if (!table[0][0]) return std::nullopt;

    std::vector<bool> keep(n, false);
    std::size_t o = 0;
    for (std::size_t i = 0; i < n; ++i) {
        keep[i] = include_wins(include_value(i, o), exclude_value(i, o));
        o = static_cast<std::size_t>(drain(static_cast<std::int64_t>(o + (keep[i] ? 1 : 0)), gap_after(i)));
    }
    return make_result(inst, scale, keep);
}

}  // namespace fbl
