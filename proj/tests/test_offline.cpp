#include <doctest.h>

#include <algorithm>
#include <functional>

#include "fbl/generators.hpp"
#include "fbl/offline.hpp"
#include "fbl/online.hpp"
#include "support.hpp"

using namespace fbl;
using test::at;
using test::pick;

namespace {

// Feasibility by trying every send/idle choice per step; sharing nothing with
// the earliest-send simulation. Small instances only.
bool feasible_any_schedule(const Instance& inst, const std::vector<Packet>& subset) {
    std::vector<Step> steps;
    for (const Packet& p : subset) steps.push_back(p.key.step);
    std::sort(steps.begin(), steps.end());
    const Step last = steps.empty() ? 0 : steps.back() + static_cast<Step>(subset.size());
    std::function<bool(Step, std::size_t, std::size_t)> go = [&](Step t, std::size_t arrived, std::size_t sent) {
        if (sent == steps.size()) return true;
        if (t > last) return false;
        while (arrived < steps.size() && steps[arrived] == t) ++arrived;
        if (static_cast<std::int64_t>(arrived - sent) > inst.capacity) return false;
        if (arrived > sent && go(t + 1, arrived, sent + 1)) return true;
        return go(t + 1, arrived, sent);
    };
    return go(1, 0, 0);
}

std::vector<Packet> subset_of(const Instance& inst, std::uint32_t mask) {
    std::vector<Packet> out;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        if (mask >> i & 1u) out.push_back(inst.arrivals[i]);
    }
    return out;
}

// Best value over supersets of `required`, or nullopt.
std::optional<Rat> enumerate_opt(const Instance& inst, std::uint32_t required) {
    std::optional<Rat> best;
    const std::uint32_t n = static_cast<std::uint32_t>(inst.size());
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if ((mask & required) != required) continue;
        const auto s = subset_of(inst, mask);
        if (!feasible_any_schedule(inst, s)) continue;
        const Rat v = total_value(inst, s);
        if (!best || v > *best) best = v;
    }
    return best;
}

gen::GenConfig small_config() {
    gen::GenConfig cfg;
    cfg.max_packets = 9;
    cfg.max_horizon = 6;
    return cfg;
}

}  // namespace

TEST_CASE("feasible") {
    const Instance ex = gen::paper_example(Rat(2));
    CHECK(feasible(ex, {}).feasible);

    const auto opt = pick(ex, {{1, 2}, {2, 0}, {2, 1}, {2, 2}, {5, 0}, {5, 1}, {5, 2}});
    const Feasibility f = feasible(ex, opt);
    REQUIRE(f.feasible);
    Step expect = 1;
    for (const Packet& p : opt) CHECK(f.schedule.at(p.id) == expect++);

    const Instance blk = gen::greedy_blocking(Rat(10));
    CHECK_FALSE(feasible(blk, blk.arrivals).feasible);
    CHECK_FALSE(feasible_any_schedule(blk, blk.arrivals));
    CHECK(feasible(blk, pick(blk, {{1, 1}, {2, 0}, {2, 1}})).feasible);

    CHECK_THROWS_AS(feasible(ex, std::vector<Packet>{test::one(9, 9, 42)}), std::invalid_argument);
}

TEST_CASE("earliest-send dominance against exhaustive schedules") {
    gen::GenConfig cfg = small_config();
    cfg.max_packets = 7;
    for (std::uint64_t i = 0; i < 150; ++i) {
        cfg.seed = gen::corpus_seed(3, i);
        const Instance inst = gen::random_instance(cfg);
        for (std::uint32_t mask = 0; mask < (1u << inst.size()); ++mask) {
            const auto s = subset_of(inst, mask);
            REQUIRE(feasible(inst, s).feasible == feasible_any_schedule(inst, s));
        }
    }
}

TEST_CASE("brute_force_opt") {
    for (const Rat& a : {Rat(2), Rat(3), Rat(10)}) {
        const Instance ex = gen::paper_example(a);
        const OptResult r = brute_force_opt(ex);
        CHECK(r.value == Rat(6) * a + Rat(1));
        CHECK(r.subset == pick(ex, {{1, 2}, {2, 0}, {2, 1}, {2, 2}, {5, 0}, {5, 1}, {5, 2}}));
        CHECK(r.schedule.size() == 7);
    }
    const OptResult empty = brute_force_opt(Instance{1, Rat(2), {}});
    CHECK(empty.value == Rat(0));
    CHECK(empty.subset.empty());

    const Instance blk = gen::greedy_blocking(Rat(10));
    const OptResult r = brute_force_opt(blk);
    CHECK(r.value == Rat(30));
    CHECK(r.subset == pick(blk, {{1, 1}, {2, 0}, {2, 1}}));

    std::vector<std::pair<Step, PacketClass>> many(21, {1, PacketClass::One});
    CHECK_THROWS_AS(brute_force_opt(make_instance(2, Rat(2), many)), InstanceTooLarge);
}

TEST_CASE("brute-force tie-break prefers later packets") {
    // Three 1-value packets at step 1 with B = 2: any two are optimal.
    const Instance inst = make_instance(2, Rat(2), {{1, PacketClass::One}, {1, PacketClass::One}, {1, PacketClass::One}});
    const OptResult r = brute_force_opt(inst);
    CHECK(r.value == Rat(2));
    CHECK(r.subset == pick(inst, {{1, 1}, {1, 2}}));
    CHECK(opt_containing(inst, {})->subset == r.subset);
}

TEST_CASE("dp_opt") {
    CHECK(dp_opt(gen::paper_example(Rat(5))) == Rat(31));
    CHECK(dp_opt(make_instance(1, Rat(7, 2), {{3, PacketClass::Alpha}})) == Rat(7, 2));
    CHECK(dp_opt(Instance{3, Rat(2), {}}) == Rat(0));

    gen::GenConfig cfg;
    for (std::uint64_t i = 0; i < 500; ++i) {
        cfg.seed = gen::corpus_seed(11, i);
        const Instance inst = gen::random_instance(cfg);
        const OptResult b = brute_force_opt(inst);
        REQUIRE(dp_opt(inst) == b.value);
        CHECK(feasible(inst, b.subset).feasible);
        CHECK(total_value(inst, b.subset) == b.value);
    }
}

TEST_CASE("brute force agrees with exhaustive schedules on small instances") {
    gen::GenConfig cfg = small_config();
    for (std::uint64_t i = 0; i < 100; ++i) {
        cfg.seed = gen::corpus_seed(5, i);
        const Instance inst = gen::random_instance(cfg);
        CHECK(brute_force_opt(inst).value == *enumerate_opt(inst, 0));
    }
}

TEST_CASE("opt_containing") {
    const Instance ex = gen::paper_example(Rat(2));
    CHECK(opt_containing(ex, {})->value == brute_force_opt(ex).value);

    const RunTrace on = run(Policy::on(Rat(2)), ex);
    std::vector<Packet> on_alpha;
    for (const Packet& p : on.sent) {
        if (p.is_alpha()) on_alpha.push_back(p);
    }
    CHECK(opt_containing(ex, on_alpha)->value == Rat(13));

    const Instance blk = gen::greedy_blocking(Rat(10));
    const auto all = blk.arrivals;
    const auto r = opt_containing(blk, all);
    CHECK((!r || r->value < Rat(30)));
    const auto with_one = opt_containing(blk, pick(blk, {{1, 0}}));
    REQUIRE(with_one);
    CHECK(with_one->value == Rat(21));

    // Preferred packets win among equal-value sets.
    const Instance three = make_instance(2, Rat(2), {{1, PacketClass::One}, {1, PacketClass::One}, {1, PacketClass::One}});
    const auto pref = opt_containing(three, {}, pick(three, {{1, 0}}));
    REQUIRE(pref);
    CHECK(pref->subset == pick(three, {{1, 0}, {1, 2}}));
}

TEST_CASE("opt_containing against enumeration, with monotonicity") {
    gen::GenConfig cfg = small_config();
    for (std::uint64_t i = 0; i < 120; ++i) {
        cfg.seed = gen::corpus_seed(17, i);
        const Instance inst = gen::random_instance(cfg);
        const std::uint32_t n = static_cast<std::uint32_t>(inst.size());
        std::optional<Rat> previous;
        std::uint32_t required = 0;
        // A growing chain of required sets; values must not increase.
        for (std::uint32_t k = 0; k <= n; ++k) {
            if (k > 0) required |= 1u << ((k * 5 + i) % n);
            const auto got = opt_containing(inst, subset_of(inst, required));
            const auto want = enumerate_opt(inst, required);
            REQUIRE(got.has_value() == want.has_value());
            if (!got) break;
            CHECK(got->value == *want);
            CHECK(feasible(inst, got->subset).feasible);
            for (const Packet& p : subset_of(inst, required)) {
                CHECK(std::find(got->subset.begin(), got->subset.end(), p) != got->subset.end());
            }
            if (previous) CHECK(got->value <= *previous);
            previous = got->value;
        }
    }
}

TEST_CASE("ON's alpha sends are contained in some optimum") {
    gen::GenConfig cfg;
    for (std::uint64_t i = 0; i < 500; ++i) {
        cfg.seed = gen::corpus_seed(23, i);
        const Instance inst = gen::random_instance(cfg);
        const RunTrace on = run(Policy::on(Rat(3284, 1000)), inst);
        std::vector<Packet> req;
        for (const Packet& p : on.sent) {
            if (p.is_alpha()) req.push_back(p);
        }
        CHECK(opt_containing(inst, req)->value == brute_force_opt(inst).value);
    }
}
