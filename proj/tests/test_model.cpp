#include <doctest.h>

#include <algorithm>

#include "fbl/generators.hpp"
#include "fbl/model.hpp"
#include "support.hpp"

using namespace fbl;
using fbl::test::at;
using fbl::test::pick;

namespace {

bool has_violation(const ValidationVerdict& v, const std::string& needle) {
    return std::any_of(v.violations.begin(), v.violations.end(),
                       [&](const Violation& x) { return x.message.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("validate_instance") {
    SUBCASE("empty instance is valid") {
        Instance inst{1, Rat(2), {}};
        CHECK(validate_instance(inst).ok());
    }
    SUBCASE("duplicate key") {
        Instance inst{2, Rat(2), {test::one(1, 0, 0), test::alpha(1, 0, 1)}};
        const auto v = validate_instance(inst);
        CHECK_FALSE(v.ok());
        CHECK(has_violation(v, "duplicate key"));
        CHECK(v.violations.front().field == "packet 1");
    }
    SUBCASE("alpha must exceed 1") {
        Instance inst{1, Rat(1), {}};
        const auto v = validate_instance(inst);
        REQUIRE(v.violations.size() == 1);
        CHECK(v.violations[0].field == "alpha");
        CHECK(v.violations[0].message == "alpha must exceed 1");
    }
    SUBCASE("capacity") {
        Instance inst{0, Rat(2), {}};
        CHECK(validate_instance(inst).violations.at(0).field == "capacity");
    }
    SUBCASE("ordering, ids and key ranges") {
        Instance unsorted{2, Rat(2), {test::one(2, 0, 0), test::one(1, 0, 1)}};
        CHECK(has_violation(validate_instance(unsorted), "not ascending"));
        Instance dup_id{2, Rat(2), {test::one(1, 0, 4), test::one(1, 1, 4)}};
        CHECK(has_violation(validate_instance(dup_id), "duplicate id"));
        Instance step0{2, Rat(2), {test::one(0, 0, 0)}};
        CHECK(has_violation(validate_instance(step0), "step must be positive"));
        Instance neg_seq{2, Rat(2), {test::one(1, -1, 0)}};
        CHECK(has_violation(validate_instance(neg_seq), "seq must be non-negative"));
    }
    SUBCASE("require_valid throws with the violations in the message") {
        Instance inst{1, Rat(1), {}};
        CHECK_THROWS_AS(require_valid(inst), InvalidInstance);
        try {
            require_valid(inst);
        } catch (const InvalidInstance& e) {
            CHECK(std::string(e.what()).find("alpha must exceed 1") != std::string::npos);
        }
    }
}

TEST_CASE("packet_value") {
    Instance inst = make_instance(2, Rat(2), {{1, PacketClass::One}, {1, PacketClass::Alpha}});
    CHECK(packet_value(inst, inst.arrivals[0]) == Rat(1));
    CHECK(packet_value(inst, inst.arrivals[1]) == Rat(2));
    inst.alpha = Rat(10, 3);
    CHECK(packet_value(inst, inst.arrivals[1]) == Rat(10, 3));
    CHECK_THROWS_AS(packet_value(inst, test::alpha(9, 0, 77)), std::invalid_argument);
}

TEST_CASE("total_value") {
    const Instance ex = gen::paper_example(Rat(2));
    CHECK(total_value(ex, {}) == Rat(0));
    const auto opt = pick(ex, {{1, 2}, {2, 0}, {2, 1}, {2, 2}, {5, 0}, {5, 1}, {5, 2}});
    CHECK(total_value(ex, opt) == Rat(13));
    const auto on = pick(ex, {{1, 0}, {2, 0}, {2, 1}, {2, 2}, {5, 1}, {5, 2}});
    CHECK(total_value(ex, on) == Rat(11));

    std::vector<Packet> reversed(opt.rbegin(), opt.rend());
    CHECK(total_value(ex, reversed) == total_value(ex, opt));

    std::vector<Packet> lo(ex.arrivals.begin(), ex.arrivals.begin() + 4);
    std::vector<Packet> hi(ex.arrivals.begin() + 4, ex.arrivals.end());
    CHECK(total_value(ex, lo) + total_value(ex, hi) == total_value(ex, ex.arrivals));

    CHECK_THROWS(total_value(ex, std::vector<Packet>{test::one(40, 0, 99)}));
}

TEST_CASE("make_instance and normalized") {
    const Instance inst = make_instance(3, Rat(5), {{2, PacketClass::One}, {2, PacketClass::Alpha}, {4, PacketClass::One}});
    CHECK(validate_instance(inst).ok());
    CHECK(at(inst, 2, 1).klass == PacketClass::Alpha);
    CHECK(at(inst, 4, 0).id.value == 2);

    Instance messy = inst;
    std::swap(messy.arrivals[0], messy.arrivals[2]);
    messy.arrivals[0].key.seq = 17;
    const Instance clean = normalized(messy);
    CHECK(validate_instance(clean).ok());
    REQUIRE(clean.size() == 3);
    CHECK(clean.arrivals[2].key == ArrivalKey{4, 0});
    for (std::size_t i = 0; i < clean.size(); ++i) CHECK(clean.arrivals[i].id.value == i);
    CHECK(to_string(ArrivalKey{5, 2}) == "5.2");
    CHECK(to_string(PacketClass::Alpha) == "alpha");
}
