#include <doctest.h>

#include <optional>
#include <stdexcept>
#include <vector>

#include "fbl/theory.hpp"

using fbl::Rat;
using namespace fbl::theory;

namespace {

std::vector<Rat> beta_grid() {
    std::vector<Rat> out;
    for (int i = 20; i <= 45; ++i) out.emplace_back(i, 10);
    return out;
}

const std::vector<Rat> kAlphaGrid{Rat(101, 100), Rat(3, 2), Rat(2), Rat(5), Rat(10), Rat(100), Rat(1000)};

// Grid point minimizing the max-over-alpha bound; first one on ties.
std::pair<Rat, Rat> grid_minimizer(const std::vector<Rat>& alphas) {
    std::optional<Rat> best_value;
    Rat best_beta;
    for (const Rat& b : beta_grid()) {
        Rat worst;
        for (const Rat& a : alphas) worst = fbl::max(worst, competitive_bound(a, b).bound);
        if (!best_value || worst < *best_value) {
            best_value = worst;
            best_beta = b;
        }
    }
    return {best_beta, *best_value};
}

Rat cubic(const Rat& b) { return b * b * b - Rat(2) * b * b - Rat(3) * b - Rat(4); }

}  // namespace

TEST_CASE("competitive_bound") {
    const BoundBreakdown b = competitive_bound(Rat(2), Rat(2));
    CHECK(b.first_term == Rat(3, 2));
    CHECK(b.second_term == Rat(6, 5));
    CHECK(b.bound == Rat(3, 2));

    CHECK(competitive_bound(Rat(3), Rat(1)).first_term == Rat(2));
    CHECK(competitive_bound(Rat(3284, 1000), Rat(3284, 1000)).first_term == Rat(4284, 3284));

    // Second term dominates for large beta at moderate alpha.
    const BoundBreakdown big = competitive_bound(Rat(5), Rat(4));
    CHECK(big.second_term == Rat(65, 49));
    CHECK(big.bound == big.second_term);

    CHECK_THROWS_AS(competitive_bound(Rat(1), Rat(2)), std::domain_error);
    CHECK_THROWS_AS(competitive_bound(Rat(2), Rat(0)), std::domain_error);
}

TEST_CASE("both terms exceed 1 and move in opposite directions") {
    for (const Rat& a : kAlphaGrid) {
        Rat prev_first(1000), prev_second;
        for (const Rat& b : beta_grid()) {
            const BoundBreakdown br = competitive_bound(a, b);
            CHECK(br.first_term > Rat(1));
            CHECK(br.second_term > Rat(1));
            CHECK(br.bound == fbl::max(br.first_term, br.second_term));
            CHECK(br.first_term < prev_first);
            CHECK(br.second_term > prev_second);
            prev_first = br.first_term;
            prev_second = br.second_term;
        }
    }
}

TEST_CASE("stability_condition") {
    for (const Rat& a : kAlphaGrid) CHECK(stability_condition(a, Rat(1)));
    for (const Rat& a : {Rat(11, 10), Rat(2), Rat(5), Rat(10), Rat(100)}) {
        CHECK(stability_condition(a, Rat(3284, 1000)));
    }
    CHECK_FALSE(stability_condition(Rat(6), Rat(4)));
}

TEST_CASE("discriminant_sign") {
    CHECK(discriminant_sign(Rat(3)) == -1);
    CHECK(discriminant_sign(Rat(4)) == 1);
    const Rat b(3284, 1000);
    CHECK(discriminant_sign(b) == -1);
    CHECK(cubic(b) > Rat(-1, 100));
    for (int i = 1; i <= 60; ++i) {
        const Rat x(i, 10);
        CHECK(discriminant_sign(x) == cubic(x).sign());
    }
}

TEST_CASE("where the discriminant is negative the first term dominates") {
    for (const Rat& b : beta_grid()) {
        if (discriminant_sign(b) >= 0) continue;
        for (const Rat& a : kAlphaGrid) {
            CHECK(stability_condition(a, b));
            CHECK(competitive_bound(a, b).bound == competitive_bound(a, b).first_term);
        }
    }
}

TEST_CASE("optimal_beta") {
    const Rat coarse = optimal_beta(Rat(1, 1000));
    CHECK(coarse >= Rat(3283, 1000));
    CHECK(coarse <= Rat(3285, 1000));

    const Rat tol(1, 1000000);
    const Rat fine = optimal_beta(tol);
    CHECK(fine >= Rat(32835, 10000));
    CHECK(fine <= Rat(32845, 10000));
    const Rat ratio = (Rat(1) + fine) / fine;
    CHECK(ratio >= Rat(13044, 10000));
    CHECK(ratio <= Rat(13046, 10000));

    CHECK(discriminant_sign(fine - tol) < 0);
    CHECK(discriminant_sign(fine + Rat(2) * tol) > 0);
    CHECK_THROWS(optimal_beta(Rat(0)));
}

TEST_CASE("beta grid: minimum value") {
    const auto [beta, value] = grid_minimizer(kAlphaGrid);
    CHECK(value >= Rat(13045, 10000) - Rat(1, 100));
    CHECK(value <= Rat(13045, 10000) + Rat(1, 100));
    // With only seven alphas the worst case near beta* is missed and the
    // minimum sits one grid step higher.
    CHECK(beta == Rat(34, 10));
}

TEST_CASE("beta grid: location with a dense alpha grid") {
    std::vector<Rat> alphas = kAlphaGrid;
    for (int i = 21; i <= 200; ++i) alphas.emplace_back(i, 20);
    const auto [beta, value] = grid_minimizer(alphas);
    CHECK(beta == Rat(33, 10));  // grid point nearest beta*
    CHECK(value >= Rat(13045, 10000) - Rat(1, 100));
    CHECK(value <= Rat(13045, 10000) + Rat(1, 100));
}
