#include "fbl/theory.hpp"

#include <stdexcept>

namespace fbl::theory {

namespace {

void check_domain(const Rat& alpha, const Rat& beta) {
    if (alpha <= Rat(1)) throw std::domain_error("alpha must exceed 1");
    if (beta <= Rat(0)) throw std::domain_error("beta must be positive");
}

}  // namespace

BoundBreakdown competitive_bound(const Rat& alpha, const Rat& beta) {
    check_domain(alpha, beta);
    BoundBreakdown b;
    b.first_term = (Rat(1) + beta) / beta;
    b.second_term = (alpha * alpha + Rat(2) * alpha * beta) / (alpha * alpha + alpha * beta + beta);
    b.bound = max(b.first_term, b.second_term);
    return b;
}

bool stability_condition(const Rat& alpha, const Rat& beta) {
    check_domain(alpha, beta);
    return (alpha * alpha - beta * (beta - Rat(1)) * alpha + beta * beta + beta).sign() > 0;
}

int discriminant_sign(const Rat& beta) {
    if (beta <= Rat(0)) throw std::domain_error("beta must be positive");
    // With beta = n/d and d > 0: sign(n^3 - 2 n^2 d - 3 n d^2 - 4 d^3).
    // Evaluated directly in 128 bits so deep bisection denominators cannot
    // overflow the 64-bit Rat.
    const __int128 n = beta.num();
    const __int128 d = beta.den();
    constexpr __int128 kLimit = static_cast<__int128>(1) << 40;
    if (n >= kLimit || d >= kLimit) throw std::overflow_error("beta too fine for discriminant evaluation");
    const __int128 v = n * n * n - 2 * n * n * d - 3 * n * d * d - 4 * d * d * d;
    return (v > 0) - (v < 0);
}

Rat optimal_beta(const Rat& tol) {
    if (tol <= Rat(0)) throw std::domain_error("tolerance must be positive");
    Rat lo(3);  // discriminant -4
    Rat hi(4);  // discriminant 16
    while (hi - lo > tol) {
        const Rat mid = (lo + hi) / Rat(2);
        if (discriminant_sign(mid) <= 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

}  // namespace fbl::theory
