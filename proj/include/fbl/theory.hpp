#pragma once

#include "fbl/rational.hpp"

namespace fbl::theory {

/// Competitive bound of ON(beta) for a given alpha: the larger of the
/// preemption term (1+beta)/beta and the eviction term
/// (alpha^2 + 2 alpha beta) / (alpha^2 + alpha beta + beta).
struct BoundBreakdown {
    Rat first_term;
    Rat second_term;
    Rat bound;
};

/// Throws std::domain_error unless alpha > 1 and beta > 0.
BoundBreakdown competitive_bound(const Rat& alpha, const Rat& beta);

/// True iff alpha^2 - beta(beta-1) alpha + beta^2 + beta > 0, i.e. the
/// preemption term strictly dominates the eviction term at this alpha.
bool stability_condition(const Rat& alpha, const Rat& beta);

/// Sign (-1, 0, 1) of beta^3 - 2 beta^2 - 3 beta - 4. Negative means the
/// stability condition holds for every alpha. Throws std::domain_error for
/// beta <= 0.
int discriminant_sign(const Rat& beta);

/// Largest beta in [3, 4], to within `tol`, whose discriminant is
/// non-positive; found by exact bisection.
Rat optimal_beta(const Rat& tol);

}  // namespace fbl::theory
