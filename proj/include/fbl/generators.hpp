#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fbl/analysis.hpp"
#include "fbl/model.hpp"
#include "fbl/online.hpp"

namespace fbl::gen {

struct GenConfig {
    std::int64_t min_capacity = 1;
    std::int64_t max_capacity = 5;
    Step max_horizon = 12;           // last step that may carry arrivals
    std::vector<Rat> alphas{Rat(3, 2), Rat(2), Rat(5), Rat(10)};
    std::int64_t max_burst = 4;      // arrivals per step drawn from [0, max_burst]
    Rat alpha_weight{1, 2};          // probability of an alpha packet
    std::size_t max_packets = 14;
    std::uint64_t seed = 1;
};

/// Throws std::invalid_argument for empty ranges or a weight outside [0, 1].
void validate(const GenConfig& cfg);

/// B = 3 with arrivals (1,1) (1.1,1) (1.2,a); (2,a) (2.1,a) (2.2,a) (2.3,1);
/// (5,1) (5.1,a) (5.2,a).
Instance paper_example(const Rat& alpha);

/// B = 2 with arrivals (1,1) (1.1,a) (2,a) (2.1,a): greedy sends 1 + 2a
/// while the optimum sends 3a.
Instance greedy_blocking(const Rat& alpha);

/// Deterministic in cfg (including the seed). Capacity, alpha and horizon are
/// drawn first, then each step's burst and packet classes in order.
Instance random_instance(const GenConfig& cfg);

/// Seed of the i-th instance of a corpus rooted at `base` (splitmix64).
std::uint64_t corpus_seed(std::uint64_t base, std::uint64_t i);

struct SearchResult {
    Instance instance;
    analysis::RatioReport report;
    std::uint64_t evaluations = 0;
};

/// Hill climbing with random restarts on OPT/policy. Candidates are kept to
/// at most cfg.max_packets packets with alpha drawn from cfg.alphas, so the
/// optimum is cross-checked by brute force. Deterministic in (cfg, budget).
SearchResult adversarial_search(const Policy& policy, const GenConfig& cfg, std::uint64_t budget);

/// Strict "more adversarial" order on ratio reports; an unbounded ratio
/// beats every finite one.
bool worse_for_policy(const analysis::RatioReport& a, const analysis::RatioReport& b);

}  // namespace fbl::gen
