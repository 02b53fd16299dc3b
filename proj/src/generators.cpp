#include "fbl/generators.hpp"

#include <limits>
#include <stdexcept>

namespace fbl::gen {

namespace {

// Uniform draw from [0, n) by rejection; unlike std::uniform_int_distribution
// the sequence is the same on every standard library.
std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

bool coin(std::mt19937_64& rng, const Rat& weight) {
    return static_cast<std::int64_t>(below(rng, static_cast<std::uint64_t>(weight.den()))) < weight.num();
}

PacketClass draw_class(std::mt19937_64& rng, const GenConfig& cfg) {
    return coin(rng, cfg.alpha_weight) ? PacketClass::Alpha : PacketClass::One;
}

Instance mutate(const Instance& base, const GenConfig& cfg, std::mt19937_64& rng) {
    Instance inst = base;
    auto& arr = inst.arrivals;
    auto pick = [&] { return static_cast<std::size_t>(below(rng, arr.size())); };
    switch (below(rng, 6)) {
        case 0:  // insert
            if (arr.size() < cfg.max_packets) {
                const Step step = 1 + static_cast<Step>(below(rng, static_cast<std::uint64_t>(cfg.max_horizon)));
                arr.push_back(Packet{PacketId{0}, ArrivalKey{step, std::numeric_limits<std::int32_t>::max()},
                                     draw_class(rng, cfg)});
            }
            break;
        case 1:  // delete
            if (!arr.empty()) arr.erase(arr.begin() + static_cast<std::ptrdiff_t>(pick()));
            break;
        case 2:  // flip class
            if (!arr.empty()) {
                Packet& p = arr[pick()];
                p.klass = p.is_alpha() ? PacketClass::One : PacketClass::Alpha;
            }
            break;
        case 3:  // shift step
            if (!arr.empty()) {
                Packet& p = arr[pick()];
                const Step moved = p.key.step + (below(rng, 2) == 0 ? -1 : 1);
                if (moved >= 1 && moved <= cfg.max_horizon) p.key.step = moved;
            }
            break;
        case 4:
            inst.alpha = cfg.alphas[below(rng, cfg.alphas.size())];
            break;
        default:
            inst.capacity = cfg.min_capacity +
                            static_cast<std::int64_t>(
                                below(rng, static_cast<std::uint64_t>(cfg.max_capacity - cfg.min_capacity + 1)));
            break;
    }
    return normalized(std::move(inst));
}

}  // namespace

void validate(const GenConfig& cfg) {
    if (cfg.min_capacity < 1 || cfg.max_capacity < cfg.min_capacity) {
        throw std::invalid_argument("capacity range must be nonempty and positive");
    }
    if (cfg.max_horizon < 1) throw std::invalid_argument("horizon must be at least 1");
    if (cfg.alphas.empty()) throw std::invalid_argument("alpha choices must be nonempty");
    for (const Rat& a : cfg.alphas) {
        if (a <= Rat(1)) throw std::invalid_argument("alpha choices must exceed 1");
    }
    if (cfg.max_burst < 0) throw std::invalid_argument("max burst must be non-negative");
    if (cfg.alpha_weight < Rat(0) || cfg.alpha_weight > Rat(1)) {
        throw std::invalid_argument("alpha weight must lie in [0, 1]");
    }
}

Instance paper_example(const Rat& alpha) {
    using enum PacketClass;
    return make_instance(3, alpha,
                         {{1, One}, {1, One}, {1, Alpha},
                          {2, Alpha}, {2, Alpha}, {2, Alpha}, {2, One},
                          {5, One}, {5, Alpha}, {5, Alpha}});
}

Instance greedy_blocking(const Rat& alpha) {
    using enum PacketClass;
    return make_instance(2, alpha, {{1, One}, {1, Alpha}, {2, Alpha}, {2, Alpha}});
}

Instance random_instance(const GenConfig& cfg) {
    validate(cfg);
    std::mt19937_64 rng(cfg.seed);
    Instance inst;
    inst.capacity = cfg.min_capacity +
                    static_cast<std::int64_t>(below(rng, static_cast<std::uint64_t>(cfg.max_capacity - cfg.min_capacity + 1)));
    inst.alpha = cfg.alphas[below(rng, cfg.alphas.size())];
    const Step horizon = 1 + static_cast<Step>(below(rng, static_cast<std::uint64_t>(cfg.max_horizon)));
    for (Step t = 1; t <= horizon; ++t) {
        const auto burst = static_cast<std::int64_t>(below(rng, static_cast<std::uint64_t>(cfg.max_burst) + 1));
        for (std::int64_t s = 0; s < burst; ++s) {
            const PacketClass klass = draw_class(rng, cfg);
            if (inst.arrivals.size() >= cfg.max_packets) continue;
            inst.arrivals.push_back(Packet{PacketId{static_cast<std::uint32_t>(inst.arrivals.size())},
                                           ArrivalKey{t, s}, klass});
        }
    }
    return inst;
}

std::uint64_t corpus_seed(std::uint64_t base, std::uint64_t i) {
    std::uint64_t z = base + (i + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

bool worse_for_policy(const analysis::RatioReport& a, const analysis::RatioReport& b) {
    if (!a.ratio) return b.ratio.has_value();
    if (!b.ratio) return false;
    return *a.ratio > *b.ratio;
}

SearchResult adversarial_search(const Policy& policy, const GenConfig& cfg, std::uint64_t budget) {
    validate(cfg);
    if (budget == 0) throw std::invalid_argument("search budget must be positive");
    std::mt19937_64 rng(corpus_seed(cfg.seed, std::numeric_limits<std::uint64_t>::max()));

    auto fresh = [&](std::uint64_t i) {
        GenConfig c = cfg;
        c.seed = corpus_seed(cfg.seed, i);
        return random_instance(c);
    };

    Instance current = fresh(0);
    analysis::RatioReport current_report = analysis::policy_ratio_report(policy, current);
    SearchResult best{current, current_report, 1};

    for (std::uint64_t e = 1; e < budget; ++e) {
        Instance candidate = below(rng, 8) == 0 ? fresh(e) : mutate(current, cfg, rng);
        analysis::RatioReport report = analysis::policy_ratio_report(policy, candidate);
        ++best.evaluations;
        if (!worse_for_policy(current_report, report)) {
            current = candidate;
            current_report = report;
        }
        if (worse_for_policy(report, best.report)) {
            best.instance = std::move(candidate);
            best.report = std::move(report);
        }
    }
    return best;
}

}  // namespace fbl::gen
