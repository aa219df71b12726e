#include "metric_coreset/solvers.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "metric_coreset/random.hpp"

namespace metric_coreset {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Instance-local z-distance lookup: caches the full n x n table for small n.
class ZDistances {
public:
    static constexpr std::size_t cache_limit = 2048;

    ZDistances(const MetricSpace& space, const WeightedPointSet& points, Objective objective)
        : space_(space), entries_(points.entries()), objective_(objective) {
        const std::size_t n = entries_.size();
        if (n <= cache_limit) {
            table_.resize(n * n);
            for (std::size_t i = 0; i < n; ++i) {
                table_[i * n + i] = 0.0;
                for (std::size_t j = 0; j < i; ++j) {
                    const double d = objective_power(
                        space_.distance(entries_[i].point, entries_[j].point), objective_);
                    table_[i * n + j] = d;
                    table_[j * n + i] = d;
                }
            }
        }
    }

    double operator()(std::size_t i, std::size_t j) const {
        if (!table_.empty()) return table_[i * entries_.size() + j];
        return objective_power(space_.distance(entries_[i].point, entries_[j].point), objective_);
    }

private:
    const MetricSpace& space_;
    std::span<const WeightedPointSet::Entry> entries_;
    Objective objective_;
    std::vector<double> table_;
};

void require_count(const WeightedPointSet& points, std::size_t count, const char* what) {
    if (count == 0) throw std::invalid_argument(std::string(what) + ": need at least one center");
    if (count > points.size())
        throw std::invalid_argument(std::string(what) + ": asked for " + std::to_string(count) +
                                    " centers from " + std::to_string(points.size()) + " points");
}

std::vector<PointId> to_ids(const WeightedPointSet& points, std::vector<std::size_t> local) {
    std::sort(local.begin(), local.end());
    std::vector<PointId> ids;
    ids.reserve(local.size());
    for (std::size_t i : local) ids.push_back(points.entries()[i].point);
    return ids;
}

// Index i with probability mass[i]/sum(mass); mass[i] == 0 is never chosen.
std::size_t sample_index(std::span<const double> mass, double total, Rng& rng) {
    const double target = rng.unit() * total;
    double running = 0.0;
    std::size_t last_positive = mass.size();
    for (std::size_t i = 0; i < mass.size(); ++i) {
        if (mass[i] <= 0.0) continue;
        running += mass[i];
        last_positive = i;
        if (running > target) return i;
    }
    return last_positive;
}

}  // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    constexpr std::uint64_t saturated = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // result * (n-k+i) / i is exact; cancel gcds first so the product fits when it can.
        std::uint64_t factor = n - k + i;
        std::uint64_t divisor = i;
        const std::uint64_t g1 = std::gcd(result, divisor);
        result /= g1;
        divisor /= g1;
        const std::uint64_t g2 = std::gcd(factor, divisor);
        factor /= g2;
        divisor /= g2;
        if (result > saturated / factor) return saturated;
        result = result * factor / divisor;
    }
    return result;
}

void SolverConfig::validate() const {
    std::visit(
        [](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, LocalSearch>) {
                if (k.t < 1) throw std::invalid_argument("local search t must be >= 1");
                if (k.max_iters < 1) throw std::invalid_argument("local search max_iters must be >= 1");
                if (!(k.min_relative_gain > 0.0))
                    throw std::invalid_argument("local search min_relative_gain must be > 0");
            } else if constexpr (std::is_same_v<K, BicriteriaSeeding>) {
                if (!(k.beta >= 1.0)) throw std::invalid_argument("bi-criteria beta must be >= 1");
            } else {
                if (k.subset_cap == 0) throw std::invalid_argument("brute-force cap must be positive");
            }
        },
        kind);
}

std::string solver_name(const SolverKind& kind) {
    switch (kind.index()) {
        case 0: return "local-search";
        case 1: return "bicriteria";
        default: return "brute-force";
    }
}

double solver_guarantee(const SolverConfig& config) {
    if (const auto* ls = std::get_if<LocalSearch>(&config.kind)) {
        const double t = static_cast<double>(ls->t);
        return config.objective == Objective::median ? 3.0 + 2.0 / t : 5.0 + 4.0 / t;
    }
    if (const auto* bc = std::get_if<BicriteriaSeeding>(&config.kind)) return bc->beta;
    return 1.0;
}

Solution bicriteria_seed(const MetricSpace& space, const WeightedPointSet& points, std::size_t m,
                         std::uint64_t seed, Objective objective) {
    require_count(points, m, "bicriteria_seed");
    const auto entries = points.entries();
    const std::size_t n = entries.size();
    Rng rng(seed);

    std::vector<double> weight_mass(n);
    for (std::size_t i = 0; i < n; ++i) weight_mass[i] = static_cast<double>(entries[i].weight);

    std::vector<std::size_t> chosen;
    chosen.reserve(m);
    std::vector<double> closest(n, kInf);
    std::vector<double> mass(n);

    auto add_center = [&](std::size_t c) {
        chosen.push_back(c);
        weight_mass[c] = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            closest[i] = std::min(closest[i],
                                  objective_power(space.distance(entries[i].point, entries[c].point),
                                                  objective));
        closest[c] = 0.0;
    };

    double total_weight = 0.0;
    for (double w : weight_mass) total_weight += w;
    add_center(sample_index(weight_mass, total_weight, rng));

    while (chosen.size() < m) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mass[i] = weight_mass[i] > 0.0 ? weight_mass[i] * closest[i] : 0.0;
            total += mass[i];
        }
        if (total > 0.0) {
            add_center(sample_index(mass, total, rng));
        } else {
            // Every unchosen point coincides with a center: fall back to weights.
            double remaining = 0.0;
            for (double w : weight_mass) remaining += w;
            add_center(sample_index(weight_mass, remaining, rng));
        }
    }

    Solution out;
    out.centers = to_ids(points, chosen);
    out.cost = cost(space, points, out.centers, objective);
    return out;
}

Solution local_search(const MetricSpace& space, const WeightedPointSet& points, std::size_t k,
                      const LocalSearch& config, Objective objective) {
    require_count(points, k, "local_search");
    SolverConfig{config, objective}.validate();
    const auto entries = points.entries();
    const std::size_t n = entries.size();

    Solution seeded = bicriteria_seed(space, points, k, 0, objective);
    Solution out;
    out.cost = seeded.cost;
    out.cost_history.push_back(seeded.cost);

    // Local indices of the current centers; entries are sorted so ids map monotonically.
    std::vector<std::size_t> centers;
    {
        std::size_t j = 0;
        for (std::size_t i = 0; i < n && j < seeded.centers.size(); ++i)
            if (entries[i].point == seeded.centers[j]) {
                centers.push_back(i);
                ++j;
            }
    }
    if (k == n) {
        out.centers = std::move(seeded.centers);
        return out;
    }

    const ZDistances dz(space, points, objective);
    std::vector<char> is_center(n, 0);
    std::vector<std::size_t> slot_of_nearest(n);
    std::vector<double> first(n), second(n), reach(n), unchanged(n);
    std::vector<std::vector<std::size_t>> groups(k);
    std::vector<double> base_delta(k), delta(k);
    auto raw = [&](std::size_t i, std::size_t j) {
        return space.distance(entries[i].point, entries[j].point);
    };

    while (out.iterations < config.max_iters) {
        std::fill(is_center.begin(), is_center.end(), 0);
        for (std::size_t c : centers) is_center[c] = 1;

        // Nearest and second-nearest center per point. A swap that brings in c only
        // changes x's term when d(c, near(x)) < reach(x) = d1(x) + d2(x): otherwise the
        // triangle inequality gives d(x, c) >= d2(x).
        double current = 0.0;
        std::fill(base_delta.begin(), base_delta.end(), 0.0);
        for (auto& g : groups) g.clear();
        for (std::size_t i = 0; i < n; ++i) {
            double best = kInf, runner_up = kInf;
            std::size_t best_slot = 0, runner_slot = 0;
            for (std::size_t s = 0; s < centers.size(); ++s) {
                const double d = dz(i, centers[s]);
                if (d < best) {
                    runner_up = best;
                    runner_slot = best_slot;
                    best = d;
                    best_slot = s;
                } else if (d < runner_up) {
                    runner_up = d;
                    runner_slot = s;
                }
            }
            const double w = static_cast<double>(entries[i].weight);
            first[i] = best;
            second[i] = runner_up;
            slot_of_nearest[i] = best_slot;
            current += w * best;
            if (runner_up < kInf) {
                reach[i] = raw(i, centers[best_slot]) + raw(i, centers[runner_slot]);
                unchanged[i] = w * (runner_up - best);
            } else {
                reach[i] = kInf;
                unchanged[i] = 0.0;
            }
            base_delta[best_slot] += unchanged[i];
            groups[best_slot].push_back(i);
        }
        for (auto& g : groups)
            std::stable_sort(g.begin(), g.end(),
                             [&](std::size_t a, std::size_t b) { return reach[a] > reach[b]; });

        double best_cost = kInf;
        std::size_t best_out = 0, best_in = 0;
        for (std::size_t c = 0; c < n; ++c) {
            if (is_center[c]) continue;
            delta = base_delta;
            double with_candidate = current;
            for (std::size_t s = 0; s < centers.size(); ++s) {
                // Relative margin keeps pruning sound under rounding of the sums.
                const double limit = raw(c, centers[s]) * (1.0 - 1e-12);
                for (const std::size_t i : groups[s]) {
                    if (!(reach[i] > limit)) break;
                    const double w = static_cast<double>(entries[i].weight);
                    const double dc = dz(i, c);
                    const double kept = std::min(first[i], dc);
                    with_candidate += w * (kept - first[i]);
                    delta[s] += w * (std::min(second[i], dc) - kept) - unchanged[i];
                }
            }
            for (std::size_t s = 0; s < centers.size(); ++s) {
                const double swapped = with_candidate + delta[s];
                const bool better =
                    swapped < best_cost ||
                    (swapped == best_cost &&
                     std::pair(entries[centers[s]].point, entries[c].point) <
                         std::pair(entries[centers[best_out]].point, entries[best_in].point));
                if (better) {
                    best_cost = swapped;
                    best_out = s;
                    best_in = c;
                }
            }
        }

        if (!(best_cost < current * (1.0 - config.min_relative_gain))) break;
        centers[best_out] = best_in;
        ++out.iterations;
        std::vector<PointId> ids = to_ids(points, centers);
        out.cost = cost(space, points, ids, objective);
        out.cost_history.push_back(out.cost);
    }

    out.centers = to_ids(points, centers);
    out.cost = cost(space, points, out.centers, objective);
    return out;
}

Solution brute_force_opt(const MetricSpace& space, const WeightedPointSet& points, std::size_t k,
                         Objective objective, std::uint64_t subset_cap) {
    require_count(points, k, "brute_force_opt");
    const std::size_t n = points.size();
    const std::uint64_t subsets = binomial(n, k);
    if (subsets > subset_cap)
        throw ResourceLimitError("brute force over C(" + std::to_string(n) + "," +
                                 std::to_string(k) + ") subsets exceeds the cap of " +
                                 std::to_string(subset_cap));

    const auto entries = points.entries();
    const ZDistances dz(space, points, objective);
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;

    std::vector<std::size_t> best_pick = pick;
    double best = kInf;
    for (;;) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = kInf;
            for (std::size_t c : pick) d = std::min(d, dz(i, c));
            total += static_cast<double>(entries[i].weight) * d;
        }
        if (total < best) {
            best = total;
            best_pick = pick;
        }
        // Next k-subset in lexicographic order.
        std::size_t pos = k;
        while (pos > 0 && pick[pos - 1] == n - k + pos - 1) --pos;
        if (pos == 0) break;
        ++pick[pos - 1];
        for (std::size_t j = pos; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }

    Solution out;
    out.centers = to_ids(points, best_pick);
    out.cost = cost(space, points, out.centers, objective);
    out.iterations = static_cast<std::size_t>(subsets);
    return out;
}

Solution solve(const MetricSpace& space, const WeightedPointSet& points, std::size_t count,
               const SolverConfig& config) {
    config.validate();
    return std::visit(
        [&](const auto& kind) -> Solution {
            using K = std::decay_t<decltype(kind)>;
            if constexpr (std::is_same_v<K, LocalSearch>)
                return local_search(space, points, count, kind, config.objective);
            else if constexpr (std::is_same_v<K, BicriteriaSeeding>)
                return bicriteria_seed(space, points, count, kind.seed, config.objective);
            else
                return brute_force_opt(space, points, count, config.objective, kind.subset_cap);
        },
        config.kind);
}

}  // namespace metric_coreset
