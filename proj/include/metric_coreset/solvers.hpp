#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "metric_coreset/metric.hpp"

namespace metric_coreset {

struct LocalSearch {
    std::size_t t = 1;  ///< swap parameter; only feeds the reported guarantee
    std::size_t max_iters = 1000;
    double min_relative_gain = 1e-6;
};

struct BicriteriaSeeding {
    std::uint64_t seed = 0;
    double beta = 16.0;  ///< user-configured guarantee, no closed form exists
};

struct BruteForce {
    std::uint64_t subset_cap = 2'000'000;
};

using SolverKind = std::variant<LocalSearch, BicriteriaSeeding, BruteForce>;

struct SolverConfig {
    SolverKind kind = LocalSearch{};
    Objective objective = Objective::median;

    void validate() const;
};

std::string solver_name(const SolverKind& kind);

/// Proven approximation factor of the configured solver: 1 for brute force,
/// 3+2/t (median) or 5+4/t (means) for local search, the configured beta for
/// bi-criteria seeding.
double solver_guarantee(const SolverConfig& config);

struct Solution {
    std::vector<PointId> centers;  ///< sorted ascending
    double cost = 0.0;
    std::size_t iterations = 0;
    /// Cost after seeding and after every applied swap (local search only).
    std::vector<double> cost_history;
};

/// Single-swap local search over the points of `points`, seeded by
/// bicriteria_seed(m = k, seed 0). Each iteration applies the best improving
/// swap (ties by smallest (out, in) pair) if it lowers the cost by a relative
/// factor of at least min_relative_gain.
Solution local_search(const MetricSpace& space, const WeightedPointSet& points, std::size_t k,
                      const LocalSearch& config, Objective objective);

/// Weighted D^z sampling (z = 1 median, z = 2 means) of m distinct centers.
Solution bicriteria_seed(const MetricSpace& space, const WeightedPointSet& points, std::size_t m,
                         std::uint64_t seed, Objective objective);

/// Exact optimum over all k-subsets; ties go to the lexicographically smallest
/// center tuple. Throws ResourceLimitError when C(n,k) exceeds the cap.
Solution brute_force_opt(const MetricSpace& space, const WeightedPointSet& points, std::size_t k,
                         Objective objective, std::uint64_t subset_cap = BruteForce{}.subset_cap);

/// Dispatches to the configured solver asking for `count` centers.
Solution solve(const MetricSpace& space, const WeightedPointSet& points, std::size_t count,
               const SolverConfig& config);

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

}  // namespace metric_coreset
