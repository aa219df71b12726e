#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "metric_coreset/cover.hpp"
#include "metric_coreset/metric.hpp"
#include "metric_coreset/solvers.hpp"

namespace metric_coreset {

/// Relative slack applied to every inequality check.
inline constexpr double kRelativeSlack = 1e-9;

inline bool within(double lhs, double rhs) { return lhs <= rhs + kRelativeSlack * std::abs(rhs); }

struct PropertyReport {
    std::string property;
    bool passed = true;
    double observed = 0.0;  ///< worst value of the checked quantity
    double bound = 0.0;     ///< what it was compared against
    std::optional<std::string> witness;  ///< always set on failure
};

/**
 * Bounded-coreset check: the map must be total over `points`, map into the
 * coreset, and reproduce its weights; then sum_x d(x, tau(x))^z must not exceed
 * eps_bound * opt_cost (z = 1 median, 2 means).
 */
PropertyReport check_bounded(const MetricSpace& space, std::span<const PointId> points,
                             const WeightedPointSet& coreset, const AssignmentMap& map,
                             double eps_bound, double opt_cost, Objective objective);

struct Exhaustive {};
struct Sampled {
    std::size_t count = 1000;
    std::uint64_t seed = 0;
};
using SubsetMode = std::variant<Exhaustive, Sampled>;

/// |cost_P(S) - cost_C(S)| <= eps_bound * cost_P(S) over k-subsets S of P.
PropertyReport check_approximate(const MetricSpace& space, std::span<const PointId> points,
                                 const WeightedPointSet& coreset, double eps_bound, std::size_t k,
                                 Objective objective, SubsetMode mode = Exhaustive{},
                                 std::uint64_t subset_cap = BruteForce{}.subset_cap);

/// min over k-subsets X of `candidates` of cost_P(X) <= (1 + eps_bound) * opt_cost.
PropertyReport check_centroid(const MetricSpace& space, std::span<const PointId> points,
                              std::span<const PointId> candidates, std::size_t k, double eps_bound,
                              double opt_cost, Objective objective,
                              std::uint64_t subset_cap = BruteForce{}.subset_cap);

struct SizeBoundParams {
    double target_size = 1;  ///< |T|
    double beta = 1;
    double eps = 1;
    double dimension = 1;    ///< doubling dimension assumed for the data
    double c = 1;            ///< max_q d(q,T) / R
};

/// |T| * (16 beta / eps)^D * (log2 max(c,1) + 2).
double size_bound(const SizeBoundParams& params);

/// max_q d(q,T) / R for a cover run; +inf when R = 0 and some point is off T.
double measured_c(const MetricSpace& space, std::span<const PointId> points,
                  std::span<const PointId> targets, double radius);

/// cost_C(opt of (C,k)) <= f * cost_C(opt of (P,k)), f = 2 median / 4 means.
PropertyReport check_opt_restriction(const MetricSpace& space, std::span<const PointId> points,
                                     const WeightedPointSet& subset, std::size_t k,
                                     Objective objective,
                                     std::uint64_t subset_cap = BruteForce{}.subset_cap);

/// Per-point cover radius, weight conservation and the selection anti-chain.
PropertyReport check_cover(const MetricSpace& space, std::span<const PointId> points,
                           std::span<const PointId> targets, const CoverParams& params,
                           const CoverResult& result);

/// d(x,y)^2 <= (1+1/c) d(x,z)^2 + (1+c) d(z,y)^2 on `triples` random triples.
PropertyReport check_squared_triangle(const MetricSpace& space, double c, std::size_t triples,
                                      std::uint64_t seed);

}  // namespace metric_coreset
