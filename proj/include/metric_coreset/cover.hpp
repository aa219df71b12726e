#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "metric_coreset/metric.hpp"
#include "metric_coreset/random.hpp"

namespace metric_coreset {

struct CoverParams {
    double radius = 0.0;  ///< tolerance radius R
    double eps = 0.5;     ///< in (0, 1)
    double beta = 1.0;    ///< approximation guarantee of the target set, >= 1

    void validate() const;

    /// Ball radius eps/(2 beta) * max{R, d(q,T)} for a point at distance_to_targets.
    double threshold(double distance_to_targets) const;
};

/// Which remaining point the greedy cover selects next.
class SelectionPolicy {
public:
    static SelectionPolicy input_order() { return SelectionPolicy(std::nullopt); }
    static SelectionPolicy seeded_random(std::uint64_t seed) { return SelectionPolicy(seed); }

    bool is_random() const { return rng_.has_value(); }
    std::optional<std::uint64_t> seed() const { return seed_; }

    /// Index into `remaining` (non-empty) of the next point to select.
    std::size_t pick(std::span<const PointId> remaining);

private:
    explicit SelectionPolicy(std::optional<std::uint64_t> seed);

    std::optional<std::uint64_t> seed_;
    std::optional<Rng> rng_;
};

/// Proxy map from input points to coreset points, sorted by source point.
class AssignmentMap {
public:
    struct Pair {
        PointId point;
        PointId image;

        friend bool operator==(const Pair&, const Pair&) = default;
    };

    AssignmentMap() = default;
    explicit AssignmentMap(std::vector<Pair> pairs);

    /// Union of maps over disjoint domains.
    static AssignmentMap merge(std::span<const AssignmentMap> parts);

    std::span<const Pair> pairs() const { return pairs_; }
    std::size_t size() const { return pairs_.size(); }
    std::optional<PointId> image_of(PointId p) const;

    /// w(c) = |{p : tau(p) = c}|.
    WeightedPointSet induced_weights() const;

    friend bool operator==(const AssignmentMap&, const AssignmentMap&) = default;

private:
    std::vector<Pair> pairs_;
};

struct CoverResult {
    WeightedPointSet coreset;
    AssignmentMap assignment;
    std::vector<PointId> selection_order;
};

/**
 * Greedy ball cover. Repeatedly selects a remaining point p and removes every
 * remaining q with d(p,q) <= eps/(2 beta) * max{R, d(q,T)}, recording tau(q) = p.
 * The image of a point is fixed at removal time.
 *
 * `points` may be empty; `targets` must not be. d(q,T) is computed once per point.
 */
CoverResult cover_with_balls(const MetricSpace& space, std::span<const PointId> points,
                             std::span<const PointId> targets, const CoverParams& params,
                             SelectionPolicy policy = SelectionPolicy::input_order());

}  // namespace metric_coreset
