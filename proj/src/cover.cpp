#include "metric_coreset/cover.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace metric_coreset {

void CoverParams::validate() const {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("cover eps must lie in (0,1), got " + std::to_string(eps));
    if (!(beta >= 1.0) || !std::isfinite(beta))
        throw std::invalid_argument("cover beta must be >= 1, got " + std::to_string(beta));
    if (!(radius >= 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("cover radius must be >= 0, got " + std::to_string(radius));
}

double CoverParams::threshold(double distance_to_targets) const {
    return eps / (2.0 * beta) * std::max(radius, distance_to_targets);
}

SelectionPolicy::SelectionPolicy(std::optional<std::uint64_t> seed) : seed_(seed) {
    if (seed) rng_.emplace(*seed);
}

std::size_t SelectionPolicy::pick(std::span<const PointId> remaining) {
    if (remaining.empty()) throw std::invalid_argument("pick from an empty set");
    if (rng_) return static_cast<std::size_t>(rng_->index(remaining.size()));
    return static_cast<std::size_t>(std::min_element(remaining.begin(), remaining.end()) -
                                    remaining.begin());
}

AssignmentMap::AssignmentMap(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
    std::sort(pairs_.begin(), pairs_.end(),
              [](const Pair& a, const Pair& b) { return a.point < b.point; });
    for (std::size_t i = 1; i < pairs_.size(); ++i)
        if (pairs_[i].point == pairs_[i - 1].point)
            throw std::invalid_argument("assignment map lists point " +
                                        std::to_string(pairs_[i].point.value) + " twice");
}

AssignmentMap AssignmentMap::merge(std::span<const AssignmentMap> parts) {
    std::vector<Pair> all;
    for (const auto& part : parts) all.insert(all.end(), part.pairs_.begin(), part.pairs_.end());
    return AssignmentMap(std::move(all));
}

std::optional<PointId> AssignmentMap::image_of(PointId p) const {
    auto it = std::lower_bound(pairs_.begin(), pairs_.end(), p,
                               [](const Pair& pair, PointId id) { return pair.point < id; });
    if (it == pairs_.end() || it->point != p) return std::nullopt;
    return it->image;
}

WeightedPointSet AssignmentMap::induced_weights() const {
    std::map<PointId, std::uint64_t> counts;
    for (const auto& pair : pairs_) ++counts[pair.image];
    std::vector<WeightedPointSet::Entry> entries;
    entries.reserve(counts.size());
    for (const auto& [point, weight] : counts) entries.push_back({point, weight});
    return WeightedPointSet(std::move(entries));
}

CoverResult cover_with_balls(const MetricSpace& space, std::span<const PointId> points,
                             std::span<const PointId> targets, const CoverParams& params,
                             SelectionPolicy policy) {
    params.validate();
    if (targets.empty()) throw std::invalid_argument("cover_with_balls: empty target set");
    require_distinct_ids(space, points, "cover input");
    for (const PointId t : targets) space.require(t);

    struct Remaining {
        PointId point;
        double threshold;
    };
    std::vector<Remaining> remaining;
    remaining.reserve(points.size());
    for (const PointId q : points)
        remaining.push_back({q, params.threshold(nearest(space, q, targets).distance)});

    std::vector<PointId> order;
    std::vector<AssignmentMap::Pair> pairs;
    std::vector<WeightedPointSet::Entry> coreset;
    pairs.reserve(points.size());

    std::vector<PointId> ids;
    while (!remaining.empty()) {
        ids.clear();
        for (const auto& r : remaining) ids.push_back(r.point);
        const PointId selected = remaining[policy.pick(ids)].point;
        order.push_back(selected);

        std::uint64_t weight = 0;
        std::size_t kept = 0;
        for (const auto& r : remaining) {
            if (space.distance(selected, r.point) <= r.threshold) {
                pairs.push_back({r.point, selected});
                ++weight;
            } else {
                remaining[kept++] = r;
            }
        }
        remaining.resize(kept);
        coreset.push_back({selected, weight});
    }

    return CoverResult{WeightedPointSet(std::move(coreset)), AssignmentMap(std::move(pairs)),
                       std::move(order)};
}

}  // namespace metric_coreset
