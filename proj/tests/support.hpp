#pragma once

// Test-only instance generators and an exhaustive optimum oracle written
// independently of the library solvers (plain loops over dense distances).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "metric_coreset/metric.hpp"

namespace testing_support {

using metric_coreset::MetricSpace;
using metric_coreset::Objective;
using metric_coreset::PointId;

inline MetricSpace line(const std::vector<double>& xs) {
    return MetricSpace::euclidean(1, xs);
}

inline std::vector<PointId> all_ids(const MetricSpace& space) {
    return metric_coreset::iota_ids(space.size());
}

/// n points in [0,1)^dim, optionally concentrated around `clusters` random centers.
inline MetricSpace random_euclidean(std::mt19937_64& rng, std::size_t n, std::size_t dim,
                                    std::size_t clusters = 0) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 0.03);
    std::vector<double> centers(clusters * dim);
    for (double& c : centers) c = unit(rng);
    std::vector<double> coords;
    coords.reserve(n * dim);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = clusters ? rng() % clusters : 0;
        for (std::size_t d = 0; d < dim; ++d)
            coords.push_back(clusters ? centers[c * dim + d] + noise(rng) : unit(rng));
    }
    return MetricSpace::euclidean(dim, std::move(coords));
}

/// Shortest-path metric of a random complete graph with edge lengths in [1, 10).
inline MetricSpace random_graph_metric(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> length(1.0, 10.0);
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) d[i * n + j] = d[j * n + i] = length(rng);
    for (std::size_t via = 0; via < n; ++via)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                d[i * n + j] = std::min(d[i * n + j], d[i * n + via] + d[via * n + j]);
    return MetricSpace::explicit_matrix(n, std::move(d));
}

namespace oracle {

struct Weighted {
    PointId point;
    double weight;
};

inline double power(double d, Objective objective) {
    return objective == Objective::means ? d * d : d;
}

inline double cost(const MetricSpace& space, const std::vector<Weighted>& points,
                   const std::vector<PointId>& centers, Objective objective) {
    double total = 0.0;
    for (const auto& p : points) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : centers) best = std::min(best, space.distance(p.point, c));
        total += p.weight * power(best, objective);
    }
    return total;
}

inline std::vector<Weighted> unit(const std::vector<PointId>& ids) {
    std::vector<Weighted> out;
    for (const auto& p : ids) out.push_back({p, 1.0});
    return out;
}

/// Calls fn(chosen) for every size-k subset of `pool`, in lexicographic order.
template <class Fn>
void for_each_subset(const std::vector<PointId>& pool, std::size_t k, Fn&& fn) {
    std::vector<PointId> chosen;
    std::function<void(std::size_t)> recurse = [&](std::size_t start) {
        if (chosen.size() == k) {
            fn(chosen);
            return;
        }
        for (std::size_t i = start; i + (k - chosen.size()) <= pool.size(); ++i) {
            chosen.push_back(pool[i]);
            recurse(i + 1);
            chosen.pop_back();
        }
    };
    recurse(0);
}

struct Optimum {
    double cost = std::numeric_limits<double>::infinity();
    std::vector<PointId> centers;
};

/// Cheapest center set of size exactly min(k, |candidates|).
inline Optimum optimum(const MetricSpace& space, const std::vector<Weighted>& points,
                       const std::vector<PointId>& candidates, std::size_t k,
                       Objective objective) {
    Optimum best;
    for_each_subset(candidates, std::min(k, candidates.size()),
                    [&](const std::vector<PointId>& centers) {
                        const double c = cost(space, points, centers, objective);
                        if (c < best.cost) best = {c, centers};
                    });
    return best;
}

inline double opt_cost(const MetricSpace& space, const std::vector<Weighted>& points,
                       const std::vector<PointId>& candidates, std::size_t k,
                       Objective objective) {
    return optimum(space, points, candidates, k, objective).cost;
}

inline double opt_cost(const MetricSpace& space, const std::vector<PointId>& points, std::size_t k,
                       Objective objective) {
    return opt_cost(space, unit(points), points, k, objective);
}

}  // namespace oracle

}  // namespace testing_support
