#include "metric_coreset/verify.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "metric_coreset/random.hpp"

namespace metric_coreset {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string id_list(std::span<const PointId> ids) {
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? "," : "") << ids[i].value;
    out << '}';
    return out.str();
}

double safe_ratio(double num, double den) {
    if (den > 0.0) return num / den;
    return num > 0.0 ? kInf : 0.0;
}

// Calls visit(subset) for every k-subset of `pool` in lexicographic order.
void for_each_subset(std::span<const PointId> pool, std::size_t k,
                     const std::function<void(std::span<const PointId>)>& visit) {
    const std::size_t n = pool.size();
    if (k == 0 || k > n) return;
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    std::vector<PointId> subset(k);
    for (;;) {
        for (std::size_t i = 0; i < k; ++i) subset[i] = pool[pick[i]];
        visit(subset);
        std::size_t pos = k;
        while (pos > 0 && pick[pos - 1] == n - k + pos - 1) --pos;
        if (pos == 0) return;
        ++pick[pos - 1];
        for (std::size_t j = pos; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
}

void require_cap(std::size_t n, std::size_t k, std::uint64_t cap, const char* what) {
    if (binomial(n, k) > cap)
        throw ResourceLimitError(std::string(what) + ": C(" + std::to_string(n) + "," +
                                 std::to_string(k) + ") exceeds the subset cap");
}

std::vector<PointId> sorted_copy(std::span<const PointId> ids) {
    std::vector<PointId> out(ids.begin(), ids.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

PropertyReport check_bounded(const MetricSpace& space, std::span<const PointId> points,
                             const WeightedPointSet& coreset, const AssignmentMap& map,
                             double eps_bound, double opt_cost, Objective objective) {
    PropertyReport report{"bounded-coreset", true, 0.0, eps_bound, std::nullopt};
    const std::vector<PointId> domain = sorted_copy(points);
    if (map.size() != domain.size())
        throw std::invalid_argument("assignment map has " + std::to_string(map.size()) +
                                    " entries for " + std::to_string(domain.size()) + " points");

    std::map<PointId, std::uint64_t> preimages;
    double total = 0.0;
    double worst = -1.0;
    PointId worst_point{};
    for (const PointId p : domain) {
        const auto image = map.image_of(p);
        if (!image)
            throw std::invalid_argument("assignment map is not total: point " +
                                        std::to_string(p.value) + " has no image");
        if (!coreset.contains(*image)) {
            report.passed = false;
            report.witness = "point " + std::to_string(p.value) + " maps to " +
                             std::to_string(image->value) + ", which is not in the coreset";
            return report;
        }
        ++preimages[*image];
        const double d = objective_power(space.distance(p, *image), objective);
        total += d;
        if (d > worst) {
            worst = d;
            worst_point = p;
        }
    }
    for (const auto& e : coreset.entries()) {
        const std::uint64_t count = preimages.count(e.point) ? preimages[e.point] : 0;
        if (count != e.weight) {
            report.passed = false;
            report.witness = "coreset point " + std::to_string(e.point.value) + " has weight " +
                             std::to_string(e.weight) + " but " + std::to_string(count) +
                             " preimages";
            return report;
        }
    }

    report.observed = safe_ratio(total, opt_cost);
    if (!within(total, eps_bound * opt_cost)) {
        report.passed = false;
        report.witness = "proxy cost " + std::to_string(total) + " > " +
                         std::to_string(eps_bound * opt_cost) + "; farthest proxy at point " +
                         std::to_string(worst_point.value);
    }
    return report;
}

PropertyReport check_approximate(const MetricSpace& space, std::span<const PointId> points,
                                 const WeightedPointSet& coreset, double eps_bound, std::size_t k,
                                 Objective objective, SubsetMode mode, std::uint64_t subset_cap) {
    PropertyReport report{"approximate-coreset", true, 0.0, eps_bound, std::nullopt};
    const std::vector<PointId> pool = sorted_copy(points);
    const WeightedPointSet full = WeightedPointSet::unit(pool);
    if (k < 1 || k > pool.size()) throw std::invalid_argument("check_approximate: bad k");

    auto examine = [&](std::span<const PointId> subset) {
        const double exact = cost(space, full, subset, objective);
        const double approx = cost(space, coreset, subset, objective);
        const double gap = std::abs(exact - approx);
        const double ratio = safe_ratio(gap, exact);
        const bool ok = within(gap, eps_bound * exact);
        report.observed = std::max(report.observed, ratio);
        if (!ok && report.passed) {
            report.passed = false;
            report.witness = "solution " + id_list(subset) + ": |" + std::to_string(exact) +
                             " - " + std::to_string(approx) + "| exceeds " +
                             std::to_string(eps_bound) + " * " + std::to_string(exact);
        }
    };

    const std::uint64_t total = binomial(pool.size(), k);
    const auto* sampled = std::get_if<Sampled>(&mode);
    if (sampled == nullptr || sampled->count >= total) {
        require_cap(pool.size(), k, subset_cap, "check_approximate");
        for_each_subset(pool, k, examine);
        return report;
    }

    Rng rng(sampled->seed);
    std::vector<PointId> scratch = pool;
    std::vector<PointId> subset(k);
    for (std::size_t s = 0; s < sampled->count; ++s) {
        for (std::size_t i = 0; i < k; ++i)
            std::swap(scratch[i], scratch[i + rng.index(scratch.size() - i)]);
        std::copy_n(scratch.begin(), k, subset.begin());
        std::sort(subset.begin(), subset.end());
        examine(subset);
    }
    return report;
}

PropertyReport check_centroid(const MetricSpace& space, std::span<const PointId> points,
                              std::span<const PointId> candidates, std::size_t k, double eps_bound,
                              double opt_cost, Objective objective, std::uint64_t subset_cap) {
    PropertyReport report{"centroid-set", true, 0.0, 1.0 + eps_bound, std::nullopt};
    const std::vector<PointId> pool = sorted_copy(candidates);
    if (pool.empty()) throw std::invalid_argument("check_centroid: empty candidate set");
    const std::size_t size = std::min(k, pool.size());
    require_cap(pool.size(), size, subset_cap, "check_centroid");
    const WeightedPointSet full = WeightedPointSet::unit(sorted_copy(points));

    double best = kInf;
    std::vector<PointId> best_subset;
    for_each_subset(pool, size, [&](std::span<const PointId> subset) {
        const double c = cost(space, full, subset, objective);
        if (c < best) {
            best = c;
            best_subset.assign(subset.begin(), subset.end());
        }
    });
    report.observed = safe_ratio(best, opt_cost);
    if (!within(best, (1.0 + eps_bound) * opt_cost)) {
        report.passed = false;
        report.witness = "best candidate solution " + id_list(best_subset) + " costs " +
                         std::to_string(best) + " against optimum " + std::to_string(opt_cost);
    }
    return report;
}

double size_bound(const SizeBoundParams& p) {
    return p.target_size * std::pow(16.0 * p.beta / p.eps, p.dimension) *
           (std::log2(std::max(p.c, 1.0)) + 2.0);
}

double measured_c(const MetricSpace& space, std::span<const PointId> points,
                  std::span<const PointId> targets, double radius) {
    double far = 0.0;
    for (const PointId q : points) far = std::max(far, nearest(space, q, targets).distance);
    return safe_ratio(far, radius);
}

PropertyReport check_opt_restriction(const MetricSpace& space, std::span<const PointId> points,
                                     const WeightedPointSet& subset, std::size_t k,
                                     Objective objective, std::uint64_t subset_cap) {
    const double factor = objective == Objective::median ? 2.0 : 4.0;
    PropertyReport report{"optimal-restriction", true, 0.0, factor, std::nullopt};
    const std::vector<PointId> pool = sorted_copy(points);
    for (const auto& e : subset.entries())
        if (!std::binary_search(pool.begin(), pool.end(), e.point))
            throw std::invalid_argument("check_opt_restriction: subset point " +
                                        std::to_string(e.point.value) + " is not in P");

    const Solution whole = brute_force_opt(space, WeightedPointSet::unit(pool), k, objective,
                                           subset_cap);
    const Solution restricted =
        brute_force_opt(space, subset, std::min(k, subset.size()), objective, subset_cap);
    const double against_whole = cost(space, subset, whole.centers, objective);
    report.observed = safe_ratio(restricted.cost, against_whole);
    if (!within(restricted.cost, factor * against_whole)) {
        report.passed = false;
        report.witness = "restricted optimum " + id_list(restricted.centers) + " costs " +
                         std::to_string(restricted.cost) + " > " + std::to_string(factor) +
                         " * " + std::to_string(against_whole);
    }
    return report;
}

PropertyReport check_cover(const MetricSpace& space, std::span<const PointId> points,
                           std::span<const PointId> targets, const CoverParams& params,
                           const CoverResult& result) {
    PropertyReport report{"cover", true, 0.0, 1.0, std::nullopt};
    auto fail = [&](std::string why) {
        if (report.passed) {
            report.passed = false;
            report.witness = std::move(why);
        }
    };

    if (result.assignment.size() != points.size())
        fail("assignment covers " + std::to_string(result.assignment.size()) + " of " +
             std::to_string(points.size()) + " points");
    if (result.coreset.total_weight() != points.size())
        fail("total weight " + std::to_string(result.coreset.total_weight()) + " != |P| = " +
             std::to_string(points.size()));

    std::map<PointId, std::uint64_t> preimages;
    for (const PointId q : points) {
        const auto image = result.assignment.image_of(q);
        if (!image) {
            fail("point " + std::to_string(q.value) + " has no image");
            continue;
        }
        ++preimages[*image];
        const double limit = params.threshold(nearest(space, q, targets).distance);
        const double d = space.distance(q, *image);
        report.observed = std::max(report.observed, safe_ratio(d, limit));
        if (!within(d, limit))
            fail("point " + std::to_string(q.value) + " is " + std::to_string(d) +
                 " from its image, limit " + std::to_string(limit));
    }
    for (const auto& e : result.coreset.entries()) {
        if (result.assignment.image_of(e.point) != e.point)
            fail("coreset point " + std::to_string(e.point.value) + " does not map to itself");
        if (preimages[e.point] != e.weight)
            fail("coreset point " + std::to_string(e.point.value) + " has weight " +
                 std::to_string(e.weight) + " but " + std::to_string(preimages[e.point]) +
                 " preimages");
    }

    const auto& order = result.selection_order;
    for (std::size_t j = 0; j < order.size(); ++j) {
        const double limit = params.threshold(nearest(space, order[j], targets).distance);
        for (std::size_t i = 0; i < j; ++i)
            if (space.distance(order[i], order[j]) <= limit)
                fail("selected point " + std::to_string(order[j].value) +
                     " lies inside the ball of earlier point " + std::to_string(order[i].value));
    }
    return report;
}

PropertyReport check_squared_triangle(const MetricSpace& space, double c, std::size_t triples,
                                      std::uint64_t seed) {
    if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
    if (space.size() == 0) throw std::invalid_argument("empty metric space");
    PropertyReport report{"squared-triangle", true, 0.0, 1.0, std::nullopt};
    Rng rng(seed);
    for (std::size_t t = 0; t < triples; ++t) {
        const PointId x{rng.index(space.size())}, y{rng.index(space.size())},
            z{rng.index(space.size())};
        const double dxy = space.distance(x, y), dxz = space.distance(x, z),
                     dzy = space.distance(z, y);
        const double lhs = dxy * dxy;
        const double rhs = (1.0 + 1.0 / c) * dxz * dxz + (1.0 + c) * dzy * dzy;
        report.observed = std::max(report.observed, safe_ratio(lhs, rhs));
        if (!within(lhs, rhs) && report.passed) {
            report.passed = false;
            report.witness = "triple (" + std::to_string(x.value) + "," +
                             std::to_string(y.value) + "," + std::to_string(z.value) + ")";
        }
    }
    return report;
}

}  // namespace metric_coreset
