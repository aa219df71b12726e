#include "metric_coreset/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "metric_coreset/random.hpp"

namespace metric_coreset {

namespace {

constexpr double kTriangleSlack = 1e-9;
constexpr std::size_t kSpotCheckTriples = 100000;

std::string describe(PointId p) { return "point " + std::to_string(p.value); }

}  // namespace

std::vector<PointId> iota_ids(std::size_t n) {
    std::vector<PointId> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = PointId{i};
    return ids;
}

std::string_view to_string(Objective objective) {
    return objective == Objective::median ? "median" : "means";
}

Objective parse_objective(std::string_view text) {
    if (text == "median") return Objective::median;
    if (text == "means") return Objective::means;
    throw std::invalid_argument("unknown objective '" + std::string(text) +
                                "' (expected median or means)");
}

MetricSpace MetricSpace::euclidean(std::size_t dim, std::vector<double> coords) {
    if (dim == 0) throw std::invalid_argument("euclidean space needs dim >= 1");
    if (coords.size() % dim != 0)
        throw std::invalid_argument("coordinate table size is not a multiple of dim");
    for (double v : coords)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite coordinate");
    const std::size_t n = coords.size() / dim;
    return MetricSpace(Kind::euclidean, n, dim, std::move(coords));
}

MetricSpace MetricSpace::explicit_matrix(std::size_t n, std::vector<double> full,
                                         std::size_t exhaustive_cap) {
    if (full.size() != n * n) throw std::invalid_argument("distance matrix must be n x n");
    auto at = [&](std::size_t i, std::size_t j) { return full[i * n + j]; };
    for (std::size_t i = 0; i < n; ++i) {
        if (at(i, i) != 0.0)
            throw std::invalid_argument("distance matrix diagonal must be zero (row " +
                                        std::to_string(i) + ")");
        for (std::size_t j = 0; j < i; ++j) {
            const double d = at(i, j);
            if (!std::isfinite(d) || d < 0.0)
                throw std::invalid_argument("distance matrix entries must be finite and >= 0");
            if (d != at(j, i))
                throw std::invalid_argument("distance matrix is not symmetric at (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
        }
    }

    auto check = [&](std::size_t x, std::size_t y, std::size_t z) {
        const double direct = at(x, y);
        const double detour = at(x, z) + at(z, y);
        if (direct > detour * (1.0 + kTriangleSlack)) {
            std::ostringstream msg;
            msg << "triangle inequality violated: d(" << x << "," << y << ")=" << direct
                << " > d(" << x << "," << z << ")+d(" << z << "," << y << ")=" << detour;
            throw std::invalid_argument(msg.str());
        }
    };

    if (n <= exhaustive_cap) {
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = x + 1; y < n; ++y)
                for (std::size_t z = 0; z < n; ++z) check(x, y, z);
    } else {
        Rng rng(0x7269616eULL);
        for (std::size_t t = 0; t < kSpotCheckTriples; ++t)
            check(rng.index(n), rng.index(n), rng.index(n));
    }
    return MetricSpace(Kind::explicit_matrix, n, 0, std::move(full));
}

void MetricSpace::require(PointId p) const {
    if (!contains(p))
        throw std::invalid_argument(describe(p) + " out of range (universe size " +
                                    std::to_string(n_) + ")");
}

double MetricSpace::distance(PointId a, PointId b) const {
    require(a);
    require(b);
    if (a == b) return 0.0;
    if (kind_ == Kind::explicit_matrix) return storage_[a.value * n_ + b.value];
    const double* x = storage_.data() + a.value * dim_;
    const double* y = storage_.data() + b.value * dim_;
    double sum = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        const double diff = x[i] - y[i];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

std::span<const double> MetricSpace::coordinates(PointId p) const {
    if (kind_ != Kind::euclidean)
        throw std::logic_error("coordinates() requires a euclidean space");
    require(p);
    return std::span<const double>(storage_).subspan(p.value * dim_, dim_);
}

Nearest nearest(const MetricSpace& space, PointId x, std::span<const PointId> candidates) {
    if (candidates.empty()) throw std::invalid_argument("nearest: empty candidate set");
    Nearest best{candidates.front(), space.distance(x, candidates.front())};
    for (const PointId y : candidates.subspan(1)) {
        const double d = space.distance(x, y);
        if (d < best.distance || (d == best.distance && y < best.center)) best = {y, d};
    }
    return best;
}

WeightedPointSet::WeightedPointSet(std::vector<Entry> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.point < b.point; });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].weight == 0)
            throw std::invalid_argument("weight of " + describe(entries_[i].point) +
                                        " must be >= 1");
        if (i > 0 && entries_[i].point == entries_[i - 1].point)
            throw std::invalid_argument("duplicate " + describe(entries_[i].point) +
                                        " in weighted set");
    }
}

WeightedPointSet WeightedPointSet::unit(std::span<const PointId> points) {
    std::vector<Entry> entries;
    entries.reserve(points.size());
    for (const PointId p : points) entries.push_back({p, 1});
    return WeightedPointSet(std::move(entries));
}

std::uint64_t WeightedPointSet::total_weight() const {
    std::uint64_t total = 0;
    for (const auto& e : entries_) total += e.weight;
    return total;
}

std::vector<PointId> WeightedPointSet::points() const {
    std::vector<PointId> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.point);
    return out;
}

const WeightedPointSet::Entry* WeightedPointSet::find(PointId p) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), p,
                               [](const Entry& e, PointId id) { return e.point < id; });
    if (it == entries_.end() || it->point != p) return nullptr;
    return &*it;
}

std::uint64_t WeightedPointSet::weight_of(PointId p) const {
    const Entry* e = find(p);
    return e ? e->weight : 0;
}

WeightedPointSet WeightedPointSet::disjoint_union(std::span<const WeightedPointSet> parts) {
    std::vector<Entry> all;
    for (const auto& part : parts) all.insert(all.end(), part.entries_.begin(), part.entries_.end());
    return WeightedPointSet(std::move(all));
}

double cost(const MetricSpace& space, const WeightedPointSet& points,
            std::span<const PointId> centers, Objective objective) {
    if (centers.empty()) throw std::invalid_argument("cost: empty center set");
    double total = 0.0;
    for (const auto& e : points.entries()) {
        const double d = nearest(space, e.point, centers).distance;
        total += static_cast<double>(e.weight) * objective_power(d, objective);
    }
    return total;
}

ProblemInstance::ProblemInstance(const MetricSpace& space, WeightedPointSet pts, std::size_t k_,
                                 Objective obj)
    : points(std::move(pts)), k(k_), objective(obj) {
    if (k == 0) throw std::invalid_argument("k must be positive");
    if (k > points.size())
        throw std::invalid_argument("k = " + std::to_string(k) + " exceeds the " +
                                    std::to_string(points.size()) + " instance points");
    for (const auto& e : points.entries()) space.require(e.point);
}

void require_distinct_ids(const MetricSpace& space, std::span<const PointId> ids,
                          std::string_view what) {
    std::vector<PointId> sorted(ids.begin(), ids.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        space.require(sorted[i]);
        if (i > 0 && sorted[i] == sorted[i - 1])
            throw std::invalid_argument(std::string(what) + " contains duplicate " +
                                        describe(sorted[i]));
    }
}

}  // namespace metric_coreset
