#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace metric_coreset {

/// Index of a point in a MetricSpace universe (a dataset row).
struct PointId {
    std::size_t value = 0;

    friend constexpr auto operator<=>(PointId, PointId) = default;
};

std::vector<PointId> iota_ids(std::size_t n);

enum class Objective { median, means };

std::string_view to_string(Objective objective);
Objective parse_objective(std::string_view text);

/// d for k-median, d^2 for k-means.
inline double objective_power(double d, Objective objective) {
    return objective == Objective::means ? d * d : d;
}

/// Raised when an exhaustive computation would exceed its configured budget.
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Distance oracle over a finite universe of points.
 *
 * Two storage kinds are supported: Euclidean coordinates (n x dim, row-major)
 * and an explicit symmetric distance matrix. Explicit matrices are validated
 * on construction; the triangle inequality is checked exhaustively when
 * n <= exhaustive_cap and on 1e5 random triples otherwise.
 */
class MetricSpace {
public:
    enum class Kind { euclidean, explicit_matrix };

    static constexpr std::size_t default_exhaustive_cap = 512;

    static MetricSpace euclidean(std::size_t dim, std::vector<double> coords);
    static MetricSpace explicit_matrix(std::size_t n, std::vector<double> full_matrix,
                                       std::size_t exhaustive_cap = default_exhaustive_cap);

    Kind kind() const { return kind_; }
    std::size_t size() const { return n_; }
    /// Coordinate dimension; 0 for explicit matrices.
    std::size_t dim() const { return dim_; }

    bool contains(PointId p) const { return p.value < n_; }
    void require(PointId p) const;

    double distance(PointId a, PointId b) const;

    std::span<const double> coordinates(PointId p) const;

private:
    MetricSpace(Kind kind, std::size_t n, std::size_t dim, std::vector<double> storage)
        : kind_(kind), n_(n), dim_(dim), storage_(std::move(storage)) {}

    Kind kind_ = Kind::euclidean;
    std::size_t n_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> storage_;
};

struct Nearest {
    PointId center;
    double distance = 0.0;
};

/// Closest member of `candidates` to `x`; ties go to the smallest PointId.
Nearest nearest(const MetricSpace& space, PointId x, std::span<const PointId> candidates);

/// Points with positive integer weights, kept sorted by PointId.
class WeightedPointSet {
public:
    struct Entry {
        PointId point;
        std::uint64_t weight = 1;

        friend bool operator==(const Entry&, const Entry&) = default;
    };

    WeightedPointSet() = default;
    explicit WeightedPointSet(std::vector<Entry> entries);

    static WeightedPointSet unit(std::span<const PointId> points);

    std::span<const Entry> entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    std::uint64_t total_weight() const;
    std::vector<PointId> points() const;

    bool contains(PointId p) const { return find(p) != nullptr; }
    /// 0 when the point is absent.
    std::uint64_t weight_of(PointId p) const;

    /// Disjoint union; throws if the two sets share a point.
    static WeightedPointSet disjoint_union(std::span<const WeightedPointSet> parts);

    friend bool operator==(const WeightedPointSet&, const WeightedPointSet&) = default;

private:
    const Entry* find(PointId p) const;

    std::vector<Entry> entries_;
};

/// nu (median) or mu (means) of a weighted set against a center set.
/// Summation runs in ascending PointId order.
double cost(const MetricSpace& space, const WeightedPointSet& points,
            std::span<const PointId> centers, Objective objective);

struct ProblemInstance {
    ProblemInstance(const MetricSpace& space, WeightedPointSet points, std::size_t k,
                    Objective objective);

    WeightedPointSet points;
    std::size_t k;
    Objective objective;
};

/// Throws std::invalid_argument if any id is out of range or repeated.
void require_distinct_ids(const MetricSpace& space, std::span<const PointId> ids,
                          std::string_view what);

}  // namespace metric_coreset
