#include "doctest.h"

#include <random>

#include "metric_coreset/coreset.hpp"
#include "metric_coreset/verify.hpp"
#include "support.hpp"

using namespace metric_coreset;
using testing_support::line;
namespace oracle = testing_support::oracle;

namespace {

AssignmentMap identity_map(const std::vector<PointId>& ids) {
    std::vector<AssignmentMap::Pair> pairs;
    for (auto p : ids) pairs.push_back({p, p});
    return AssignmentMap(pairs);
}

CoresetResult two_round(const MetricSpace& space, const std::vector<PointId>& ids, double eps,
                        std::size_t k, Objective obj, std::uint64_t seed) {
    CoresetParams p;
    p.eps = eps;
    p.k = k;
    p.partitions = 1 + seed % 2;
    p.objective = obj;
    p.t_solver = BruteForce{};
    p.seeds.partition = seed;
    return build_coreset_two_round(space, ids, p);
}

}  // namespace

TEST_CASE("bounded check on the identity coreset") {
    const auto space = line({0.0, 1.0, 4.0});
    const auto ids = iota_ids(3);
    const auto r = check_bounded(space, ids, WeightedPointSet::unit(ids), identity_map(ids), 0.01,
                                 1.0, Objective::median);
    CHECK(r.passed);
    CHECK(r.observed == 0.0);
}

TEST_CASE("bounded check rejects bad maps") {
    const auto space = line({0.0, 0.01, 4.0});
    const auto ids = iota_ids(3);
    const AssignmentMap map({{PointId{0}, PointId{0}}, {PointId{1}, PointId{0}},
                             {PointId{2}, PointId{2}}});
    const WeightedPointSet good({{PointId{0}, 2}, {PointId{2}, 1}});
    CHECK(check_bounded(space, ids, good, map, 0.1, 1.0, Objective::median).passed);

    const WeightedPointSet corrupt({{PointId{0}, 3}, {PointId{2}, 1}});
    const auto r = check_bounded(space, ids, corrupt, map, 0.1, 1.0, Objective::median);
    CHECK_FALSE(r.passed);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->find("0") != std::string::npos);

    const AssignmentMap partial({{PointId{0}, PointId{0}}, {PointId{2}, PointId{2}}});
    CHECK_THROWS_AS(check_bounded(space, ids, good, partial, 0.1, 1.0, Objective::median),
                    std::invalid_argument);

    // 0.01 proxy distance exceeds 0.001 * 1
    CHECK_FALSE(check_bounded(space, ids, good, map, 0.001, 1.0, Objective::median).passed);
}

TEST_CASE("approximate check on the identity coreset") {
    std::mt19937_64 rng(2);
    const auto space = testing_support::random_euclidean(rng, 10, 2);
    const auto ids = iota_ids(10);
    const auto r = check_approximate(space, ids, WeightedPointSet::unit(ids), 1e-6, 3,
                                     Objective::means);
    CHECK(r.passed);
    CHECK(r.observed == 0.0);

    const WeightedPointSet lopsided({{PointId{0}, 10}});
    CHECK_FALSE(check_approximate(space, ids, lopsided, 0.1, 2, Objective::median).passed);
}

TEST_CASE("centroid check with the optimum among candidates") {
    const auto space = line({0.0, 1.0, 10.0, 11.0});
    const auto ids = iota_ids(4);
    CHECK(check_centroid(space, ids, ids, 2, 0.0, 2.0, Objective::median).passed);
    const std::vector<PointId> far{PointId{0}, PointId{1}};
    CHECK_FALSE(check_centroid(space, ids, far, 2, 0.5, 2.0, Objective::median).passed);
}

TEST_CASE("size bound plug-ins") {
    CHECK(size_bound({1, 1, 1, 1, 1}) == 32.0);
    CHECK(size_bound({2, 1, 0.5, 1, 4}) == 256.0);
}

TEST_CASE("measured c") {
    const auto space = line({0.0, 1.0, 3.0});
    const std::vector<PointId> t{PointId{0}};
    CHECK(measured_c(space, iota_ids(3), t, 1.5) == 2.0);
    CHECK(measured_c(space, std::vector<PointId>{PointId{0}}, t, 0.0) == 0.0);
    CHECK(std::isinf(measured_c(space, iota_ids(3), t, 0.0)));
}

TEST_CASE("optimal restriction") {
    std::mt19937_64 rng(10);
    const auto space = testing_support::random_euclidean(rng, 12, 2);
    const auto ids = iota_ids(12);
    CHECK(check_opt_restriction(space, ids, WeightedPointSet::unit(ids), 2, Objective::median)
              .passed);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<WeightedPointSet::Entry> entries;
        for (auto p : ids)
            if (rng() % 2) entries.push_back({p, 1 + rng() % 3});
        if (entries.size() < 2) continue;
        const WeightedPointSet subset(entries);
        for (auto obj : {Objective::median, Objective::means}) {
            const auto r = check_opt_restriction(space, ids, subset, 2, obj);
            CHECK(r.passed);
            CHECK(r.bound == (obj == Objective::median ? 2.0 : 4.0));
        }
    }
}

TEST_CASE("squared triangle inequality") {
    std::mt19937_64 rng(13);
    const auto space = testing_support::random_euclidean(rng, 50, 3);
    for (double c : {0.1, 1.0, 10.0}) CHECK(check_squared_triangle(space, c, 1000, 1).passed);
}

TEST_CASE("property: two-round coresets satisfy every bound") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t n = 6 + rng() % 8;
        const std::size_t k = 1 + rng() % 3;
        const auto space = testing_support::random_euclidean(rng, n, 2, 2);
        const auto ids = iota_ids(n);
        const double eps = 0.1;
        for (auto obj : {Objective::median, Objective::means}) {
            const auto result = two_round(space, ids, eps, k, obj, trial);
            const double opt = oracle::opt_cost(space, ids, k, obj);
            const bool median = obj == Objective::median;
            const auto b = check_bounded(space, ids, result.coreset, result.assignment,
                                         median ? 2 * eps : 4 * eps * eps, opt, obj);
            CHECK_MESSAGE(b.passed, b.witness.value_or(""));
            const auto a = check_approximate(space, ids, result.coreset,
                                             median ? 2 * eps : 4 * eps * eps + 4 * eps, k, obj);
            CHECK_MESSAGE(a.passed, a.witness.value_or(""));
            const auto c = check_centroid(space, ids, result.coreset.points(), k,
                                          median ? 7 * eps : 27 * eps, opt, obj);
            CHECK_MESSAGE(c.passed, c.witness.value_or(""));
        }
    }
}

TEST_CASE("sampled mode falls back to exhaustive on small instances") {
    const auto space = line({0.0, 1.0, 10.0, 11.0});
    const auto ids = iota_ids(4);
    const WeightedPointSet c({{PointId{0}, 2}, {PointId{2}, 2}});
    const auto ex = check_approximate(space, ids, c, 1.0, 2, Objective::median);
    const auto sa = check_approximate(space, ids, c, 1.0, 2, Objective::median, Sampled{1000, 3});
    CHECK(ex.observed == sa.observed);
}
