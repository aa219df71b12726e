#include "doctest.h"

#include <random>

#include "metric_coreset/solvers.hpp"
#include "support.hpp"

using namespace metric_coreset;
using testing_support::line;
namespace oracle = testing_support::oracle;

TEST_CASE("brute force on a small line") {
    const auto space = line({0.0, 1.0, 10.0, 11.0});
    const auto p = WeightedPointSet::unit(iota_ids(4));
    const auto s = brute_force_opt(space, p, 2, Objective::median);
    CHECK(s.cost == 2.0);
    CHECK(s.centers.size() == 2);

    CHECK(brute_force_opt(space, p, 4, Objective::median).cost == 0.0);
    CHECK(brute_force_opt(space, p, 2, Objective::means).cost == 2.0);
}

TEST_CASE("weights pull the center") {
    const auto space = line({0.0, 10.0});
    const WeightedPointSet p({{PointId{0}, 3}, {PointId{1}, 1}});
    const auto s = brute_force_opt(space, p, 1, Objective::median);
    REQUIRE(s.centers.size() == 1);
    CHECK(s.centers[0] == PointId{0});
    CHECK(s.cost == 10.0);
}

TEST_CASE("brute force ties go to the smallest tuple") {
    const auto space = line({0.0, 2.0});
    const auto s = brute_force_opt(space, WeightedPointSet::unit(iota_ids(2)), 1,
                                   Objective::median);
    CHECK(s.centers == std::vector<PointId>{PointId{0}});
}

TEST_CASE("brute force refuses oversized enumerations") {
    std::mt19937_64 rng(1);
    const auto space = testing_support::random_euclidean(rng, 40, 2);
    CHECK_THROWS_AS(brute_force_opt(space, WeightedPointSet::unit(iota_ids(40)), 10,
                                    Objective::median),
                    ResourceLimitError);
    CHECK_THROWS_AS(brute_force_opt(space, WeightedPointSet::unit(iota_ids(40)), 3,
                                    Objective::median, 100),
                    ResourceLimitError);
}

TEST_CASE("binomial") {
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(40, 3) == 9880);
    CHECK(binomial(3, 5) == 0);
    CHECK(binomial(1000, 500) == UINT64_MAX);
}

TEST_CASE("bicriteria seeding finds both clusters") {
    const auto space = line({0.0, 0.1, 100.0, 100.1});
    const auto p = WeightedPointSet::unit(iota_ids(4));
    int split = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = bicriteria_seed(space, p, 2, seed, Objective::median);
        REQUIRE(s.centers.size() == 2);
        if (s.cost < 1.0) ++split;
    }
    CHECK(split >= 19);
    CHECK(bicriteria_seed(space, p, 4, 0, Objective::means).cost == 0.0);
    CHECK_THROWS_AS(bicriteria_seed(space, p, 5, 0, Objective::median), std::invalid_argument);
}

TEST_CASE("solvers are deterministic") {
    std::mt19937_64 rng(3);
    const auto space = testing_support::random_euclidean(rng, 60, 2, 4);
    const auto p = WeightedPointSet::unit(iota_ids(60));
    const auto a = bicriteria_seed(space, p, 5, 17, Objective::means);
    const auto b = bicriteria_seed(space, p, 5, 17, Objective::means);
    CHECK(a.centers == b.centers);
    const auto c = local_search(space, p, 4, LocalSearch{}, Objective::median);
    const auto d = local_search(space, p, 4, LocalSearch{}, Objective::median);
    CHECK(c.centers == d.centers);
    CHECK(c.cost == d.cost);
}

TEST_CASE("local search never increases cost") {
    std::mt19937_64 rng(8);
    const auto space = testing_support::random_euclidean(rng, 80, 2);
    const auto s = local_search(space, WeightedPointSet::unit(iota_ids(80)), 5, LocalSearch{},
                                Objective::means);
    REQUIRE(!s.cost_history.empty());
    for (std::size_t i = 1; i < s.cost_history.size(); ++i)
        CHECK(s.cost_history[i] < s.cost_history[i - 1]);
    CHECK(s.cost == doctest::Approx(s.cost_history.back()));
}

TEST_CASE("guarantees and validation") {
    CHECK(solver_guarantee({BruteForce{}, Objective::median}) == 1.0);
    CHECK(solver_guarantee({LocalSearch{}, Objective::median}) == 5.0);
    CHECK(solver_guarantee({LocalSearch{}, Objective::means}) == 9.0);
    CHECK(solver_guarantee({LocalSearch{2}, Objective::median}) == 4.0);
    CHECK(solver_guarantee({BicriteriaSeeding{0, 16.0}, Objective::means}) == 16.0);
    CHECK(solver_name(BruteForce{}) == "brute-force");
    CHECK_THROWS_AS(SolverConfig({LocalSearch{0}, Objective::median}).validate(),
                    std::invalid_argument);
}

TEST_CASE("property: local search against the exhaustive optimum") {
    std::mt19937_64 rng(21);
    double worst_median = 0.0, worst_means = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 4 + rng() % 12;
        const std::size_t k = 1 + rng() % 3;
        const auto space = trial % 5 == 0 ? testing_support::random_graph_metric(rng, n)
                                          : testing_support::random_euclidean(rng, n, 2);
        const auto ids = iota_ids(n);
        const Objective obj = trial % 2 ? Objective::means : Objective::median;
        const auto s = local_search(space, WeightedPointSet::unit(ids), k, LocalSearch{}, obj);
        const double opt = oracle::opt_cost(space, ids, k, obj);
        CHECK(s.cost == doctest::Approx(oracle::cost(space, oracle::unit(ids), s.centers, obj)));
        const double ratio = opt > 0 ? s.cost / opt : (s.cost == 0 ? 1.0 : 1e300);
        (obj == Objective::median ? worst_median : worst_means) =
            std::max(obj == Objective::median ? worst_median : worst_means, ratio);

        const auto exact = brute_force_opt(space, WeightedPointSet::unit(ids), k, obj);
        CHECK(exact.cost == doctest::Approx(opt).epsilon(1e-12));
    }
    CHECK(worst_median <= 5.0);
    CHECK(worst_means <= 25.0);
}

TEST_CASE("property: weights equal repeated copies") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 3 + rng() % 6;
        const auto space = testing_support::random_euclidean(rng, n, 1);
        std::vector<WeightedPointSet::Entry> entries;
        std::vector<oracle::Weighted> expanded;
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t w = 1 + rng() % 3;
            entries.push_back({PointId{i}, w});
            for (std::uint64_t c = 0; c < w; ++c) expanded.push_back({PointId{i}, 1.0});
        }
        const Objective obj = trial % 2 ? Objective::means : Objective::median;
        const auto s = brute_force_opt(space, WeightedPointSet(entries), 2, obj);
        CHECK(s.cost == doctest::Approx(oracle::opt_cost(space, expanded, iota_ids(n), 2, obj)));
    }
}

TEST_CASE("property: local search stops at a single-swap local optimum") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 20 + rng() % 60;
        const std::size_t k = 1 + rng() % 5;
        const auto space = trial % 3 == 0 ? testing_support::random_graph_metric(rng, n)
                                          : testing_support::random_euclidean(rng, n, 2, 4);
        std::vector<WeightedPointSet::Entry> entries;
        for (std::size_t i = 0; i < n; ++i) entries.push_back({PointId{i}, 1 + rng() % 3});
        const WeightedPointSet p(entries);
        std::vector<oracle::Weighted> w;
        for (const auto& e : entries) w.push_back({e.point, static_cast<double>(e.weight)});
        const Objective obj = trial % 2 ? Objective::means : Objective::median;
        const auto s = local_search(space, p, k, LocalSearch{}, obj);
        const double base = oracle::cost(space, w, s.centers, obj);
        double best_swap = base;
        for (std::size_t out = 0; out < k; ++out)
            for (std::size_t in = 0; in < n; ++in) {
                auto swapped = s.centers;
                if (std::find(swapped.begin(), swapped.end(), PointId{in}) != swapped.end()) continue;
                swapped[out] = PointId{in};
                best_swap = std::min(best_swap, oracle::cost(space, w, swapped, obj));
            }
        CHECK(best_swap >= base * (1.0 - 1e-6) - 1e-12);
    }
}
