#include "metric_coreset/coreset.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "metric_coreset/random.hpp"

namespace metric_coreset {

namespace {

struct NoBroadcast {};

struct FirstRoundOutput {
    std::vector<PointId> targets;
    double radius = 0.0;
    CoverResult cover;
};

struct SecondRoundBroadcast {
    std::vector<PointId> c_w;
    std::vector<std::size_t> sizes;
    std::vector<double> radii;
};

SelectionPolicy make_policy(const CoresetParams& params, std::uint64_t stream) {
    if (params.cover_order == CoverOrder::input) return SelectionPolicy::input_order();
    return SelectionPolicy::seeded_random(mix_seed(params.seeds.cover, stream));
}

SolverConfig partition_solver(const CoresetParams& params, std::size_t partition) {
    SolverConfig config{params.t_solver, params.objective};
    if (auto* bc = std::get_if<BicriteriaSeeding>(&config.kind))
        bc->seed = mix_seed(params.seeds.solver, partition);
    return config;
}

// nu_{P_l}(T_l)/|P_l| for median, sqrt(mu_{P_l}(T_l)/|P_l|) for means.
double partition_radius(double target_cost, std::size_t size, Objective objective) {
    const double mean = target_cost / static_cast<double>(size);
    return objective == Objective::median ? mean : std::sqrt(mean);
}

// Sum |P_i| R_i / |P| for median, sqrt(Sum |P_i| R_i^2 / |P|) for means; ascending i.
double combined_radius(std::span<const std::size_t> sizes, std::span<const double> radii,
                       Objective objective) {
    double weighted = 0.0;
    std::size_t total = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        weighted += static_cast<double>(sizes[i]) * objective_power(radii[i], objective);
        total += sizes[i];
    }
    const double mean = weighted / static_cast<double>(total);
    return objective == Objective::median ? mean : std::sqrt(mean);
}

RoundState run_first_round(const MetricSpace& space, std::span<const PointId> points,
                           const CoresetParams& params, const RoundExecutor& executor) {
    params.validate(points.size());
    require_distinct_ids(space, points, "coreset input");

    const Partitioning partitioning =
        make_partitioning(points.size(), params.partitions, params.seeds.partition);
    RoundPlan<std::vector<PointId>, NoBroadcast> plan;
    plan.round = 1;
    for (const auto& members : partitioning.members()) {
        std::vector<PointId> part;
        part.reserve(members.size());
        for (std::size_t idx : members) part.push_back(points[idx]);
        std::sort(part.begin(), part.end());
        if (part.size() < params.centers_per_partition())
            throw std::invalid_argument("partition of " + std::to_string(part.size()) +
                                        " points is smaller than m = " +
                                        std::to_string(params.centers_per_partition()));
        plan.input_items.push_back(part.size());
        plan.inputs.push_back(std::move(part));
    }

    const std::size_t m = params.centers_per_partition();
    auto worker = [&](std::size_t l, const std::vector<PointId>& part,
                      const NoBroadcast&) -> FirstRoundOutput {
        const WeightedPointSet unit = WeightedPointSet::unit(part);
        FirstRoundOutput out;
        out.targets = solve(space, unit, m, partition_solver(params, l)).centers;
        const double target_cost = cost(space, unit, out.targets, params.objective);
        out.radius = partition_radius(target_cost, part.size(), params.objective);
        out.cover = cover_with_balls(space, part, out.targets, params.cover_params(out.radius),
                                     make_policy(params, l));
        return out;
    };
    auto items = [](const FirstRoundOutput& out) {
        return out.targets.size() + out.cover.coreset.size();
    };
    auto result = executor.run_round(plan, worker, items);

    RoundState state;
    RoundReport report;
    report.round = 1;
    std::vector<WeightedPointSet> covers;
    std::vector<AssignmentMap> maps;
    for (std::size_t l = 0; l < result.outputs.size(); ++l) {
        auto& out = result.outputs[l];
        report.partition_sizes.push_back(plan.inputs[l].size());
        report.target_sizes.push_back(out.targets.size());
        report.radii.push_back(out.radius);
        report.cover_sizes.push_back(out.cover.coreset.size());
        covers.push_back(out.cover.coreset);
        maps.push_back(out.cover.assignment);
        state.partitions.push_back(PartitionState{plan.inputs[l], std::move(out.targets),
                                                  out.radius, std::move(out.cover), std::nullopt});
    }
    report.local_items = result.local_items;
    report.memory = result.stats;
    state.c_w = WeightedPointSet::disjoint_union(covers);
    state.tau = AssignmentMap::merge(maps);
    state.memory.absorb(report.memory);
    state.rounds.push_back(std::move(report));
    return state;
}

void run_second_round(const MetricSpace& space, const CoresetParams& params,
                      const RoundExecutor& executor, RoundState& state) {
    const std::size_t parts = state.partitions.size();
    auto payload = std::make_shared<SecondRoundBroadcast>();
    payload->c_w = state.c_w.points();
    for (const auto& p : state.partitions) {
        payload->sizes.push_back(p.points.size());
        payload->radii.push_back(p.radius);
    }

    RoundPlan<std::vector<PointId>, SecondRoundBroadcast> plan;
    plan.round = 2;
    for (const auto& p : state.partitions) {
        plan.inputs.push_back(p.points);
        plan.input_items.push_back(p.points.size());
    }
    // C_w plus one scalar R_i per partition.
    plan.broadcast_items = payload->c_w.size() + parts;
    plan.broadcast = payload;

    auto worker = [&](std::size_t l, const std::vector<PointId>& part,
                      const SecondRoundBroadcast& shared) -> CoverResult {
        const double radius = combined_radius(shared.sizes, shared.radii, params.objective);
        return cover_with_balls(space, part, shared.c_w, params.cover_params(radius),
                                make_policy(params, parts + l));
    };
    auto items = [](const CoverResult& out) { return out.coreset.size(); };
    auto result = executor.run_round(plan, worker, items);

    state.global_radius = combined_radius(payload->sizes, payload->radii, params.objective);
    RoundReport report;
    report.round = 2;
    report.partition_sizes = payload->sizes;
    report.global_radius = state.global_radius;
    for (std::size_t l = 0; l < parts; ++l) {
        report.cover_sizes.push_back(result.outputs[l].coreset.size());
        state.partitions[l].second = std::move(result.outputs[l]);
    }
    report.local_items = result.local_items;
    report.memory = result.stats;
    state.memory.absorb(report.memory);
    state.rounds.push_back(std::move(report));
}

}  // namespace

bool means_eps_is_safe(double eps) { return eps + eps * eps <= 0.125; }

double CoresetParams::effective_beta() const {
    return beta.value_or(solver_guarantee(SolverConfig{t_solver, objective}));
}

CoverParams CoresetParams::cover_params(double radius) const {
    const double b = effective_beta();
    if (objective == Objective::median) return CoverParams{radius, eps, b};
    return CoverParams{radius, std::sqrt(2.0) * eps, std::sqrt(b)};
}

void CoresetParams::validate(std::size_t n) const {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("eps must lie in (0,1), got " + std::to_string(eps));
    if (objective == Objective::means && !unsafe && !means_eps_is_safe(eps))
        throw std::invalid_argument("k-means requires eps + eps^2 <= 1/8 (got eps = " +
                                    std::to_string(eps) + "); pass the unsafe flag to override");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (m != 0 && m < k) throw std::invalid_argument("m must be >= k");
    if (partitions < 1) throw std::invalid_argument("L must be >= 1");
    if (n < partitions * k)
        throw std::invalid_argument("need |P| >= L*k (|P| = " + std::to_string(n) + ", L = " +
                                    std::to_string(partitions) + ", k = " + std::to_string(k) + ")");
    SolverConfig{t_solver, objective}.validate();
    if (beta) {
        if (!(*beta >= 1.0)) throw std::invalid_argument("beta must be >= 1");
        const bool configurable = std::holds_alternative<BicriteriaSeeding>(t_solver);
        if (!configurable && !unsafe &&
            *beta != solver_guarantee(SolverConfig{t_solver, objective}))
            throw std::invalid_argument(
                "beta is fixed by the T-solver guarantee; pass the unsafe flag to override");
    }
    cover_params(0.0).validate();
}

CoresetResult build_coreset_one_round(const MetricSpace& space, std::span<const PointId> points,
                                      const CoresetParams& params) {
    const RoundExecutor executor(params.threads);
    CoresetResult out;
    out.state = run_first_round(space, points, params, executor);
    out.coreset = out.state.c_w;
    out.assignment = out.state.tau;
    out.guarantee = "one-round";
    return out;
}

CoresetResult continuous_mode_coreset(const MetricSpace& space, std::span<const PointId> points,
                                      const CoresetParams& params) {
    CoresetResult out = build_coreset_one_round(space, points, params);
    out.guarantee = "continuous";
    return out;
}

CoresetResult build_coreset_two_round(const MetricSpace& space, std::span<const PointId> points,
                                      const CoresetParams& params) {
    const RoundExecutor executor(params.threads);
    CoresetResult out;
    out.state = run_first_round(space, points, params, executor);
    run_second_round(space, params, executor, out.state);

    std::vector<WeightedPointSet> covers;
    std::vector<AssignmentMap> maps;
    for (const auto& p : out.state.partitions) {
        covers.push_back(p.second->coreset);
        maps.push_back(p.second->assignment);
    }
    out.coreset = WeightedPointSet::disjoint_union(covers);
    out.assignment = AssignmentMap::merge(maps);
    out.guarantee = "two-round";
    return out;
}

PipelineReport make_report(const CoresetParams& params, std::size_t n,
                           const CoresetResult& result) {
    PipelineReport report;
    report.guarantee = result.guarantee;
    report.objective = params.objective;
    report.points = n;
    report.k = params.k;
    report.m = params.centers_per_partition();
    report.partitions = params.partitions;
    report.eps = params.eps;
    report.beta = params.effective_beta();
    const CoverParams cover = params.cover_params(0.0);
    report.cover_eps = cover.eps;
    report.cover_beta = cover.beta;
    report.t_solver = solver_name(params.t_solver);
    report.cover_order = params.cover_order == CoverOrder::input ? "input" : "seeded-random";
    report.seeds = params.seeds;
    report.rounds = result.state.rounds;
    report.c_w_size = result.state.c_w.size();
    if (result.guarantee == "two-round") report.e_w_size = result.coreset.size();
    report.memory = result.state.memory;
    return report;
}

std::size_t default_partitions(std::size_t n, std::size_t k, std::size_t m) {
    if (k == 0) throw std::invalid_argument("k must be >= 1");
    const double raw = std::round(std::cbrt(static_cast<double>(n) / static_cast<double>(k)));
    const std::size_t upper = std::max<std::size_t>(1, n / std::max(m, k));
    return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(raw, 1.0)), 1, upper);
}

CoresetParams to_coreset_params(const PipelineConfig& config, std::size_t n, std::size_t k,
                                double eps) {
    CoresetParams params;
    params.eps = eps;
    params.k = k;
    params.m = config.m.value_or(k);
    params.partitions = config.partitions.value_or(default_partitions(n, k, params.m));
    params.beta = config.beta;
    params.objective = config.objective;
    params.t_solver = config.t_solver;
    params.seeds = config.seeds;
    params.cover_order = config.cover_order;
    params.unsafe = config.unsafe;
    params.threads = config.threads;
    return params;
}

DistributedSolution solve_distributed(const MetricSpace& space, std::span<const PointId> points,
                                      std::size_t k, double eps, const PipelineConfig& config) {
    const CoresetParams params = to_coreset_params(config, points.size(), k, eps);
    const SolverConfig final_config{config.final_solver, config.objective};
    final_config.validate();

    DistributedSolution out;
    out.coreset = build_coreset_two_round(space, points, params);

    // Round 3: a single reducer solves the weighted instance (E_w, k).
    const RoundExecutor executor(1);
    RoundPlan<WeightedPointSet, NoBroadcast> plan;
    plan.round = 3;
    plan.inputs.push_back(out.coreset.coreset);
    plan.input_items.push_back(out.coreset.coreset.size());
    auto worker = [&](std::size_t, const WeightedPointSet& e_w, const NoBroadcast&) {
        return solve(space, e_w, std::min(k, e_w.size()), final_config);
    };
    auto items = [](const Solution& s) { return s.centers.size(); };
    auto result = executor.run_round(plan, worker, items);
    out.solution = std::move(result.outputs.front());

    RoundReport round3;
    round3.round = 3;
    round3.partition_sizes = {out.coreset.coreset.size()};
    round3.cover_sizes = {out.solution.centers.size()};
    round3.local_items = result.local_items;
    round3.memory = result.stats;
    out.coreset.state.rounds.push_back(round3);
    out.coreset.state.memory.absorb(round3.memory);

    const double coreset_cost = out.solution.cost;
    out.solution.cost = cost(space, WeightedPointSet::unit(points), out.solution.centers,
                             config.objective);

    out.report = make_report(params, points.size(), out.coreset);
    out.report.final = FinalReport{out.coreset.coreset.size(), solver_name(config.final_solver),
                                   out.solution.cost, coreset_cost, out.solution.centers};
    return out;
}

}  // namespace metric_coreset
