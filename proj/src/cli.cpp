#include "metric_coreset/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "metric_coreset/verify.hpp"

namespace metric_coreset::cli {

using nlohmann::json;

namespace {

const std::map<std::string, Mode> kModes{{"solve", Mode::solve},
                                         {"coreset", Mode::coreset},
                                         {"cover", Mode::cover},
                                         {"verify", Mode::verify},
                                         {"oracle", Mode::oracle}};

SolverKind parse_solver(const std::string& name, std::size_t swaps, std::uint64_t seed,
                        std::optional<double> beta) {
    if (name == "local-search") return LocalSearch{swaps};
    if (name == "bicriteria") return BicriteriaSeeding{seed, beta.value_or(16.0)};
    if (name == "brute-force") return BruteForce{};
    throw UsageError("unknown solver '" + name +
                     "' (expected local-search, bicriteria or brute-force)");
}

void emit(const RunConfig& config, const json& doc, std::ostream& out) {
    if (config.output)
        write_text(*config.output, dump(doc));
    else
        out << dump(doc);
}

std::uint64_t subset_budget() { return BruteForce{}.subset_cap; }

int run_verify(const RunConfig& config, const MetricSpace& space,
               const std::vector<PointId>& points, std::ostream& out) {
    const json doc = read_json(*config.coreset);
    WeightedPointSet coreset;
    AssignmentMap assignment;
    Objective objective{};
    std::size_t k = 0;
    double eps = 0.0;
    try {
        coreset = doc.at("coreset").get<WeightedPointSet>();
        assignment = doc.at("assignment").get<AssignmentMap>();
        objective = parse_objective(doc.at("objective").get<std::string>());
        k = doc.at("k").get<std::size_t>();
        eps = doc.at("eps").get<double>();
    } catch (const std::exception& e) {
        throw ParseError(config.coreset->string() + ": " + e.what());
    }
    for (const auto& e : coreset.entries()) space.require(e.point);

    const bool median = objective == Objective::median;
    const double bounded_eps = median ? 2.0 * eps : 4.0 * eps * eps;
    const double approx_eps = median ? 2.0 * eps : 4.0 * eps * eps + 4.0 * eps;
    const double centroid_eps = median ? 7.0 * eps : 27.0 * eps;

    std::vector<PropertyReport> checks;
    std::optional<double> opt;
    const WeightedPointSet full = WeightedPointSet::unit(points);
    if (binomial(points.size(), k) <= subset_budget())
        opt = brute_force_opt(space, full, k, objective).cost;

    if (opt) {
        checks.push_back(check_bounded(space, points, coreset, assignment, bounded_eps, *opt,
                                       objective));
    } else {
        // Optimum out of reach: still verify totality and the weight/map agreement.
        auto report = check_bounded(space, points, coreset, assignment, 1.0,
                                    std::numeric_limits<double>::infinity(), objective);
        report.property = "map-consistency";
        checks.push_back(report);
    }
    checks.push_back(check_approximate(space, points, coreset, approx_eps, k, objective,
                                       Sampled{1000, config.seeds.solver}));
    if (opt && binomial(coreset.size(), std::min(k, coreset.size())) <= subset_budget())
        checks.push_back(
            check_centroid(space, points, coreset.points(), k, centroid_eps, *opt, objective));

    bool passed = true;
    for (const auto& c : checks) passed = passed && c.passed;
    json result{{"passed", passed},
                {"objective", std::string(to_string(objective))},
                {"k", k},
                {"eps", eps},
                {"opt_cost", opt ? json(*opt) : json(nullptr)},
                {"checks", checks}};
    emit(config, result, out);
    return passed ? exit_ok : exit_verification_failed;
}

}  // namespace

RunConfig parse_args(int argc, const char* const* argv) {
    RunConfig config;
    CLI::App app{"Distributed coreset construction for k-median and k-means in metric spaces",
                 "metric-coreset"};

    std::string mode_positional, mode_flag, format = "auto", objective = "median";
    std::string t_solver = "local-search", final_solver = "local-search";
    std::size_t swaps = 1;
    std::optional<std::uint64_t> seed_cover;
    std::string input, output, coreset;

    app.add_option("mode_name", mode_positional, "solve | coreset | cover | verify | oracle");
    app.add_option("--mode", mode_flag, "Same as the positional mode");
    app.add_option("--input", input, "Dataset path (coords or matrix text)");
    app.add_option("--format", format, "coords | matrix | auto")->capture_default_str();
    app.add_option("--objective", objective, "median | means")->capture_default_str();
    app.add_option("--k", config.k, "Number of centers")->capture_default_str();
    app.add_option("--eps", config.eps, "Precision parameter in (0,1)")->capture_default_str();
    app.add_option("--l-partitions", config.partitions,
                   "Partitions L (default round(cbrt(n/k)), clamped to [1, n/max(m,k)])");
    app.add_option("--m", config.m, "Centers per T_l, >= k (default k)");
    app.add_option("--t-solver", t_solver, "local-search | bicriteria | brute-force")
        ->capture_default_str();
    app.add_option("--final-solver", final_solver, "local-search | bicriteria | brute-force")
        ->capture_default_str();
    app.add_option("--ls-swaps", swaps, "Local-search swap parameter t (guarantee bookkeeping)")
        ->capture_default_str();
    app.add_option("--beta", config.beta,
                   "Guarantee of the T-solver (default: proven value; bi-criteria default 16)");
    app.add_option("--seed-partition", config.seeds.partition, "Partition shuffle seed")
        ->capture_default_str();
    app.add_option("--seed-solver", config.seeds.solver, "Solver seed")->capture_default_str();
    app.add_option("--seed-cover", seed_cover,
                   "Cover selection seed (default: input order)");
    app.add_option("--output", output, "Output path (default stdout)");
    app.add_option("--coreset", coreset, "Coreset file to check in verify mode");
    app.add_flag("--unsafe-eps", config.unsafe_eps,
                 "Allow eps + eps^2 > 1/8 for means and a custom beta");
    app.add_option("--threads", config.threads,
                   "Worker threads (default METRIC_CORESET_THREADS, else hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    if (!mode_positional.empty() && !mode_flag.empty() && mode_positional != mode_flag)
        throw UsageError("conflicting modes '" + mode_positional + "' and '" + mode_flag + "'");
    const std::string mode_name = mode_flag.empty() ? mode_positional : mode_flag;
    if (mode_name.empty()) throw UsageError("a mode is required (solve, coreset, cover, verify, oracle)");
    const auto mode = kModes.find(mode_name);
    if (mode == kModes.end()) throw UsageError("unknown mode '" + mode_name + "'");
    config.mode = mode->second;

    if (input.empty()) throw UsageError("--input is required");
    config.input = input;
    if (!output.empty()) config.output = output;
    if (!coreset.empty()) config.coreset = coreset;
    if (config.mode == Mode::verify && !config.coreset)
        throw UsageError("verify mode needs --coreset <file>");

    try {
        config.format = parse_format(format);
        config.objective = parse_objective(objective);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    if (!(config.eps > 0.0 && config.eps < 1.0))
        throw UsageError("--eps must lie in (0,1)");
    if (config.objective == Objective::means && !config.unsafe_eps &&
        !means_eps_is_safe(config.eps))
        throw UsageError("--objective means requires eps + eps^2 <= 1/8; pass --unsafe-eps to override");
    if (config.k < 1) throw UsageError("--k must be >= 1");
    if (config.m && *config.m < config.k) throw UsageError("--m must be >= k");
    if (config.partitions && *config.partitions < 1) throw UsageError("--l-partitions must be >= 1");
    if (config.beta && !(*config.beta >= 1.0)) throw UsageError("--beta must be >= 1");
    if (config.threads && *config.threads < 1) throw UsageError("--threads must be >= 1");
    if (swaps < 1) throw UsageError("--ls-swaps must be >= 1");

    config.t_solver = parse_solver(t_solver, swaps, config.seeds.solver, config.beta);
    config.final_solver = parse_solver(final_solver, swaps, config.seeds.solver, std::nullopt);
    if (config.beta && !config.unsafe_eps &&
        !std::holds_alternative<BicriteriaSeeding>(config.t_solver) &&
        *config.beta != solver_guarantee(SolverConfig{config.t_solver, config.objective}))
        throw UsageError("--beta is fixed by the proven guarantee of --t-solver; pass --unsafe-eps "
                         "to override");
    if (seed_cover) {
        config.seeded_cover = true;
        config.seeds.cover = *seed_cover;
    }
    return config;
}

std::size_t resolved_partitions(const RunConfig& config, std::size_t n) {
    return config.partitions.value_or(default_partitions(n, config.k, config.m.value_or(config.k)));
}

PipelineConfig pipeline_config(const RunConfig& config) {
    PipelineConfig p;
    p.objective = config.objective;
    p.m = config.m;
    p.partitions = config.partitions;
    p.t_solver = config.t_solver;
    p.final_solver = config.final_solver;
    p.beta = config.beta;
    p.seeds = config.seeds;
    p.cover_order = config.seeded_cover ? CoverOrder::seeded_random : CoverOrder::input;
    p.unsafe = config.unsafe_eps;
    p.threads = resolve_thread_count(config.threads);
    return p;
}

int run(const RunConfig& config, std::ostream& out, std::ostream&) {
    const MetricSpace space = load_dataset(config.input, config.format);
    const std::vector<PointId> points = iota_ids(space.size());
    const PipelineConfig pipeline = pipeline_config(config);

    switch (config.mode) {
        case Mode::solve: {
            const auto result = solve_distributed(space, points, config.k, config.eps, pipeline);
            emit(config,
                 json{{"centers", result.solution.centers},
                      {"cost", result.solution.cost},
                      {"report", result.report}},
                 out);
            return exit_ok;
        }
        case Mode::coreset: {
            const CoresetParams params =
                to_coreset_params(pipeline, points.size(), config.k, config.eps);
            const auto result = build_coreset_two_round(space, points, params);
            emit(config,
                 json{{"objective", std::string(to_string(config.objective))},
                      {"k", config.k},
                      {"eps", config.eps},
                      {"coreset", result.coreset},
                      {"assignment", result.assignment},
                      {"report", make_report(params, points.size(), result)}},
                 out);
            return exit_ok;
        }
        case Mode::cover: {
            CoresetParams params = to_coreset_params(pipeline, points.size(), config.k, config.eps);
            params.partitions = 1;
            params.validate(points.size());
            const WeightedPointSet unit = WeightedPointSet::unit(points);
            const auto targets =
                solve(space, unit, params.centers_per_partition(),
                      SolverConfig{params.t_solver, params.objective})
                    .centers;
            const double mean = cost(space, unit, targets, params.objective) /
                                static_cast<double>(points.size());
            const double radius = params.objective == Objective::median ? mean : std::sqrt(mean);
            const CoverParams cover = params.cover_params(radius);
            const auto policy = config.seeded_cover
                                    ? SelectionPolicy::seeded_random(config.seeds.cover)
                                    : SelectionPolicy::input_order();
            const CoverResult result = cover_with_balls(space, points, targets, cover, policy);
            emit(config,
                 json{{"targets", targets},
                      {"radius", radius},
                      {"cover_eps", cover.eps},
                      {"cover_beta", cover.beta},
                      {"result", result},
                      {"check", check_cover(space, points, targets, cover, result)}},
                 out);
            return exit_ok;
        }
        case Mode::oracle: {
            const Solution opt =
                brute_force_opt(space, WeightedPointSet::unit(points), config.k, config.objective);
            emit(config,
                 json{{"objective", std::string(to_string(config.objective))},
                      {"k", config.k},
                      {"centers", opt.centers},
                      {"cost", opt.cost}},
                 out);
            return exit_ok;
        }
        case Mode::verify:
            return run_verify(config, space, points, out);
    }
    return exit_error;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
        return run(parse_args(argc, argv), out, err);
    } catch (const HelpRequested& help) {
        out << help.what();
        return exit_ok;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n(run with --help for the flag list)\n";
        return exit_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_error;
    }
}

}  // namespace metric_coreset::cli
