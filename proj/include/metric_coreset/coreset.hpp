#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metric_coreset/cover.hpp"
#include "metric_coreset/metric.hpp"
#include "metric_coreset/mr_sim.hpp"
#include "metric_coreset/solvers.hpp"

namespace metric_coreset {

enum class CoverOrder { input, seeded_random };

struct Seeds {
    std::uint64_t partition = 0;
    std::uint64_t solver = 0;
    std::uint64_t cover = 0;

    friend bool operator==(const Seeds&, const Seeds&) = default;
};

/// Largest eps accepted for the k-means pipelines without the unsafe flag:
/// the bounds need eps + eps^2 <= 1/8.
bool means_eps_is_safe(double eps);

struct CoresetParams {
    double eps = 0.1;
    std::size_t k = 1;
    std::size_t m = 0;           ///< centers per T_l; 0 means k
    std::size_t partitions = 1;  ///< L
    std::optional<double> beta;  ///< defaults to the T-solver guarantee
    Objective objective = Objective::median;
    SolverKind t_solver = LocalSearch{};
    Seeds seeds;
    CoverOrder cover_order = CoverOrder::input;
    bool unsafe = false;  ///< skip the eps + eps^2 <= 1/8 and custom-beta checks
    std::size_t threads = 1;

    std::size_t centers_per_partition() const { return m == 0 ? k : m; }
    double effective_beta() const;
    /// (eps, beta) handed to the cover: unchanged for median, (sqrt2 eps, sqrt beta) for means.
    CoverParams cover_params(double radius) const;
    void validate(std::size_t n) const;
};

struct PartitionState {
    std::vector<PointId> points;   ///< P_l, ascending
    std::vector<PointId> targets;  ///< T_l
    double radius = 0.0;           ///< R_l
    CoverResult first;             ///< C_{w,l} with tau_l
    std::optional<CoverResult> second;  ///< E_{w,l} with phi_l (two-round only)
};

struct RoundReport {
    std::size_t round = 0;
    std::vector<std::size_t> partition_sizes;
    std::vector<std::size_t> target_sizes;  ///< round 1 only
    std::vector<double> radii;              ///< R_l, round 1 only
    std::optional<double> global_radius;    ///< R, round 2 only
    std::vector<std::size_t> cover_sizes;   ///< |C_{w,l}|, |E_{w,l}| or |S|
    std::vector<std::size_t> local_items;
    MemoryStats memory;

    friend bool operator==(const RoundReport&, const RoundReport&) = default;
};

struct RoundState {
    std::vector<PartitionState> partitions;
    std::optional<double> global_radius;
    WeightedPointSet c_w;
    AssignmentMap tau;
    std::vector<RoundReport> rounds;
    MemoryStats memory;  ///< max over rounds
};

struct CoresetResult {
    WeightedPointSet coreset;  ///< C_w (one-round) or E_w (two-round)
    AssignmentMap assignment;  ///< tau or phi, total over P
    RoundState state;
    std::string guarantee;     ///< "one-round", "continuous" or "two-round"
};

CoresetResult build_coreset_one_round(const MetricSpace& space, std::span<const PointId> points,
                                      const CoresetParams& params);

/// Same computation as the one-round build, labelled for the continuous setting.
CoresetResult continuous_mode_coreset(const MetricSpace& space, std::span<const PointId> points,
                                      const CoresetParams& params);

CoresetResult build_coreset_two_round(const MetricSpace& space, std::span<const PointId> points,
                                      const CoresetParams& params);

struct FinalReport {
    std::size_t coreset_size = 0;
    std::string solver;
    double cost = 0.0;          ///< over the full input
    double coreset_cost = 0.0;  ///< over the weighted coreset
    std::vector<PointId> centers;

    friend bool operator==(const FinalReport&, const FinalReport&) = default;
};

struct PipelineReport {
    std::string guarantee;
    Objective objective = Objective::median;
    std::size_t points = 0;
    std::size_t k = 0;
    std::size_t m = 0;
    std::size_t partitions = 0;
    double eps = 0.0;
    double beta = 1.0;
    double cover_eps = 0.0;
    double cover_beta = 1.0;
    std::string t_solver;
    std::string cover_order;
    Seeds seeds;
    std::vector<RoundReport> rounds;
    std::size_t c_w_size = 0;
    std::optional<std::size_t> e_w_size;
    MemoryStats memory;
    std::optional<FinalReport> final;

    friend bool operator==(const PipelineReport&, const PipelineReport&) = default;
};

PipelineReport make_report(const CoresetParams& params, std::size_t n, const CoresetResult& result);

struct PipelineConfig {
    Objective objective = Objective::median;
    std::optional<std::size_t> m;
    std::optional<std::size_t> partitions;
    SolverKind t_solver = LocalSearch{};
    SolverKind final_solver = LocalSearch{};
    std::optional<double> beta;
    Seeds seeds;
    CoverOrder cover_order = CoverOrder::input;
    bool unsafe = false;
    std::size_t threads = 1;
};

/// round(cbrt(n/k)) clamped to [1, n / max(m, k)].
std::size_t default_partitions(std::size_t n, std::size_t k, std::size_t m);

CoresetParams to_coreset_params(const PipelineConfig& config, std::size_t n, std::size_t k,
                                double eps);

struct DistributedSolution {
    Solution solution;
    CoresetResult coreset;
    PipelineReport report;
};

/// Two coreset rounds followed by the weighted final solver on E_w (round 3).
DistributedSolution solve_distributed(const MetricSpace& space, std::span<const PointId> points,
                                      std::size_t k, double eps, const PipelineConfig& config);

}  // namespace metric_coreset
