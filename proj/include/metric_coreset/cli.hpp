#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "metric_coreset/coreset.hpp"
#include "metric_coreset/io.hpp"

namespace metric_coreset::cli {

enum class Mode { solve, coreset, cover, verify, oracle };

struct RunConfig {
    Mode mode = Mode::solve;
    std::filesystem::path input;
    DatasetFormat format = DatasetFormat::automatic;
    Objective objective = Objective::median;
    std::size_t k = 1;
    double eps = 0.1;
    std::optional<std::size_t> partitions;  ///< unset: round(cbrt(n/k)), clamped
    std::optional<std::size_t> m;           ///< unset: k
    SolverKind t_solver = LocalSearch{};
    SolverKind final_solver = LocalSearch{};
    std::optional<double> beta;
    Seeds seeds;
    bool seeded_cover = false;  ///< set by --seed-cover
    std::optional<std::filesystem::path> output;
    std::optional<std::filesystem::path> coreset;  ///< verify input
    bool unsafe_eps = false;
    std::optional<std::size_t> threads;
};

/// Bad command line; the message names the violated constraint.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// `--help` was given; what() is the full help text.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

RunConfig parse_args(int argc, const char* const* argv);

/// Partition count the run will use for an input of n points.
std::size_t resolved_partitions(const RunConfig& config, std::size_t n);

PipelineConfig pipeline_config(const RunConfig& config);

inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_verification_failed = 2;

/// Executes the configured mode; JSON goes to --output or `out`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with error reporting; the body of main().
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace metric_coreset::cli
