#pragma once

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "metric_coreset/coreset.hpp"
#include "metric_coreset/cover.hpp"
#include "metric_coreset/metric.hpp"
#include "metric_coreset/solvers.hpp"
#include "metric_coreset/verify.hpp"

namespace metric_coreset {

/// Malformed dataset or artifact; the message carries file:line context.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class DatasetFormat { automatic, coords, matrix };

DatasetFormat parse_format(std::string_view text);

/**
 * Dataset text formats (see docs/formats.md):
 *   coords  one point per line, values separated by commas and/or whitespace
 *   matrix  header "matrix n", then n rows; row i holds d(i,0) .. d(i,i)
 * Blank lines and lines starting with '#' are ignored in both.
 */
MetricSpace parse_dataset(std::istream& in, DatasetFormat format, const std::string& source);
MetricSpace load_dataset(const std::filesystem::path& path, DatasetFormat format);

void to_json(nlohmann::json& j, const PointId& p);
void from_json(const nlohmann::json& j, PointId& p);
void to_json(nlohmann::json& j, const WeightedPointSet& s);
void from_json(const nlohmann::json& j, WeightedPointSet& s);
void to_json(nlohmann::json& j, const AssignmentMap& m);
void from_json(const nlohmann::json& j, AssignmentMap& m);
void to_json(nlohmann::json& j, const CoverResult& r);
void to_json(nlohmann::json& j, const MemoryStats& s);
void from_json(const nlohmann::json& j, MemoryStats& s);
void to_json(nlohmann::json& j, const Seeds& s);
void from_json(const nlohmann::json& j, Seeds& s);
void to_json(nlohmann::json& j, const RoundReport& r);
void from_json(const nlohmann::json& j, RoundReport& r);
void to_json(nlohmann::json& j, const FinalReport& r);
void from_json(const nlohmann::json& j, FinalReport& r);
void to_json(nlohmann::json& j, const PipelineReport& r);
void from_json(const nlohmann::json& j, PipelineReport& r);
void to_json(nlohmann::json& j, const Solution& s);
void to_json(nlohmann::json& j, const PropertyReport& r);

/// Pretty-printed JSON with a trailing newline.
std::string dump(const nlohmann::json& j);

nlohmann::json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace metric_coreset
