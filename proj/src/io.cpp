#include "metric_coreset/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace metric_coreset {

using nlohmann::json;

namespace {

std::string at(const std::string& source, std::size_t line) {
    return source + ":" + std::to_string(line) + ": ";
}

bool skippable(std::string_view line) {
    const auto first = line.find_first_not_of(" \t\r");
    return first == std::string_view::npos || line[first] == '#';
}

std::vector<double> parse_numbers(const std::string& line, const std::string& source,
                                  std::size_t line_no) {
    std::vector<double> values;
    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        double value = 0.0;
        const char* begin = token.data();
        const char* end = begin + token.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr != end || !std::isfinite(value))
            throw ParseError(at(source, line_no) + "not a finite number: '" + token + "'");
        values.push_back(value);
        token.clear();
    };
    for (char ch : line) {
        if (ch == ',' || ch == ' ' || ch == '\t' || ch == '\r') {
            flush();
        } else {
            token.push_back(ch);
        }
    }
    flush();
    return values;
}

template <class T>
T required(const json& j, const char* key) {
    if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    return j.at(key).get<T>();
}

}  // namespace

DatasetFormat parse_format(std::string_view text) {
    if (text == "auto") return DatasetFormat::automatic;
    if (text == "coords") return DatasetFormat::coords;
    if (text == "matrix") return DatasetFormat::matrix;
    throw std::invalid_argument("unknown format '" + std::string(text) +
                                "' (expected coords, matrix or auto)");
}

MetricSpace parse_dataset(std::istream& in, DatasetFormat format, const std::string& source) {
    std::vector<std::pair<std::size_t, std::string>> lines;
    std::string line;
    for (std::size_t no = 1; std::getline(in, line); ++no)
        if (!skippable(line)) lines.emplace_back(no, line);
    if (lines.empty()) throw ParseError(source + ": no data rows");

    const bool has_header = lines.front().second.rfind("matrix", 0) == 0;
    if (format == DatasetFormat::automatic)
        format = has_header ? DatasetFormat::matrix : DatasetFormat::coords;

    if (format == DatasetFormat::coords) {
        std::vector<double> coords;
        std::size_t dim = 0;
        for (const auto& [no, text] : lines) {
            const auto row = parse_numbers(text, source, no);
            if (dim == 0) dim = row.size();
            if (row.size() != dim)
                throw ParseError(at(source, no) + "expected " + std::to_string(dim) +
                                 " coordinates, found " + std::to_string(row.size()));
            coords.insert(coords.end(), row.begin(), row.end());
        }
        return MetricSpace::euclidean(dim, std::move(coords));
    }

    std::istringstream header(lines.front().second);
    std::string keyword;
    long long n = -1;
    header >> keyword >> n;
    if (keyword != "matrix" || n <= 0)
        throw ParseError(at(source, lines.front().first) + "expected header 'matrix n'");
    const auto size = static_cast<std::size_t>(n);
    if (lines.size() - 1 != size)
        throw ParseError(source + ": header announces " + std::to_string(size) +
                         " rows, found " + std::to_string(lines.size() - 1));
    std::vector<double> full(size * size, 0.0);
    for (std::size_t i = 0; i < size; ++i) {
        const auto& [no, text] = lines[i + 1];
        const auto row = parse_numbers(text, source, no);
        if (row.size() != i + 1)
            throw ParseError(at(source, no) + "row " + std::to_string(i) + " needs " +
                             std::to_string(i + 1) + " values, found " +
                             std::to_string(row.size()));
        if (row[i] != 0.0) throw ParseError(at(source, no) + "diagonal entry must be 0");
        for (std::size_t j = 0; j < i; ++j) {
            if (row[j] < 0.0) throw ParseError(at(source, no) + "negative distance");
            full[i * size + j] = row[j];
            full[j * size + i] = row[j];
        }
    }
    try {
        return MetricSpace::explicit_matrix(size, std::move(full));
    } catch (const std::invalid_argument& e) {
        throw ParseError(source + ": " + e.what());
    }
}

MetricSpace load_dataset(const std::filesystem::path& path, DatasetFormat format) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string() + ": cannot open dataset");
    return parse_dataset(in, format, path.string());
}

namespace {

std::uint64_t natural(const json& v, const char* what) {
    if (!v.is_number_unsigned())
        throw ParseError(std::string(what) + " must be a non-negative integer, got " + v.dump());
    return v.get<std::uint64_t>();
}

}  // namespace

void to_json(json& j, const PointId& p) { j = p.value; }
void from_json(const json& j, PointId& p) { p.value = natural(j, "point id"); }

void to_json(json& j, const WeightedPointSet& s) {
    j = json::array();
    for (const auto& e : s.entries()) j.push_back({{"point", e.point.value}, {"weight", e.weight}});
}

void from_json(const json& j, WeightedPointSet& s) {
    std::vector<WeightedPointSet::Entry> entries;
    for (const auto& item : j)
        entries.push_back({PointId{natural(required<json>(item, "point"), "point")},
                           natural(required<json>(item, "weight"), "weight")});
    s = WeightedPointSet(std::move(entries));
}

void to_json(json& j, const AssignmentMap& m) {
    j = json::array();
    for (const auto& pair : m.pairs()) j.push_back({pair.point.value, pair.image.value});
}

void from_json(const json& j, AssignmentMap& m) {
    std::vector<AssignmentMap::Pair> pairs;
    for (const auto& item : j) {
        if (!item.is_array() || item.size() != 2)
            throw ParseError("assignment entries must be [point, image] pairs");
        pairs.push_back({PointId{natural(item[0], "point")}, PointId{natural(item[1], "image")}});
    }
    m = AssignmentMap(std::move(pairs));
}

void to_json(json& j, const CoverResult& r) {
    j = {{"coreset", r.coreset},
         {"assignment", r.assignment},
         {"selection_order", r.selection_order}};
}

void to_json(json& j, const MemoryStats& s) {
    j = {{"max_local_items", s.max_local_items}, {"aggregate_items", s.aggregate_items}};
}

void from_json(const json& j, MemoryStats& s) {
    s.max_local_items = required<std::size_t>(j, "max_local_items");
    s.aggregate_items = required<std::size_t>(j, "aggregate_items");
}

void to_json(json& j, const Seeds& s) {
    j = {{"partition", s.partition}, {"solver", s.solver}, {"cover", s.cover}};
}

void from_json(const json& j, Seeds& s) {
    s.partition = required<std::uint64_t>(j, "partition");
    s.solver = required<std::uint64_t>(j, "solver");
    s.cover = required<std::uint64_t>(j, "cover");
}

void to_json(json& j, const RoundReport& r) {
    j = {{"round", r.round},
         {"partition_sizes", r.partition_sizes},
         {"target_sizes", r.target_sizes},
         {"radii", r.radii},
         {"global_radius", r.global_radius ? json(*r.global_radius) : json(nullptr)},
         {"cover_sizes", r.cover_sizes},
         {"local_items", r.local_items},
         {"memory", r.memory}};
}

void from_json(const json& j, RoundReport& r) {
    r.round = required<std::size_t>(j, "round");
    r.partition_sizes = required<std::vector<std::size_t>>(j, "partition_sizes");
    r.target_sizes = required<std::vector<std::size_t>>(j, "target_sizes");
    r.radii = required<std::vector<double>>(j, "radii");
    r.global_radius.reset();
    if (j.contains("global_radius") && !j.at("global_radius").is_null())
        r.global_radius = j.at("global_radius").get<double>();
    r.cover_sizes = required<std::vector<std::size_t>>(j, "cover_sizes");
    r.local_items = required<std::vector<std::size_t>>(j, "local_items");
    r.memory = required<MemoryStats>(j, "memory");
}

void to_json(json& j, const FinalReport& r) {
    j = {{"coreset_size", r.coreset_size},
         {"solver", r.solver},
         {"cost", r.cost},
         {"coreset_cost", r.coreset_cost},
         {"centers", r.centers}};
}

void from_json(const json& j, FinalReport& r) {
    r.coreset_size = required<std::size_t>(j, "coreset_size");
    r.solver = required<std::string>(j, "solver");
    r.cost = required<double>(j, "cost");
    r.coreset_cost = required<double>(j, "coreset_cost");
    r.centers = required<std::vector<PointId>>(j, "centers");
}

void to_json(json& j, const PipelineReport& r) {
    j = {{"guarantee", r.guarantee},
         {"objective", std::string(to_string(r.objective))},
         {"points", r.points},
         {"k", r.k},
         {"m", r.m},
         {"partitions", r.partitions},
         {"eps", r.eps},
         {"beta", r.beta},
         {"cover_eps", r.cover_eps},
         {"cover_beta", r.cover_beta},
         {"t_solver", r.t_solver},
         {"cover_order", r.cover_order},
         {"seeds", r.seeds},
         {"rounds", r.rounds},
         {"c_w_size", r.c_w_size},
         {"e_w_size", r.e_w_size ? json(*r.e_w_size) : json(nullptr)},
         {"memory", r.memory},
         {"final", r.final ? json(*r.final) : json(nullptr)}};
}

void from_json(const json& j, PipelineReport& r) {
    r.guarantee = required<std::string>(j, "guarantee");
    r.objective = parse_objective(required<std::string>(j, "objective"));
    r.points = required<std::size_t>(j, "points");
    r.k = required<std::size_t>(j, "k");
    r.m = required<std::size_t>(j, "m");
    r.partitions = required<std::size_t>(j, "partitions");
    r.eps = required<double>(j, "eps");
    r.beta = required<double>(j, "beta");
    r.cover_eps = required<double>(j, "cover_eps");
    r.cover_beta = required<double>(j, "cover_beta");
    r.t_solver = required<std::string>(j, "t_solver");
    r.cover_order = required<std::string>(j, "cover_order");
    r.seeds = required<Seeds>(j, "seeds");
    r.rounds = required<std::vector<RoundReport>>(j, "rounds");
    r.c_w_size = required<std::size_t>(j, "c_w_size");
    r.e_w_size.reset();
    if (j.contains("e_w_size") && !j.at("e_w_size").is_null())
        r.e_w_size = j.at("e_w_size").get<std::size_t>();
    r.memory = required<MemoryStats>(j, "memory");
    r.final.reset();
    if (j.contains("final") && !j.at("final").is_null()) r.final = j.at("final").get<FinalReport>();
}

void to_json(json& j, const Solution& s) {
    j = {{"centers", s.centers}, {"cost", s.cost}, {"iterations", s.iterations}};
}

void to_json(json& j, const PropertyReport& r) {
    j = {{"property", r.property},
         {"passed", r.passed},
         {"observed", r.observed},
         {"bound", r.bound},
         {"witness", r.witness ? json(*r.witness) : json(nullptr)}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string() + ": cannot open");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << text;
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace metric_coreset
