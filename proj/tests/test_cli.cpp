#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "metric_coreset/cli.hpp"

using namespace metric_coreset;
using namespace metric_coreset::cli;
namespace fs = std::filesystem;

namespace {

RunConfig parse(std::vector<std::string> args) {
    args.insert(args.begin(), "metric-coreset");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return parse_args(static_cast<int>(argv.size()), argv.data());
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "metric-coreset");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() /
              ("metric_coreset_cli_" + std::to_string(std::random_device{}()));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(dir / name) << text;
        return (dir / name).string();
    }
    std::string read(const std::string& name) const {
        std::ifstream in(dir / name);
        return {std::istreambuf_iterator<char>(in), {}};
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::string clustered_csv(std::size_t n) {
    std::ostringstream s;
    for (std::size_t i = 0; i < n; ++i)
        s << (i % 3) * 10.0 + 0.01 * static_cast<double>(i % 17) << ","
          << 0.02 * static_cast<double>(i % 11) << "\n";
    return s.str();
}

}  // namespace

TEST_CASE("flag parsing") {
    const auto c = parse({"solve", "--input", "pts.csv", "--objective", "median", "--k", "5",
                          "--eps", "0.25"});
    CHECK(c.mode == Mode::solve);
    CHECK(c.k == 5);
    CHECK(c.eps == 0.25);
    CHECK_FALSE(c.partitions.has_value());
    CHECK(resolved_partitions(c, 5000) == 10);

    CHECK_THROWS_AS(parse({"solve", "--input", "x", "--objective", "means", "--eps", "0.2"}),
                    UsageError);
    CHECK_NOTHROW(parse({"solve", "--input", "x", "--objective", "means", "--eps", "0.2",
                         "--unsafe-eps"}));
    CHECK_THROWS_AS(parse({"solve", "--input", "x", "--eps", "1.5"}), UsageError);
    CHECK_THROWS_AS(parse({"solve", "--input", "x", "--bogus"}), UsageError);
    CHECK_THROWS_AS(parse({"verify", "--input", "x"}), UsageError);
    CHECK_THROWS_AS(parse({"solve", "--input", "x", "--k", "3", "--m", "2"}), UsageError);
    CHECK_THROWS_AS(parse({"solve", "--input", "x", "--beta", "2"}), UsageError);
    CHECK_NOTHROW(parse({"solve", "--input", "x", "--t-solver", "bicriteria", "--beta", "2"}));
    CHECK_THROWS_AS(parse({"--help"}), HelpRequested);

    const auto m = parse({"--mode", "oracle", "--input", "x", "--l-partitions", "3", "--threads",
                          "2", "--seed-cover", "9"});
    CHECK(m.mode == Mode::oracle);
    CHECK(m.partitions == 3u);
    CHECK(m.threads == 2u);
    CHECK(m.seeded_cover);
    CHECK(m.seeds.cover == 9);

    try {
        parse({"solve", "--input", "x", "--objective", "means", "--eps", "0.2"});
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("1/8") != std::string::npos);
    }
}

TEST_CASE("help goes to stdout with exit 0") {
    const auto r = invoke({"--help"});
    CHECK(r.code == exit_ok);
    CHECK(r.out.find("--l-partitions") != std::string::npos);
}

TEST_CASE("solve on four points") {
    Scratch s;
    const auto input = s.write("line.csv", "0\n1\n10\n11\n");
    const auto r = invoke({"solve", "--input", input, "--k", "2", "--eps", "0.1",
                           "--final-solver", "brute-force", "--t-solver", "brute-force"});
    REQUIRE(r.code == exit_ok);
    const auto doc = nlohmann::json::parse(r.out);
    const double eps = 0.1;
    CHECK(doc.at("cost").get<double>() <= ((1 + 7 * eps) * (1 + 2 * eps) + 2 * eps) * 2.0);
    CHECK(doc.at("centers").size() == 2);

    const auto o = invoke({"oracle", "--input", input, "--k", "2"});
    REQUIRE(o.code == exit_ok);
    CHECK(nlohmann::json::parse(o.out).at("cost").get<double>() == 2.0);
}

TEST_CASE("coreset then verify, and corruption is caught") {
    Scratch s;
    const auto input = s.write("pts.csv", clustered_csv(12));
    const auto made = invoke({"coreset", "--input", input, "--k", "2", "--eps", "0.1", "--output",
                              s.path("c.json")});
    REQUIRE(made.code == exit_ok);
    const auto ok = invoke({"verify", "--input", input, "--coreset", s.path("c.json")});
    CHECK(ok.code == exit_ok);
    CHECK(nlohmann::json::parse(ok.out).at("passed").get<bool>());

    auto doc = nlohmann::json::parse(s.read("c.json"));
    doc["coreset"][0]["weight"] = doc["coreset"][0]["weight"].get<int>() + 1;
    s.write("bad.json", doc.dump());
    const auto bad = invoke({"verify", "--input", input, "--coreset", s.path("bad.json")});
    CHECK(bad.code == exit_verification_failed);
    const auto verdict = nlohmann::json::parse(bad.out);
    CHECK_FALSE(verdict.at("passed").get<bool>());
    CHECK(verdict.at("checks")[0].at("witness").is_string());
}

TEST_CASE("outputs are byte identical across runs") {
    Scratch s;
    const auto input = s.write("pts.csv", clustered_csv(300));
    for (const std::string mode : {"solve", "coreset", "cover"}) {
        const auto a = invoke({mode, "--input", input, "--k", "3", "--eps", "0.2",
                               "--seed-partition", "4", "--seed-cover", "5", "--threads", "1"});
        const auto b = invoke({mode, "--input", input, "--k", "3", "--eps", "0.2",
                               "--seed-partition", "4", "--seed-cover", "5", "--threads", "3"});
        REQUIRE(a.code == exit_ok);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("bad input files report errors") {
    Scratch s;
    const auto input = s.write("broken.csv", "0 1\n2\n");
    const auto r = invoke({"solve", "--input", input});
    CHECK(r.code == exit_error);
    CHECK(r.err.find("broken.csv:2") != std::string::npos);
    CHECK(invoke({"solve", "--input", s.path("missing.csv")}).code == exit_error);
}

TEST_CASE("the installed executable runs end to end") {
    Scratch s;
    const auto input = s.write("pts.csv", clustered_csv(30));
    const std::string exe = METRIC_CORESET_CLI;
    const std::string base = "\"" + exe + "\" ";
    CHECK(std::system((base + "coreset --input \"" + input + "\" --k 2 --eps 0.1 --output \"" +
                       s.path("c.json") + "\"")
                          .c_str()) == 0);
    const int status = std::system((base + "verify --input \"" + input + "\" --coreset \"" +
                                    s.path("c.json") + "\" --output \"" + s.path("v.json") + "\"")
                                       .c_str());
    CHECK(status == 0);
    CHECK(nlohmann::json::parse(s.read("v.json")).at("passed").get<bool>());
}
