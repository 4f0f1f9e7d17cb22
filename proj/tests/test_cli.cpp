// End-to-end tests of the multicommon binary: exit codes, report files,
// artifact round-trips and report determinism.  The binary path arrives in
// MULTICOMMON_BIN (set by ctest).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "multicommon/counterexamples.hpp"
#include "multicommon/multiplicity.hpp"
#include "multicommon/recipe_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string bin_path() {
    const char* p = std::getenv("MULTICOMMON_BIN");
    REQUIRE_MESSAGE(p != nullptr, "MULTICOMMON_BIN must point at the CLI binary");
    return p;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("mc_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static inline int counter = 0;
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), ("missing file " + p.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::string& args) {
    const std::string cmd = bin_path() + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

json run_and_report(const std::string& sub, const json& cfg, const TempDir& dir,
                    int expect_code = 0, const std::string& extra = "") {
    const fs::path cfg_path = dir.path / "config.json";
    write_file(cfg_path, cfg.dump(2));
    const int code = run(sub + " --config " + cfg_path.string() + " --out " + dir.path.string() +
                         extra);
    CHECK(code == expect_code);
    return json::parse(read_file(dir.path / "report.json"));
}

} // namespace

TEST_CASE("analyze: uniform 1/2 on the 4-AP sits at the threshold") {
    TempDir dir;
    const json cfg = {{"command", "analyze"},
                      {"group", {{"cyclic", {{"p", 5}}}}},
                      {"matrix", {{1, 0}, {1, 1}, {1, 2}, {1, 3}}},
                      {"function", "uniform:0.5"}};
    const json rep = run_and_report("analyze", cfg, dir);
    CHECK(rep["results"]["pair"].get<double>() == doctest::Approx(0.125));
    CHECK(rep["results"]["threshold"].get<double>() == doctest::Approx(0.125));
    CHECK(rep["results"]["verdict"] == "at-threshold");
    CHECK(rep["structure"]["four_ap"]["order_1based"] == json::array({1, 2, 3, 4}));
}

TEST_CASE("analyze: indicator table, instance counts") {
    TempDir dir;
    const json cfg = {{"command", "analyze"},
                      {"group", {{"cyclic", {{"p", 5}}}}},
                      {"matrix", {{1, 0}, {1, 1}, {1, 2}, {1, 3}}},
                      {"function", {{"table", {0.0, 1.0, 1.0, 1.0, 1.0}}}}};
    const json rep = run_and_report("analyze", cfg, dir);
    CHECK(rep["results"]["pair"].get<double>() == doctest::Approx(9.0 / 25.0));
    CHECK(rep["results"]["instances_total"] == 25);
    CHECK(rep["results"]["instances_noninjective"] == 5);
}

TEST_CASE("analyze: d=3 notes that no 4-AP is possible") {
    TempDir dir;
    const json cfg = {{"command", "analyze"},
                      {"group", {{"cyclic", {{"p", 5}}}}},
                      {"matrix", {{1, 0}, {1, 1}, {1, 2}}},
                      {"function", "uniform:0.5"}};
    const json rep = run_and_report("analyze", cfg, dir);
    CHECK(rep["structure"]["note"] == "no 4-AP possible (d<4)");
    CHECK(rep["structure"]["four_ap"].is_null());
}

TEST_CASE("config errors exit with 2") {
    TempDir dir;
    const fs::path cfg_path = dir.path / "config.json";

    write_file(cfg_path, R"({"command":"analyze","grupp":{}})");
    CHECK(run("analyze --config " + cfg_path.string()) == 2);

    write_file(cfg_path, R"({not json)");
    CHECK(run("analyze --config " + cfg_path.string()) == 2);

    // unknown option field is rejected
    write_file(cfg_path, json{{"command", "analyze"},
                              {"group", {{"cyclic", {{"p", 5}}}}},
                              {"matrix", {{1, 0}}},
                              {"function", "uniform:0.5"},
                              {"options", {{"bogus", 1}}}}
                             .dump());
    CHECK(run("analyze --config " + cfg_path.string()) == 2);

    // command mismatch between config and subcommand
    write_file(cfg_path, json{{"command", "verify"},
                              {"group", {{"cyclic", {{"p", 5}}}}},
                              {"matrix", {{1, 0}}},
                              {"function", "uniform:0.5"}}
                             .dump());
    CHECK(run("analyze --config " + cfg_path.string()) == 2);
}

TEST_CASE("enumeration cap exceeded exits with 3") {
    TempDir dir;
    const json cfg = {{"command", "analyze"},
                      {"group", {{"cyclic", {{"p", 5}}}}},
                      {"matrix", {{1, 0}, {1, 1}, {1, 2}, {1, 3}}},
                      {"function", "uniform:0.5"},
                      {"options", {{"enum_cap", 3.0}}}};
    const fs::path cfg_path = dir.path / "config.json";
    write_file(cfg_path, cfg.dump());
    CHECK(run("analyze --config " + cfg_path.string()) == 3);
}

TEST_CASE("min-coloring on the 4-AP over Z_5") {
    TempDir dir;
    const json cfg = {{"command", "min-coloring"},
                      {"group", {{"cyclic", {{"p", 5}}}}},
                      {"matrix", {{1, 0}, {1, 1}, {1, 2}, {1, 3}}}};
    const json rep = run_and_report("min-coloring", cfg, dir);
    CHECK(rep["results"]["value"].get<double>() == doctest::Approx(0.2));
    CHECK(rep["results"]["common_at_this_size"].get<bool>());
}

TEST_CASE("counterexample: proportional route, exact margin") {
    TempDir dir;
    const json cfg = {{"command", "counterexample"},
                      {"group", {{"vector", {{"p", 5}, {"n", 1}}}}},
                      {"matrix", {{1}, {-1}}}};
    const json rep = run_and_report("counterexample", cfg, dir);
    CHECK(rep["results"]["route"] == "proportional");
    CHECK(rep["results"]["margin"].get<double>() == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(rep["results"]["value"].get<double>() == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(fs::exists(dir.path / "table.json"));
    CHECK(fs::exists(dir.path / "rounded_set.json"));
    CHECK(fs::exists(dir.path / "sweep.csv"));
}

TEST_CASE("counterexample: muting route writes a reloadable recipe") {
    TempDir dir;
    const json cfg = {{"command", "counterexample"},
                      {"group", {{"vector", {{"p", 5}, {"n", 2}}}}},
                      {"matrix", {{1, 0}, {1, 1}, {1, 2}, {1, 3}}},
                      {"options",
                       {{"betas", {0.5}},
                        {"alpha_fractions", {0.0, 1.0}},
                        {"n_candidates", {20, 40}}}}};
    const json rep = run_and_report("counterexample", cfg, dir);
    CHECK(rep["results"]["route"] == "muting-4ap");
    CHECK(rep["results"]["margin"].get<double>() > 1e-6);
    CHECK(rep["results"]["verdict"].get<std::string>().rfind("uncommon", 0) == 0);
    CHECK(rep["results"].contains("certificate_symbolic"));

    // recipe round-trip: reloading reproduces the reported value to 1e-12
    const auto recipe = mc::recipe_from_json(read_file(dir.path / "recipe.json"));
    const mc::FormSystem sys({{1, 0}, {1, 1}, {1, 2}, {1, 3}}, recipe.target_group());
    const auto sv = mc::multiplicity_structured(sys, recipe, 4);
    CHECK(std::abs(sv.value - rep["results"]["value"].get<double>()) < 1e-12);
}

TEST_CASE("counterexample: cyclic prime scan reports honest margins") {
    TempDir dir;
    const json cfg = {{"command", "counterexample"},
                      {"group", {{"cyclic", {{"p", 211}}}}},
                      {"matrix", {{1, 0}, {1, 1}, {1, 2}, {1, 3}}},
                      {"options",
                       {{"primes", {211, 230}},
                        {"betas", {0.5, 0.125}},
                        {"alpha_fractions", {0.0, 0.5, 1.0}}}}};
    const json rep = run_and_report("counterexample", cfg, dir);
    CHECK(rep["results"]["route"] == "muting-4ap");
    // small cyclic primes may or may not yield a margin; the verdict must
    // say so either way and the sweep must carry one row per grid point
    const std::string verdict = rep["results"]["verdict"].get<std::string>();
    const bool found = rep["results"]["margin"].get<double>() > 0.0;
    CHECK(verdict == (found ? "uncommon at (p=" + std::to_string(
                                  rep["results"]["p"].get<long long>()) + ", n=0)"
                            : "no margin found at searched grid"));
    const std::string csv = read_file(dir.path / "sweep.csv");
    std::size_t lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 1 + 4 * 2 * 3); // header + primes x betas x alphas
}

TEST_CASE("counterexample: no construction exits with 4") {
    TempDir dir;
    const json cfg = {{"command", "counterexample"},
                      {"group", {{"vector", {{"p", 5}, {"n", 1}}}}},
                      {"matrix", {{1, 0}, {0, 1}}}};
    const fs::path cfg_path = dir.path / "config.json";
    write_file(cfg_path, cfg.dump());
    CHECK(run("counterexample --config " + cfg_path.string() + " --out " + dir.path.string()) ==
          4);
}

TEST_CASE("counterexample: rounding with indistinct forms exits with 4") {
    TempDir dir;
    const json cfg = {{"command", "counterexample"},
                      {"group", {{"vector", {{"p", 5}, {"n", 1}}}}},
                      {"matrix", {{1}, {-1}, {1}}},
                      {"options", {{"round", true}}}};
    const fs::path cfg_path = dir.path / "config.json";
    write_file(cfg_path, cfg.dump());
    CHECK(run("counterexample --config " + cfg_path.string() + " --out " + dir.path.string()) ==
          4);
}

TEST_CASE("verify: splitting suite passes and reports are byte-identical") {
    TempDir dir1, dir2;
    const json cfg = {{"command", "verify"},
                      {"options", {{"suite", "splitting"}, {"trials", 50}, {"seed", 12345}}}};
    const json rep = run_and_report("verify", cfg, dir1);
    CHECK(rep["results"]["violations"] == 0);

    const fs::path cfg_path = dir2.path / "config.json";
    write_file(cfg_path, cfg.dump(2));
    CHECK(run("verify --config " + cfg_path.string() + " --out " + dir2.path.string()) == 0);
    CHECK(read_file(dir1.path / "report.json") == read_file(dir2.path / "report.json"));
}

TEST_CASE("verify: directional sweep writes per-prime csv rows") {
    TempDir dir;
    const json cfg = {{"command", "verify"},
                      {"options", {{"suite", "directional-sweep"}, {"primes", {5, 50}}}}};
    const json rep = run_and_report("verify", cfg, dir);
    CHECK(rep["results"]["violations"] == 0);
    const std::string csv = read_file(dir.path / "sweep.csv");
    CHECK(csv.rfind("p,n,alpha,beta,value,threshold,margin\n", 0) == 0);
    CHECK(csv.find("\n5,") != std::string::npos);
    CHECK(csv.find("\n47,") != std::string::npos);
}

TEST_CASE("verify: deliberate selftest violation exits with 5") {
    TempDir dir;
    const json cfg = {{"command", "verify"}, {"options", {{"suite", "selftest-violation"}}}};
    const fs::path cfg_path = dir.path / "config.json";
    write_file(cfg_path, cfg.dump());
    CHECK(run("verify --config " + cfg_path.string() + " --out " + dir.path.string()) == 5);
    const json rep = json::parse(read_file(dir.path / "report.json"));
    CHECK(rep["results"]["violations"] == 1);
    CHECK(rep["results"]["violation_rows"].size() == 1);
}

TEST_CASE("analyze accepts a recipe file as its function source") {
    TempDir dir;
    const auto recipe = mc::make_recipe(mc::Mode::vector_space, 5, 1, 0.125, 1.0);
    write_file(dir.path / "recipe.json", mc::recipe_to_json(recipe));
    const json cfg = {{"command", "analyze"},
                      {"group", {{"vector", {{"p", 5}, {"n", 2}}}}},
                      {"matrix", {{1, 0}, {1, 1}, {1, 2}, {1, 3}}},
                      {"function", {{"recipe", (dir.path / "recipe.json").string()}}}};
    const json rep = run_and_report("analyze", cfg, dir);
    // the assembled table must evaluate identically through the CLI
    const mc::FormSystem sys({{1, 0}, {1, 1}, {1, 2}, {1, 3}}, recipe.target_group());
    const double direct = mc::monochromatic_pair(sys, mc::assemble(recipe));
    CHECK(rep["results"]["pair"].get<double>() == doctest::Approx(direct).epsilon(1e-12));

    // mismatched group is a config error
    const json bad = {{"command", "analyze"},
                      {"group", {{"vector", {{"p", 5}, {"n", 3}}}}},
                      {"matrix", {{1, 0}, {1, 1}, {1, 2}, {1, 3}}},
                      {"function", {{"recipe", (dir.path / "recipe.json").string()}}}};
    const fs::path cfg_path = dir.path / "bad.json";
    write_file(cfg_path, bad.dump());
    CHECK(run("analyze --config " + cfg_path.string()) == 2);
}

TEST_CASE("verify: gauss suite on a tiny grid") {
    TempDir dir;
    const json cfg = {{"command", "verify"},
                      {"options", {{"suite", "gauss"}, {"primes", {5}}, {"dims", {1}}}}};
    const json rep = run_and_report("verify", cfg, dir);
    CHECK(rep["results"]["violations"] == 0);
    CHECK(rep["results"]["excluded_by_hypothesis"].get<int>() > 0);
}
