#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "toricdual/report.hpp"

using namespace toricdual;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int rc;
    std::string out;
};

CliRun run(const std::string& args, const std::string& env = "") {
    std::string cmd = env + " " + TORICDUAL_CLI + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() / ("toricdual_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }
    fs::path write(const std::string& name, const std::string& text) const {
        fs::path p = path_ / name;
        std::ofstream(p, std::ios::binary) << text;
        return p;
    }

private:
    fs::path path_;
    static inline int counter_ = 0;
};

const char* kQuadric = R"({
  "name": "q",
  "rank": 2,
  "rays": [[1, 0], [1, 2]],
  "rho": [1, 1],
  "eta": [1, 1],
  "curve": {"q": 2},
  "order": 4,
  "characters": [{"coordinates": [{"formal": true}, {"formal": true}]}],
  "checks": ["weak_duality"]
})";

std::string replace(std::string s, const std::string& from, const std::string& to) {
    auto p = s.find(from);
    EXPECT_NE(p, std::string::npos);
    return s.replace(p, from.size(), to);
}

} // namespace

TEST(ScenarioParse, Minimal) {
    Scenario s = parse_scenario(kQuadric);
    EXPECT_EQ(s.rank, 2u);
    EXPECT_EQ(s.rays.size(), 2u);
    EXPECT_EQ(s.curve.spin.size(), 1u);
    EXPECT_EQ(s.characters.front().name, "chi0");
    EXPECT_TRUE(s.characters.front().formal());
    // integers as strings
    Scenario t = parse_scenario(replace(kQuadric, "\"rho\": [1, 1]", "\"rho\": [\"1\", \"1\"]"));
    EXPECT_EQ(t.rho, s.rho);
}

TEST(ScenarioParse, DiagnosticsCarryFieldAndLine) {
    auto expect_error = [](const std::string& text, const std::string& field, long line) {
        try {
            parse_scenario(text);
            ADD_FAILURE() << "accepted: " << field;
        } catch (const ScenarioError& e) {
            EXPECT_EQ(e.field(), field);
            EXPECT_EQ(e.line(), line) << e.what();
        }
    };
    expect_error(replace(kQuadric, "\"eta\": [1, 1]", "\"eta\": [1, \"x\"]"), "eta[1]", 6);
    expect_error(replace(kQuadric, "\"eta\": [1, 1]", "\"eta\": [1]"), "eta", 6);
    expect_error(replace(kQuadric, "\"order\": 4", "\"order\": -1"), "order", 8);
    expect_error(replace(kQuadric, "\"weak_duality\"", "\"strong_duality\""), "checks[0]", 10);
    expect_error(replace(kQuadric, "\"weak_duality\"", "\"stack_duality\""), "checks[0]", 10);
    expect_error(replace(kQuadric, "\"q\": 2", "\"q\": 6"), "curve", 7);
    expect_error(replace(kQuadric, "\"name\": \"q\",", "\"nam\": \"q\","), "nam", 2);
    expect_error(replace(kQuadric, "{\"formal\": true}]", "{\"root\": 1, \"v\": 0}]"), "characters[0].coordinates[1].v", 9);
    try {
        parse_scenario("{\n\"name\": \n}");
        ADD_FAILURE();
    } catch (const ScenarioError& e) {
        EXPECT_EQ(e.line(), 3);
    }
}

TEST(ScenarioParse, CatalogRoundTrip) {
    for (const auto& e : catalog_entries()) {
        Scenario s = catalog_scenario(e.name);
        json j = scenario_json(s);
        EXPECT_EQ(scenario_json(parse_scenario(j.dump())), j) << e.name;
    }
}

TEST(Catalog, Contents) {
    EXPECT_GE(catalog_entries().size(), 6u);
    Scenario w = catalog_scenario("weight_n_stack", {.n = 2});
    ASSERT_TRUE(w.isogeny);
    EXPECT_EQ(w.isogeny->inclusion, Matrix{vec({2})});
    EXPECT_EQ(w.curve.q, 3);
    EXPECT_EQ(catalog_scenario("weight_n_stack", {.n = 3}).curve.q, 4);
    EXPECT_EQ(catalog_scenario("weight_n_stack", {.n = 5}).curve.q, 11);
    Scenario q = catalog_scenario("quadric_cone");
    EXPECT_EQ(q.rays, (Matrix{vec({1, 0}), vec({1, 2})}));
    EXPECT_EQ(q.rho, vec({1, 1}));
    EXPECT_EQ(q.eta, vec({1, 1}));
    Scenario o = catalog_scenario("tate", {.q = 5, .order = 7});
    EXPECT_EQ(o.curve.q, 5);
    EXPECT_EQ(o.order, 7);
    EXPECT_THROW(catalog_scenario("nope"), std::invalid_argument);
}

TEST(Cli, CatalogListAndEmit) {
    CliRun l = run("catalog list");
    EXPECT_EQ(l.rc, 0);
    EXPECT_GE(std::count(l.out.begin(), l.out.end(), '\n'), 6);
    TempDir d;
    CliRun e = run("catalog emit weight_n_stack --n 2", "TORICDUAL_OUT_DIR=" + d.path().string());
    EXPECT_EQ(e.rc, 0) << e.out;
    json j = json::parse(slurp(d.path() / "weight_2_stack.json"));
    EXPECT_EQ(j["isogeny"]["inclusion"], json::parse("[[2]]"));
    EXPECT_EQ(j["curve"]["q"], 3);
    CliRun f = run("catalog emit tate --q 3 --order 5 --out " + (d.path() / "t.json").string());
    EXPECT_EQ(f.rc, 0);
    json t = json::parse(slurp(d.path() / "t.json"));
    EXPECT_EQ(t["curve"]["q"], 3);
    EXPECT_EQ(t["order"], 5);
    EXPECT_EQ(run("catalog emit nope").rc, 2);
    EXPECT_EQ(run("frobnicate").rc, 2);
}

// The shipped scenario files are the catalog's output, and each passes.
TEST(Cli, GoldenCatalog) {
    TempDir d;
    for (const auto& e : catalog_entries()) {
        if (e.name == "weight_n_stack") continue;
        fs::path shipped = fs::path(TORICDUAL_SCENARIOS) / (e.name + ".json");
        ASSERT_TRUE(fs::exists(shipped)) << shipped;
        EXPECT_EQ(slurp(shipped), scenario_json(catalog_scenario(e.name)).dump(2) + "\n") << e.name;
        fs::path copy = d.path() / (e.name + ".json");
        fs::copy_file(shipped, copy);
        CliRun r = run("verify " + copy.string());
        EXPECT_EQ(r.rc, 0) << r.out;
        json rep = json::parse(slurp(d.path() / (e.name + ".report.json")));
        EXPECT_TRUE(rep["passed"].get<bool>()) << e.name;
    }
}

TEST(Cli, TateVerdict) {
    TempDir d;
    fs::path p = d.write("tate.json", scenario_json(catalog_scenario("tate")).dump());
    CliRun r = run("verify --json " + p.string());
    ASSERT_EQ(r.rc, 0) << r.out;
    json rep = json::parse(r.out);
    EXPECT_EQ(r.out, slurp(d.path() / "tate.report.json"));
    const json& weak = rep["checks"][0];
    EXPECT_EQ(weak["check"], "weak_duality");
    for (const auto& dir : weak["results"][0]["directions"]) EXPECT_EQ(dir["verdict"], "equal");
    EXPECT_EQ(rep["tool"], "toricdual");
    EXPECT_EQ(rep["seed"], 0);
}

TEST(Cli, RejectsNonConvexCone) {
    TempDir d;
    fs::path p = d.write("line.json", replace(kQuadric, "[[1, 0], [1, 2]]", "[[1, 0], [-1, 0], [0, 1]]"));
    CliRun r = run("verify " + p.string());
    EXPECT_EQ(r.rc, 2);
    EXPECT_NE(r.out.find("NotStronglyConvex"), std::string::npos) << r.out;
}

TEST(Cli, SchemaErrorExitTwo) {
    TempDir d;
    fs::path p = d.write("bad.json", replace(kQuadric, "\"order\": 4", "\"order\": \"four\""));
    CliRun r = run("verify " + p.string());
    EXPECT_EQ(r.rc, 2);
    EXPECT_NE(r.out.find(":8:"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("order"), std::string::npos);
    EXPECT_EQ(run("verify " + (d.path() / "missing.json").string()).rc, 2);
}

TEST(Cli, WrongEtaReportsWitness) {
    // (2,-1) pairs to 0 with the ray (1,2): one step outside the interior
    TempDir d;
    fs::path p = d.write("q.json", replace(kQuadric, "\"eta\": [1, 1]", "\"eta\": [2, -1]"));
    CliRun r = run("verify --json " + p.string());
    EXPECT_EQ(r.rc, 1);
    json rep = json::parse(r.out);
    EXPECT_FALSE(rep["validation"]["passed"].get<bool>());
    bool found = false;
    for (const auto& e : rep["validation"]["entries"])
        if (e["side"] == "X" && e["condition"] == "eigenform_pole_free") {
            EXPECT_FALSE(e["passed"].get<bool>());
            EXPECT_EQ(e["witness"], json::parse("[1, 2]"));
            found = true;
        }
    EXPECT_TRUE(found);
}

TEST(Cli, IncompatibleFieldFailsCheck) {
    TempDir d;
    json s = scenario_json(catalog_scenario("weight_2_stack", {.q = 2}));
    fs::path p = d.write("w.json", s.dump());
    CliRun r = run("verify --json " + p.string());
    EXPECT_EQ(r.rc, 1);
    json rep = json::parse(r.out);
    for (const auto& c : rep["checks"])
        if (c["check"] == "stack_duality") {
            EXPECT_EQ(c["results"][0]["error"]["kind"], "IncompatibleField");
        }
}

TEST(Report, MismatchCarriesFirstCoefficient) {
    Comparison c = compare_series(Series::one(1, 1).truncated(3), (Series::one(1, 1) + Series::monomial(1, {0, 2, {1}}, 1)).truncated(3), 3);
    json j = comparison_json(c);
    EXPECT_FALSE(j["equal"].get<bool>());
    EXPECT_EQ(j["first_mismatch"]["u"], 2);
    EXPECT_EQ(j["first_mismatch"]["rhs"], json::parse(R"([{"z": [1], "c": ["1"]}])"));
}

TEST(Cli, DeterministicAcrossJobs) {
    TempDir d;
    for (const char* name : {"quadric_cone", "weight_3_stack"}) {
        fs::path p = d.write(std::string(name) + ".json", scenario_json(catalog_scenario(name, {.order = 6})).dump());
        CliRun a = run("verify --json --jobs 1 " + p.string());
        CliRun b = run("verify --json --jobs 4 " + p.string());
        CliRun c = run("verify --json --jobs 4 " + p.string());
        EXPECT_EQ(a.rc, 0);
        EXPECT_EQ(a.out, b.out);
        EXPECT_EQ(b.out, c.out);
    }
}
