// toricdual: verify scenarios and emit catalog entries.
//
// Exit codes: 0 every hard check passed, 1 a check or the datum validation
// failed, 2 the input was rejected (schema, parse, non-convex cone, usage).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "toricdual/report.hpp"

namespace fs = std::filesystem;
using namespace toricdual;

namespace {

int verify(const std::string& path, bool as_json, long jobs) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot read " << path << "\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    RunResult res;
    try {
        Scenario s = parse_scenario(buf.str());
        res = run_scenario(s, EngineOptions{static_cast<unsigned>(std::max(1L, jobs))});
    } catch (const ScenarioError& e) {
        std::cerr << path;
        if (e.line() > 0) std::cerr << ":" << e.line();
        std::cerr << ": schema error: " << e.what() << "\n";
        return 2;
    } catch (const NotStronglyConvex& e) {
        std::cerr << path << ": " << e.what();
        if (!e.witness().empty()) std::cerr << " witness " << json(e.witness()).dump();
        std::cerr << "\n";
        return 2;
    } catch (const DimensionMismatch& e) {
        std::cerr << path << ": schema error: " << e.what() << "\n";
        return 2;
    }
    const std::string text = dump_report(res.report);
    fs::path out = fs::path(path).parent_path() / (fs::path(path).stem().string() + ".report.json");
    std::ofstream(out, std::ios::binary) << text;
    if (as_json) std::cout << text;
    else std::cout << summarize(res.report) << "report: " << out.string() << "\n";
    return res.exit_code;
}

int emit(const std::string& name, const CatalogOptions& opt, std::string out, bool to_stdout) {
    Scenario s;
    try {
        s = catalog_scenario(name, opt);
        s.curve.validate();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    const std::string text = scenario_json(s).dump(2) + "\n";
    if (to_stdout) {
        std::cout << text;
        return 0;
    }
    if (out.empty()) {
        const char* dir = std::getenv("TORICDUAL_OUT_DIR");
        out = (fs::path(dir ? dir : ".") / (s.name + ".json")).string();
    } else if (fs::is_directory(out)) {
        out = (fs::path(out) / (s.name + ".json")).string();
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot write " << out << "\n";
        return 2;
    }
    f << text;
    std::cout << out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"toricdual: exact checks of toric period duality"};
    app.require_subcommand(1);

    std::string file;
    bool as_json = false;
    long jobs = 1;
    auto* v = app.add_subcommand("verify", "run the checks of a scenario file");
    v->add_option("file", file, "scenario JSON")->required();
    v->add_flag("--json", as_json, "print the JSON report instead of a summary");
    v->add_option("--jobs", jobs, "threads for Euler factors")->check(CLI::PositiveNumber);

    auto* cat = app.add_subcommand("catalog", "built-in scenarios");
    cat->require_subcommand(1);
    auto* list = cat->add_subcommand("list", "list catalog entries");
    std::string name, out;
    long q = 0, order = -1, n = 0;
    bool to_stdout = false;
    auto* em = cat->add_subcommand("emit", "write a catalog scenario");
    em->add_option("name", name, "entry name")->required();
    em->add_option("--q", q, "field size");
    em->add_option("--order", order, "truncation order U");
    em->add_option("--n", n, "weight for weight_n_stack");
    em->add_option("--out", out, "output file or directory (default: $TORICDUAL_OUT_DIR or .)");
    em->add_flag("--stdout", to_stdout, "print instead of writing a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (v->parsed()) return verify(file, as_json, jobs);
    if (list->parsed()) {
        for (const auto& e : catalog_entries()) std::cout << e.name << "\t" << e.summary << "\n";
        return 0;
    }
    CatalogOptions opt;
    if (em->count("--q")) opt.q = q;
    if (em->count("--order")) opt.order = order;
    if (em->count("--n")) opt.n = n;
    return emit(name, opt, out, to_stdout);
}
