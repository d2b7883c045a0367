#include "dpatch/analysis.hpp"
#include "dpatch/cli.hpp"
#include "dpatch/io.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dpatch;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "dpatch");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("dpatch_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string report_value(const std::string& report, const std::string& key) {
    std::istringstream is(report);
    for (std::string line; std::getline(is, line);)
        if (line.rfind(key + ": ", 0) == 0) return line.substr(key.size() + 2);
    return {};
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("list") {
    const auto r = cli({"list"});
    CHECK(r.code == exit_ok);
    for (const char* name : {"M1", "M2", "M3", "M4"}) CHECK(r.out.find(name) != std::string::npos);
}

TEST_CASE("run writes one row per node and time") {
    const auto dir = scratch("run");
    const auto r = cli({"run", "--problem", "M1", "--out", dir.string(), "--micro"});
    CHECK(r.code == exit_ok);
    const auto text = slurp(dir / "macro.csv");
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 61 * 6);
    CHECK(fs::exists(dir / "micro.csv"));
}

TEST_CASE("unknown archetype is a config error naming the key") {
    auto r = cli({"run", "--problem", "M9"});
    CHECK(r.code == exit_config);
    CHECK(r.err.find("--problem") != std::string::npos);
    CHECK(r.err.find("M9") != std::string::npos);

    const auto dir = scratch("badcfg");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.ini") << "[problem]\nname = M9\n";
    r = cli({"run", "--config", (dir / "bad.ini").string()});
    CHECK(r.code == exit_config);
    CHECK(r.err.find("'name'") != std::string::npos);

    CHECK(cli({"run"}).code == exit_config);
    CHECK(cli({"frobnicate"}).code == exit_config);
    CHECK(cli({"compare", "--problem", "M1", "--oracle", "exact"}).code == exit_config);
}

TEST_CASE("quadrature is refused for nonlinear diffusivity") {
    const auto r = cli({"compare", "--problem", "M3", "--oracle", "quadrature", "--out", scratch("refuse").string()});
    CHECK(r.code == exit_config);
    CHECK(r.err.find("nonlinear") != std::string::npos);
}

TEST_CASE("numerical failure exits with status 2") {
    const auto dir = scratch("blowup");
    fs::create_directories(dir);
    std::ofstream(dir / "fast.ini") << "[problem]\nname = M2\n[stepper]\ndt = 0.05\n";
    const auto r = cli({"run", "--config", (dir / "fast.ini").string(), "--out", dir.string()});
    CHECK(r.code == exit_numerical);
    CHECK(r.err.find("numerical") != std::string::npos);
}

TEST_CASE("compare report round-trips through the macro file") {
    const auto dir = scratch("compare");
    const auto r = cli({"compare", "--problem", "M1", "--oracle", "quadrature", "--out", dir.string()});
    REQUIRE(r.code == exit_ok);
    const double global = std::stod(report_value(r.out, "global_max"));
    CHECK(global <= 2e-4);

    std::ifstream in(dir / "macro.csv");
    const auto traj = io::read_macro_csv(in);
    const auto again = max_error(traj, ColeHopfOracle(make_archetype(ArchetypeId::M1)));
    std::ostringstream os;
    io::write_error_report(os, again, "quadrature");
    CHECK(os.str() == slurp(dir / "report.txt"));
    CHECK(fs::exists(dir / "errors.csv"));
}

TEST_CASE("print-config output drives an identical run") {
    const auto dir = scratch("printcfg");
    fs::create_directories(dir);
    const auto printed = cli({"run", "--problem", "M2", "--print-config"});
    REQUIRE(printed.code == exit_ok);
    CHECK(printed.out.find("[layout]") != std::string::npos);
    std::ofstream(dir / "m2.ini") << printed.out;

    REQUIRE(cli({"run", "--problem", "M2", "--out", (dir / "a").string()}).code == exit_ok);
    REQUIRE(cli({"run", "--config", (dir / "m2.ini").string(), "--out", (dir / "b").string()}).code == exit_ok);
    CHECK(slurp(dir / "a" / "macro.csv") == slurp(dir / "b" / "macro.csv"));
}

TEST_CASE("converge") {
    const auto dir = scratch("converge");
    fs::create_directories(dir);
    auto r = cli({"converge", "--out", dir.string()});
    REQUIRE(r.code == exit_ok);
    const double slope = std::stod(report_value(r.out, "slope"));
    CHECK(slope >= 1.6);
    CHECK(slope <= 2.4);
    CHECK(fs::exists(dir / "convergence.csv"));

    std::ofstream(dir / "two.ini") << "[converge]\nintervals = 24 32\n";
    r = cli({"converge", "--config", (dir / "two.ini").string(), "--out", dir.string()});
    CHECK(r.code == exit_config);
}

TEST_CASE("converge with gamma 3") {
    const auto r = cli({"converge", "--gamma", "3", "--out", scratch("converge3").string()});
    REQUIRE(r.code == exit_ok);
    CHECK(std::stod(report_value(r.out, "slope")) >= 5.0);
}

TEST_CASE("oracle tables") {
    const auto dir = scratch("oracle");
    fs::create_directories(dir);
    std::ofstream(dir / "o.ini") << "[problem]\nname = M2\n[stepper]\noutput_count = 3\n[oracle]\nsamples = 11\n";
    auto r = cli({"oracle", "--config", (dir / "o.ini").string(), "--out", dir.string()});
    REQUIRE(r.code == exit_ok);
    const auto text = slurp(dir / "oracle.csv");
    CHECK(text.rfind("x,t,u\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 3 * 11);

    // The default fine grid holds on M2 until the shock steepens near t = 1.1.
    std::ofstream(dir / "b.ini") << "[problem]\nname = M2\nt_final = 1\n[stepper]\noutput_count = 3\n"
                                    "[oracle]\nsamples = 11\n";
    r = cli({"oracle", "--config", (dir / "b.ini").string(), "--oracle", "brute", "--out", dir.string()});
    CHECK(r.code == exit_ok);
    r = cli({"oracle", "--config", (dir / "o.ini").string(), "--oracle", "brute", "--out", dir.string()});
    CHECK(r.code == exit_numerical);
    CHECK(r.err.find("Peclet") != std::string::npos);
}

TEST_CASE("identical runs give identical bytes") {
    const auto a = scratch("det_a"), b = scratch("det_b");
    REQUIRE(cli({"compare", "--problem", "M1", "--out", a.string()}).code == exit_ok);
    REQUIRE(cli({"compare", "--problem", "M1", "--out", b.string()}).code == exit_ok);
    for (const char* f : {"macro.csv", "report.txt", "errors.csv"}) CHECK(slurp(a / f) == slurp(b / f));
}

}
