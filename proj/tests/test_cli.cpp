#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "decmg/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const std::string kCli = DECMG_CLI_PATH;

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path sandbox() {
    const fs::path dir = fs::temp_directory_path() / "decmg_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> read_lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> lines;
    std::string l;
    while (std::getline(in, l)) lines.push_back(l);
    return lines;
}

} // namespace

TEST_CASE("mesh generate + inspect round trip") {
    const fs::path dir = sandbox();
    const std::string obj = (dir / "grid.obj").string();
    CHECK(run("mesh generate grid 4 4 --out " + obj) == 0);
    CHECK(fs::exists(obj));
    CHECK(run("mesh inspect " + obj) == 0);
}

TEST_CASE("mesh inspect rejects corrupted OBJ files with exit 3") {
    const fs::path dir = sandbox();
    const fs::path bad = dir / "bad.obj";
    {
        std::ofstream out(bad);
        out << "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 4\n";
    }
    CHECK(run("mesh inspect " + bad.string()) == 3);
}

TEST_CASE("mesh subdivide writes the fine OBJ and the map") {
    const fs::path dir = sandbox();
    const std::string obj = (dir / "base.obj").string();
    REQUIRE(run("mesh generate equilateral 1 2 --out " + obj) == 0);
    const std::string fine = (dir / "fine.obj").string();
    const std::string map = (dir / "map.mtx").string();
    CHECK(run("mesh subdivide " + obj + " --scheme cubic --iterations 2 --out-mesh " +
              fine + " --out-map " + map) == 0);
    CHECK(fs::exists(fine));
    CHECK(fs::exists(map));
    CHECK(fs::exists(map + ".json"));
    CHECK(run("mesh inspect " + fine) == 0);
}

TEST_CASE("poisson run writes report and residuals") {
    const fs::path dir = sandbox() / "poisson_run";
    CHECK(run("poisson --levels 2 --scheme binary --cycles 6 --solver gmg --seed 1 --out " +
              dir.string()) == 0);
    CHECK(fs::exists(dir / "report.json"));
    const auto lines = read_lines(dir / "residuals.csv");
    REQUIRE(lines.size() >= 2);
    CHECK(lines[0] == "cycle,rel_residual,cumulative_seconds");
    // residuals strictly decrease before the floor
    double prev = 1e300;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::istringstream is(lines[i]);
        std::string cell;
        std::getline(is, cell, ',');
        std::getline(is, cell, ',');
        const double r = std::stod(cell);
        if (prev > 1e-12) CHECK(r < prev);
        prev = r;
    }
}

TEST_CASE("poisson direct solver reaches machine-level residuals") {
    const fs::path dir = sandbox() / "poisson_direct";
    CHECK(run("poisson --levels 1 --solver direct --out " + dir.string()) == 0);
    const auto lines = read_lines(dir / "report.json");
    std::string all;
    for (const auto& l : lines) all += l;
    CHECK(all.find("final_relative_residual") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("poisson --scheme hexary") == 2);
    CHECK(run("definitely-not-a-subcommand") == 2);
}

TEST_CASE("missing config file exits with code 1") {
    CHECK(run("poisson --config /nonexistent/config.json") == 1);
}

TEST_CASE("unknown config keys are rejected with exit 3") {
    const fs::path dir = sandbox();
    const fs::path cfg = dir / "bad_key.json";
    {
        std::ofstream out(cfg);
        out << R"({"mesh": {"type": "grid", "nx": 2, "ny": 2}, "frobnicate": 1})";
    }
    CHECK(run("poisson --config " + cfg.string()) == 3);
}

TEST_CASE("convection with tfinal 0 emits the initial state; rmse vs itself is 0") {
    const fs::path dir = sandbox() / "conv0";
    const fs::path cfg = sandbox() / "conv.json";
    {
        std::ofstream out(cfg);
        out << R"({"convection": {"nx": 8, "ny": 8, "levels": 2, "num_samples": 1},
                   "solver": {"kind": "direct"}})";
    }
    CHECK(run("convection --config " + cfg.string() + " --tfinal 0 --out " +
              dir.string()) == 0);
    CHECK(fs::exists(dir / "traj_000.csv"));
    CHECK(fs::exists(dir / "summary.json"));

    const fs::path dir2 = sandbox() / "conv0_ref";
    CHECK(run("convection --config " + cfg.string() + " --tfinal 0 --out " +
              dir2.string() + " --reference " + dir.string()) == 0);
    const auto lines = read_lines(dir2 / "rmse.csv");
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "t,rmse");
    std::istringstream is(lines[1]);
    std::string t, r;
    std::getline(is, t, ',');
    std::getline(is, r, ',');
    CHECK(std::stod(r) == 0.0);
}

TEST_CASE("config echo in report.json reproduces the run parameters") {
    const fs::path dir = sandbox() / "poisson_echo";
    CHECK(run("poisson --levels 2 --solver gmg --seed 9 --cycles 4 --out " +
              dir.string()) == 0);
    const auto lines = read_lines(dir / "report.json");
    std::string all;
    for (const auto& l : lines) all += l;
    CHECK(all.find("\"seed\": 9") != std::string::npos);
    CHECK(all.find("\"levels\": 2") != std::string::npos);
    CHECK(all.find("\"scheme\": \"binary\"") != std::string::npos);
}
