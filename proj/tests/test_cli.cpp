#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "slob/config.hpp"
#include "slob/csv.hpp"
#include "slob/figures.hpp"
#include "slob/svg.hpp"

using namespace slob;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path dir;
    TempDir(const char* tag) : dir(fs::temp_directory_path() / tag) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~TempDir() { fs::remove_all(dir); }
};

} // namespace

TEST_CASE("config file parsing, overrides and validation") {
    TempDir tmp("slob_cfg_test");
    const std::string path = (tmp.dir / "run.cfg").string();
    {
        std::ofstream f(path);
        f << "# sample config\n"
          << "gamma0 = 0.02\n"
          << "regime = both\n"
          << "dt = 2e-4\n"
          << "snapshots = 0, 0.5, 1\n"
          << "gamma_sweep = 0.005:0.02:4\n";
    }
    RunConfig cfg = load_config(path);
    CHECK(cfg.params.gamma[0] == 0.02);
    CHECK(cfg.regime == Regime::both);
    CHECK(cfg.dt == 2e-4);
    CHECK(cfg.snapshots.size() == 3);
    CHECK(cfg.gamma_sweep_count == 4);
    CHECK_NOTHROW(cfg.validate());

    SUBCASE("flag overrides win over the file") {
        apply_override(cfg, "regime", "one");
        apply_override(cfg, "paths", "123");
        CHECK(cfg.regime == Regime::one);
        CHECK(cfg.paths == 123);
    }
    SUBCASE("invalid values are rejected") {
        apply_override(cfg, "beta", "1.0");
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        CHECK_THROWS_AS(apply_override(cfg, "regime", "two"), std::invalid_argument);
        CHECK_THROWS_AS(apply_override(cfg, "no_such_key", "1"), std::invalid_argument);
        apply_override(cfg, "beta", "0.6");
        apply_override(cfg, "q0_0", "99");
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("malformed files carry line numbers") {
        const std::string bad = (tmp.dir / "bad.cfg").string();
        {
            std::ofstream f(bad);
            f << "sigma = 1.2\nnot a key value line\n";
        }
        try {
            load_config(bad);
            FAIL("expected a parse error");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find(":2") != std::string::npos);
        }
    }
}

TEST_CASE("csv writer and solve dump") {
    TempDir tmp("slob_csv_test");
    const std::string path = (tmp.dir / "table.csv").string();
    write_csv(path, {"a", "b"}, {{"1", "2"}, {"3", "4"}});
    CHECK(slurp(path) == "a,b\n1,2\n3,4\n");
    CHECK(fmt_num(0.30000000000000004) == "0.3");
    CHECK(fmt_num(-12.0) == "-12");

    ModelParams p = ModelParams::baseline();
    p.T = 0.01;
    SolveOptions opt;
    opt.dt = 1e-4;
    const SolveResult res = solve_regime(p, Regime::none, opt);
    const std::string spath = (tmp.dir / "solve.csv").string();
    write_solve_csv(spath, res, {0.0, p.T});
    const std::string body = slurp(spath);
    CHECK(body.find("t,q0,q1,v0,v1,z0_b00") == 0);
    // one header + one row per state per snapshot
    const size_t rows = std::count(body.begin(), body.end(), '\n');
    CHECK(rows == 1 + 2 * static_cast<size_t>(res.lattice.size()));
}

TEST_CASE("svg chart output is a pure function of its series") {
    TempDir tmp("slob_svg_test");
    auto make = [&](const std::string& name) {
        SvgChart chart("demo", "x", "y");
        chart.add_series("a", {0, 1, 2}, {1.0, -0.5, 2.0});
        chart.add_series("b", {0, 1, 2}, {0.0, 0.25, -1.0});
        const std::string path = (tmp.dir / name).string();
        chart.write(path);
        return slurp(path);
    };
    const std::string one = make("c1.svg"), two = make("c2.svg");
    CHECK(one == two);
    CHECK(one.find("<svg") == 0);
    CHECK(one.find("polyline") != std::string::npos);
    CHECK(one.find("demo") != std::string::npos);
}

TEST_CASE("figure panels are emitted deterministically") {
    TempDir tmp("slob_fig_test");
    RunConfig cfg;
    cfg.params.T = 0.02;
    cfg.dt = 2e-4;
    cfg.out_dir = (tmp.dir / "out").string();
    cfg.figure = "fig4a";
    const auto files = run_figures(cfg);
    REQUIRE(files.size() == 2);
    const std::string csv1 = slurp(files[0]);
    const std::string svg1 = slurp(files[1]);
    CHECK(csv1.find("q0,none_m0,none_m1,one_m0,one_m1,both_m0,both_m1") == 0);
    // parameters ride along so every panel is self-contained
    CHECK(csv1.find("sigma") != std::string::npos);

    const auto files2 = run_figures(cfg);
    CHECK(slurp(files2[0]) == csv1);
    CHECK(slurp(files2[1]) == svg1);
}
