#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "nwinterp/config.hpp"
#include "nwinterp/errors.hpp"
#include "nwinterp/figures.hpp"

using namespace nwinterp;

TEST_CASE("config parsing: key = value with comments") {
    std::stringstream in(
        "# experiment setup\n"
        "scenario.name = lipschitz-cone\n"
        "scenario.d = 1\n"
        "experiment.n_grid = 256, 512, 1024  # geometric\n"
        "kernel.a = 0.49\n"
        "\n");
    const RunConfig cfg = RunConfig::parse(in, "t");
    CHECK(cfg.get("scenario.name") == "lipschitz-cone");
    CHECK(cfg.get_int("scenario.d") == 1);
    CHECK(cfg.get_double("kernel.a") == 0.49);
    CHECK(cfg.get_int_list("experiment.n_grid") ==
          std::vector<long long>{256, 512, 1024});
    CHECK(cfg.get_or("missing", "fallback") == "fallback");
    CHECK_THROWS_AS(cfg.get("missing"), ConfigError);
}

TEST_CASE("config parsing errors") {
    std::stringstream no_eq("just a line\n");
    CHECK_THROWS_AS(RunConfig::parse(no_eq), ConfigError);
    std::stringstream dup("a = 1\na = 2\n");
    CHECK_THROWS_AS(RunConfig::parse(dup), ConfigError);
    std::stringstream bad_num("a = xyz\n");
    CHECK_THROWS_AS(RunConfig::parse(bad_num).get_double("a"), ConfigError);
}

TEST_CASE("unknown keys are rejected, prefixed params allowed") {
    std::stringstream in(
        "scenario.name = smooth-sine\n"
        "scenario.param.sigma = 0.2\n"
        "mystery.key = 1\n");
    const RunConfig cfg = RunConfig::parse(in, "t");
    CHECK_THROWS_WITH_AS(
        cfg.require_known_keys({"scenario.name", "scenario.param.*"}),
        doctest::Contains("mystery.key"), ConfigError);
    CHECK_NOTHROW(cfg.require_known_keys(
        {"scenario.name", "scenario.param.*", "mystery.key"}));
}

TEST_CASE("figure row counts and interpolation on every curve") {
    FigureSpec spec = default_figure_spec("interp-singular");
    spec.grid_resolution = 128;
    const FigureData fig = emit_interpolation_curves(spec);
    CHECK(fig.rows.size() == spec.h_list.size() * (128 + spec.n));
    CHECK(fig.data.size() == spec.n);

    // Every (X_i, Y_i) appears on every curve.
    for (double h : spec.h_list) {
        for (std::size_t i = 0; i < fig.data.size(); ++i) {
            bool found = false;
            for (const auto& row : fig.rows) {
                if (row.h == h && row.x == fig.data.points[i] &&
                    row.fn == fig.data.responses[i]) {
                    found = true;
                    break;
                }
            }
            CHECK(found);
        }
    }
}

TEST_CASE("figure emission is deterministic") {
    for (const char* id : {"interp-truncpoly", "binary-gaussian"}) {
        FigureSpec spec = default_figure_spec(id);
        spec.grid_resolution = 64;
        const FigureData a = emit_interpolation_curves(spec);
        const FigureData b = emit_interpolation_curves(spec);
        REQUIRE(a.rows.size() == b.rows.size());
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            CHECK(a.rows[i].x == b.rows[i].x);
            CHECK(a.rows[i].fn == b.rows[i].fn);
        }
    }
}

TEST_CASE("binary figures carry label data") {
    FigureSpec spec = default_figure_spec("binary-truncpoly");
    spec.grid_resolution = 32;
    const FigureData fig = emit_interpolation_curves(spec);
    for (double y : fig.data.responses) CHECK((y == 1.0 || y == -1.0));
}

TEST_CASE("unknown figure id") {
    CHECK_THROWS_AS(default_figure_spec("interp-unknown"), InvalidParams);
}

TEST_CASE("figure CSV output is re-parseable and stable") {
    FigureSpec spec = default_figure_spec("epanechnikov");
    spec.grid_resolution = 32;
    const FigureData fig = emit_interpolation_curves(spec);
    const std::string curves = "test_fig_curves.csv";
    const std::string points = "test_fig_points.csv";
    write_figure_csv(fig, curves, points);
    write_figure_svg(fig, "test_fig.svg");

    auto slurp = [](const std::string& path) {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string first = slurp(curves);
    write_figure_csv(fig, curves, points);
    CHECK(slurp(curves) == first);
    CHECK(first.rfind("h,x,fn\n", 0) == 0);
    CHECK(slurp(points).rfind("x,y\n", 0) == 0);
    CHECK(slurp("test_fig.svg").rfind("<svg", 0) == 0);
    std::remove(curves.c_str());
    std::remove(points.c_str());
    std::remove("test_fig.svg");
}
