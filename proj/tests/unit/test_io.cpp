#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "tessera/io.hpp"
#include "tessera/models.hpp"
#include "tessera/power.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace tessera;
using nlohmann::json;

namespace {

std::string tmp(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "tessera_unit";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(TESSERA_CLI_PATH) + " " + args + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string csv(const CharacteristicsReport& r) {
    std::ostringstream os;
    write_report_csv(os, r);
    return os.str();
}

}  // namespace

TEST_CASE("shortest round-trip formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
    CHECK(std::stod(format_double(M_PI)) == M_PI);
    CHECK(format_double(NAN) == "nan");
}

TEST_CASE("planar export and import round trip") {
    auto t = voronoi(sample_poisson<2>(Window2::unit(EdgeMode::periodic), 100.0, Seed{1}));
    t.params = {{"lambda", 100}};
    t.seed = 1;
    const std::string path = tmp("pv.json");
    export_tessellation(t, path);
    const auto back = import_tessellation(path);
    REQUIRE(std::holds_alternative<Tessellation2>(back));
    CHECK(to_json(back) == to_json(t));
    CHECK(csv(estimate(std::get<Tessellation2>(back))) == csv(estimate(t)));
    CHECK(dump(to_json(back)) == read_text(path));
}

TEST_CASE("plus-mode and segment fields survive export") {
    const auto any = generate("stit", {{"a", 5.0}}, Seed{2});
    const auto back = from_json(json::parse(dump(to_json(any))));
    const auto& a = std::get<Tessellation2>(any);
    const auto& b = std::get<Tessellation2>(back);
    CHECK(a.segments.size() == b.segments.size());
    CHECK(csv(estimate(a)) == csv(estimate(b)));
}

TEST_CASE("spatial and raster round trips") {
    const auto t3 = generate("pv3", {{"lambda", 30}}, Seed{3});
    CHECK(to_json(from_json(to_json(t3))) == to_json(t3));
    const auto& a = std::get<Tessellation3>(t3);
    const auto back = from_json(to_json(t3));
    const auto& b = std::get<Tessellation3>(back);
    CHECK(estimate(a)["mu1"] == estimate(b)["mu1"]);
    const auto r = generate("raster", {{"lambda", 20}, {"metric", "voronoi_l1"}, {"resolution", 64}}, Seed{4});
    const auto rb = from_json(json::parse(dump(to_json(r))));
    CHECK(std::get<RasterTessellation>(rb).labels == std::get<RasterTessellation>(r).labels);
    CHECK(to_json(rb) == to_json(r));
}

TEST_CASE("schema version is checked") {
    auto j = to_json(generate("voronoi", {{"lambda", 10}}, Seed{1}));
    j["schema_version"] = kSchemaVersion + 1;
    CHECK_THROWS_AS(from_json(j), FormatError);
    j.erase("schema_version");
    CHECK_THROWS_AS(from_json(j), FormatError);
    CHECK_THROWS_AS(from_json(json::array()), FormatError);
    json k = to_json(generate("voronoi", {{"lambda", 10}}, Seed{1}));
    k["cells"][0].erase("vertex_ring");
    CHECK_THROWS_AS(from_json(k), FormatError);
}

TEST_CASE("two cells render as two polygons") {
    json p = {{"points", {{"process", "explicit"}, {"coords", {{0.25, 0.5}, {0.75, 0.5}}}}}};
    const auto t = std::get<Tessellation2>(generate("voronoi", p, Seed{1}));
    REQUIRE(t.cells.size() == 2);
    CHECK(t.cells[0].polygon.area() == doctest::Approx(0.5));
    const std::string svg = render_svg(t);
    std::size_t count = 0;
    for (auto pos = svg.find("<polygon"); pos != std::string::npos; pos = svg.find("<polygon", pos + 1)) ++count;
    CHECK(count == 2);
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("stroke=\"black\"") != std::string::npos);
}

TEST_CASE("parameter errors carry their path") {
    try {
        generate("voronoi", {{"lambda", 10}, {"window", {{"edge_mode", "mirror"}}}}, Seed{1});
        FAIL("expected an error");
    } catch (const ParameterError& e) {
        CHECK(std::string(e.what()).find("params.window.edge_mode") != std::string::npos);
    }
    CHECK_THROWS_AS(generate("laguerre", {{"lambda", 10}}, Seed{1}), ParameterError);
    CHECK_THROWS_AS(generate("stit", {{"a", 1}, {"rose", "hexagonal"}}, Seed{1}), ParameterError);
    CHECK_THROWS_AS(generate("division", {{"stop_time", 1}, {"target_cells", 5}}, Seed{1}), ParameterError);
    CHECK_THROWS_AS(generate("voronoi", {{"lambda", "many"}}, Seed{1}), ParameterError);
}

TEST_CASE("every model generates") {
    const std::vector<std::pair<std::string, json>> cases{
        {"voronoi", {{"lambda", 20}}},
        {"voronoi", {{"lambda", 20}, {"dim", 3}}},
        {"laguerre", {{"lambda", 20}, {"radii", {{"dist", "uniform"}, {"lo", 0.02}, {"hi", 0.08}}}}},
        {"delaunay", {{"points", {{"process", "binomial"}, {"n", 30}}}}},
        {"beta-delaunay", {{"gamma", 1}, {"beta", 2}, {"window", {{"hi", {3, 3}}}}}},
        {"lloyd", {{"lambda", 20}, {"iterations", 3}}},
        {"plt", {{"lambda", 5}}},
        {"php3d", {{"lambda", 3}}},
        {"stit", {{"a", 5}, {"rose", "axis"}}},
        {"division", {{"target_cells", 20}, {"lifetime", "L_AREA"}, {"division", "D_RDSSQ"}}},
        {"gilbert", {{"lambda", 10}, {"mode", "rectangular"}}},
        {"acs", {{"lambda", 5}}},
        {"dead-leaves", {{"size", {{"dist", "constant"}, {"value", 0.2}}}, {"resolution", 64}}},
        {"iterate", {{"base", {{"model", "voronoi"}, {"params", {{"lambda", 5}}}}},
                     {"component", {{"model", "plt"}, {"params", {{"lambda", 5}}}}}}},
        {"raster", {{"lambda", 20}, {"metric", "gbpd"}, {"ellipses", {{"major", {0.4, 0.7}}, {"minor", {0.1, 0.4}}}},
                    {"weights", {{"dist", "uniform"}, {"lo", 0.0}, {"hi", 0.01}}}, {"resolution", 64}}},
        {"pv2", {{"lambda", 20}}},
        {"pv3", {{"lambda", 20}}},
        {"pdt", {{"lambda", 20}}},
    };
    for (const auto& [m, p] : cases) {
        CAPTURE(m);
        const auto t = generate(m, p, Seed{5});
        const auto a = generate(m, p, Seed{5});
        CHECK(dump(to_json(t)) == dump(to_json(a)));
        CHECK_FALSE(measure_any(t).empty());
    }
}

TEST_CASE("sweep is deterministic across thread counts") {
    const json p = {{"lambda", 50}};
#ifdef _OPENMP
    omp_set_num_threads(1);
#endif
    std::ostringstream a, b;
    write_sweep_csv(a, monte_carlo_sweep("pv2", p, 12, 9));
#ifdef _OPENMP
    omp_set_num_threads(4);
#endif
    write_sweep_csv(b, monte_carlo_sweep("pv2", p, 12, 9));
    CHECK(a.str() == b.str());
    const auto t = monte_carlo_sweep("pv2", p, 12, 9);
    CHECK(t.max_abs_z() < 5.0);
    CHECK_FALSE(oracle_for("gilbert", json::object()).has_value());
}

TEST_CASE("grid expansion") {
    const auto g = parse_grid("lambda=10,20;/window/margin=0:0.2:0.1");
    REQUIRE(g.size() == 6);
    const json p = apply_setting(json::object(), g[1]);
    CHECK(p["lambda"] == 10);
    CHECK(p["window"]["margin"].get<double>() == doctest::Approx(0.1));
    CHECK_THROWS_AS(parse_grid("lambda"), ParameterError);
    CHECK_THROWS_AS(parse_grid("x=5:1:1"), ParameterError);
}

TEST_CASE("command line") {
    const std::string params = tmp("cli_params.json");
    write_text(params, R"({"lambda": 100})");
    const std::string a = tmp("cli_a.json"), b = tmp("cli_b.json");
    REQUIRE(run_cli("generate --model voronoi --params " + params + " --seed 7 --out " + a) == 0);
    REQUIRE(run_cli("generate --model voronoi --params " + params + " --seed 7 --out " + b) == 0);
    CHECK(read_text(a) == read_text(b));
    CHECK(run_cli("stats --in " + a + " --centroid circumball --out " + tmp("cli_stats.csv")) == 0);
    CHECK(read_text(tmp("cli_stats.csv")).rfind("name,estimate,se,oracle,z", 0) == 0);
    CHECK(run_cli("render --in " + a + " --out " + tmp("cli.svg") + " --color-by generator") == 0);
    CHECK(run_cli("validate --model pv2 --params " + params + " --reps 20 --seed 3 --out " + tmp("cli_val.csv")) == 0);
    CHECK(run_cli("validate --model gilbert --params " + params + " --reps 2 --out " + tmp("cli_val2.csv")) == 1);
    CHECK(run_cli("typical-cell --model pdt --lambda 2 --n 10 --out " + tmp("cli_tc.csv")) == 0);
    CHECK(run_cli("sweep --model pv2 --params " + params + " --grid 'lambda=20,40' --reps 3 --out " + tmp("cli_sw.csv")) == 0);
    CHECK(run_cli("generate --model voronoi --out " + a) == 2);
    CHECK(run_cli("generate --model stit --params " + params + " --out " + a) == 2);
    CHECK(run_cli("generate --model division --params " + tmp("cli_div.json") + " --out " + a) == 2);
    write_text(tmp("cli_big.json"), R"({"target_cells": 50, "max_cells": 10})");
    CHECK(run_cli("generate --model division --params " + tmp("cli_big.json") + " --out " + a) == 3);
    CHECK(run_cli("stats --in " + params) == 2);
    CHECK(run_cli("frobnicate") == 2);
}
