#include <cmath>

#include "doctest.h"
#include "tessera/power.hpp"
#include "tessera/raster.hpp"

using namespace tessera;

namespace {

PointPattern2 laguerre_pattern(std::uint64_t s) {
    auto p = sample_poisson<2>(Window2::unit(), 100.0, Seed{s});
    Rng rng(Seed{s}.derive("radii"));
    for (std::size_t i = 0; i < p.size(); ++i) p.radii.push_back(rng.uniform(0.025, 0.075));
    return p;
}

}  // namespace

TEST_CASE("johnson-mehl with zero radii is the voronoi raster") {
    auto p = sample_poisson<2>(Window2::unit(), 100.0, Seed{1});
    const auto v = raster_assign(p, RasterModel::voronoi_l2, 256);
    p.radii.assign(p.size(), 0.0);
    const auto j = raster_assign(p, RasterModel::johnson_mehl, 256);
    CHECK(v.labels == j.labels);
}

TEST_CASE("metrics give distinct label fields") {
    const auto p = sample_poisson<2>(Window2::unit(), 100.0, Seed{2});
    const auto l1 = raster_assign(p, RasterModel::voronoi_l1, 1024);
    const auto l2 = raster_assign(p, RasterModel::voronoi_l2, 1024);
    const auto li = raster_assign(p, RasterModel::voronoi_linf, 1024);
    CHECK(l1.labels != l2.labels);
    CHECK(l2.labels != li.labels);
    CHECK(l1.labels != li.labels);
    CHECK(label_agreement(l2, rasterize(voronoi(p), 1024)) >= 0.999);
}

TEST_CASE("gbpd with identity matrices is laguerre") {
    auto p = laguerre_pattern(3);
    const auto exact = laguerre(p);
    for (double r : p.radii) {
        p.weights.push_back(r * r);
        p.matrices.push_back({1, 0, 0, 1});
    }
    const auto g = raster_assign(p, RasterModel::gbpd, 1024);
    CHECK(label_agreement(g, rasterize(exact, 1024)) >= 0.999);
}

TEST_CASE("serial and parallel assignment agree") {
    const auto p = sample_poisson<2>(Window2::unit(), 50.0, Seed{4});
    CHECK(raster_assign(p, RasterModel::voronoi_l1, 128, Backend::serial).labels ==
          raster_assign(p, RasterModel::voronoi_l1, 128, Backend::parallel).labels);
}

TEST_CASE("single generator covers the window") {
    PointPattern2 p;
    p.window = Window2::box({{0, 0}}, {{2, 1}});
    p.points = {{{0.3, 0.4}}};
    const auto r = raster_assign(p, RasterModel::voronoi_l2, 64);
    const auto s = extract_raster_stats(r);
    REQUIRE(s.size() == 1);
    CHECK(s[0].area == doctest::Approx(2.0));
    CHECK(s[0].neighbors.empty());
    CHECK(s[0].components == 1);
    CHECK(estimate_raster(r)["gamma2"] * r.window.content() * 0.64 == doctest::Approx(1.0));
}

TEST_CASE("raster areas partition the window") {
    const auto p = laguerre_pattern(5);
    const auto r = raster_assign(p, RasterModel::johnson_mehl, 200);
    double a = 0.0;
    for (const auto& c : extract_raster_stats(r)) a += c.area;
    CHECK(a == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("laguerre raster areas match exact areas") {
    auto p = laguerre_pattern(6);
    const auto exact = laguerre(p);
    for (double r : p.radii) {
        p.weights.push_back(r * r);
        p.matrices.push_back({1, 0, 0, 1});
    }
    const auto g = raster_assign(p, RasterModel::gbpd, 1024);
    std::vector<double> area(p.size(), 0.0);
    for (const auto& c : exact.cells) area[c.generator] += c.polygon.area();
    double worst = 0.0;
    for (const auto& c : extract_raster_stats(g)) worst = std::max(worst, std::fabs(c.area / area[c.label] - 1.0));
    CHECK(worst < 0.02);
    CHECK(estimate_raster(g)["A2"] == doctest::Approx(estimate(exact)["A2"]).epsilon(0.02));
}

TEST_CASE("crofton boundary length") {
    const auto p = sample_poisson<2>(Window2::unit(EdgeMode::periodic), 100.0, Seed{7});
    const auto r = raster_assign(p, RasterModel::voronoi_l2, 512);
    CHECK(estimate_raster(r)["mu1"] == doctest::Approx(estimate(voronoi(p))["mu1"]).epsilon(0.05));
}

TEST_CASE("checkerboard adjacency") {
    RasterTessellation r = make_grid(Window2::unit(), 16);
    for (int iy = 0; iy < r.ny; ++iy)
        for (int ix = 0; ix < r.nx; ++ix) r.labels[iy * r.nx + ix] = (ix + iy) % 2;
    const auto s = extract_raster_stats(r);
    REQUIRE(s.size() == 2);
    CHECK(s[0].neighbors.size() == 1);
    CHECK(s[1].components == 128);
    CHECK(estimate_raster(r)["N22"] == 1.0);
}

TEST_CASE("gbpd cells can be disconnected") {
    PointPattern2 p;
    p.window = Window2::unit();
    p.points = {{{0.5, 0.5}}, {{0.5, 0.5}}};
    p.matrices = {{1, 0, 0, 1}, {10, 0, 0, 0.1}};
    p.weights = {0.0, 0.0};
    const auto s = extract_raster_stats(raster_assign(p, RasterModel::gbpd, 64));
    REQUIRE(s.size() == 2);
    CHECK(s[0].components == 1);
    CHECK(s[1].components == 2);
}

TEST_CASE("raster argument checks") {
    const auto p = sample_poisson<2>(Window2::unit(), 10.0, Seed{8});
    CHECK_THROWS_AS(raster_assign(p, RasterModel::gbpd, 64), ParameterError);
    CHECK_THROWS_AS(raster_assign(p, RasterModel::voronoi_l2, 8), ParameterError);
    CHECK_THROWS_AS(parse_raster_model("hex"), ParameterError);
    CHECK(parse_raster_model("jm") == RasterModel::johnson_mehl);
}

TEST_CASE("dead leaves partition") {
    LeafModel m;
    m.size = MarkDistribution::constant(0.1);
    const auto r = dead_leaves(Window2::unit(), m, 128, Seed{9});
    for (auto l : r.labels) REQUIRE(l >= 0);
    REQUIRE(r.leaf_ids.size() == r.generators.size());
    for (int iy = 0; iy < r.ny; ++iy)
        for (int ix = 0; ix < r.nx; ++ix) {
            const auto l = r.at(ix, iy);
            CHECK(distance(r.pixel_center(ix, iy), r.generators.points[l]) <= 0.1 + 1e-12);
        }
    for (std::size_t i = 1; i < r.leaf_ids.size(); ++i) CHECK(r.leaf_ids[i] > r.leaf_ids[i - 1]);
    CHECK(dead_leaves(Window2::unit(), m, 128, Seed{9}).labels == r.labels);
    CHECK(r.leaf_ids.size() == 128);
}

TEST_CASE("dead leaves shapes") {
    LeafModel tri;
    tri.shape = LeafModel::Shape::triangle;
    tri.size = MarkDistribution::uniform(0.05, 0.2);
    CHECK(extract_raster_stats(dead_leaves(Window2::unit(), tri, 64, Seed{1})).size() > 10);
    LeafModel sq;
    sq.shape = LeafModel::Shape::polygon;
    sq.polygon = {{{-1, -1}}, {{1, -1}}, {{1, 1}}, {{-1, 1}}};
    sq.size = MarkDistribution::lognormal(std::log(0.05), 0.3);
    const auto r = dead_leaves(Window2::unit(), sq, 64, Seed{2});
    CHECK_FALSE(r.warnings.empty());
    LeafModel bad;
    bad.size = MarkDistribution::constant(0.0);
    CHECK_THROWS_AS(dead_leaves(Window2::unit(), bad, 64, Seed{1}), ParameterError);
    CHECK_THROWS_AS(dead_leaves(Window2::unit(), sq, 32, Seed{1}), ParameterError);
}
