#include <cmath>

#include "doctest.h"
#include "tessera/arrangement.hpp"
#include "tessera/characteristics.hpp"
#include "tessera/delaunay.hpp"
#include "tessera/division.hpp"
#include "tessera/power.hpp"

using namespace tessera;

namespace {

Tessellation2 three_chords() {
    std::vector<ConvexPolygon> cells{
        ConvexPolygon::box({{0, 0}}, {{1, 0.5}}),
        ConvexPolygon::box({{0, 0.5}}, {{0.3, 1}}),
        ConvexPolygon::box({{0.3, 0.5}}, {{0.7, 1}}),
        ConvexPolygon::box({{0.7, 0.5}}, {{1, 1}}),
    };
    return make_tessellation("hand", Window2::unit(), std::move(cells));
}

}  // namespace

TEST_CASE("periodic voronoi ratios are exact") {
    for (std::uint64_t s = 1; s <= 5; ++s) {
        const auto p = sample_poisson<2>(Window2::unit(EdgeMode::periodic), 100.0, Seed{s});
        const auto r = estimate(voronoi(p));
        CHECK(r["gamma0"] == doctest::Approx(2 * r["gamma2"]).epsilon(1e-12));
        CHECK(r["gamma1"] == doctest::Approx(3 * r["gamma2"]).epsilon(1e-12));
        CHECK(r["gamma1"] == doctest::Approx(r["gamma0"] + r["gamma2"]).epsilon(1e-12));
        CHECK(r["A2"] * r["gamma2"] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r["mu2"] == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(r["N02"] == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(r["frac_Y"] == doctest::Approx(1.0));
        CHECK(r["phi"] == 0.0);
    }
}

TEST_CASE("counts do not depend on the centroid rule on the torus") {
    const auto p = sample_poisson<2>(Window2::unit(EdgeMode::periodic), 100.0, Seed{3});
    const auto t = voronoi(p);
    const auto a = estimate(t, CentroidRule{CentroidRule::Kind::gravity_center});
    const auto b = estimate(t, CentroidRule{CentroidRule::Kind::circumball_center});
    for (const char* k : {"gamma0", "gamma1", "gamma2"}) CHECK(a[k] == b[k]);
}

TEST_CASE("single cell window") {
    const auto w = Window2::unit(EdgeMode::plus);
    const auto t = make_tessellation("window", w, {ConvexPolygon::box(w.lo, w.hi)});
    const auto r = estimate(t);
    CHECK(r["gamma2"] * w.content() == doctest::Approx(1.0));
    CHECK(r["mu1"] == 0.0);
    CHECK(zero_cell(t, {{0.5, 0.5}}) == 0);
}

TEST_CASE("no cell in the reference set") {
    const auto t = make_tessellation("x", Window2::unit(), {ConvexPolygon::box({{0, 0}}, {{0.05, 1}}),
                                                            ConvexPolygon::box({{0.05, 0}}, {{1, 1}})});
    CHECK_NOTHROW(estimate(t));
    const auto u = make_tessellation("x", Window2::unit(), {ConvexPolygon::box({{0, 0}}, {{1, 0.05}}),
                                                            ConvexPolygon::box({{0, 0.05}}, {{1, 0.95}}),
                                                            ConvexPolygon::box({{0, 0.95}}, {{1, 1}})});
    CHECK_NOTHROW(estimate(u));
    CHECK_THROWS_AS(pool({}, 2), InsufficientSampleError);
}

TEST_CASE("segment decomposition on three chords") {
    const auto s = segment_decomposition(three_chords());
    CHECK(s.K == 5);
    CHECK(s.J == 6);
    CHECK(s.I == 3);
    CHECK(s.interior_vertices == 2);
    CHECK(s.phi == 1.0);
}

TEST_CASE("face-to-face tessellation has no pi-vertices") {
    const auto p = sample_poisson<2>(Window2::unit(), 50.0, Seed{9});
    const auto s = segment_decomposition(voronoi(p));
    CHECK(s.phi == 0.0);
    CHECK(s.J == s.K);
}

TEST_CASE("stit I-segments match the number of splits") {
    const auto t = stit(Window2::unit(EdgeMode::plus), 8.0, DirectionRose::isotropic(), Seed{4});
    const auto s = segment_decomposition(t);
    CHECK(s.I == t.cells.size() - 1);
    CHECK(s.phi > 0.99);
}

TEST_CASE("poisson-voronoi oracle values") {
    const auto o2 = oracle_poisson_voronoi(1.0, 2);
    CHECK(o2["A2"] == doctest::Approx(1.0));
    CHECK(o2["P2"] == doctest::Approx(4.0));
    CHECK(o2["L1"] == doctest::Approx(2.0 / 3.0));
    CHECK(poisson_voronoi_mu(7.0, 2, 1) == doctest::Approx(2 * std::sqrt(7.0)).epsilon(1e-12));
    const auto o3 = oracle_poisson_voronoi(1.0, 3);
    CHECK(o3["mu1"] == doctest::Approx(5.832).epsilon(1e-3));
    CHECK(o3["mu2"] == doctest::Approx(2.910).epsilon(1e-3));
    CHECK(o3["N30"] == doctest::Approx(27.07).epsilon(1e-3));
    CHECK(poisson_voronoi_mu(1.0, 3, 1) == doctest::Approx(o3["mu1"]).epsilon(1e-12));
    CHECK(poisson_voronoi_mu(1.0, 3, 2) == doctest::Approx(o3["mu2"]).epsilon(1e-12));
    CHECK(o2["gamma1"] == doctest::Approx(o2["gamma0"] + o2["gamma2"]));
    CHECK(o3["gamma0"] - o3["gamma1"] + o3["gamma2"] - o3["gamma3"] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(o3["N03"] * o3["gamma0"] == doctest::Approx(o3["N30"] * o3["gamma3"]));
    CHECK(o3["N21"] * o3["gamma2"] == doctest::Approx(3 * o3["gamma1"]));
    CHECK(o3["N32"] * o3["gamma3"] == doctest::Approx(2 * o3["gamma2"]));
    CHECK_THROWS_AS(oracle_poisson_voronoi(1.0, 4), ParameterError);
}

TEST_CASE("poisson line and delaunay oracles") {
    const auto l = oracle_poisson_line(M_PI / 2);
    CHECK(l["A2"] == doctest::Approx(4 / M_PI));
    CHECK(l["gamma0"] == doctest::Approx(M_PI / 4));
    CHECK(oracle_poisson_line(M_PI)["gamma0"] == doctest::Approx(4 * l["gamma0"]));
    CHECK(l["gamma1"] == doctest::Approx(l["gamma0"] + l["gamma2"]));
    const auto d = oracle_poisson_delaunay(1.0);
    CHECK(d["A2"] == doctest::Approx(0.5));
    CHECK(d["P2"] == doctest::Approx(3.395).epsilon(1e-3));
    CHECK(oracle_poisson_delaunay(4.0)["L1"] == doctest::Approx(d["L1"] / 2));
    CHECK(d["gamma1"] == doctest::Approx(d["gamma0"] + d["gamma2"]));
    CHECK(oracle_stit(20.0)["mu1"] == 20.0);
}

TEST_CASE("johnson-mehl oracle reduces to voronoi") {
    for (double lambda : {1.0, 100.0})
        CHECK(std::fabs(oracle_johnson_mehl_mu(lambda, MarkDistribution::constant(0.0), 2, 1) - 2 * std::sqrt(lambda)) < 1e-6);
    CHECK(oracle_johnson_mehl_mu(3.0, MarkDistribution::constant(0.0), 3, 1) ==
          doctest::Approx(poisson_voronoi_mu(3.0, 3, 1)).epsilon(1e-8));
    CHECK(oracle_johnson_mehl_mu(3.0, MarkDistribution::constant(0.0), 3, 2) ==
          doctest::Approx(poisson_voronoi_mu(3.0, 3, 2)).epsilon(1e-8));
    CHECK_THROWS_AS(oracle_johnson_mehl_mu(1.0, MarkDistribution::constant(0.0), 2, 2), ParameterError);
}

TEST_CASE("johnson-mehl scaling and monotonicity") {
    const double c = 4.0;
    const double base = oracle_johnson_mehl_mu(10.0, MarkDistribution::uniform(0.0, 0.2), 2, 1);
    const double scaled = oracle_johnson_mehl_mu(c * 10.0, MarkDistribution::uniform(0.0, 0.2 / std::sqrt(c)), 2, 1);
    CHECK(scaled == doctest::Approx(std::sqrt(c) * base).epsilon(1e-7));
    const double g = oracle_johnson_mehl_mu(10.0, MarkDistribution::gamma(2.0, 0.05), 2, 1);
    const double gs = oracle_johnson_mehl_mu(c * 10.0, MarkDistribution::gamma(2.0, 0.05 / std::sqrt(c)), 2, 1);
    CHECK(gs == doctest::Approx(std::sqrt(c) * g).epsilon(1e-7));
    double prev = 0.0;
    for (double lambda : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0}) {
        const double v = oracle_johnson_mehl_mu(lambda, MarkDistribution::uniform(0.0, 1.0), 2, 1);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("delaunay typical cell sampler") {
    Rng rng(Seed{17});
    const double lambda = 3.0;
    double r2 = 0.0, area = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const auto c = sample_pdt_typical_cell(lambda, rng);
        REQUIRE(c.size() == 3);
        r2 += std::pow(distance(circumcenter(c[0], c[1], c[2]), c[0]), 2);
        area += c.area();
    }
    CHECK(r2 / n == doctest::Approx(2 / (lambda * M_PI)).epsilon(0.03));
    CHECK(area / n == doctest::Approx(1 / (2 * lambda)).epsilon(0.03));
}

TEST_CASE("lambda recovered from oracle values") {
    auto to_report = [](const OracleValues& o, int dim) {
        CharacteristicsReport r;
        r.dim = dim;
        for (const auto& [k, v] : o.values) r.values[k] = {v, 0.0};
        return r;
    };
    CHECK(estimate_lambda(to_report(oracle_poisson_voronoi(42.0, 2), 2), "pv2").lambda == doctest::Approx(42.0));
    CHECK(estimate_lambda(to_report(oracle_poisson_voronoi(42.0, 3), 3), "pv3").lambda == doctest::Approx(42.0));
    CHECK(estimate_lambda(to_report(oracle_poisson_line(3.0), 2), "plt").lambda == doctest::Approx(3.0));
    const auto e = estimate_lambda(to_report(oracle_poisson_delaunay(7.0), 2), "pdt");
    CHECK(e.lambda == doctest::Approx(7.0));
    CHECK(e.spread == doctest::Approx(0.0).epsilon(1e-9));
    CHECK_THROWS_AS(estimate_lambda(to_report(oracle_poisson_delaunay(7.0), 2), "foo"), ParameterError);
}

TEST_CASE("plt length intensity inverts exactly") {
    const auto t = poisson_line_tessellation(Window2::box({{0, 0}}, {{4, 4}}, EdgeMode::plus), 3.0, DirectionRose::isotropic(), Seed{1});
    const auto r = estimate(t);
    CHECK(estimate_lambda(r, "plt").per_formula.at("mu1") == r["mu1"]);
    CHECK(r["frac_X"] == 1.0);
}

TEST_CASE("zero cell is larger than typical cell") {
    double zero = 0.0, typical = 0.0;
    for (std::uint64_t s = 1; s <= 40; ++s) {
        const auto t = voronoi(sample_poisson<2>(Window2::unit(EdgeMode::periodic), 100.0, Seed{s}));
        zero += t.cells[zero_cell(t, {{0.5, 0.5}})].polygon.area();
        typical += estimate(t)["A2"];
    }
    CHECK(zero / typical > 1.1);
}

TEST_CASE("pooled standard error") {
    Measurements a, b, c;
    a["x"] = {1.0, 1.0};
    b["x"] = {3.0, 1.0};
    c["x"] = {2.0, 1.0};
    a["A2"] = b["A2"] = c["A2"] = {1.0, 1.0};
    const auto r = pool({a, b, c}, 2);
    CHECK(r["x"] == doctest::Approx(2.0));
    CHECK(r.values.at("x").se == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(r.replicates == 3);
}

TEST_CASE("poisson-voronoi 3d sanity") {
    const auto w = Window3::unit(EdgeMode::periodic);
    const auto t = voronoi(sample_poisson<3>(w, 50.0, Seed{2}));
    const auto r = estimate(t);
    CHECK(r["mu3"] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r["gamma0"] - r["gamma1"] + r["gamma2"] - r["gamma3"] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(r["N03"] == doctest::Approx(4.0));
    CHECK(r["B3"] > 0.0);
}
