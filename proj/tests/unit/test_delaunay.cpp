#include <cmath>

#include "doctest.h"
#include "tessera/delaunay.hpp"
#include "tessera/power.hpp"

using namespace tessera;

TEST_CASE("three points give one triangle") {
    const auto t = delaunay_triangulation({{{0.1, 0.1}}, {{0.9, 0.2}}, {{0.4, 0.8}}});
    REQUIRE(t.triangles.size() == 1);
    const auto& v = t.triangles[0];
    CHECK(cross(t.points[v[1]] - t.points[v[0]], t.points[v[2]] - t.points[v[0]]) > 0.0);
}

TEST_CASE("empty circumcircle property") {
    const auto p = sample_poisson<2>(Window2::unit(), 300.0, Seed{11});
    const auto t = delaunay_triangulation(p.points);
    CHECK_FALSE(t.perturbed);
    for (const auto& v : t.triangles) {
        const Vec2 c = circumcenter(t.points[v[0]], t.points[v[1]], t.points[v[2]]);
        const double r = distance(c, t.points[v[0]]);
        for (const auto& q : t.points) CHECK(distance(c, q) >= r * (1.0 - 1e-9));
    }
}

TEST_CASE("periodic delaunay has twice as many triangles as points") {
    for (std::uint64_t s = 1; s <= 10; ++s) {
        const auto p = sample_poisson<2>(Window2::unit(EdgeMode::periodic), 100.0, Seed{s});
        const auto t = delaunay(p);
        CHECK(t.cells.size() == 2 * p.size());
        CHECK(t.vertices.size() == p.size());
        CHECK(t.edges.size() == 3 * p.size());
        CHECK(t.total_area() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("voronoi vertices are delaunay circumcentres") {
    const auto p = sample_poisson<2>(Window2::unit(EdgeMode::periodic), 100.0, Seed{5});
    const auto vor = voronoi(p);
    const auto del = delaunay(p);
    std::vector<Vec2> centres;
    for (const auto& c : del.cells) centres.push_back(circumcenter(c.polygon[0], c.polygon[1], c.polygon[2]));
    auto wrap = [](Vec2 x) {
        for (int i = 0; i < 2; ++i) x[i] -= std::floor(x[i]);
        return x;
    };
    for (const auto& v : vor.vertices) {
        int hits = 0;
        for (const auto& c : centres) {
            Vec2 d = wrap(v) - wrap(c);
            for (int i = 0; i < 2; ++i) d[i] -= std::round(d[i]);
            if (norm(d) < 1e-9) ++hits;
        }
        CHECK(hits == 1);
    }
}

TEST_CASE("cocircular input falls back to perturbation") {
    std::vector<Vec2> pts;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) pts.push_back({{double(i), double(j)}});
    const auto t = delaunay_triangulation(pts);
    CHECK(t.perturbed);
    CHECK(t.triangles.size() == 8);
}

TEST_CASE("beta delaunay") {
    CHECK(beta_constant(0.0) == doctest::Approx(std::tgamma(2.5) / std::pow(M_PI, 1.5)));
    BetaDelaunayParams prm;
    prm.gamma = 1.0;
    prm.beta = 5.0;
    const auto w = Window2::box({{0, 0}}, {{5, 5}});
    const auto t = beta_delaunay(w, prm, Seed{1});
    MESSAGE("beta=5 cells " << t.cells.size());
    CHECK(t.cells.size() > 10);
    for (const auto& c : t.cells) CHECK(c.polygon.size() == 3);
    const auto again = beta_delaunay(w, prm, Seed{1});
    CHECK(again.cells.size() == t.cells.size());
    int more = 0;
    for (std::uint64_t s = 1; s <= 30; ++s) {
        BetaDelaunayParams a = prm, b = prm;
        b.gamma = 2.0;
        a.beta = b.beta = 0.0;
        if (beta_delaunay(w, b, Seed{s}).cells.size() > beta_delaunay(w, a, Seed{s}).cells.size()) ++more;
    }
    CHECK(more >= 27);
    BetaDelaunayParams bp;
    bp.variant = BetaVariant::beta_prime;
    bp.beta = 2.5;
    CHECK_THROWS_AS(beta_delaunay(w, bp, Seed{1}), ParameterError);
    bp.h_max = 0.5;
    const auto tp = beta_delaunay(w, bp, Seed{1});
    CHECK(tp.cells.size() > 0);
}
