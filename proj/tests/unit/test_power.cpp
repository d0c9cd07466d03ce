#include "doctest.h"
#include "tessera/power.hpp"

using namespace tessera;

TEST_CASE("periodic voronoi satisfies torus counts") {
    for (std::uint64_t s = 1; s <= 20; ++s) {
        const auto p = sample_poisson<2>(Window2::unit(EdgeMode::periodic), 100.0, Seed{s});
        const auto t = voronoi(p);
        const long long V = t.vertices.size(), E = t.edges.size(), F = t.cells.size();
        CHECK(V - E + F == 0);
        CHECK(V == 2 * F);
        CHECK(E == 3 * F);
        CHECK(t.total_area() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("3d voronoi plus and periodic") {
    const auto p = sample_poisson<3>(Window3::unit(EdgeMode::periodic), 100.0, Seed{3});
    const auto t = voronoi(p);
    const long long V = t.vertices.size(), E = t.edges.size(), F = t.facets.size(), C = t.cells.size();
    CHECK(V - E + F - C == 0);
    CHECK(t.normal);
    CHECK(t.total_volume() == doctest::Approx(1.0).epsilon(1e-9));
    const auto q = sample_poisson<3>(Window3::unit(EdgeMode::plus, default_margin<3>(100.0)), 100.0, Seed{4});
    const auto u = voronoi(q);
    MESSAGE("plus cells " << u.cells.size() << " of " << q.size());
    const auto r = voronoi(q, Backend::reference);
    CHECK(r.cells.size() == u.cells.size());
}

namespace {

PointPattern2 pattern(std::vector<Vec2> pts, std::vector<double> radii = {}) {
    PointPattern2 p;
    p.window = Window2::unit();
    p.points = std::move(pts);
    p.radii = std::move(radii);
    return p;
}

}  // namespace

TEST_CASE("two generators split at the bisector") {
    const auto t = voronoi(pattern({{{0.25, 0.5}}, {{0.75, 0.5}}}));
    REQUIRE(t.cells.size() == 2);
    for (const auto& c : t.cells) CHECK(c.polygon.area() == doctest::Approx(0.5).epsilon(1e-12));
    const auto one = voronoi(pattern({{{0.3, 0.6}}}));
    REQUIRE(one.cells.size() == 1);
    CHECK(one.cells[0].polygon.area() == doctest::Approx(1.0));
}

TEST_CASE("laguerre with equal radii is voronoi") {
    auto p = sample_poisson<2>(Window2::unit(), 100.0, Seed{5});
    const auto v = voronoi(p);
    p.radii.assign(p.size(), 0.05);
    const auto l = laguerre(p);
    REQUIRE(l.vertices.size() == v.vertices.size());
    for (std::size_t i = 0; i < v.cells.size(); ++i) {
        const auto& a = v.cells[i].polygon.ring();
        const auto& b = l.cells[i].polygon.ring();
        REQUIRE(a.size() == b.size());
        for (std::size_t k = 0; k < a.size(); ++k) CHECK(distance(a[k], b[k]) < 1e-9);
    }
}

TEST_CASE("power line between two weighted generators") {
    for (double r : {0.0, 0.2, 0.5}) {
        auto p = pattern({{{0.0, 0.5}}, {{1.0, 0.5}}}, {r, 0.0});
        p.window = Window2::box({{-1, 0}}, {{2, 1}});
        const auto t = laguerre(p);
        REQUIRE(t.cells.size() == 2);
        double xmax = -1e9;
        for (const auto& v : t.cells[0].polygon.ring()) xmax = std::max(xmax, v[0]);
        CHECK(xmax == doctest::Approx((1 + r * r) / 2).epsilon(1e-12));
    }
}

TEST_CASE("disjoint balls lie in their own cells") {
    const auto p0 = sample_ssi<2>(Window2::unit(), 60, 0.1, 100000, Seed{6});
    const auto p = attach_marks(p0, MarkDistribution::uniform(0.01, 0.05), Seed{7});
    const auto t = laguerre(p);
    CHECK(t.empty_cells.empty());
    for (const auto& c : t.cells) {
        const Vec2 x = p.points[static_cast<std::size_t>(c.generator)];
        const double r = p.radii[static_cast<std::size_t>(c.generator)];
        const auto& ring = c.polygon.ring();
        for (std::size_t k = 0; k < ring.size(); ++k) {
            const Vec2 a = ring[k], b = ring[(k + 1) % ring.size()];
            const Vec2 e = b - a;
            const double d = std::fabs(e[0] * (x[1] - a[1]) - e[1] * (x[0] - a[0])) / norm(e);
            const bool inside_window = x[0] - r >= 0 && x[0] + r <= 1 && x[1] - r >= 0 && x[1] + r <= 1;
            if (inside_window) CHECK(d >= r - 1e-12);
        }
    }
}

TEST_CASE("coincident generators are merged") {
    const auto t = voronoi(pattern({{{0.2, 0.2}}, {{0.2, 0.2}}, {{0.8, 0.8}}}));
    CHECK(t.cells.size() == 2);
    CHECK_FALSE(t.warnings.empty());
}

TEST_CASE("serial and parallel backends agree") {
    const auto p = sample_poisson<2>(Window2::unit(EdgeMode::periodic), 500.0, Seed{8});
    const auto a = voronoi(p, Backend::serial), b = voronoi(p, Backend::parallel), c = voronoi(p, Backend::reference);
    REQUIRE(a.cells.size() == b.cells.size());
    REQUIRE(a.cells.size() == c.cells.size());
    CHECK(a.vertices == b.vertices);
    for (std::size_t i = 0; i < a.cells.size(); ++i) CHECK(a.cells[i].polygon.area() == doctest::Approx(c.cells[i].polygon.area()).epsilon(1e-9));
}

TEST_CASE("voronoi vertices have degree three") {
    const auto t = voronoi(sample_poisson<2>(Window2::unit(EdgeMode::periodic), 200.0, Seed{9}));
    std::vector<int> deg(t.vertices.size(), 0);
    for (const auto& e : t.edges) {
        ++deg[static_cast<std::size_t>(e.v0)];
        ++deg[static_cast<std::size_t>(e.v1)];
    }
    for (int d : deg) CHECK(d == 3);
}

TEST_CASE("lloyd iterations") {
    const auto p = sample_poisson<2>(Window2::unit(), 100.0, Seed{10});
    const auto zero = lloyd_centroidal(p, 0);
    CHECK(zero.displacements.empty());
    CHECK(zero.tessellation.vertices == voronoi(p).vertices);
    const auto many = lloyd_centroidal(p, 50);
    CHECK(many.displacements.size() == 50);
    CHECK(many.displacements.back() < 1e-3);
    CHECK(many.displacements.back() < many.displacements.front());
}
