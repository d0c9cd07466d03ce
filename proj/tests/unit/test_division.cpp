#include <cmath>

#include "doctest.h"
#include "tessera/arrangement.hpp"
#include "tessera/division.hpp"
#include "tessera/power.hpp"

using namespace tessera;

namespace {

int count_interior(const Tessellation2& t, VertexType want, int& total) {
    const auto dirs = vertex_edge_directions(t);
    int hits = 0;
    total = 0;
    for (std::size_t v = 0; v < t.vertices.size(); ++v) {
        if (t.vertex_boundary[v]) continue;
        ++total;
        if (classify_vertex(dirs[v]) == want) ++hits;
    }
    return hits;
}

}  // namespace

TEST_CASE("arrangement counts") {
    const auto w = Window2::unit();
    CHECK(arrangement_cells({}, w).cells.size() == 1);
    const auto t = arrangement_cells({Line2({{1, 0}}, 0.5), Line2({{0, 1}}, 0.5)}, w);
    REQUIRE(t.cells.size() == 4);
    for (const auto& c : t.cells) CHECK(c.polygon.area() == doctest::Approx(0.25));
    // Lines through a small central disc cross pairwise inside the square.
    std::vector<Line2> lines;
    for (int i = 0; i < 7; ++i) {
        const Vec2 u = unit_from_angle(0.3 + i * 0.41);
        lines.emplace_back(u, dot(Vec2{{0.75, 0.75}}, u) + 0.01 * i);
    }
    const auto a = arrangement_cells(lines, Window2::box({{0, 0}}, {{1.5, 1.5}}));
    CHECK(a.cells.size() == 1 + 7 + 21);
}

TEST_CASE("poisson line tessellation is x-shaped") {
    const auto t = poisson_line_tessellation(Window2::box({{0, 0}}, {{3, 3}}), M_PI, DirectionRose::isotropic(), Seed{9});
    int total = 0;
    CHECK(count_interior(t, VertexType::X, total) == total);
    CHECK(total > 0);
    CHECK(t.total_area() == doctest::Approx(9.0).epsilon(1e-9));
    const auto r = poisson_line_tessellation(Window2::unit(), 20.0, DirectionRose::axis_aligned(), Seed{2});
    for (const auto& c : r.cells) CHECK(c.polygon.size() == 4);
}

TEST_CASE("stit is a t-tessellation and refines in time") {
    const auto w = Window2::unit();
    const auto t = stit(w, 10.0, DirectionRose::isotropic(), Seed{4});
    int total = 0;
    CHECK(count_interior(t, VertexType::T, total) == total);
    CHECK(t.total_area() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_FALSE(t.face_to_face);
    const auto finer = stit(w, 15.0, DirectionRose::isotropic(), Seed{4});
    CHECK(finer.cells.size() >= t.cells.size());
    for (const auto& c : finer.cells) {
        const Vec2 g = c.polygon.centroid();
        const int k = locate_cell(t, g);
        REQUIRE(k >= 0);
        for (const auto& v : c.polygon.ring()) CHECK(t.cells[k].polygon.contains(v, 1e-9));
    }
    CHECK(stit(w, 1e-6, DirectionRose::isotropic(), Seed{4}).cells.size() == 1);
    const auto ref = stit_reference(w, 10.0, DirectionRose::isotropic(), Seed{4});
    CHECK(ref.total_area() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("division config equal to stit") {
    DivisionConfig cfg;
    cfg.stop_time = 8.0;
    const auto a = cell_division(Window2::unit(), cfg, Seed{3});
    const auto b = stit(Window2::unit(), 8.0, DirectionRose::isotropic(), Seed{3});
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) CHECK(a.cells[i].polygon.ring() == b.cells[i].polygon.ring());
    cfg.stop_time = 0.0;
    cfg.target_cells = 50;
    for (auto d : {Division::stit, Division::gauss, Division::rdmin, Division::rdssq}) {
        cfg.division = d;
        cfg.lifetime = Lifetime::area;
        cfg.asa_min_angle = 0.3;
        const auto t = cell_division(Window2::unit(), cfg, Seed{5});
        CHECK(t.cells.size() == 50);
        CHECK(t.total_area() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("gilbert") {
    const auto w = Window2::unit();
    const auto t = gilbert(w, 50.0, GilbertMode::isotropic, Seed{1});
    int total = 0;
    CHECK(count_interior(t, VertexType::T, total) == total);
    CHECK(t.total_area() == doctest::Approx(1.0).epsilon(1e-9));
    const auto r = gilbert(w, 50.0, GilbertMode::rectangular, Seed{1});
    for (const auto& e : r.edges) {
        const Vec2 d = e.b - e.a;
        CHECK(std::min(std::fabs(d[0]), std::fabs(d[1])) < 1e-12);
    }
    CHECK(r.total_area() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("acs") {
    const auto t = acs(Window2::unit(), 20.0, Seed{2});
    int total = 0;
    CHECK(count_interior(t, VertexType::T, total) == total);
    CHECK(t.total_area() == doctest::Approx(1.0).epsilon(1e-9));
    for (const auto& s : t.segments) CHECK(s[1][0] - s[0][0] >= 0.0);
    CHECK(acs(Window2::unit(), 1e-9, Seed{2}).cells.size() == 1);
}

TEST_CASE("iteration") {
    const auto pv = voronoi(sample_poisson<2>(Window2::unit(), 30.0, Seed{1}));
    auto plt = [](const Window2& b, const Seed& s) { return poisson_line_tessellation(b, 10.0, DirectionRose::isotropic(), s); };
    const auto same = iterate(pv, plt, IterateMode::nest, 0.0, Seed{2});
    CHECK(same.cells.size() == pv.cells.size());
    const auto nested = iterate(pv, plt, IterateMode::nest, 1.0, Seed{2});
    CHECK(nested.total_area() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(nested.cells.size() > pv.cells.size());
    const auto sup = iterate(pv, plt, IterateMode::superpose, 1.0, Seed{2});
    CHECK(sup.cells.size() >= pv.cells.size());
}
