#include "tessera/arrangement.hpp"

namespace tessera {

namespace {

template <class Poly, class H>
std::vector<Poly> split_all(const std::vector<H>& hs, const Poly& region) {
    std::vector<Poly> cells{region};
    std::vector<Poly> next;
    for (const auto& h : hs) {
        next.clear();
        next.reserve(cells.size() + 16);
        for (auto& c : cells) {
            const auto [lo, hi] = c.support_interval(h.normal);
            if (!(h.offset > lo && h.offset < hi)) {
                next.push_back(std::move(c));
                continue;
            }
            auto a = clip_halfspace(c, h, Side::below, 0.0);
            auto b = clip_halfspace(c, h, Side::above, 0.0);
            if (a && b) {
                next.push_back(std::move(*a));
                next.push_back(std::move(*b));
            } else {
                next.push_back(std::move(c));
            }
        }
        cells.swap(next);
    }
    return cells;
}

}  // namespace

std::vector<ConvexPolygon> arrangement_polygons(const std::vector<Line2>& lines, const ConvexPolygon& region) {
    return split_all(lines, region);
}

std::vector<ConvexPolyhedron> arrangement_polyhedra(const std::vector<Plane3>& planes, const ConvexPolyhedron& region) {
    return split_all(planes, region);
}

Tessellation2 arrangement_cells(const std::vector<Line2>& lines, const Window2& w) {
    w.validate();
    if (w.mode == EdgeMode::periodic) throw ParameterError("line arrangements do not support periodic windows");
    return make_tessellation("arrangement", w, arrangement_polygons(lines, ConvexPolygon::box(w.sim_lo(), w.sim_hi())));
}

Tessellation3 arrangement_cells(const std::vector<Plane3>& planes, const Window3& w) {
    w.validate();
    if (w.mode == EdgeMode::periodic) throw ParameterError("plane arrangements do not support periodic windows");
    return make_tessellation("arrangement", w,
                             arrangement_polyhedra(planes, ConvexPolyhedron::box(w.sim_lo(), w.sim_hi())));
}

Tessellation2 poisson_line_tessellation(const Window2& w, double lambda, const DirectionRose& rose, const Seed& seed) {
    const auto lines = sample_poisson_lines(w, lambda, rose, seed.derive("lines"));
    Tessellation2 t = arrangement_cells(lines, w);
    t.model = "plt";
    t.params = {{"lambda", lambda}};
    return t;
}

Tessellation3 poisson_plane_tessellation(const Window3& w, double lambda, const DirectionRose& rose,
                                         const Seed& seed) {
    const auto planes = sample_poisson_planes(w, lambda, rose, seed.derive("planes"));
    Tessellation3 t = arrangement_cells(planes, w);
    t.model = "php3d";
    t.params = {{"lambda", lambda}};
    return t;
}

}  // namespace tessera
