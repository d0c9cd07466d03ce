#pragma once

#include <optional>
#include <vector>

#include "tessera/hyperplane.hpp"
#include "tessera/vec.hpp"

namespace tessera {

struct Box3 {
    Vec3 lo{}, hi{};
    [[nodiscard]] double volume() const { return (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]); }
};

/// Convex polyhedron: vertex list plus facet loops, each loop counterclockwise
/// when seen from outside (right-hand normal points outward).
class ConvexPolyhedron {
public:
    ConvexPolyhedron() = default;
    ConvexPolyhedron(std::vector<Vec3> vertices, std::vector<std::vector<int>> facets);

    static ConvexPolyhedron box(const Vec3& lo, const Vec3& hi);
    static ConvexPolyhedron unit_cube() { return box({{0, 0, 0}}, {{1, 1, 1}}); }

    [[nodiscard]] const std::vector<Vec3>& vertices() const { return vertices_; }
    [[nodiscard]] const std::vector<std::vector<int>>& facets() const { return facets_; }
    [[nodiscard]] bool empty() const { return vertices_.empty(); }

    [[nodiscard]] double volume() const;
    [[nodiscard]] double surface_area() const;
    [[nodiscard]] Vec3 centroid() const;
    [[nodiscard]] Box3 bounds() const;
    [[nodiscard]] std::pair<double, double> support_interval(const Vec3& u) const;
    [[nodiscard]] double width(const Vec3& u) const;
    /// Unique undirected edges as vertex index pairs.
    [[nodiscard]] std::vector<std::pair<int, int>> edges() const;
    [[nodiscard]] double total_edge_length() const;
    /// Mean width from the edge/dihedral-angle identity
    /// b = (1 / 4pi) * sum_e length(e) * (pi - interior_angle(e)).
    [[nodiscard]] double mean_width() const;
    [[nodiscard]] Vec3 facet_normal(std::size_t f) const;
    [[nodiscard]] double facet_area(std::size_t f) const;
    [[nodiscard]] bool contains(const Vec3& p, double tol = 0.0) const;
    [[nodiscard]] ConvexPolyhedron translated(const Vec3& t) const;
    /// Largest distance from p to a vertex.
    [[nodiscard]] double max_distance_from(const Vec3& p) const;
    /// Checks convexity and outward orientation within tol; throws ParameterError.
    void validate(double tol = 1e-9) const;

private:
    std::vector<Vec3> vertices_;
    std::vector<std::vector<int>> facets_;
};

struct PolyhedronMeasures {
    double content = 0.0;
    double boundary_content = 0.0;
    int n_vertices = 0;
};

PolyhedronMeasures measures(const ConvexPolyhedron& p);

std::optional<ConvexPolyhedron> clip_halfspace(const ConvexPolyhedron& p, const Plane3& h, Side side,
                                               double min_volume = 1e-12);

/// Area and centroid of a planar polygon in space (vertices in loop order).
double polygon_area_3d(const std::vector<Vec3>& loop);
Vec3 polygon_centroid_3d(const std::vector<Vec3>& loop);
/// Clip a planar polygon in space to a convex polyhedron; returns the clipped loop.
std::vector<Vec3> clip_polygon_3d(std::vector<Vec3> loop, const ConvexPolyhedron& region);
/// Portion of segment [a, b] inside the box.
std::optional<std::pair<Vec3, Vec3>> clip_segment(const Box3& box, const Vec3& a, const Vec3& b);

}  // namespace tessera
