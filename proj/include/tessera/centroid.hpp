#pragma once

#include <span>
#include <string>
#include <vector>

#include "tessera/polygon.hpp"
#include "tessera/polyhedron.hpp"

namespace tessera {

/// Translation-covariant centre assigned to each face for counting purposes.
struct CentroidRule {
    enum class Kind { gravity_center, circumball_center, extreme_point };
    Kind kind = Kind::gravity_center;
    /// Direction for extreme_point (only the first D entries are used).
    std::array<double, 3> direction{{0.0, 1.0, 0.0}};

    static CentroidRule gravity() { return {}; }
    static CentroidRule circumball() { return {Kind::circumball_center, {}}; }
    static CentroidRule extreme(std::array<double, 3> dir) { return {Kind::extreme_point, dir}; }
    static CentroidRule parse(const std::string& name);
};

/// Centre of the smallest ball enclosing the points (Welzl, move-to-front).
template <int D>
Vec<D> enclosing_ball_center(std::span<const Vec<D>> pts);

Vec2 centroid(const ConvexPolygon& p, const CentroidRule& rule);
Vec3 centroid(const ConvexPolyhedron& p, const CentroidRule& rule);
/// Centre of a segment or a planar facet given by its vertices.
template <int D>
Vec<D> centroid_of_face(std::span<const Vec<D>> verts, const CentroidRule& rule);

}  // namespace tessera
