#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tessera/hyperplane.hpp"
#include "tessera/vec.hpp"

namespace tessera {

struct Box2 {
    Vec2 lo{}, hi{};
    [[nodiscard]] double area() const { return (hi[0] - lo[0]) * (hi[1] - lo[1]); }
};

/// Convex polygon stored as a counterclockwise vertex ring.
class ConvexPolygon {
public:
    ConvexPolygon() = default;
    /// Takes ownership of a ring; validates convexity and orientation.
    explicit ConvexPolygon(std::vector<Vec2> ring, double tol = 1e-9);

    static ConvexPolygon box(const Vec2& lo, const Vec2& hi);
    static ConvexPolygon unit_square() { return box({{0, 0}}, {{1, 1}}); }
    /// Ring accepted as-is (already CCW and convex); used by the kernels.
    static ConvexPolygon from_trusted_ring(std::vector<Vec2> ring);

    [[nodiscard]] const std::vector<Vec2>& ring() const { return ring_; }
    [[nodiscard]] std::size_t size() const { return ring_.size(); }
    [[nodiscard]] bool empty() const { return ring_.empty(); }
    [[nodiscard]] const Vec2& operator[](std::size_t i) const { return ring_[i]; }

    [[nodiscard]] double area() const;
    [[nodiscard]] double perimeter() const;
    [[nodiscard]] Vec2 centroid() const;
    [[nodiscard]] Box2 bounds() const;
    /// Extent of the orthogonal projection onto u (unit).
    [[nodiscard]] double width(const Vec2& u) const;
    /// [min, max] of <v, u> over vertices.
    [[nodiscard]] std::pair<double, double> support_interval(const Vec2& u) const;
    [[nodiscard]] bool contains(const Vec2& p, double tol = 0.0) const;
    [[nodiscard]] ConvexPolygon translated(const Vec2& t) const;
    [[nodiscard]] ConvexPolygon scaled(double s) const;
    /// Isoperimetric shape factor 4*pi*A / P^2.
    [[nodiscard]] double roundness() const;

private:
    std::vector<Vec2> ring_;
};

struct PolygonMeasures {
    double content = 0.0;
    double boundary_content = 0.0;
    int n_vertices = 0;
};

PolygonMeasures measures(const ConvexPolygon& p);

/// p intersected with the chosen closed half-space of h. Returns nullopt if the
/// result has area below min_area.
std::optional<ConvexPolygon> clip_halfspace(const ConvexPolygon& p, const Line2& h, Side side,
                                            double min_area = 1e-12);

/// Intersection of two convex polygons.
std::optional<ConvexPolygon> intersect(const ConvexPolygon& a, const ConvexPolygon& b,
                                       double min_area = 1e-12);

/// Length of the chord cut from p by line h (0 if it misses).
double chord_length(const ConvexPolygon& p, const Line2& h);

/// Portion of segment [a, b] inside p, or nullopt.
std::optional<std::pair<Vec2, Vec2>> clip_segment(const ConvexPolygon& p, const Vec2& a, const Vec2& b);

}  // namespace tessera
