#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "tessera/points.hpp"
#include "tessera/polygon.hpp"
#include "tessera/polyhedron.hpp"
#include "tessera/window.hpp"

namespace tessera {

/// Generator whose cell is empty (Laguerre) together with the reason.
struct EmptyCell {
    int generator = -1;
    std::string reason;
};

using Shift2 = std::array<int, 2>;
using Shift3 = std::array<int, 3>;

struct Cell2 {
    ConvexPolygon polygon;
    /// Lattice vertex ids around the cell, counterclockwise, including vertices
    /// lying in the relative interior of a side.
    std::vector<int> ring;
    /// Parallel to ring: 1 if the vertex is a corner of the polygon.
    std::vector<std::uint8_t> corner;
    /// Parallel to ring: periodic image of the vertex used by this cell.
    std::vector<Shift2> shift;
    int generator = -1;
    /// Model-specific label (leaf id, parent cell, split count).
    long long tag = -1;
    std::vector<int> neighbors;
};

struct Edge2 {
    int v0 = -1, v1 = -1;
    /// Relative periodic shift of v1 with respect to v0.
    Shift2 shift{};
    /// Geometry in the coordinates of the first incident cell.
    Vec2 a{}, b{};
    std::vector<int> cells;
    bool boundary = false;
    [[nodiscard]] double length() const { return distance(a, b); }
    [[nodiscard]] Vec2 midpoint() const { return (a + b) * 0.5; }
};

struct Tessellation2 {
    std::string model;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 0;
    Window2 window;
    PointPattern2 generators;
    std::vector<Cell2> cells;
    std::vector<Vec2> vertices;
    std::vector<std::uint8_t> vertex_boundary;
    std::vector<Edge2> edges;
    std::vector<EmptyCell> empty_cells;
    /// Construction segments (STIT chords, Gilbert cracks, ACS trajectories).
    std::vector<std::array<Vec2, 2>> segments;
    std::vector<std::string> warnings;
    /// Non-box domain (empty means the window box).
    ConvexPolygon shape;
    bool face_to_face = true;
    bool normal = true;

    [[nodiscard]] std::size_t size() const { return cells.size(); }
    /// Domain the cells tile: the window box, the extended box in plus mode, or shape.
    [[nodiscard]] ConvexPolygon domain() const {
        return shape.empty() ? ConvexPolygon::box(window.sim_lo(), window.sim_hi()) : shape;
    }
    [[nodiscard]] double total_area() const;
};

struct Cell3 {
    ConvexPolyhedron polyhedron;
    /// Lattice vertex id of each polyhedron vertex, and its periodic image.
    std::vector<int> vertex_ids;
    std::vector<Shift3> shift;
    int generator = -1;
    long long tag = -1;
    std::vector<int> neighbors;
};

struct Edge3 {
    int v0 = -1, v1 = -1;
    Shift3 shift{};
    Vec3 a{}, b{};
    std::vector<int> cells;
    bool boundary = false;
    [[nodiscard]] double length() const { return distance(a, b); }
};

struct Facet3 {
    std::vector<int> vertex_ids;
    std::vector<Vec3> loop;
    std::vector<int> cells;
    bool boundary = false;
};

struct Tessellation3 {
    std::string model;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 0;
    Window3 window;
    PointPattern3 generators;
    std::vector<Cell3> cells;
    std::vector<Vec3> vertices;
    std::vector<std::uint8_t> vertex_boundary;
    std::vector<Edge3> edges;
    std::vector<Facet3> facets;
    std::vector<EmptyCell> empty_cells;
    std::vector<std::string> warnings;
    bool face_to_face = true;
    bool normal = true;

    [[nodiscard]] std::size_t size() const { return cells.size(); }
    [[nodiscard]] Box3 domain_box() const { return {window.sim_lo(), window.sim_hi()}; }
    [[nodiscard]] double total_volume() const;
};

/// Builds vertices, edges, rings and incidences from the cell geometry.
/// Vertices closer than tol times the domain diameter are identified; in
/// periodic windows positions are compared modulo the box.
void build_lattice(Tessellation2& t, double tol = 1e-9);
void build_lattice(Tessellation3& t, double tol = 1e-9);

/// Makes a tessellation from cell polygons (lattice built).
Tessellation2 make_tessellation(std::string model, const Window2& w, std::vector<ConvexPolygon> cells);
Tessellation3 make_tessellation(std::string model, const Window3& w, std::vector<ConvexPolyhedron> cells);

/// Incident edge directions at a lattice vertex (unit vectors pointing away).
std::vector<std::vector<Vec2>> vertex_edge_directions(const Tessellation2& t);
/// Number of cells having the vertex on their boundary.
std::vector<int> vertex_cell_counts(const Tessellation2& t);
/// 1 for vertices that are not a corner of at least one incident cell.
std::vector<std::uint8_t> pi_vertices(const Tessellation2& t);

/// Index of the cell containing p (lowest index on ties), or -1.
int locate_cell(const Tessellation2& t, const Vec2& p);

}  // namespace tessera
