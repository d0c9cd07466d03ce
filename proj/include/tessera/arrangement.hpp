#pragma once

#include <vector>

#include "tessera/lines.hpp"
#include "tessera/tessellation.hpp"

namespace tessera {

/// Cells of region minus the lines, by splitting every cell each line crosses.
std::vector<ConvexPolygon> arrangement_polygons(const std::vector<Line2>& lines, const ConvexPolygon& region);
std::vector<ConvexPolyhedron> arrangement_polyhedra(const std::vector<Plane3>& planes, const ConvexPolyhedron& region);

/// Arrangement inside the simulation domain of the window, lattice built.
Tessellation2 arrangement_cells(const std::vector<Line2>& lines, const Window2& w);
Tessellation3 arrangement_cells(const std::vector<Plane3>& planes, const Window3& w);

/// Poisson line tessellation with length intensity lambda.
Tessellation2 poisson_line_tessellation(const Window2& w, double lambda, const DirectionRose& rose, const Seed& seed);
/// Poisson plane tessellation with surface intensity lambda.
Tessellation3 poisson_plane_tessellation(const Window3& w, double lambda, const DirectionRose& rose,
                                         const Seed& seed);

}  // namespace tessera
