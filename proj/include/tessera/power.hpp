#pragma once

#include <vector>

#include "tessera/points.hpp"
#include "tessera/tessellation.hpp"

namespace tessera {

/// How cells of a power diagram are computed.
enum class Backend {
    /// Grid neighbour search with a certified stopping radius; cells in parallel.
    parallel,
    /// Same algorithm, one thread.
    serial,
    /// Brute force: every cell clipped against every other generator (tests only).
    reference
};

/// Power diagram of points with weights w: cell(i) = {y : |y - x_i|^2 - w_i minimal}.
/// Edge treatment follows the pattern's window: none clips to the box; plus keeps
/// the cells (clipped to the extended box) that meet the window; periodic keeps
/// the cells of the central copy of a 3 x 3 tiling.
Tessellation2 power_diagram(const PointPattern2& p, const std::vector<double>& weights, Backend backend = Backend::parallel);
Tessellation3 power_diagram(const PointPattern3& p, const std::vector<double>& weights, Backend backend = Backend::parallel);

/// Voronoi tessellation (all weights zero). Generators closer than 1e-9 are merged
/// with a warning.
Tessellation2 voronoi(const PointPattern2& p, Backend backend = Backend::parallel);
Tessellation3 voronoi(const PointPattern3& p, Backend backend = Backend::parallel);

/// Laguerre tessellation with weights r^2 from the radius marks (explicit weight
/// marks take precedence). Empty cells are listed in empty_cells.
Tessellation2 laguerre(const PointPattern2& p, Backend backend = Backend::parallel);
Tessellation3 laguerre(const PointPattern3& p, Backend backend = Backend::parallel);

struct LloydResult {
    Tessellation2 tessellation;
    PointPattern2 generators;
    /// Largest generator displacement at each iteration.
    std::vector<double> displacements;
};

/// Alternates voronoi() and moving each generator to its cell's gravity centre.
LloydResult lloyd_centroidal(const PointPattern2& p, int iterations, Backend backend = Backend::parallel);

}  // namespace tessera
