#pragma once

#include <vector>

#include "tessera/rose.hpp"
#include "tessera/window.hpp"

namespace tessera {

/// Poisson line process with length intensity lambda (mean total line length per
/// unit area) restricted to the lines hitting the polygon. Lines are drawn on the
/// circumscribed disc, count Poisson(2 lambda R), direction from the rose, offset
/// uniform; misses are rejected.
std::vector<Line2> sample_poisson_lines(const ConvexPolygon& region, double lambda, const DirectionRose& rose,
                                        Rng& rng);
/// Same on the simulation domain of the window.
std::vector<Line2> sample_poisson_lines(const Window2& w, double lambda, const DirectionRose& rose, const Seed& seed);

/// Poisson plane process with surface intensity lambda, planes hitting the box.
std::vector<Plane3> sample_poisson_planes(const Window3& w, double lambda, const DirectionRose& rose,
                                          const Seed& seed);

}  // namespace tessera
