#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "tessera/rose.hpp"
#include "tessera/tessellation.hpp"

namespace tessera {

/// Endpoints of the chord cut from p by h, or nullopt if h misses p.
std::optional<std::array<Vec2, 2>> chord(const ConvexPolygon& p, const Line2& h);

/// Cells of the planar straight-line graph formed by the segments and the
/// boundary of region. Dangling segment ends inside a face are dropped from the
/// traced walk, so faces must be convex.
std::vector<ConvexPolygon> polygonize(const std::vector<std::array<Vec2, 2>>& segments, const ConvexPolygon& region);

enum class Lifetime { stit, area };
enum class Division { stit, gauss, rdmin, rdssq };

const char* to_string(Lifetime l);
const char* to_string(Division d);
Lifetime parse_lifetime(const std::string& s);
Division parse_division(const std::string& s);

struct DivisionConfig {
    Lifetime lifetime = Lifetime::stit;
    Division division = Division::stit;
    /// Smallest admissible angle between a new chord and the side it ends on.
    double asa_min_angle = 0.0;
    DirectionRose rose = DirectionRose::isotropic(2);
    /// Stop at this time (if > 0) or when this many cells exist (if > 0); exactly one.
    double stop_time = 0.0;
    std::size_t target_cells = 0;
    std::size_t max_cells = 1'000'000;
    void validate() const;
};

/// Iterative cell division on the simulation domain. Every cell owns a random
/// stream derived from its position in the split tree, so the result for a
/// larger stop time refines the result for a smaller one.
Tessellation2 cell_division(const Window2& w, const DivisionConfig& cfg, const Seed& seed);

/// STIT tessellation with stopping time a (per-cell exponential clocks).
Tessellation2 stit(const Window2& w, double a, const DirectionRose& rose, const Seed& seed);

/// STIT by the literal global-clock scheme: each cell runs i.i.d. pairs of
/// Exp(Lambda([W])) waiting times and Lambda_[W] lines and splits when a line hits it.
Tessellation2 stit_reference(const Window2& w, double a, const DirectionRose& rose, const Seed& seed);

enum class GilbertMode { isotropic, rectangular };

/// Bilateral crack growth at unit speed from Poisson seeds; an arm stops when
/// its tip reaches an existing crack or the domain boundary.
Tessellation2 gilbert(const Window2& w, double lambda, GilbertMode mode, const Seed& seed);

/// Particle construction on a convex region for the isotropic line measure with
/// length intensity lambda. Particles move left to right, die at the boundary or
/// by a coin toss on collision, and branch at rate lambda / pi per unit length.
Tessellation2 acs(const ConvexPolygon& region, double lambda, const Seed& seed);
/// Same on the simulation domain of a box window.
Tessellation2 acs(const Window2& w, double lambda, const Seed& seed);

/// Generates a component tessellation on the given box.
using ComponentGenerator = std::function<Tessellation2(const Window2& box, const Seed& seed)>;

enum class IterateMode { nest, superpose };

/// Nesting: cell i of t0 is, with probability bernoulli_p, replaced by its
/// intersections with the cells of an independent component. Superposition:
/// every cell is intersected with one component on the whole domain.
Tessellation2 iterate(const Tessellation2& t0, const ComponentGenerator& component, IterateMode mode,
                      double bernoulli_p, const Seed& seed);

/// Tessellation scaled about the origin (window, cells and generators).
Tessellation2 scale(const Tessellation2& t, double factor);

}  // namespace tessera
