#pragma once

#include <array>
#include <vector>

#include "tessera/points.hpp"
#include "tessera/tessellation.hpp"

namespace tessera {

struct Triangulation {
    std::vector<Vec2> points;
    /// Counterclockwise index triples into points.
    std::vector<std::array<int, 3>> triangles;
    /// Near-zero incircle tests forced a perturbed rerun.
    bool perturbed = false;
};

/// Delaunay triangulation by incremental insertion (Bowyer-Watson). Inputs with
/// cocircular quadruples are rerun with a seeded perturbation of relative size 1e-10.
Triangulation delaunay_triangulation(const std::vector<Vec2>& points);

Vec2 circumcenter(const Vec2& a, const Vec2& b, const Vec2& c);

/// Delaunay tessellation of the pattern. Periodic windows triangulate the 3 x 3
/// tiling and keep the triangles whose circumcentre lies in the half-open box;
/// plus windows keep the triangles meeting the window.
Tessellation2 delaunay(const PointPattern2& p);

enum class BetaVariant { beta, beta_prime };

struct BetaDelaunayParams {
    double gamma = 1.0;
    double beta = 0.0;
    BetaVariant variant = BetaVariant::beta;
    /// beta: upper height cut; beta': lower cut of |h|. Zero selects the default (beta only).
    double h_max = 0.0;
    /// Dilation of the window on which the space-height process is simulated.
    double margin = 1.0;
};

double beta_constant(double beta, int d = 3);
double beta_prime_constant(double beta, int d = 3);
/// Height cut making the generators above it negligible (expected fraction of
/// cell-owning generators below 1e-3).
double default_beta_h_max(double gamma, double beta, double area);

/// Delaunay dual of the Laguerre tessellation of the space-height Poisson process
/// with weights -h. Cells are the dual triangles meeting the window.
Tessellation2 beta_delaunay(const Window2& w, const BetaDelaunayParams& params, const Seed& seed);

}  // namespace tessera
