#pragma once

#include <map>
#include <string>
#include <vector>

#include "tessera/centroid.hpp"
#include "tessera/points.hpp"
#include "tessera/tessellation.hpp"

namespace tessera {

struct Estimate {
    double value = 0.0;
    /// Standard error over replicates (NaN for a single replicate).
    double se = 0.0;
};

/// Names: gamma0..gammaD, mu0..muD, L1 (typical edge length), and
/// d = 2: P2, A2, n2 (corners), RD, N02, N20, N01, phi, frac_X/Y/T/other, K, J, I;
/// d = 3: A2, P2 (typical facet), V3, S3, B3, L3, N30, N03, N32, N21.
struct CharacteristicsReport {
    int dim = 2;
    std::size_t replicates = 0;
    std::map<std::string, Estimate> values;
    [[nodiscard]] bool has(const std::string& name) const { return values.count(name) != 0; }
    [[nodiscard]] double operator[](const std::string& name) const;
};

/// Numerator and denominator of a pooled ratio estimator.
struct Ratio {
    double num = 0.0;
    double den = 0.0;
};
using Measurements = std::map<std::string, Ratio>;

/// Counting region: the whole box (periodic), the window (plus), or the window
/// shrunk by the given linear fraction about its centre (none).
Box2 reference_box(const Window2& w, double inner_fraction = 0.8);
Box3 reference_box(const Window3& w, double inner_fraction = 0.8);

/// Per-realization numerators/denominators. Faces are counted when their centre
/// (per the rule) lies in the reference box; contents are clipped to it.
Measurements measure(const Tessellation2& t, const CentroidRule& rule = {}, double inner_fraction = 0.8);
Measurements measure(const Tessellation3& t, const CentroidRule& rule = {}, double inner_fraction = 0.8);

/// Pooled ratio estimates sum(num) / sum(den) with delta-method standard errors.
/// Throws InsufficientSampleError when no cell centre fell in any reference set.
CharacteristicsReport pool(const std::vector<Measurements>& reps, int dim);

CharacteristicsReport estimate(const Tessellation2& t, const CentroidRule& rule = {});
CharacteristicsReport estimate(const Tessellation3& t, const CentroidRule& rule = {});

struct SegmentCounts {
    std::size_t K = 0;
    std::size_t J = 0;
    std::size_t I = 0;
    std::size_t interior_vertices = 0;
    std::size_t pi_vertices = 0;
    double phi = 0.0;
};

/// Interior lattice edges (K), distinct interior cell sides (J), maximal
/// collinear chains (I) and the proportion of interior vertices that are not a
/// corner of some incident cell.
SegmentCounts segment_decomposition(const Tessellation2& t, double tol_angle = 1e-6);

/// Index of the cell containing the point (lowest index on ties).
int zero_cell(const Tessellation2& t, const Vec2& origin);

struct OracleValues {
    std::string model;
    std::map<std::string, double> values;
    [[nodiscard]] bool has(const std::string& name) const { return values.count(name) != 0; }
    [[nodiscard]] double operator[](const std::string& name) const;
};

/// Poisson-Voronoi mean values for intensity lambda in dimension d.
OracleValues oracle_poisson_voronoi(double lambda, int d);
/// Closed-form mu_k of the Poisson-Voronoi tessellation.
double poisson_voronoi_mu(double lambda, int d, int k);
/// Isotropic Poisson line tessellation with length intensity L_A.
OracleValues oracle_poisson_line(double length_intensity);
/// Poisson-Delaunay tessellation of a Poisson process with intensity lambda.
OracleValues oracle_poisson_delaunay(double lambda);
/// Isotropic planar STIT at time a: length intensity and typical cell of the
/// line tessellation with the same intensity.
OracleValues oracle_stit(double a);

/// mu_k of the Johnson-Mehl tessellation of a Poisson process with intensity
/// lambda and arrival-time law Q, by adaptive Gauss-Kronrod quadrature.
double oracle_johnson_mehl_mu(double lambda, const MarkDistribution& q, int d, int k);

/// Typical cell of the planar Poisson-Delaunay tessellation: r^2 ~ Gamma(2, rate
/// lambda pi), three directions with density proportional to the triangle area.
ConvexPolygon sample_pdt_typical_cell(double lambda, Rng& rng);

struct LambdaEstimate {
    double lambda = 0.0;
    std::map<std::string, double> per_formula;
    double spread = 0.0;
};

/// Intensity recovered by inverting the closed-form mean values (model: pv2,
/// pv3, plt, pdt); the combined value is the least-squares (mean) estimate.
LambdaEstimate estimate_lambda(const CharacteristicsReport& report, const std::string& model);

}  // namespace tessera
