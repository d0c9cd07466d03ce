#pragma once

#include <array>
#include <vector>

#include "tessera/hyperplane.hpp"
#include "tessera/polygon.hpp"
#include "tessera/polyhedron.hpp"
#include "tessera/rng.hpp"

namespace tessera {

/// Distribution of hyperplane normal directions (even on the sphere; a
/// direction and its negative describe the same hyperplanes).
class DirectionRose {
public:
    enum class Kind { isotropic, discrete, density };

    static DirectionRose isotropic(int dim = 2);
    /// Finitely many directions (normalized on input) with probabilities summing
    /// to 1 within 1e-12. Rejects roses concentrated on a single direction
    /// (d = 2) or a great circle (d = 3).
    static DirectionRose discrete(int dim, std::vector<std::array<double, 3>> directions, std::vector<double> probs);
    /// Coordinate axes with equal weight.
    static DirectionRose axis_aligned(int dim = 2);
    /// Planar density tabulated on an equal-width angle grid over [0, pi).
    static DirectionRose density(std::vector<double> weights);

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] const std::vector<std::array<double, 3>>& directions() const { return dirs_; }
    [[nodiscard]] const std::vector<double>& probabilities() const { return probs_; }
    [[nodiscard]] const std::vector<double>& density_weights() const { return weights_; }

    Vec2 sample2(Rng& rng) const;
    Vec3 sample3(Rng& rng) const;

    /// Lambda([P]) for the unit-intensity measure: expected width of P in a
    /// direction drawn from the rose (perimeter / pi for isotropic d = 2,
    /// mean width for isotropic d = 3).
    [[nodiscard]] double hitting_measure(const ConvexPolygon& p) const;
    [[nodiscard]] double hitting_measure(const ConvexPolyhedron& p) const;

private:
    Kind kind_ = Kind::isotropic;
    int dim_ = 2;
    std::vector<std::array<double, 3>> dirs_;
    std::vector<double> probs_;
    std::vector<double> weights_;  // density grid (normalized to sum 1)
    std::vector<double> cdf_;
};

/// Random line hitting p with law Lambda restricted to [p] and normalized.
/// Rejection from the circumscribed-disc offset interval.
Line2 sample_chord(const ConvexPolygon& p, const DirectionRose& rose, Rng& rng);

enum class VertexType { X, Y, T, other };
const char* to_string(VertexType t);

/// Shape of a planar vertex from the directions of its incident edges.
VertexType classify_vertex(const std::vector<Vec2>& incident_directions, double tol_angle = 1e-6);

}  // namespace tessera
