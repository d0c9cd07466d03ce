#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "tessera/rng.hpp"
#include "tessera/window.hpp"

namespace tessera {

/// Mark law: constant(v), uniform(a, b), lognormal(mu, sigma), gamma(k, theta).
struct MarkDistribution {
    enum class Kind { constant, uniform, lognormal, gamma };
    Kind kind = Kind::constant;
    double a = 0.0;
    double b = 0.0;

    static MarkDistribution constant(double v);
    static MarkDistribution uniform(double lo, double hi);
    static MarkDistribution lognormal(double mu, double sigma);
    static MarkDistribution gamma(double shape, double scale);

    void validate() const;
    double sample(Rng& rng) const;
    [[nodiscard]] double mean() const;
    [[nodiscard]] double variance() const;
    /// Density (continuous kinds only).
    [[nodiscard]] double pdf(double x) const;
    /// Smallest and largest value with positive density (may be infinite).
    [[nodiscard]] std::pair<double, double> support() const;
    [[nodiscard]] std::string name() const;
};

template <int D>
using Matrix = std::array<double, D * D>;

/// Points with optional parallel mark lists.
template <int D>
struct PointPattern {
    std::vector<Vec<D>> points;
    std::vector<double> radii;
    std::vector<double> weights;
    std::vector<double> times;
    std::vector<Matrix<D>> matrices;
    Window<D> window;
    /// SSI only: the target count was not reached.
    bool saturated = false;

    [[nodiscard]] std::size_t size() const { return points.size(); }
    [[nodiscard]] bool empty() const { return points.empty(); }
    /// Throws ParameterError when a mark list has the wrong length or a
    /// matrix is not symmetric positive definite.
    void validate() const;
};

using PointPattern2 = PointPattern<2>;
using PointPattern3 = PointPattern<3>;

template <int D>
PointPattern<D> sample_poisson(const Window<D>& w, double lambda, const Seed& seed);

/// n i.i.d. uniform points in the simulation domain.
template <int D>
PointPattern<D> sample_binomial(const Window<D>& w, std::size_t n, const Seed& seed);

/// Poisson process with intensity function f <= lambda_max, by independent thinning.
template <int D>
PointPattern<D> sample_poisson_thinned(const Window<D>& w, double lambda_max,
                                       const std::function<double(const Vec<D>&)>& intensity, const Seed& seed);

/// Poisson parents on the domain dilated by the cluster radius, Poisson(mean_offspring)
/// children uniform in the ball around each parent; children outside the domain dropped.
template <int D>
PointPattern<D> sample_matern_cluster(const Window<D>& w, double lambda_parent, double mean_offspring,
                                      double cluster_radius, const Seed& seed);

/// Simple sequential inhibition.
template <int D>
PointPattern<D> sample_ssi(const Window<D>& w, std::size_t target_n, double hardcore_r, std::size_t max_attempts,
                           const Seed& seed);

enum class MarkTarget { radius, weight, time };

/// I.i.d. marks independent of locations.
template <int D>
PointPattern<D> attach_marks(PointPattern<D> p, const MarkDistribution& dist, const Seed& seed,
                             MarkTarget target = MarkTarget::radius);

/// Ellipse marks M = U diag(1/a^2, 1/b^2) U^T with semi-axes a ~ U[major], b ~ U[minor]
/// and rotation uniform on [0, pi).
PointPattern2 attach_ellipse_marks(PointPattern2 p, std::pair<double, double> major, std::pair<double, double> minor,
                                   const Seed& seed);

/// Semi-axes (descending) and rotation angle recovered from a 2x2 SPD matrix.
struct EllipseAxes {
    double a = 0.0;
    double b = 0.0;
    double angle = 0.0;
};
EllipseAxes decompose_ellipse(const Matrix<2>& m);

/// Smallest eigenvalue of a symmetric matrix.
template <int D>
double min_eigenvalue(const Matrix<D>& m);

/// Default plus-sampling margin for Voronoi-type models: 3 / sqrt(lambda) in the
/// plane, 3 * lambda^(-1/3) in space.
template <int D>
double default_margin(double lambda);

/// Copies of the pattern shifted by every vector of {-1, 0, 1}^D times the box
/// size; the central copy comes first so index i < n refers to the original.
template <int D>
PointPattern<D> periodic_tiling(const PointPattern<D>& p);

}  // namespace tessera
