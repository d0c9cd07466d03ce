#include "tessera/lines.hpp"

#include <cmath>

#include "tessera/errors.hpp"

namespace tessera {

std::vector<Line2> sample_poisson_lines(const ConvexPolygon& region, double lambda, const DirectionRose& rose,
                                        Rng& rng) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ParameterError("line intensity must be finite and >= 0");
    if (rose.dim() != 2) throw ParameterError("line process needs a planar rose");
    const Box2 b = region.bounds();
    const Vec2 c = (b.lo + b.hi) * 0.5;
    double radius = 0.0;
    for (const auto& v : region.ring()) radius = std::max(radius, distance(v, c));
    const double mean = 2.0 * lambda * radius;
    if (mean > 1e7) throw ParameterError("expected line count exceeds 1e7");
    const auto n = rng.poisson(mean);
    std::vector<Line2> lines;
    for (std::uint64_t i = 0; i < n; ++i) {
        const Vec2 u = rose.sample2(rng);
        const double r = dot(c, u) + rng.uniform(-radius, radius);
        const auto [lo, hi] = region.support_interval(u);
        if (r > lo && r < hi) lines.emplace_back(u, r);
    }
    return lines;
}

std::vector<Line2> sample_poisson_lines(const Window2& w, double lambda, const DirectionRose& rose, const Seed& seed) {
    w.validate();
    Rng rng(seed);
    return sample_poisson_lines(ConvexPolygon::box(w.sim_lo(), w.sim_hi()), lambda, rose, rng);
}

std::vector<Plane3> sample_poisson_planes(const Window3& w, double lambda, const DirectionRose& rose,
                                          const Seed& seed) {
    w.validate();
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ParameterError("plane intensity must be finite and >= 0");
    if (rose.dim() != 3) throw ParameterError("plane process needs a spatial rose");
    const ConvexPolyhedron box = ConvexPolyhedron::box(w.sim_lo(), w.sim_hi());
    const Vec3 c = (w.sim_lo() + w.sim_hi()) * 0.5;
    const double radius = box.max_distance_from(c);
    const double mean = 2.0 * lambda * radius;
    if (mean > 1e7) throw ParameterError("expected plane count exceeds 1e7");
    Rng rng(seed);
    const auto n = rng.poisson(mean);
    std::vector<Plane3> planes;
    for (std::uint64_t i = 0; i < n; ++i) {
        const Vec3 u = rose.sample3(rng);
        const double r = dot(c, u) + rng.uniform(-radius, radius);
        const auto [lo, hi] = box.support_interval(u);
        if (r > lo && r < hi) planes.emplace_back(u, r);
    }
    return planes;
}

}  // namespace tessera
