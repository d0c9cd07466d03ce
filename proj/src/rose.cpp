#include "tessera/rose.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tessera/errors.hpp"

namespace tessera {

DirectionRose DirectionRose::isotropic(int dim) {
    if (dim != 2 && dim != 3) throw ParameterError("rose dimension must be 2 or 3");
    DirectionRose r;
    r.kind_ = Kind::isotropic;
    r.dim_ = dim;
    return r;
}

DirectionRose DirectionRose::discrete(int dim, std::vector<std::array<double, 3>> directions,
                                      std::vector<double> probs) {
    if (dim != 2 && dim != 3) throw ParameterError("rose dimension must be 2 or 3");
    if (directions.empty() || directions.size() != probs.size())
        throw ParameterError("discrete rose needs one probability per direction");
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) throw ParameterError("rose probabilities must be >= 0");
        total += p;
    }
    if (std::fabs(total - 1.0) > 1e-12) throw ParameterError("rose probabilities must sum to 1");
    for (auto& d : directions) {
        if (dim == 2) d[2] = 0.0;
        const double len = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
        if (!(len > 0.0)) throw ParameterError("rose direction must be nonzero");
        for (double& x : d) x /= len;
    }
    // Nondegeneracy: supported directions must span the space.
    std::vector<Vec3> support;
    for (std::size_t i = 0; i < directions.size(); ++i)
        if (probs[i] > 0.0) support.push_back({{directions[i][0], directions[i][1], directions[i][2]}});
    bool spans = false;
    if (dim == 2) {
        for (std::size_t i = 0; i < support.size() && !spans; ++i)
            for (std::size_t j = i + 1; j < support.size() && !spans; ++j)
                spans = norm(cross(support[i], support[j])) > 1e-9;
    } else {
        for (std::size_t i = 0; i < support.size() && !spans; ++i)
            for (std::size_t j = i + 1; j < support.size() && !spans; ++j)
                for (std::size_t k = j + 1; k < support.size() && !spans; ++k)
                    spans = std::fabs(dot(support[i], cross(support[j], support[k]))) > 1e-9;
    }
    if (!spans)
        throw ParameterError(dim == 2 ? "rose is concentrated on a single direction"
                                      : "rose is concentrated on a great circle");
    DirectionRose r;
    r.kind_ = Kind::discrete;
    r.dim_ = dim;
    r.dirs_ = std::move(directions);
    r.probs_ = std::move(probs);
    r.cdf_.resize(r.probs_.size());
    std::partial_sum(r.probs_.begin(), r.probs_.end(), r.cdf_.begin());
    return r;
}

DirectionRose DirectionRose::axis_aligned(int dim) {
    if (dim == 2) return discrete(2, {{{1, 0, 0}}, {{0, 1, 0}}}, {0.5, 0.5});
    return discrete(3, {{{1, 0, 0}}, {{0, 1, 0}}, {{0, 0, 1}}}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
}

DirectionRose DirectionRose::density(std::vector<double> weights) {
    if (weights.size() < 2) throw ParameterError("density rose needs at least 2 grid cells");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw ParameterError("density rose weights must be >= 0");
        total += w;
    }
    if (!(total > 0.0)) throw ParameterError("density rose weights must not all vanish");
    for (double& w : weights) w /= total;
    const auto nonzero = std::count_if(weights.begin(), weights.end(), [](double w) { return w > 0.0; });
    (void)nonzero;  // any positive cell has an interval of directions, so it is never degenerate
    DirectionRose r;
    r.kind_ = Kind::density;
    r.dim_ = 2;
    r.weights_ = std::move(weights);
    r.cdf_.resize(r.weights_.size());
    std::partial_sum(r.weights_.begin(), r.weights_.end(), r.cdf_.begin());
    return r;
}

Vec2 DirectionRose::sample2(Rng& rng) const {
    switch (kind_) {
        case Kind::isotropic:
            return unit_from_angle(rng.uniform(0.0, M_PI));
        case Kind::discrete: {
            const double u = rng.uniform() * cdf_.back();
            const auto i = static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
            const auto& d = dirs_[std::min(i, dirs_.size() - 1)];
            return {{d[0], d[1]}};
        }
        case Kind::density: {
            const double u = rng.uniform() * cdf_.back();
            auto i = static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
            i = std::min(i, weights_.size() - 1);
            const double cell = M_PI / static_cast<double>(weights_.size());
            return unit_from_angle((static_cast<double>(i) + rng.uniform()) * cell);
        }
    }
    return {{1, 0}};
}

Vec3 DirectionRose::sample3(Rng& rng) const {
    if (dim_ != 3) throw ParameterError("rose is planar");
    if (kind_ == Kind::isotropic) {
        const double z = rng.uniform(-1.0, 1.0);
        const double phi = rng.uniform(0.0, 2.0 * M_PI);
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {{s * std::cos(phi), s * std::sin(phi), z}};
    }
    const double u = rng.uniform() * cdf_.back();
    const auto i = static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
    const auto& d = dirs_[std::min(i, dirs_.size() - 1)];
    return {{d[0], d[1], d[2]}};
}

double DirectionRose::hitting_measure(const ConvexPolygon& p) const {
    switch (kind_) {
        case Kind::isotropic:
            return p.perimeter() / M_PI;
        case Kind::discrete: {
            double s = 0.0;
            for (std::size_t i = 0; i < dirs_.size(); ++i) s += probs_[i] * p.width({{dirs_[i][0], dirs_[i][1]}});
            return s;
        }
        case Kind::density: {
            // Midpoint rule with 8 nodes per grid cell.
            const std::size_t n = weights_.size();
            const double cell = M_PI / static_cast<double>(n);
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (weights_[i] == 0.0) continue;
                double w = 0.0;
                for (int k = 0; k < 8; ++k) w += p.width(unit_from_angle((static_cast<double>(i) + (k + 0.5) / 8.0) * cell));
                s += weights_[i] * w / 8.0;
            }
            return s;
        }
    }
    return 0.0;
}

double DirectionRose::hitting_measure(const ConvexPolyhedron& p) const {
    if (kind_ == Kind::isotropic) return p.mean_width();
    double s = 0.0;
    for (std::size_t i = 0; i < dirs_.size(); ++i) s += probs_[i] * p.width({{dirs_[i][0], dirs_[i][1], dirs_[i][2]}});
    return s;
}

Line2 sample_chord(const ConvexPolygon& p, const DirectionRose& rose, Rng& rng) {
    const Box2 b = p.bounds();
    const Vec2 c = (b.lo + b.hi) * 0.5;
    double radius = 0.0;
    for (const auto& v : p.ring()) radius = std::max(radius, distance(v, c));
    for (int iter = 0; iter < 1'000'000; ++iter) {
        const Vec2 u = rose.sample2(rng);
        const double r = dot(c, u) + rng.uniform(-radius, radius);
        const auto [lo, hi] = p.support_interval(u);
        if (r > lo && r < hi) return Line2(u, r);
    }
    throw NumericError("sample_chord: rejection loop exhausted (degenerate rose?)");
}

const char* to_string(VertexType t) {
    switch (t) {
        case VertexType::X: return "X";
        case VertexType::Y: return "Y";
        case VertexType::T: return "T";
        case VertexType::other: return "other";
    }
    return "other";
}

VertexType classify_vertex(const std::vector<Vec2>& dirs, double tol_angle) {
    if (dirs.size() < 3) throw ParameterError("classify_vertex: a vertex needs at least 3 incident edges");
    auto collinear = [&](const Vec2& a, const Vec2& b) {
        // Opposite directions: angle between a and -b below tol.
        const double c = dot(normalized(a), normalized(b));
        return std::acos(std::clamp(-c, -1.0, 1.0)) < tol_angle;
    };
    int pairs = 0;
    std::vector<int> partner(dirs.size(), 0);
    for (std::size_t i = 0; i < dirs.size(); ++i)
        for (std::size_t j = i + 1; j < dirs.size(); ++j)
            if (collinear(dirs[i], dirs[j])) {
                ++pairs;
                ++partner[i];
                ++partner[j];
            }
    if (dirs.size() == 4 && pairs == 2 && std::all_of(partner.begin(), partner.end(), [](int p) { return p == 1; }))
        return VertexType::X;
    if (dirs.size() == 3 && pairs == 0) return VertexType::Y;
    if (dirs.size() == 3 && pairs == 1) return VertexType::T;
    return VertexType::other;
}

}  // namespace tessera
