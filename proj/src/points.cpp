#include "tessera/points.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "tessera/errors.hpp"

namespace tessera {

MarkDistribution MarkDistribution::constant(double v) {
    MarkDistribution d{Kind::constant, v, v};
    d.validate();
    return d;
}
MarkDistribution MarkDistribution::uniform(double lo, double hi) {
    MarkDistribution d{Kind::uniform, lo, hi};
    d.validate();
    return d;
}
MarkDistribution MarkDistribution::lognormal(double mu, double sigma) {
    MarkDistribution d{Kind::lognormal, mu, sigma};
    d.validate();
    return d;
}
MarkDistribution MarkDistribution::gamma(double shape, double scale) {
    MarkDistribution d{Kind::gamma, shape, scale};
    d.validate();
    return d;
}

void MarkDistribution::validate() const {
    if (!std::isfinite(a) || !std::isfinite(b)) throw ParameterError("mark parameters must be finite");
    switch (kind) {
        case Kind::constant: break;
        case Kind::uniform:
            if (a > b) throw ParameterError("uniform marks need a <= b");
            break;
        case Kind::lognormal:
            if (!(b > 0.0)) throw ParameterError("lognormal marks need sigma > 0");
            break;
        case Kind::gamma:
            if (!(a > 0.0) || !(b > 0.0)) throw ParameterError("gamma marks need k, theta > 0");
            break;
    }
}

double MarkDistribution::sample(Rng& rng) const {
    switch (kind) {
        case Kind::constant: return a;
        case Kind::uniform: return rng.uniform(a, b);
        case Kind::lognormal: return rng.lognormal(a, b);
        case Kind::gamma: return rng.gamma(a, b);
    }
    return a;
}

double MarkDistribution::mean() const {
    switch (kind) {
        case Kind::constant: return a;
        case Kind::uniform: return 0.5 * (a + b);
        case Kind::lognormal: return std::exp(a + 0.5 * b * b);
        case Kind::gamma: return a * b;
    }
    return a;
}

double MarkDistribution::variance() const {
    switch (kind) {
        case Kind::constant: return 0.0;
        case Kind::uniform: return (b - a) * (b - a) / 12.0;
        case Kind::lognormal: return (std::exp(b * b) - 1.0) * std::exp(2.0 * a + b * b);
        case Kind::gamma: return a * b * b;
    }
    return 0.0;
}

double MarkDistribution::pdf(double x) const {
    switch (kind) {
        case Kind::constant: throw ParameterError("constant mark law has no density");
        case Kind::uniform:
            if (b == a) throw ParameterError("degenerate uniform mark law has no density");
            return (x >= a && x <= b) ? 1.0 / (b - a) : 0.0;
        case Kind::lognormal: {
            if (x <= 0.0) return 0.0;
            const double z = (std::log(x) - a) / b;
            return std::exp(-0.5 * z * z) / (x * b * std::sqrt(2.0 * M_PI));
        }
        case Kind::gamma:
            if (x < 0.0) return 0.0;
            if (x == 0.0) return a < 1.0 ? INFINITY : (a == 1.0 ? 1.0 / b : 0.0);
            return std::exp((a - 1.0) * std::log(x) - x / b - std::lgamma(a) - a * std::log(b));
    }
    return 0.0;
}

std::pair<double, double> MarkDistribution::support() const {
    switch (kind) {
        case Kind::constant: return {a, a};
        case Kind::uniform: return {a, b};
        case Kind::lognormal:
        case Kind::gamma: return {0.0, INFINITY};
    }
    return {a, b};
}

std::string MarkDistribution::name() const {
    switch (kind) {
        case Kind::constant: return "constant";
        case Kind::uniform: return "uniform";
        case Kind::lognormal: return "lognormal";
        case Kind::gamma: return "gamma";
    }
    return "constant";
}

template <int D>
double min_eigenvalue(const Matrix<D>& m) {
    Eigen::Matrix<double, D, D> a;
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) a(i, j) = m[i * D + j];
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, D, D>> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

template <int D>
void PointPattern<D>::validate() const {
    const std::size_t n = points.size();
    auto check = [n](std::size_t len, const char* what) {
        if (len != 0 && len != n) throw ParameterError(std::string(what) + " marks do not match the point count");
    };
    check(radii.size(), "radius");
    check(weights.size(), "weight");
    check(times.size(), "time");
    check(matrices.size(), "matrix");
    for (const auto& p : points)
        if (!all_finite(p)) throw ParameterError("point coordinates must be finite");
    for (double r : radii)
        if (!(r >= 0.0)) throw ParameterError("radii must be >= 0");
    for (const auto& m : matrices) {
        for (int i = 0; i < D; ++i)
            for (int j = 0; j < D; ++j)
                if (std::fabs(m[i * D + j] - m[j * D + i]) > 1e-12 * (1.0 + std::fabs(m[i * D + j])))
                    throw ParameterError("matrix marks must be symmetric");
        if (!(min_eigenvalue<D>(m) > 0.0)) throw ParameterError("matrix marks must be positive definite");
    }
}

namespace {

template <int D>
Vec<D> uniform_in_box(Rng& rng, const Vec<D>& lo, const Vec<D>& hi) {
    Vec<D> p;
    for (int i = 0; i < D; ++i) p[i] = rng.uniform(lo[i], hi[i]);
    return p;
}

template <int D>
Vec<D> uniform_in_ball(Rng& rng, double r) {
    for (;;) {
        Vec<D> p;
        for (int i = 0; i < D; ++i) p[i] = rng.uniform(-1.0, 1.0);
        if (norm2(p) <= 1.0) return p * r;
    }
}

template <int D>
void guard_count(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) throw ParameterError("intensity must be finite and >= 0");
    if (mean > 1e8) throw ParameterError("expected point count exceeds 1e8");
}

}  // namespace

template <int D>
PointPattern<D> sample_poisson(const Window<D>& w, double lambda, const Seed& seed) {
    w.validate();
    if (!(lambda >= 0.0)) throw ParameterError("intensity must be >= 0");
    const double mean = lambda * w.sim_content();
    guard_count<D>(mean);
    Rng rng(seed);
    const auto n = rng.poisson(mean);
    PointPattern<D> p;
    p.window = w;
    p.points.reserve(n);
    const Vec<D> lo = w.sim_lo(), hi = w.sim_hi();
    for (std::uint64_t i = 0; i < n; ++i) p.points.push_back(uniform_in_box<D>(rng, lo, hi));
    return p;
}

template <int D>
PointPattern<D> sample_binomial(const Window<D>& w, std::size_t n, const Seed& seed) {
    w.validate();
    guard_count<D>(static_cast<double>(n));
    Rng rng(seed);
    PointPattern<D> p;
    p.window = w;
    const Vec<D> lo = w.sim_lo(), hi = w.sim_hi();
    for (std::size_t i = 0; i < n; ++i) p.points.push_back(uniform_in_box<D>(rng, lo, hi));
    return p;
}

template <int D>
PointPattern<D> sample_poisson_thinned(const Window<D>& w, double lambda_max,
                                       const std::function<double(const Vec<D>&)>& intensity, const Seed& seed) {
    PointPattern<D> base = sample_poisson<D>(w, lambda_max, seed.derive("candidates"));
    Rng rng(seed.derive("thinning"));
    PointPattern<D> out;
    out.window = w;
    for (const auto& x : base.points) {
        const double f = intensity(x);
        if (f < 0.0 || f > lambda_max * (1.0 + 1e-12))
            throw ParameterError("intensity function must lie in [0, lambda_max]");
        if (rng.uniform() * lambda_max < f) out.points.push_back(x);
    }
    return out;
}

template <int D>
PointPattern<D> sample_matern_cluster(const Window<D>& w, double lambda_parent, double mean_offspring,
                                      double cluster_radius, const Seed& seed) {
    w.validate();
    if (!(lambda_parent >= 0.0) || !(mean_offspring >= 0.0) || !(cluster_radius >= 0.0))
        throw ParameterError("cluster parameters must be >= 0");
    Window<D> parents_w = w;
    parents_w.mode = EdgeMode::none;
    parents_w.lo = w.sim_lo();
    parents_w.hi = w.sim_hi();
    for (int i = 0; i < D; ++i) {
        parents_w.lo[i] -= cluster_radius;
        parents_w.hi[i] += cluster_radius;
    }
    guard_count<D>(lambda_parent * parents_w.content() * mean_offspring);
    const PointPattern<D> parents = sample_poisson<D>(parents_w, lambda_parent, seed.derive("parents"));
    Rng rng(seed.derive("offspring"));
    PointPattern<D> p;
    p.window = w;
    const Vec<D> lo = w.sim_lo(), hi = w.sim_hi();
    for (const auto& c : parents.points) {
        const auto k = rng.poisson(mean_offspring);
        for (std::uint64_t j = 0; j < k; ++j) {
            const Vec<D> x = c + uniform_in_ball<D>(rng, cluster_radius);
            bool inside = true;
            for (int i = 0; i < D; ++i) inside = inside && x[i] >= lo[i] && x[i] <= hi[i];
            if (inside) p.points.push_back(x);
        }
    }
    return p;
}

template <int D>
PointPattern<D> sample_ssi(const Window<D>& w, std::size_t target_n, double hardcore_r, std::size_t max_attempts,
                           const Seed& seed) {
    w.validate();
    if (!(hardcore_r >= 0.0)) throw ParameterError("hardcore radius must be >= 0");
    guard_count<D>(static_cast<double>(target_n));
    Rng rng(seed);
    PointPattern<D> p;
    p.window = w;
    const Vec<D> lo = w.sim_lo(), hi = w.sim_hi();
    const double cell = hardcore_r > 0.0 ? hardcore_r : 1.0;
    std::unordered_map<std::uint64_t, std::vector<int>> grid;
    auto key_of = [&](const std::array<long long, D>& k) {
        std::uint64_t h = 0;
        for (int i = 0; i < D; ++i) h = splitmix64(h ^ static_cast<std::uint64_t>(k[i]));
        return h;
    };
    auto index_of = [&](const Vec<D>& x) {
        std::array<long long, D> k;
        for (int i = 0; i < D; ++i) k[i] = static_cast<long long>(std::floor((x[i] - lo[i]) / cell));
        return k;
    };
    std::size_t attempts = 0;
    while (p.points.size() < target_n && attempts < max_attempts) {
        ++attempts;
        const Vec<D> x = uniform_in_box<D>(rng, lo, hi);
        bool ok = true;
        if (hardcore_r > 0.0) {
            const auto k = index_of(x);
            std::array<long long, D> off{};
            for (int i = 0; i < D; ++i) off[i] = -1;
            for (bool more = true; more && ok;) {
                std::array<long long, D> q;
                for (int i = 0; i < D; ++i) q[i] = k[i] + off[i];
                if (auto it = grid.find(key_of(q)); it != grid.end())
                    for (int j : it->second)
                        if (distance(p.points[j], x) < hardcore_r) ok = false;
                int i = 0;
                while (i < D && off[i] == 1) off[i++] = -1;
                if (i == D) more = false;
                else ++off[i];
            }
        }
        if (!ok) continue;
        if (hardcore_r > 0.0) grid[key_of(index_of(x))].push_back(static_cast<int>(p.points.size()));
        p.points.push_back(x);
    }
    p.saturated = p.points.size() < target_n;
    return p;
}

template <int D>
PointPattern<D> attach_marks(PointPattern<D> p, const MarkDistribution& dist, const Seed& seed, MarkTarget target) {
    dist.validate();
    Rng rng(seed);
    std::vector<double> marks(p.size());
    for (auto& m : marks) m = dist.sample(rng);
    switch (target) {
        case MarkTarget::radius:
            for (double m : marks)
                if (m < 0.0) throw ParameterError("radius marks must be >= 0");
            p.radii = std::move(marks);
            break;
        case MarkTarget::weight: p.weights = std::move(marks); break;
        case MarkTarget::time: p.times = std::move(marks); break;
    }
    return p;
}

PointPattern2 attach_ellipse_marks(PointPattern2 p, std::pair<double, double> major, std::pair<double, double> minor,
                                   const Seed& seed) {
    if (!(major.first > 0.0) || major.first > major.second || !(minor.first > 0.0) || minor.first > minor.second)
        throw ParameterError("ellipse semi-axis ranges must be positive intervals");
    Rng rng(seed);
    p.matrices.resize(p.size());
    for (auto& m : p.matrices) {
        const double a = rng.uniform(major.first, major.second);
        const double b = rng.uniform(minor.first, minor.second);
        const double t = rng.uniform(0.0, M_PI);
        const double c = std::cos(t), s = std::sin(t);
        const double la = 1.0 / (a * a), lb = 1.0 / (b * b);
        m = {c * c * la + s * s * lb, c * s * (la - lb), c * s * (la - lb), s * s * la + c * c * lb};
    }
    return p;
}

EllipseAxes decompose_ellipse(const Matrix<2>& m) {
    Eigen::Matrix2d a;
    a << m[0], m[1], m[2], m[3];
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(a);
    const auto& ev = es.eigenvalues();  // ascending
    if (!(ev(0) > 0.0)) throw ParameterError("matrix is not positive definite");
    EllipseAxes e;
    e.a = 1.0 / std::sqrt(ev(0));
    e.b = 1.0 / std::sqrt(ev(1));
    const Eigen::Vector2d u = es.eigenvectors().col(0);
    e.angle = std::atan2(u(1), u(0));
    if (e.angle < 0.0) e.angle += M_PI;
    if (e.angle >= M_PI) e.angle -= M_PI;
    return e;
}

template <int D>
double default_margin(double lambda) {
    if (!(lambda > 0.0)) throw ParameterError("intensity must be > 0");
    return D == 2 ? 3.0 / std::sqrt(lambda) : 3.0 * std::cbrt(1.0 / lambda);
}

template <int D>
PointPattern<D> periodic_tiling(const PointPattern<D>& p) {
    PointPattern<D> out;
    out.window = p.window;
    const Vec<D> size = p.window.size();
    std::vector<std::array<int, D>> shifts;
    shifts.push_back({});
    std::array<int, D> s;
    for (int i = 0; i < D; ++i) s[i] = -1;
    for (;;) {
        bool zero = true;
        for (int i = 0; i < D; ++i) zero = zero && s[i] == 0;
        if (!zero) shifts.push_back(s);
        int i = 0;
        while (i < D && s[i] == 1) s[i++] = -1;
        if (i == D) break;
        ++s[i];
    }
    const std::size_t n = p.size();
    for (const auto& sh : shifts) {
        for (std::size_t k = 0; k < n; ++k) {
            Vec<D> x = p.points[k];
            for (int i = 0; i < D; ++i) x[i] += sh[i] * size[i];
            out.points.push_back(x);
            if (!p.radii.empty()) out.radii.push_back(p.radii[k]);
            if (!p.weights.empty()) out.weights.push_back(p.weights[k]);
            if (!p.times.empty()) out.times.push_back(p.times[k]);
            if (!p.matrices.empty()) out.matrices.push_back(p.matrices[k]);
        }
    }
    return out;
}

#define TESSERA_INSTANTIATE(D)                                                                                    \
    template struct PointPattern<D>;                                                                              \
    template double min_eigenvalue<D>(const Matrix<D>&);                                                          \
    template PointPattern<D> sample_poisson<D>(const Window<D>&, double, const Seed&);                            \
    template PointPattern<D> sample_binomial<D>(const Window<D>&, std::size_t, const Seed&);                      \
    template PointPattern<D> sample_poisson_thinned<D>(const Window<D>&, double,                                  \
                                                       const std::function<double(const Vec<D>&)>&, const Seed&); \
    template PointPattern<D> sample_matern_cluster<D>(const Window<D>&, double, double, double, const Seed&);     \
    template PointPattern<D> sample_ssi<D>(const Window<D>&, std::size_t, double, std::size_t, const Seed&);      \
    template PointPattern<D> attach_marks<D>(PointPattern<D>, const MarkDistribution&, const Seed&, MarkTarget);  \
    template double default_margin<D>(double);                                                                    \
    template PointPattern<D> periodic_tiling<D>(const PointPattern<D>&);

TESSERA_INSTANTIATE(2)
TESSERA_INSTANTIATE(3)

}  // namespace tessera
