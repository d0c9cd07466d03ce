#include "tessera/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tessera/errors.hpp"

namespace tessera {

namespace {

double signed_area(const std::vector<Vec2>& r) {
    double s = 0.0;
    const std::size_t n = r.size();
    for (std::size_t i = 0; i < n; ++i) s += cross(r[i], r[(i + 1) % n]);
    return 0.5 * s;
}

double extent_of(const std::vector<Vec2>& r) {
    double e = 0.0;
    for (const auto& v : r) e = std::max({e, std::fabs(v[0]), std::fabs(v[1])});
    return e;
}

// Drop consecutive vertices closer than tol (including the wrap-around pair).
void dedupe_ring(std::vector<Vec2>& r, double tol) {
    if (r.empty()) return;
    std::vector<Vec2> out;
    out.reserve(r.size());
    for (const auto& v : r)
        if (out.empty() || distance(out.back(), v) > tol) out.push_back(v);
    while (out.size() > 1 && distance(out.front(), out.back()) <= tol) out.pop_back();
    r = std::move(out);
}

}  // namespace

ConvexPolygon::ConvexPolygon(std::vector<Vec2> ring, double tol) : ring_(std::move(ring)) {
    for (const auto& v : ring_)
        if (!all_finite(v)) throw ParameterError("polygon vertex is not finite");
    dedupe_ring(ring_, tol);
    if (ring_.size() < 3) throw ParameterError("polygon needs at least 3 distinct vertices");
    if (signed_area(ring_) < 0.0) std::reverse(ring_.begin(), ring_.end());
    if (!(signed_area(ring_) > 0.0)) throw ParameterError("polygon has empty interior");
    const std::size_t n = ring_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = ring_[i];
        const Vec2& b = ring_[(i + 1) % n];
        const Vec2 e = b - a;
        const double len = norm(e);
        for (std::size_t j = 0; j < n; ++j) {
            if (cross(e, ring_[j] - a) / len < -tol) throw ParameterError("polygon is not convex");
        }
    }
}

ConvexPolygon ConvexPolygon::box(const Vec2& lo, const Vec2& hi) {
    if (!(hi[0] > lo[0] && hi[1] > lo[1])) throw ParameterError("box must have positive extent");
    return from_trusted_ring({lo, {{hi[0], lo[1]}}, hi, {{lo[0], hi[1]}}});
}

ConvexPolygon ConvexPolygon::from_trusted_ring(std::vector<Vec2> ring) {
    ConvexPolygon p;
    p.ring_ = std::move(ring);
    return p;
}

double ConvexPolygon::area() const { return ring_.size() < 3 ? 0.0 : signed_area(ring_); }

double ConvexPolygon::perimeter() const {
    double s = 0.0;
    const std::size_t n = ring_.size();
    for (std::size_t i = 0; i < n; ++i) s += distance(ring_[i], ring_[(i + 1) % n]);
    return s;
}

Vec2 ConvexPolygon::centroid() const {
    // Fan from the first vertex for accuracy away from the origin.
    const Vec2 o = ring_[0];
    double a2 = 0.0;
    Vec2 acc{};
    for (std::size_t i = 1; i + 1 < ring_.size(); ++i) {
        const Vec2 p = ring_[i] - o, q = ring_[i + 1] - o;
        const double w = cross(p, q);
        a2 += w;
        acc += (p + q) * w;
    }
    return o + acc / (3.0 * a2);
}

Box2 ConvexPolygon::bounds() const {
    Box2 b{{{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()}},
           {{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()}}};
    for (const auto& v : ring_) {
        for (int i = 0; i < 2; ++i) {
            b.lo[i] = std::min(b.lo[i], v[i]);
            b.hi[i] = std::max(b.hi[i], v[i]);
        }
    }
    return b;
}

std::pair<double, double> ConvexPolygon::support_interval(const Vec2& u) const {
    double lo = std::numeric_limits<double>::max(), hi = std::numeric_limits<double>::lowest();
    for (const auto& v : ring_) {
        const double t = dot(v, u);
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    return {lo, hi};
}

double ConvexPolygon::width(const Vec2& u) const {
    const auto [lo, hi] = support_interval(u);
    return hi - lo;
}

bool ConvexPolygon::contains(const Vec2& p, double tol) const {
    const std::size_t n = ring_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = ring_[i];
        const Vec2 e = ring_[(i + 1) % n] - a;
        if (cross(e, p - a) < -tol * norm(e)) return false;
    }
    return true;
}

ConvexPolygon ConvexPolygon::translated(const Vec2& t) const {
    std::vector<Vec2> r = ring_;
    for (auto& v : r) v += t;
    return from_trusted_ring(std::move(r));
}

ConvexPolygon ConvexPolygon::scaled(double s) const {
    std::vector<Vec2> r = ring_;
    for (auto& v : r) v *= s;
    return from_trusted_ring(std::move(r));
}

double ConvexPolygon::roundness() const {
    const double p = perimeter();
    return 4.0 * M_PI * area() / (p * p);
}

PolygonMeasures measures(const ConvexPolygon& p) {
    return {p.area(), p.perimeter(), static_cast<int>(p.size())};
}

std::optional<ConvexPolygon> clip_halfspace(const ConvexPolygon& p, const Line2& h, Side side,
                                            double min_area) {
    const auto& r = p.ring();
    const std::size_t n = r.size();
    if (n < 3) return std::nullopt;
    const double sgn = side == Side::below ? 1.0 : -1.0;
    const double eps = 1e-12 * (1.0 + extent_of(r));
    std::vector<double> f(n);
    bool any_out = false, any_in = false;
    for (std::size_t i = 0; i < n; ++i) {
        double v = sgn * h.signed_distance(r[i]);
        if (std::fabs(v) <= eps) v = 0.0;
        f[i] = v;
        any_out |= v > 0.0;
        any_in |= v < 0.0;
    }
    if (!any_out) return p;
    if (!any_in) return std::nullopt;
    std::vector<Vec2> out;
    out.reserve(n + 2);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        if (f[i] <= 0.0) out.push_back(r[i]);
        if ((f[i] < 0.0 && f[j] > 0.0) || (f[i] > 0.0 && f[j] < 0.0)) {
            const double t = f[i] / (f[i] - f[j]);
            out.push_back(r[i] + (r[j] - r[i]) * t);
        }
    }
    dedupe_ring(out, eps);
    if (out.size() < 3) return std::nullopt;
    ConvexPolygon res = ConvexPolygon::from_trusted_ring(std::move(out));
    if (res.area() < min_area) return std::nullopt;
    return res;
}

std::optional<ConvexPolygon> intersect(const ConvexPolygon& a, const ConvexPolygon& b, double min_area) {
    std::optional<ConvexPolygon> cur = a;
    const auto& r = b.ring();
    const std::size_t n = r.size();
    for (std::size_t i = 0; i < n && cur; ++i) {
        const Vec2 e = r[(i + 1) % n] - r[i];
        // Interior of b is to the left of each edge: keep <x, -perp(e)> <= <r_i, -perp(e)>.
        const Vec2 outward{{e[1], -e[0]}};
        cur = clip_halfspace(*cur, Line2::from_unnormalized(outward, dot(r[i], outward)), Side::below, min_area);
    }
    return cur;
}

std::optional<std::pair<Vec2, Vec2>> clip_segment(const ConvexPolygon& p, const Vec2& a, const Vec2& b) {
    double t0 = 0.0, t1 = 1.0;
    const Vec2 d = b - a;
    const auto& r = p.ring();
    const std::size_t n = r.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e = r[(i + 1) % n] - r[i];
        const Vec2 outward{{e[1], -e[0]}};
        // Keep <x - r_i, outward> <= 0.
        const double num = dot(r[i] - a, outward);
        const double den = dot(d, outward);
        if (den == 0.0) {
            if (num < 0.0) return std::nullopt;
            continue;
        }
        const double t = num / den;
        if (den > 0.0)
            t1 = std::min(t1, t);
        else
            t0 = std::max(t0, t);
        if (t0 > t1) return std::nullopt;
    }
    return std::pair{a + d * t0, a + d * t1};
}

double chord_length(const ConvexPolygon& p, const Line2& h) {
    const auto [lo, hi] = p.support_interval(h.normal);
    if (h.offset <= lo || h.offset >= hi) return 0.0;
    const Vec2 dir = perp(h.normal);
    const Vec2 base = h.normal * h.offset;
    const auto [slo, shi] = p.support_interval(dir);
    const auto seg = clip_segment(p, base + dir * (slo - 1.0), base + dir * (shi + 1.0));
    return seg ? distance(seg->first, seg->second) : 0.0;
}

}  // namespace tessera
