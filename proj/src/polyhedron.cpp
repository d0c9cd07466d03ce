#include "tessera/polyhedron.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "tessera/errors.hpp"

namespace tessera {

namespace {

double extent_of(const std::vector<Vec3>& vs) {
    double e = 0.0;
    for (const auto& v : vs) e = std::max({e, std::fabs(v[0]), std::fabs(v[1]), std::fabs(v[2])});
    return e;
}

// Newell normal, length = 2 * area.
Vec3 newell(const std::vector<Vec3>& vs, const std::vector<int>& loop) {
    Vec3 n{};
    const std::size_t m = loop.size();
    const Vec3 o = vs[loop[0]];
    for (std::size_t i = 0; i < m; ++i) n += cross(vs[loop[i]] - o, vs[loop[(i + 1) % m]] - o);
    return n;
}

}  // namespace

ConvexPolyhedron::ConvexPolyhedron(std::vector<Vec3> vertices, std::vector<std::vector<int>> facets)
    : vertices_(std::move(vertices)), facets_(std::move(facets)) {}

ConvexPolyhedron ConvexPolyhedron::box(const Vec3& lo, const Vec3& hi) {
    if (!(hi[0] > lo[0] && hi[1] > lo[1] && hi[2] > lo[2])) throw ParameterError("box must have positive extent");
    std::vector<Vec3> v;
    for (int k = 0; k < 8; ++k)
        v.push_back({{(k & 1) ? hi[0] : lo[0], (k & 2) ? hi[1] : lo[1], (k & 4) ? hi[2] : lo[2]}});
    // Outward CCW loops.
    std::vector<std::vector<int>> f = {
        {0, 2, 3, 1},  // z = lo
        {4, 5, 7, 6},  // z = hi
        {0, 1, 5, 4},  // y = lo
        {2, 6, 7, 3},  // y = hi
        {0, 4, 6, 2},  // x = lo
        {1, 3, 7, 5},  // x = hi
    };
    return ConvexPolyhedron(std::move(v), std::move(f));
}

double ConvexPolyhedron::volume() const {
    if (vertices_.empty()) return 0.0;
    const Vec3 o = vertices_[0];
    double s = 0.0;
    for (const auto& f : facets_) {
        const Vec3 a = vertices_[f[0]] - o;
        for (std::size_t i = 1; i + 1 < f.size(); ++i)
            s += dot(a, cross(vertices_[f[i]] - o, vertices_[f[i + 1]] - o));
    }
    return s / 6.0;
}

double ConvexPolyhedron::surface_area() const {
    double s = 0.0;
    for (std::size_t f = 0; f < facets_.size(); ++f) s += facet_area(f);
    return s;
}

Vec3 ConvexPolyhedron::centroid() const {
    const Vec3 o = vertices_[0];
    double vol = 0.0;
    Vec3 acc{};
    for (const auto& f : facets_) {
        const Vec3 a = vertices_[f[0]] - o;
        for (std::size_t i = 1; i + 1 < f.size(); ++i) {
            const Vec3 b = vertices_[f[i]] - o, c = vertices_[f[i + 1]] - o;
            const double w = dot(a, cross(b, c));
            vol += w;
            acc += (a + b + c) * w;
        }
    }
    return o + acc / (4.0 * vol);
}

Box3 ConvexPolyhedron::bounds() const {
    Box3 b{{{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
             std::numeric_limits<double>::max()}},
           {{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(),
             std::numeric_limits<double>::lowest()}}};
    for (const auto& v : vertices_)
        for (int i = 0; i < 3; ++i) {
            b.lo[i] = std::min(b.lo[i], v[i]);
            b.hi[i] = std::max(b.hi[i], v[i]);
        }
    return b;
}

std::pair<double, double> ConvexPolyhedron::support_interval(const Vec3& u) const {
    double lo = std::numeric_limits<double>::max(), hi = std::numeric_limits<double>::lowest();
    for (const auto& v : vertices_) {
        const double t = dot(v, u);
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    return {lo, hi};
}

double ConvexPolyhedron::width(const Vec3& u) const {
    const auto [lo, hi] = support_interval(u);
    return hi - lo;
}

std::vector<std::pair<int, int>> ConvexPolyhedron::edges() const {
    std::vector<std::pair<int, int>> e;
    for (const auto& f : facets_)
        for (std::size_t i = 0; i < f.size(); ++i) {
            int a = f[i], b = f[(i + 1) % f.size()];
            if (a > b) std::swap(a, b);
            e.emplace_back(a, b);
        }
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
}

double ConvexPolyhedron::total_edge_length() const {
    double s = 0.0;
    for (const auto& [a, b] : edges()) s += distance(vertices_[a], vertices_[b]);
    return s;
}

Vec3 ConvexPolyhedron::facet_normal(std::size_t f) const { return normalized(newell(vertices_, facets_[f])); }

double ConvexPolyhedron::facet_area(std::size_t f) const { return 0.5 * norm(newell(vertices_, facets_[f])); }

double ConvexPolyhedron::mean_width() const {
    // Map each directed edge to its facet; the opposite direction belongs to the neighbor.
    std::map<std::pair<int, int>, std::size_t> owner;
    for (std::size_t f = 0; f < facets_.size(); ++f) {
        const auto& loop = facets_[f];
        for (std::size_t i = 0; i < loop.size(); ++i) owner[{loop[i], loop[(i + 1) % loop.size()]}] = f;
    }
    double s = 0.0;
    for (const auto& [key, f] : owner) {
        if (key.first > key.second) continue;
        const auto it = owner.find({key.second, key.first});
        if (it == owner.end()) continue;
        const Vec3 n1 = facet_normal(f), n2 = facet_normal(it->second);
        // Exterior angle between outward normals equals pi - interior dihedral angle.
        const double ext = std::acos(std::clamp(dot(n1, n2), -1.0, 1.0));
        s += distance(vertices_[key.first], vertices_[key.second]) * ext;
    }
    return s / (4.0 * M_PI);
}

bool ConvexPolyhedron::contains(const Vec3& p, double tol) const {
    for (std::size_t f = 0; f < facets_.size(); ++f) {
        const Vec3 n = facet_normal(f);
        if (dot(p - vertices_[facets_[f][0]], n) > tol) return false;
    }
    return true;
}

ConvexPolyhedron ConvexPolyhedron::translated(const Vec3& t) const {
    auto v = vertices_;
    for (auto& x : v) x += t;
    return ConvexPolyhedron(std::move(v), facets_);
}

double ConvexPolyhedron::max_distance_from(const Vec3& p) const {
    double m = 0.0;
    for (const auto& v : vertices_) m = std::max(m, norm2(v - p));
    return std::sqrt(m);
}

void ConvexPolyhedron::validate(double tol) const {
    if (vertices_.size() < 4 || facets_.size() < 4) throw ParameterError("polyhedron needs >= 4 vertices and facets");
    for (std::size_t f = 0; f < facets_.size(); ++f) {
        if (facets_[f].size() < 3) throw ParameterError("facet with fewer than 3 vertices");
        const Vec3 n = facet_normal(f);
        const Vec3 o = vertices_[facets_[f][0]];
        for (const auto& v : vertices_)
            if (dot(v - o, n) > tol) throw ParameterError("polyhedron is not convex or facet orientation is wrong");
    }
    if (!(volume() > 0.0)) throw ParameterError("polyhedron has empty interior");
}

PolyhedronMeasures measures(const ConvexPolyhedron& p) {
    return {p.volume(), p.surface_area(), static_cast<int>(p.vertices().size())};
}

std::optional<ConvexPolyhedron> clip_halfspace(const ConvexPolyhedron& p, const Plane3& h, Side side,
                                               double min_volume) {
    const auto& vs = p.vertices();
    const std::size_t n = vs.size();
    if (n == 0) return std::nullopt;
    const double sgn = side == Side::below ? 1.0 : -1.0;
    const double eps = 1e-12 * (1.0 + extent_of(vs));
    std::vector<double> f(n);
    bool any_out = false, any_in = false;
    for (std::size_t i = 0; i < n; ++i) {
        double v = sgn * h.signed_distance(vs[i]);
        if (std::fabs(v) <= eps) v = 0.0;
        f[i] = v;
        any_out |= v > 0.0;
        any_in |= v < 0.0;
    }
    if (!any_out) return p;
    if (!any_in) return std::nullopt;

    std::vector<Vec3> out_v;
    std::vector<int> remap(n, -1);
    for (std::size_t i = 0; i < n; ++i)
        if (f[i] <= 0.0) {
            remap[i] = static_cast<int>(out_v.size());
            out_v.push_back(vs[i]);
        }
    std::map<std::pair<int, int>, int> cut_vertex;
    auto crossing = [&](int a, int b) {
        const auto key = std::minmax(a, b);
        auto it = cut_vertex.find(key);
        if (it != cut_vertex.end()) return it->second;
        const double t = f[a] / (f[a] - f[b]);
        const int id = static_cast<int>(out_v.size());
        out_v.push_back(vs[a] + (vs[b] - vs[a]) * t);
        cut_vertex.emplace(key, id);
        return id;
    };

    std::vector<std::vector<int>> out_f;
    std::vector<char> on_plane;  // per output vertex
    for (const auto& loop : p.facets()) {
        std::vector<int> nl;
        const std::size_t m = loop.size();
        for (std::size_t i = 0; i < m; ++i) {
            const int a = loop[i], b = loop[(i + 1) % m];
            if (f[a] <= 0.0) nl.push_back(remap[a]);
            if ((f[a] < 0.0 && f[b] > 0.0) || (f[a] > 0.0 && f[b] < 0.0)) nl.push_back(crossing(a, b));
        }
        if (nl.size() >= 3) out_f.push_back(std::move(nl));
    }

    // Cap: every kept vertex on the plane plus all crossing vertices.
    on_plane.assign(out_v.size(), 0);
    for (std::size_t i = 0; i < n; ++i)
        if (f[i] == 0.0) on_plane[remap[i]] = 1;
    for (const auto& [key, id] : cut_vertex) on_plane[id] = 1;
    std::vector<int> cap;
    for (std::size_t i = 0; i < out_v.size(); ++i)
        if (on_plane[i]) cap.push_back(static_cast<int>(i));
    if (cap.size() >= 3) {
        const Vec3 nrm = h.normal * sgn;  // outward normal of the kept part
        Vec3 c{};
        for (int id : cap) c += out_v[id];
        c = c / static_cast<double>(cap.size());
        Vec3 e1 = std::fabs(nrm[0]) < 0.9 ? cross(nrm, Vec3{{1, 0, 0}}) : cross(nrm, Vec3{{0, 1, 0}});
        e1 = normalized(e1);
        const Vec3 e2 = cross(nrm, e1);
        std::vector<std::pair<double, int>> ang;
        for (int id : cap) {
            const Vec3 d = out_v[id] - c;
            ang.emplace_back(std::atan2(dot(d, e2), dot(d, e1)), id);
        }
        std::sort(ang.begin(), ang.end());
        std::vector<int> loop;
        for (const auto& [a, id] : ang)
            if (loop.empty() || distance(out_v[loop.back()], out_v[id]) > eps) loop.push_back(id);
        if (loop.size() >= 3 && distance(out_v[loop.front()], out_v[loop.back()]) <= eps) loop.pop_back();
        if (loop.size() >= 3) out_f.push_back(std::move(loop));
    }
    if (out_f.size() < 4) return std::nullopt;
    ConvexPolyhedron res(std::move(out_v), std::move(out_f));
    if (res.volume() < min_volume) return std::nullopt;
    return res;
}

double polygon_area_3d(const std::vector<Vec3>& loop) {
    if (loop.size() < 3) return 0.0;
    Vec3 n{};
    for (std::size_t i = 1; i + 1 < loop.size(); ++i) n += cross(loop[i] - loop[0], loop[i + 1] - loop[0]);
    return 0.5 * norm(n);
}

Vec3 polygon_centroid_3d(const std::vector<Vec3>& loop) {
    const Vec3 o = loop[0];
    Vec3 acc{};
    double total = 0.0;
    Vec3 ref{};
    for (std::size_t i = 1; i + 1 < loop.size(); ++i) ref += cross(loop[i] - o, loop[i + 1] - o);
    const Vec3 nrm = normalized(ref);
    for (std::size_t i = 1; i + 1 < loop.size(); ++i) {
        const Vec3 b = loop[i] - o, c = loop[i + 1] - o;
        const double w = dot(cross(b, c), nrm);
        total += w;
        acc += (b + c) * w;
    }
    return o + acc / (3.0 * total);
}

std::vector<Vec3> clip_polygon_3d(std::vector<Vec3> loop, const ConvexPolyhedron& region) {
    for (std::size_t fi = 0; fi < region.facets().size() && loop.size() >= 3; ++fi) {
        const Vec3 n = region.facet_normal(fi);
        const double c = dot(region.vertices()[region.facets()[fi][0]], n);
        std::vector<Vec3> out;
        const std::size_t m = loop.size();
        for (std::size_t i = 0; i < m; ++i) {
            const Vec3& a = loop[i];
            const Vec3& b = loop[(i + 1) % m];
            const double fa = dot(a, n) - c, fb = dot(b, n) - c;
            if (fa <= 0.0) out.push_back(a);
            if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) out.push_back(a + (b - a) * (fa / (fa - fb)));
        }
        loop = std::move(out);
    }
    if (loop.size() < 3) loop.clear();
    return loop;
}

std::optional<std::pair<Vec3, Vec3>> clip_segment(const Box3& box, const Vec3& a, const Vec3& b) {
    double t0 = 0.0, t1 = 1.0;
    const Vec3 d = b - a;
    for (int i = 0; i < 3; ++i) {
        if (d[i] == 0.0) {
            if (a[i] < box.lo[i] || a[i] > box.hi[i]) return std::nullopt;
            continue;
        }
        double ta = (box.lo[i] - a[i]) / d[i], tb = (box.hi[i] - a[i]) / d[i];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return std::nullopt;
    }
    return std::pair{a + d * t0, a + d * t1};
}

}  // namespace tessera
