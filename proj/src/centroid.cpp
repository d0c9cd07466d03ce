#include "tessera/centroid.hpp"

#include <algorithm>
#include <cmath>
#include <list>

#include "tessera/errors.hpp"

namespace tessera {

CentroidRule CentroidRule::parse(const std::string& name) {
    if (name == "gravity") return gravity();
    if (name == "circumball") return circumball();
    if (name == "extreme") return extreme({{0.0, 1.0, 0.0}});
    throw ParameterError("unknown centroid rule '" + name + "'");
}

namespace {

template <int D>
struct Ball {
    Vec<D> c{};
    double r2 = -1.0;
    bool contains(const Vec<D>& p) const { return norm2(p - c) <= r2 * (1.0 + 1e-12) + 1e-300; }
};

// Smallest ball with all support points on its boundary: centre in their affine hull.
template <int D>
Ball<D> ball_through(const std::vector<Vec<D>>& s) {
    Ball<D> b;
    if (s.empty()) return b;
    if (s.size() == 1) return {s[0], 0.0};
    const int k = static_cast<int>(s.size()) - 1;
    // Solve G lambda = rhs with G_ij = <q_i, q_j>, rhs_i = |q_i|^2 / 2, q_i = s_i - s_0.
    double g[3][4] = {};
    std::vector<Vec<D>> q(k);
    for (int i = 0; i < k; ++i) q[i] = s[i + 1] - s[0];
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) g[i][j] = dot(q[i], q[j]);
        g[i][k] = 0.5 * dot(q[i], q[i]);
    }
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (std::fabs(g[r][col]) > std::fabs(g[piv][col])) piv = r;
        for (int c = 0; c <= k; ++c) std::swap(g[col][c], g[piv][c]);
        if (std::fabs(g[col][col]) < 1e-300) return {s[0], -1.0};  // degenerate support
        for (int r = 0; r < k; ++r) {
            if (r == col) continue;
            const double m = g[r][col] / g[col][col];
            for (int c = col; c <= k; ++c) g[r][c] -= m * g[col][c];
        }
    }
    Vec<D> off{};
    for (int i = 0; i < k; ++i) off += q[i] * (g[i][k] / g[i][i]);
    return {s[0] + off, norm2(off)};
}

template <int D>
Ball<D> welzl(std::list<Vec<D>>& pts, typename std::list<Vec<D>>::iterator end, std::vector<Vec<D>>& support) {
    Ball<D> b = ball_through<D>(support);
    if (static_cast<int>(support.size()) == D + 1) return b;
    for (auto it = pts.begin(); it != end;) {
        auto cur = it++;
        if (b.r2 >= 0.0 && b.contains(*cur)) continue;
        support.push_back(*cur);
        b = welzl<D>(pts, cur, support);
        support.pop_back();
        // Move to front.
        pts.splice(pts.begin(), pts, cur);
    }
    return b;
}

}  // namespace

template <int D>
Vec<D> enclosing_ball_center(std::span<const Vec<D>> pts) {
    if (pts.empty()) throw ParameterError("enclosing ball of an empty point set");
    std::list<Vec<D>> l(pts.begin(), pts.end());
    std::vector<Vec<D>> support;
    return welzl<D>(l, l.end(), support).c;
}

template Vec2 enclosing_ball_center<2>(std::span<const Vec2>);
template Vec3 enclosing_ball_center<3>(std::span<const Vec3>);

template <int D>
Vec<D> centroid_of_face(std::span<const Vec<D>> verts, const CentroidRule& rule) {
    switch (rule.kind) {
        case CentroidRule::Kind::gravity_center: {
            if (verts.size() == 2) return (verts[0] + verts[1]) * 0.5;
            if constexpr (D == 3) return polygon_centroid_3d(std::vector<Vec3>(verts.begin(), verts.end()));
            else return ConvexPolygon::from_trusted_ring(std::vector<Vec2>(verts.begin(), verts.end())).centroid();
        }
        case CentroidRule::Kind::circumball_center:
            return enclosing_ball_center<D>(verts);
        case CentroidRule::Kind::extreme_point: {
            Vec<D> u{};
            for (int i = 0; i < D; ++i) u[i] = rule.direction[i];
            // Ties broken lexicographically so the choice commutes with translation.
            const Vec<D>* best = &verts[0];
            for (const auto& v : verts) {
                const double a = dot(v, u), b = dot(*best, u);
                if (a > b || (a == b && v.c > best->c)) best = &v;
            }
            return *best;
        }
    }
    return verts[0];
}

template Vec2 centroid_of_face<2>(std::span<const Vec2>, const CentroidRule&);
template Vec3 centroid_of_face<3>(std::span<const Vec3>, const CentroidRule&);

Vec2 centroid(const ConvexPolygon& p, const CentroidRule& rule) {
    if (rule.kind == CentroidRule::Kind::gravity_center) return p.centroid();
    return centroid_of_face<2>(std::span<const Vec2>(p.ring()), rule);
}

Vec3 centroid(const ConvexPolyhedron& p, const CentroidRule& rule) {
    if (rule.kind == CentroidRule::Kind::gravity_center) return p.centroid();
    return centroid_of_face<3>(std::span<const Vec3>(p.vertices()), rule);
}

}  // namespace tessera
