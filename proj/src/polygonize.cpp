#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "tessera/division.hpp"

namespace tessera {

std::optional<std::array<Vec2, 2>> chord(const ConvexPolygon& p, const Line2& h) {
    const auto [lo, hi] = p.support_interval(h.normal);
    if (!(h.offset > lo && h.offset < hi)) return std::nullopt;
    const Vec2 dir = perp(h.normal);
    const Vec2 base = h.normal * h.offset;
    const auto [slo, shi] = p.support_interval(dir);
    const auto seg = clip_segment(p, base + dir * (slo - 1.0), base + dir * (shi + 1.0));
    if (!seg) return std::nullopt;
    return std::array<Vec2, 2>{seg->first, seg->second};
}

namespace {

/// Removes dangling spikes and straight-through vertices from a face walk.
std::vector<Vec2> simplify_walk(std::vector<int> ring, const std::vector<Vec2>& nodes, double tol) {
    bool changed = true;
    while (changed && ring.size() >= 3) {
        changed = false;
        const std::size_t n = ring.size();
        for (std::size_t i = 0; i < n; ++i) {
            const int a = ring[(i + n - 1) % n], b = ring[i], c = ring[(i + 1) % n];
            if (a == c || a == b) {
                // Spike a -> b -> a (or a repeated node): drop b and one copy of a.
                ring.erase(ring.begin() + static_cast<long>(i));
                if (a == c) ring.erase(ring.begin() + static_cast<long>(i % ring.size()));
                changed = true;
                break;
            }
            const Vec2 u = nodes[b] - nodes[a], v = nodes[c] - nodes[b];
            const Vec2 w = nodes[c] - nodes[a];
            if (dot(u, v) > 0.0 && std::fabs(cross(w, u)) <= tol * norm(w)) {
                ring.erase(ring.begin() + static_cast<long>(i));
                changed = true;
                break;
            }
        }
    }
    std::vector<Vec2> out;
    if (ring.size() < 3) return out;
    for (int id : ring) out.push_back(nodes[id]);
    return out;
}

}  // namespace

std::vector<ConvexPolygon> polygonize(const std::vector<std::array<Vec2, 2>>& segments, const ConvexPolygon& region) {
    const Box2 bb = region.bounds();
    const double diam = distance(bb.lo, bb.hi);
    const double tol = 1e-9 * diam;
    std::vector<std::array<Vec2, 2>> segs;
    for (const auto& s : segments) {
        if (distance(s[0], s[1]) <= tol) continue;
        const auto c = clip_segment(region, s[0], s[1]);
        if (c && distance(c->first, c->second) > tol) segs.push_back({c->first, c->second});
    }
    const std::size_t n_inner = segs.size();
    const auto& ring = region.ring();
    for (std::size_t i = 0; i < ring.size(); ++i) segs.push_back({ring[i], ring[(i + 1) % ring.size()]});

    // Node merging on a hash grid.
    std::vector<Vec2> nodes;
    std::unordered_map<std::uint64_t, std::vector<int>> grid;
    const double cell = 4.0 * tol;
    auto key = [&](long long x, long long y) { return (static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ULL) ^ static_cast<std::uint64_t>(y); };
    auto node_of = [&](const Vec2& p) {
        const long long gx = std::llround(std::floor(p[0] / cell)), gy = std::llround(std::floor(p[1] / cell));
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy) {
                auto it = grid.find(key(gx + dx, gy + dy));
                if (it == grid.end()) continue;
                for (int id : it->second)
                    if (distance(nodes[id], p) <= tol) return id;
            }
        const int id = static_cast<int>(nodes.size());
        nodes.push_back(p);
        grid[key(gx, gy)].push_back(id);
        return id;
    };

    // Split points along each segment.
    std::vector<std::vector<std::pair<double, Vec2>>> cuts(segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i) {
        cuts[i].push_back({0.0, segs[i][0]});
        cuts[i].push_back({1.0, segs[i][1]});
    }
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const Vec2 a = segs[i][0], d = segs[i][1] - segs[i][0];
        const double len2 = norm2(d), len = std::sqrt(len2);
        for (std::size_t j = 0; j < segs.size(); ++j) {
            if (i == j || (i >= n_inner && j >= n_inner)) continue;
            const Vec2 b = segs[j][0], e = segs[j][1] - segs[j][0];
            // Endpoints of j lying on i.
            for (const Vec2& q : segs[j]) {
                const double t = dot(q - a, d) / len2;
                if (t <= 0.0 || t >= 1.0) continue;
                if (std::fabs(cross(d, q - a)) / len <= tol) cuts[i].push_back({t, a + d * t});
            }
            // Proper crossings.
            const double den = cross(d, e);
            if (std::fabs(den) <= 1e-15 * len * norm(e)) continue;
            const double t = cross(b - a, e) / den;
            const double u = cross(b - a, d) / den;
            const double elen = norm(e);
            if (t * len > tol && (1.0 - t) * len > tol && u * elen > tol && (1.0 - u) * elen > tol)
                cuts[i].push_back({t, a + d * t});
        }
    }
    std::map<std::pair<int, int>, bool> edge_set;
    for (auto& c : cuts) {
        std::sort(c.begin(), c.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        int prev = -1;
        for (const auto& [t, p] : c) {
            const int id = node_of(p);
            if (prev >= 0 && prev != id) edge_set[{std::min(prev, id), std::max(prev, id)}] = true;
            prev = id;
        }
    }
    // Half-edge face tracing.
    std::vector<std::vector<int>> out(nodes.size());
    for (const auto& [e, unused] : edge_set) {
        out[e.first].push_back(e.second);
        out[e.second].push_back(e.first);
    }
    auto angle = [&](int from, int to) { const Vec2 d = nodes[to] - nodes[from]; return std::atan2(d[1], d[0]); };
    for (std::size_t v = 0; v < nodes.size(); ++v)
        std::sort(out[v].begin(), out[v].end(), [&](int a, int b) { return angle(v, a) < angle(v, b); });
    std::map<std::pair<int, int>, bool> used;
    std::vector<ConvexPolygon> cells;
    for (std::size_t s = 0; s < nodes.size(); ++s) {
        for (int t0 : out[s]) {
            if (used[{static_cast<int>(s), t0}]) continue;
            std::vector<int> walk;
            int u = static_cast<int>(s), v = t0;
            double area2 = 0.0;
            for (std::size_t guard = 0; guard < 4 * edge_set.size() + 8; ++guard) {
                used[{u, v}] = true;
                walk.push_back(u);
                area2 += cross(nodes[u], nodes[v]);
                // Next edge: first outgoing edge clockwise from the reverse edge.
                const auto& o = out[v];
                const auto it = std::find(o.begin(), o.end(), u);
                const std::size_t k = static_cast<std::size_t>(it - o.begin());
                const int w = o[(k + o.size() - 1) % o.size()];
                u = v;
                v = w;
                if (u == static_cast<int>(s) && v == t0) break;
            }
            if (area2 <= 0.0) continue;
            auto ring = simplify_walk(std::move(walk), nodes, tol);
            if (ring.size() < 3) continue;
            ConvexPolygon poly = ConvexPolygon::from_trusted_ring(std::move(ring));
            if (poly.area() > 1e-12 * region.area()) cells.push_back(std::move(poly));
        }
    }
    return cells;
}

}  // namespace tessera
