#include "tessera/tessellation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "tessera/errors.hpp"
#include "tessera/rng.hpp"

namespace tessera {

double Tessellation2::total_area() const {
    double s = 0.0;
    for (const auto& c : cells) s += c.polygon.area();
    return s;
}

double Tessellation3::total_volume() const {
    double s = 0.0;
    for (const auto& c : cells) s += c.polyhedron.volume();
    return s;
}

namespace {

/// Tolerance-based point identification on a hash grid, optionally periodic.
template <int D>
class VertexMerger {
public:
    VertexMerger(const Vec<D>& lo, const Vec<D>& size, double tol, bool periodic)
        : lo_(lo), size_(size), tol_(tol), periodic_(periodic) {
        for (int i = 0; i < D; ++i) {
            h_[i] = 4.0 * tol;
            nb_[i] = 0;
            if (periodic) {
                nb_[i] = std::max<long long>(1, static_cast<long long>(std::floor(size[i] / h_[i])));
                h_[i] = size[i] / static_cast<double>(nb_[i]);
            }
        }
    }

    int insert(const Vec<D>& p) {
        const auto k = bucket(p);
        int found = -1;
        visit(k, [&](int id) {
            if (found < 0 && dist(points_[id], p) <= tol_) found = id;
        });
        if (found >= 0) return found;
        const int id = static_cast<int>(points_.size());
        points_.push_back(p);
        grid_[hash(k)].push_back(id);
        return id;
    }

    std::vector<Vec<D>>& points() { return points_; }

private:
    std::array<long long, D> bucket(const Vec<D>& p) const {
        std::array<long long, D> k;
        for (int i = 0; i < D; ++i) {
            k[i] = static_cast<long long>(std::floor((p[i] - lo_[i]) / h_[i]));
            if (periodic_) k[i] = ((k[i] % nb_[i]) + nb_[i]) % nb_[i];
        }
        return k;
    }
    std::uint64_t hash(const std::array<long long, D>& k) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (int i = 0; i < D; ++i) h = splitmix64(h ^ static_cast<std::uint64_t>(k[i]));
        return h;
    }
    template <class F>
    void visit(const std::array<long long, D>& k, F&& f) const {
        std::array<int, D> off;
        off.fill(-1);
        for (;;) {
            std::array<long long, D> q;
            for (int i = 0; i < D; ++i) {
                q[i] = k[i] + off[i];
                if (periodic_) q[i] = ((q[i] % nb_[i]) + nb_[i]) % nb_[i];
            }
            if (auto it = grid_.find(hash(q)); it != grid_.end())
                for (int id : it->second) f(id);
            int i = 0;
            while (i < D && off[i] == 1) off[i++] = -1;
            if (i == D) break;
            ++off[i];
        }
    }
    double dist(const Vec<D>& a, const Vec<D>& b) const {
        Vec<D> d = a - b;
        if (periodic_)
            for (int i = 0; i < D; ++i) d[i] -= std::round(d[i] / size_[i]) * size_[i];
        return norm(d);
    }

    Vec<D> lo_, size_;
    std::array<double, D> h_{};
    std::array<long long, D> nb_{};
    double tol_;
    bool periodic_;
    std::vector<Vec<D>> points_;
    std::unordered_map<std::uint64_t, std::vector<int>> grid_;
};

template <int D>
std::array<int, D> shift_of(const Vec<D>& raw, const Vec<D>& wrapped, const Vec<D>& size) {
    std::array<int, D> s;
    for (int i = 0; i < D; ++i) s[i] = static_cast<int>(std::lround((raw[i] - wrapped[i]) / size[i]));
    return s;
}

template <int D>
std::array<int, D> sub(const std::array<int, D>& a, const std::array<int, D>& b) {
    std::array<int, D> r;
    for (int i = 0; i < D; ++i) r[i] = a[i] - b[i];
    return r;
}

template <int D>
std::array<int, D> neg(std::array<int, D> a) {
    for (auto& x : a) x = -x;
    return a;
}

template <int D>
bool positive(const std::array<int, D>& a) {
    for (int x : a) {
        if (x > 0) return true;
        if (x < 0) return false;
    }
    return false;
}

bool on_polygon_boundary(const ConvexPolygon& dom, const Vec2& p, double tol) {
    const auto& r = dom.ring();
    for (std::size_t i = 0; i < r.size(); ++i) {
        const Vec2 a = r[i], b = r[(i + 1) % r.size()];
        const Vec2 d = b - a;
        const double len = norm(d);
        if (std::fabs(cross(d, p - a)) / len <= tol) return true;
    }
    return false;
}

bool on_box_boundary(const Box3& b, const Vec3& p, double tol) {
    for (int i = 0; i < 3; ++i)
        if (std::fabs(p[i] - b.lo[i]) <= tol || std::fabs(p[i] - b.hi[i]) <= tol) return true;
    return false;
}

}  // namespace

void build_lattice(Tessellation2& t, double tol) {
    const bool periodic = t.window.mode == EdgeMode::periodic;
    const ConvexPolygon dom = t.domain();
    const Box2 db = dom.bounds();
    const Vec2 lo = periodic ? t.window.lo : db.lo;
    const Vec2 size = periodic ? t.window.size() : db.hi - db.lo;
    const double tol_abs = tol * norm(size);
    VertexMerger<2> merger(lo, size, tol_abs, periodic);

    for (auto& c : t.cells) {
        c.ring.clear();
        c.corner.clear();
        c.shift.clear();
        for (const auto& v : c.polygon.ring()) {
            const Vec2 p = periodic ? t.window.wrap(v) : v;
            const int id = merger.insert(p);
            const Shift2 s = periodic ? shift_of<2>(v, p, size) : Shift2{};
            if (!c.ring.empty() && c.ring.back() == id && c.shift.back() == s) continue;
            c.ring.push_back(id);
            c.corner.push_back(1);
            c.shift.push_back(s);
        }
        while (c.ring.size() > 1 && c.ring.front() == c.ring.back() && c.shift.front() == c.shift.back()) {
            c.ring.pop_back();
            c.corner.pop_back();
            c.shift.pop_back();
        }
    }
    t.vertices = std::move(merger.points());
    const std::size_t nv = t.vertices.size();

    // Vertices in the relative interior of a side (non face-to-face models).
    if (!periodic && nv > 0) {
        const double cellsz = std::max(norm(size) / std::sqrt(static_cast<double>(nv)), 10.0 * tol_abs);
        const auto gx = static_cast<long long>(std::ceil(size[0] / cellsz)) + 1;
        const auto gy = static_cast<long long>(std::ceil(size[1] / cellsz)) + 1;
        std::vector<std::vector<int>> grid(static_cast<std::size_t>(gx * gy));
        auto bx = [&](double x) { return std::clamp<long long>(static_cast<long long>(std::floor((x - lo[0]) / cellsz)), 0, gx - 1); };
        auto by = [&](double y) { return std::clamp<long long>(static_cast<long long>(std::floor((y - lo[1]) / cellsz)), 0, gy - 1); };
        for (std::size_t i = 0; i < nv; ++i)
            grid[static_cast<std::size_t>(by(t.vertices[i][1]) * gx + bx(t.vertices[i][0]))].push_back(static_cast<int>(i));
        for (auto& c : t.cells) {
            std::vector<int> ring;
            std::vector<std::uint8_t> corner;
            const std::size_t n = c.ring.size();
            for (std::size_t k = 0; k < n; ++k) {
                const int i0 = c.ring[k], i1 = c.ring[(k + 1) % n];
                ring.push_back(i0);
                corner.push_back(1);
                const Vec2 a = t.vertices[i0], b = t.vertices[i1];
                const Vec2 d = b - a;
                const double len2 = norm2(d);
                if (len2 <= 0.0) continue;
                const double len = std::sqrt(len2);
                std::vector<std::pair<double, int>> on;
                for (long long yy = by(std::min(a[1], b[1]) - tol_abs); yy <= by(std::max(a[1], b[1]) + tol_abs); ++yy)
                    for (long long xx = bx(std::min(a[0], b[0]) - tol_abs); xx <= bx(std::max(a[0], b[0]) + tol_abs); ++xx)
                        for (int v : grid[static_cast<std::size_t>(yy * gx + xx)]) {
                            if (v == i0 || v == i1) continue;
                            const Vec2 q = t.vertices[v];
                            const double s = dot(q - a, d) / len2;
                            if (s * len <= tol_abs || (1.0 - s) * len <= tol_abs) continue;
                            if (std::fabs(cross(d, q - a)) / len <= tol_abs) on.emplace_back(s, v);
                        }
                std::sort(on.begin(), on.end());
                for (const auto& [s, v] : on) {
                    ring.push_back(v);
                    corner.push_back(0);
                }
            }
            c.ring = std::move(ring);
            c.corner = std::move(corner);
            c.shift.assign(c.ring.size(), Shift2{});
        }
    }

    t.vertex_boundary.assign(nv, 0);
    if (!periodic)
        for (std::size_t i = 0; i < nv; ++i) t.vertex_boundary[i] = on_polygon_boundary(dom, t.vertices[i], tol_abs) ? 1 : 0;

    // Edges keyed by endpoint ids and relative periodic shift.
    t.edges.clear();
    std::map<std::tuple<int, int, int, int>, int> edge_index;
    for (std::size_t ci = 0; ci < t.cells.size(); ++ci) {
        auto& c = t.cells[ci];
        const std::size_t n = c.ring.size();
        for (std::size_t k = 0; k < n; ++k) {
            int i = c.ring[k], j = c.ring[(k + 1) % n];
            Shift2 si = c.shift[k], sj = c.shift[(k + 1) % n];
            if (i == j && si == sj) continue;
            Shift2 rel = sub<2>(sj, si);
            Vec2 ga = t.vertices[i] + Vec2{{si[0] * size[0], si[1] * size[1]}};
            Vec2 gb = t.vertices[j] + Vec2{{sj[0] * size[0], sj[1] * size[1]}};
            int a = i, b = j;
            if (a > b || (a == b && !positive<2>(rel))) {
                std::swap(a, b);
                std::swap(ga, gb);
                rel = neg<2>(rel);
            }
            const auto key = std::make_tuple(a, b, rel[0], rel[1]);
            auto it = edge_index.find(key);
            if (it == edge_index.end()) {
                Edge2 e;
                e.v0 = a;
                e.v1 = b;
                e.shift = rel;
                e.a = ga;
                e.b = gb;
                it = edge_index.emplace(key, static_cast<int>(t.edges.size())).first;
                t.edges.push_back(e);
            }
            auto& cells = t.edges[it->second].cells;
            if (std::find(cells.begin(), cells.end(), static_cast<int>(ci)) == cells.end())
                cells.push_back(static_cast<int>(ci));
        }
    }
    for (auto& e : t.edges)
        e.boundary = !periodic && t.vertex_boundary[e.v0] && t.vertex_boundary[e.v1] &&
                     on_polygon_boundary(dom, e.midpoint(), tol_abs);

    for (auto& c : t.cells) c.neighbors.clear();
    for (const auto& e : t.edges)
        for (std::size_t x = 0; x < e.cells.size(); ++x)
            for (std::size_t y = 0; y < e.cells.size(); ++y)
                if (x != y && e.cells[x] != e.cells[y]) t.cells[e.cells[x]].neighbors.push_back(e.cells[y]);
    for (auto& c : t.cells) {
        std::sort(c.neighbors.begin(), c.neighbors.end());
        c.neighbors.erase(std::unique(c.neighbors.begin(), c.neighbors.end()), c.neighbors.end());
    }

    const auto pis = pi_vertices(t);
    const auto counts = vertex_cell_counts(t);
    t.face_to_face = std::none_of(pis.begin(), pis.end(), [](std::uint8_t x) { return x != 0; });
    t.normal = t.face_to_face;
    for (std::size_t i = 0; i < nv && t.normal; ++i)
        if (!t.vertex_boundary[i] && counts[i] != 3) t.normal = false;
}

void build_lattice(Tessellation3& t, double tol) {
    const bool periodic = t.window.mode == EdgeMode::periodic;
    const Box3 db = t.domain_box();
    const Vec3 lo = periodic ? t.window.lo : db.lo;
    const Vec3 size = periodic ? t.window.size() : db.hi - db.lo;
    const double tol_abs = tol * norm(size);
    VertexMerger<3> merger(lo, size, tol_abs, periodic);
    for (auto& c : t.cells) {
        c.vertex_ids.clear();
        c.shift.clear();
        for (const auto& v : c.polyhedron.vertices()) {
            const Vec3 p = periodic ? t.window.wrap(v) : v;
            c.vertex_ids.push_back(merger.insert(p));
            c.shift.push_back(periodic ? shift_of<3>(v, p, size) : Shift3{});
        }
    }
    t.vertices = std::move(merger.points());
    const std::size_t nv = t.vertices.size();
    t.vertex_boundary.assign(nv, 0);
    if (!periodic)
        for (std::size_t i = 0; i < nv; ++i) t.vertex_boundary[i] = on_box_boundary(db, t.vertices[i], tol_abs) ? 1 : 0;

    t.edges.clear();
    t.facets.clear();
    std::map<std::array<int, 5>, int> edge_index;
    std::map<std::vector<int>, int> facet_index;
    for (std::size_t ci = 0; ci < t.cells.size(); ++ci) {
        auto& c = t.cells[ci];
        const auto& verts = c.polyhedron.vertices();
        for (const auto& [pa, pb] : c.polyhedron.edges()) {
            int i = c.vertex_ids[pa], j = c.vertex_ids[pb];
            Shift3 rel = sub<3>(c.shift[pb], c.shift[pa]);
            Vec3 ga = verts[pa], gb = verts[pb];
            if (i == j && rel == Shift3{}) continue;
            if (i > j || (i == j && !positive<3>(rel))) {
                std::swap(i, j);
                std::swap(ga, gb);
                rel = neg<3>(rel);
            }
            const std::array<int, 5> key{i, j, rel[0], rel[1], rel[2]};
            auto it = edge_index.find(key);
            if (it == edge_index.end()) {
                Edge3 e;
                e.v0 = i;
                e.v1 = j;
                e.shift = rel;
                e.a = ga;
                e.b = gb;
                it = edge_index.emplace(key, static_cast<int>(t.edges.size())).first;
                t.edges.push_back(e);
            }
            auto& cells = t.edges[it->second].cells;
            if (std::find(cells.begin(), cells.end(), static_cast<int>(ci)) == cells.end())
                cells.push_back(static_cast<int>(ci));
        }
        for (const auto& loop : c.polyhedron.facets()) {
            // Canonical key: (id, shift) pairs relative to the smallest entry, sorted.
            std::vector<std::array<int, 4>> items;
            for (int v : loop) items.push_back({c.vertex_ids[v], c.shift[v][0], c.shift[v][1], c.shift[v][2]});
            const auto ref = *std::min_element(items.begin(), items.end());
            for (auto& x : items)
                for (int k = 1; k < 4; ++k) x[k] -= ref[k];
            std::sort(items.begin(), items.end());
            items.erase(std::unique(items.begin(), items.end()), items.end());
            std::vector<int> key;
            for (const auto& x : items) key.insert(key.end(), x.begin(), x.end());
            auto it = facet_index.find(key);
            if (it == facet_index.end()) {
                Facet3 f;
                for (int v : loop) {
                    f.vertex_ids.push_back(c.vertex_ids[v]);
                    f.loop.push_back(verts[v]);
                }
                it = facet_index.emplace(std::move(key), static_cast<int>(t.facets.size())).first;
                t.facets.push_back(std::move(f));
            }
            auto& cells = t.facets[it->second].cells;
            if (std::find(cells.begin(), cells.end(), static_cast<int>(ci)) == cells.end())
                cells.push_back(static_cast<int>(ci));
        }
    }
    for (auto& e : t.edges)
        e.boundary = !periodic && on_box_boundary(db, (e.a + e.b) * 0.5, tol_abs) && t.vertex_boundary[e.v0] &&
                     t.vertex_boundary[e.v1];
    for (auto& f : t.facets) f.boundary = !periodic && on_box_boundary(db, polygon_centroid_3d(f.loop), tol_abs);

    for (auto& c : t.cells) c.neighbors.clear();
    for (const auto& f : t.facets)
        if (f.cells.size() == 2 && f.cells[0] != f.cells[1]) {
            t.cells[f.cells[0]].neighbors.push_back(f.cells[1]);
            t.cells[f.cells[1]].neighbors.push_back(f.cells[0]);
        }
    for (auto& c : t.cells) {
        std::sort(c.neighbors.begin(), c.neighbors.end());
        c.neighbors.erase(std::unique(c.neighbors.begin(), c.neighbors.end()), c.neighbors.end());
    }

    // Normal: interior vertices in 4 cells, interior edges in 3 cells.
    std::vector<int> vcount(nv, 0);
    for (const auto& c : t.cells) {
        std::vector<int> ids = c.vertex_ids;
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (int v : ids) ++vcount[v];
    }
    t.face_to_face = true;
    for (const auto& f : t.facets)
        if (!f.boundary && f.cells.size() != 2) t.face_to_face = false;
    t.normal = t.face_to_face;
    for (std::size_t i = 0; i < nv && t.normal; ++i)
        if (!t.vertex_boundary[i] && vcount[i] != 4) t.normal = false;
    for (const auto& e : t.edges)
        if (t.normal && !e.boundary && !t.vertex_boundary[e.v0] && !t.vertex_boundary[e.v1] && e.cells.size() != 3)
            t.normal = false;
}

Tessellation2 make_tessellation(std::string model, const Window2& w, std::vector<ConvexPolygon> cells) {
    Tessellation2 t;
    t.model = std::move(model);
    t.window = w;
    for (auto& p : cells) {
        Cell2 c;
        c.polygon = std::move(p);
        t.cells.push_back(std::move(c));
    }
    build_lattice(t);
    return t;
}

Tessellation3 make_tessellation(std::string model, const Window3& w, std::vector<ConvexPolyhedron> cells) {
    Tessellation3 t;
    t.model = std::move(model);
    t.window = w;
    for (auto& p : cells) {
        Cell3 c;
        c.polyhedron = std::move(p);
        t.cells.push_back(std::move(c));
    }
    build_lattice(t);
    return t;
}

std::vector<std::vector<Vec2>> vertex_edge_directions(const Tessellation2& t) {
    std::vector<std::vector<Vec2>> dirs(t.vertices.size());
    for (const auto& e : t.edges) {
        const Vec2 d = e.b - e.a;
        const double len = norm(d);
        if (!(len > 0.0)) continue;
        dirs[e.v0].push_back(d / len);
        dirs[e.v1].push_back(-d / len);
    }
    return dirs;
}

std::vector<int> vertex_cell_counts(const Tessellation2& t) {
    std::vector<int> counts(t.vertices.size(), 0);
    for (const auto& c : t.cells) {
        std::vector<int> ids = c.ring;
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (int v : ids) ++counts[v];
    }
    return counts;
}

std::vector<std::uint8_t> pi_vertices(const Tessellation2& t) {
    std::vector<std::uint8_t> pi(t.vertices.size(), 0);
    for (const auto& c : t.cells)
        for (std::size_t k = 0; k < c.ring.size(); ++k)
            if (!c.corner[k]) pi[c.ring[k]] = 1;
    return pi;
}

int locate_cell(const Tessellation2& t, const Vec2& p) {
    std::vector<Vec2> probes{p};
    if (t.window.mode == EdgeMode::periodic) {
        const Vec2 q = t.window.wrap(p);
        const Vec2 s = t.window.size();
        probes.clear();
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy) probes.push_back(q + Vec2{{dx * s[0], dy * s[1]}});
    }
    for (std::size_t i = 0; i < t.cells.size(); ++i)
        for (const auto& q : probes)
            if (t.cells[i].polygon.contains(q, 1e-12)) return static_cast<int>(i);
    return -1;
}

}  // namespace tessera
