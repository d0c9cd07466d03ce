#include "tessera/power.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "tessera/errors.hpp"

namespace tessera {

namespace {

template <int D>
struct Geo;

template <>
struct Geo<2> {
    using Poly = ConvexPolygon;
    static Poly box(const Vec2& lo, const Vec2& hi) { return ConvexPolygon::box(lo, hi); }
    static const std::vector<Vec2>& verts(const Poly& p) { return p.ring(); }
    static double content(const Poly& p) { return p.area(); }
    static std::optional<Poly> clip(const Poly& p, const Line2& h, double min) {
        return clip_halfspace(p, h, Side::below, min);
    }
};

template <>
struct Geo<3> {
    using Poly = ConvexPolyhedron;
    static Poly box(const Vec3& lo, const Vec3& hi) { return ConvexPolyhedron::box(lo, hi); }
    static const std::vector<Vec3>& verts(const Poly& p) { return p.vertices(); }
    static double content(const Poly& p) { return p.volume(); }
    static std::optional<Poly> clip(const Poly& p, const Plane3& h, double min) {
        return clip_halfspace(p, h, Side::below, min);
    }
};

/// Content of p inside the box [lo, hi].
template <int D>
double content_in_box(const typename Geo<D>::Poly& p, const Vec<D>& lo, const Vec<D>& hi) {
    std::optional<typename Geo<D>::Poly> cur = p;
    for (int i = 0; i < D && cur; ++i) {
        Vec<D> e{};
        e[i] = 1.0;
        cur = Geo<D>::clip(*cur, Hyperplane<D>(e, hi[i]), 0.0);
        if (cur) cur = Geo<D>::clip(*cur, Hyperplane<D>(-e, -lo[i]), 0.0);
    }
    return cur ? Geo<D>::content(*cur) : 0.0;
}

/// Uniform bucket grid over a point set, stored in compressed rows.
template <int D>
struct BucketGrid {
    Vec<D> lo{};
    double h = 1.0;
    std::array<int, D> n{};
    std::vector<int> start;
    std::vector<int> items;

    BucketGrid(const std::vector<Vec<D>>& pts, const Vec<D>& blo, const Vec<D>& bhi) : lo(blo) {
        double vol = 1.0;
        for (int i = 0; i < D; ++i) vol *= std::max(bhi[i] - blo[i], 1e-300);
        h = std::pow(vol / std::max<double>(1.0, static_cast<double>(pts.size())), 1.0 / D);
        long long total = 1;
        for (int i = 0; i < D; ++i) {
            n[i] = std::clamp(static_cast<int>(std::ceil((bhi[i] - blo[i]) / h)), 1, 1 << 12);
            total *= n[i];
        }
        if (total > 50'000'000) throw ResourceError("bucket grid too large");
        std::vector<int> counts(static_cast<std::size_t>(total) + 1, 0);
        std::vector<int> key(pts.size());
        for (std::size_t k = 0; k < pts.size(); ++k) {
            key[k] = index(cell_of(pts[k]));
            ++counts[key[k] + 1];
        }
        for (std::size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
        start = counts;
        items.resize(pts.size());
        for (std::size_t k = 0; k < pts.size(); ++k) items[counts[key[k]]++] = static_cast<int>(k);
    }

    std::array<int, D> cell_of(const Vec<D>& p) const {
        std::array<int, D> c;
        for (int i = 0; i < D; ++i) c[i] = std::clamp(static_cast<int>(std::floor((p[i] - lo[i]) / h)), 0, n[i] - 1);
        return c;
    }
    int index(const std::array<int, D>& c) const {
        int k = 0;
        for (int i = D - 1; i >= 0; --i) k = k * n[i] + c[i];
        return k;
    }
    int max_ring() const {
        int m = 0;
        for (int i = 0; i < D; ++i) m = std::max(m, n[i]);
        return m;
    }
    /// Calls f(item) for every item in buckets at Chebyshev ring distance r from c.
    template <class F>
    void ring(const std::array<int, D>& c, int r, F&& f) const {
        auto emit = [&](const std::array<int, D>& q) {
            for (int i = 0; i < D; ++i)
                if (q[i] < 0 || q[i] >= n[i]) return;
            const int k = index(q);
            for (int j = start[k]; j < start[k + 1]; ++j) f(items[j]);
        };
        // Odometer over axes 1..D-1; axis 0 is scanned fully only on the shell.
        std::array<int, D> q;
        for (int i = 0; i < D; ++i) q[i] = c[i] - r;
        for (;;) {
            bool shell = false;
            for (int i = 1; i < D; ++i) shell = shell || q[i] == c[i] - r || q[i] == c[i] + r;
            if (shell || r == 0) {
                for (q[0] = c[0] - r; q[0] <= c[0] + r; ++q[0]) emit(q);
            } else {
                q[0] = c[0] - r;
                emit(q);
                q[0] = c[0] + r;
                emit(q);
            }
            int i = 1;
            while (i < D && q[i] == c[i] + r) {
                q[i] = c[i] - r;
                ++i;
            }
            if (i == D) break;
            ++q[i];
        }
    }
};

template <int D>
struct Problem {
    std::vector<Vec<D>> pts;   // all generators (tiled in periodic mode)
    std::vector<double> w;     // power weights
    Vec<D> dom_lo{}, dom_hi{}; // domain box of the cells
    double min_content = 0.0;
    double w_max = 0.0;
};

/// Halfspace where generator i has power not exceeding generator j's.
template <int D>
std::optional<Hyperplane<D>> power_plane(const Problem<D>& pr, int i, int j) {
    const Vec<D> d = pr.pts[j] - pr.pts[i];
    const double len = norm(d);
    if (!(len > 0.0)) return std::nullopt;
    const Vec<D> u = d / len;
    const double off = dot(pr.pts[i], u) + (len * len - pr.w[j] + pr.w[i]) / (2.0 * len);
    Hyperplane<D> h;
    h.normal = u;
    h.offset = off;
    return h;
}

template <int D>
std::optional<typename Geo<D>::Poly> cell_grid(const Problem<D>& pr, const BucketGrid<D>& grid, int i) {
    using G = Geo<D>;
    std::optional<typename G::Poly> cell = G::box(pr.dom_lo, pr.dom_hi);
    const Vec<D> x = pr.pts[i];
    const auto c = grid.cell_of(x);
    std::vector<std::pair<double, int>> cand;
    const int rmax = grid.max_ring();
    for (int r = 0; r <= rmax && cell; ++r) {
        cand.clear();
        grid.ring(c, r, [&](int j) {
            if (j != i) cand.emplace_back(norm2(pr.pts[j] - x), j);
        });
        std::sort(cand.begin(), cand.end());
        for (const auto& [d2, j] : cand) {
            const auto h = power_plane<D>(pr, i, j);
            if (!h) continue;
            cell = G::clip(*cell, *h, pr.min_content);
            if (!cell) break;
        }
        if (!cell) break;
        // Unvisited generators are at least r * h away.
        double rad2 = 0.0;
        for (const auto& v : G::verts(*cell)) rad2 = std::max(rad2, norm2(v - x));
        const double rad = std::sqrt(rad2);
        const double bound = rad + std::sqrt(std::max(0.0, rad2 - pr.w[i] + pr.w_max));
        if (static_cast<double>(r) * grid.h >= bound) break;
    }
    return cell;
}

template <int D>
std::optional<typename Geo<D>::Poly> cell_reference(const Problem<D>& pr, int i) {
    using G = Geo<D>;
    std::optional<typename G::Poly> cell = G::box(pr.dom_lo, pr.dom_hi);
    for (int j = 0; j < static_cast<int>(pr.pts.size()) && cell; ++j) {
        if (j == i) continue;
        const auto h = power_plane<D>(pr, i, j);
        if (h) cell = G::clip(*cell, *h, pr.min_content);
    }
    return cell;
}

template <int D>
std::vector<std::optional<typename Geo<D>::Poly>> compute_cells(const Problem<D>& pr, const std::vector<int>& which,
                                                                Backend backend) {
    std::vector<std::optional<typename Geo<D>::Poly>> out(which.size());
    if (backend == Backend::reference) {
        for (std::size_t k = 0; k < which.size(); ++k) out[k] = cell_reference<D>(pr, which[k]);
        return out;
    }
    Vec<D> blo = pr.dom_lo, bhi = pr.dom_hi;
    for (const auto& p : pr.pts)
        for (int i = 0; i < D; ++i) {
            blo[i] = std::min(blo[i], p[i]);
            bhi[i] = std::max(bhi[i], p[i]);
        }
    const BucketGrid<D> grid(pr.pts, blo, bhi);
    const long long n = static_cast<long long>(which.size());
    if (backend == Backend::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (long long k = 0; k < n; ++k) out[k] = cell_grid<D>(pr, grid, which[k]);
    } else {
        for (long long k = 0; k < n; ++k) out[k] = cell_grid<D>(pr, grid, which[k]);
    }
    return out;
}

template <int D>
double box_distance(const Vec<D>& p, const Vec<D>& lo, const Vec<D>& hi) {
    double s = 0.0;
    for (int i = 0; i < D; ++i) {
        const double d = std::max({lo[i] - p[i], 0.0, p[i] - hi[i]});
        s += d * d;
    }
    return std::sqrt(s);
}

template <int D, class Tess, class Cell, class Setter>
Tess build(const PointPattern<D>& p, const std::vector<double>& weights, Backend backend, const char* model,
           Setter&& set_poly) {
    const Window<D>& w = p.window;
    w.validate();
    p.validate();
    if (p.empty()) throw ParameterError("power diagram needs at least one generator");
    if (weights.size() != p.size()) throw ParameterError("one weight per generator required");
    Tess t;
    t.model = model;
    t.window = w;
    t.generators = p;
    Problem<D> pr;
    const std::size_t n = p.size();
    std::vector<int> which;
    if (w.mode == EdgeMode::periodic) {
        for (const auto& x : p.points)
            if (!w.contains_half_open(x)) throw ParameterError("periodic generators must lie in the window");
        const PointPattern<D> tiled = periodic_tiling<D>(p);
        pr.pts = tiled.points;
        const std::size_t copies = pr.pts.size() / n;
        for (std::size_t c = 0; c < copies; ++c) pr.w.insert(pr.w.end(), weights.begin(), weights.end());
        // Cells of central generators stay within the neighbouring tiles.
        for (int i = 0; i < D; ++i) {
            pr.dom_lo[i] = w.lo[i] - w.extent(i);
            pr.dom_hi[i] = w.hi[i] + w.extent(i);
        }
        for (std::size_t i = 0; i < n; ++i) which.push_back(static_cast<int>(i));
    } else {
        pr.pts = p.points;
        pr.w = weights;
        pr.dom_lo = w.sim_lo();
        pr.dom_hi = w.sim_hi();
    }
    pr.w_max = *std::max_element(pr.w.begin(), pr.w.end());
    pr.min_content = 1e-12 * w.content();

    std::vector<std::optional<typename Geo<D>::Poly>> cells;
    if (w.mode == EdgeMode::plus) {
        // Compute cells for generators near the window until they certifiably cover it.
        double reach = w.margin > 0.0 ? w.margin / 3.0 : 0.0;
        for (;;) {
            which.clear();
            for (std::size_t i = 0; i < n; ++i)
                if (box_distance<D>(p.points[i], w.lo, w.hi) <= reach) which.push_back(static_cast<int>(i));
            cells = compute_cells<D>(pr, which, backend);
            const bool all = which.size() == n;
            double covered = 0.0;
            for (const auto& c : cells)
                if (c) covered += content_in_box<D>(*c, w.lo, w.hi);
            if (all || std::fabs(covered - w.content()) <= 1e-9 * w.content()) break;
            reach = reach > 0.0 ? 2.0 * reach : 1e-3 * std::pow(w.content(), 1.0 / D);
        }
    } else {
        if (w.mode == EdgeMode::none) {
            which.resize(n);
            std::iota(which.begin(), which.end(), 0);
        }
        cells = compute_cells<D>(pr, which, backend);
    }

    for (std::size_t k = 0; k < which.size(); ++k) {
        const int g = which[k];
        if (!cells[k]) {
            t.empty_cells.push_back({g, "dominated by the power of other generators"});
            continue;
        }
        if (w.mode == EdgeMode::plus && content_in_box<D>(*cells[k], w.lo, w.hi) <= 0.0) continue;
        Cell c;
        set_poly(c, std::move(*cells[k]));
        c.generator = g;
        t.cells.push_back(std::move(c));
    }
    build_lattice(t);
    return t;
}

/// Drops generators within 1e-9 (relative to the window) of an earlier one.
template <int D>
PointPattern<D> merge_coincident(const PointPattern<D>& p, std::vector<std::string>& warnings) {
    const double tol = 1e-9 * norm(p.window.size());
    std::vector<int> order(p.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return p.points[a][0] < p.points[b][0] || (p.points[a][0] == p.points[b][0] && a < b);
    });
    std::vector<std::uint8_t> drop(p.size(), 0);
    for (std::size_t x = 0; x < order.size(); ++x) {
        if (drop[order[x]]) continue;
        for (std::size_t y = x + 1; y < order.size() && p.points[order[y]][0] - p.points[order[x]][0] <= tol; ++y) {
            const int a = std::min(order[x], order[y]), b = std::max(order[x], order[y]);
            if (!drop[b] && !drop[a] && distance(p.points[a], p.points[b]) <= tol) drop[b] = 1;
        }
    }
    const auto ndrop = std::count(drop.begin(), drop.end(), 1);
    if (ndrop == 0) return p;
    warnings.push_back("merged " + std::to_string(ndrop) + " coincident generator(s)");
    PointPattern<D> q;
    q.window = p.window;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (drop[i]) continue;
        q.points.push_back(p.points[i]);
        if (!p.radii.empty()) q.radii.push_back(p.radii[i]);
        if (!p.weights.empty()) q.weights.push_back(p.weights[i]);
        if (!p.times.empty()) q.times.push_back(p.times[i]);
        if (!p.matrices.empty()) q.matrices.push_back(p.matrices[i]);
    }
    return q;
}

template <int D>
std::vector<double> laguerre_weights(const PointPattern<D>& p) {
    if (!p.weights.empty()) return p.weights;
    if (p.radii.empty()) throw ParameterError("laguerre needs radius or weight marks");
    std::vector<double> w(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) w[i] = p.radii[i] * p.radii[i];
    return w;
}

}  // namespace

Tessellation2 power_diagram(const PointPattern2& p, const std::vector<double>& weights, Backend backend) {
    return build<2, Tessellation2, Cell2>(p, weights, backend, "power",
                                          [](Cell2& c, ConvexPolygon&& poly) { c.polygon = std::move(poly); });
}

Tessellation3 power_diagram(const PointPattern3& p, const std::vector<double>& weights, Backend backend) {
    return build<3, Tessellation3, Cell3>(p, weights, backend, "power",
                                          [](Cell3& c, ConvexPolyhedron&& poly) { c.polyhedron = std::move(poly); });
}

Tessellation2 voronoi(const PointPattern2& p, Backend backend) {
    std::vector<std::string> warnings;
    const PointPattern2 q = merge_coincident<2>(p, warnings);
    Tessellation2 t = power_diagram(q, std::vector<double>(q.size(), 0.0), backend);
    t.model = "voronoi";
    t.warnings = warnings;
    return t;
}

Tessellation3 voronoi(const PointPattern3& p, Backend backend) {
    std::vector<std::string> warnings;
    const PointPattern3 q = merge_coincident<3>(p, warnings);
    Tessellation3 t = power_diagram(q, std::vector<double>(q.size(), 0.0), backend);
    t.model = "voronoi";
    t.warnings = warnings;
    return t;
}

Tessellation2 laguerre(const PointPattern2& p, Backend backend) {
    Tessellation2 t = power_diagram(p, laguerre_weights<2>(p), backend);
    t.model = "laguerre";
    return t;
}

Tessellation3 laguerre(const PointPattern3& p, Backend backend) {
    Tessellation3 t = power_diagram(p, laguerre_weights<3>(p), backend);
    t.model = "laguerre";
    return t;
}

LloydResult lloyd_centroidal(const PointPattern2& p, int iterations, Backend backend) {
    if (iterations < 0) throw ParameterError("iterations must be >= 0");
    if (p.window.mode == EdgeMode::plus) throw ParameterError("lloyd iteration needs a none or periodic window");
    LloydResult r;
    r.generators = p;
    r.tessellation = voronoi(r.generators, backend);
    for (int it = 0; it < iterations; ++it) {
        PointPattern2 next;
        next.window = p.window;
        next.points.reserve(r.tessellation.cells.size());
        double moved = 0.0;
        for (const auto& c : r.tessellation.cells) {
            const Vec2 x = r.tessellation.generators.points[c.generator];
            Vec2 y = c.polygon.centroid();
            moved = std::max(moved, distance(x, y));
            if (p.window.mode == EdgeMode::periodic) y = p.window.wrap(y);
            next.points.push_back(y);
        }
        r.displacements.push_back(moved);
        r.generators = std::move(next);
        r.tessellation = voronoi(r.generators, backend);
    }
    r.tessellation.model = "lloyd";
    return r;
}

}  // namespace tessera
