#include "tessera/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "tessera/errors.hpp"
#include "tessera/power.hpp"

namespace tessera {

namespace {

double orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross(b - a, c - a); }

/// Positive if d lies inside the circumcircle of the counterclockwise a, b, c.
/// flag is set when the value is within rounding error of zero.
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, bool& flag) {
    const double adx = a[0] - d[0], ady = a[1] - d[1];
    const double bdx = b[0] - d[0], bdy = b[1] - d[1];
    const double cdx = c[0] - d[0], cdy = c[1] - d[1];
    const double al = adx * adx + ady * ady, bl = bdx * bdx + bdy * bdy, cl = cdx * cdx + cdy * cdy;
    const double t1 = bdx * cdy - bdy * cdx, t2 = cdx * ady - cdy * adx, t3 = adx * bdy - ady * bdx;
    const double det = al * t1 + bl * t2 + cl * t3;
    const double mag = al * (std::fabs(bdx * cdy) + std::fabs(bdy * cdx)) +
                       bl * (std::fabs(cdx * ady) + std::fabs(cdy * adx)) +
                       cl * (std::fabs(adx * bdy) + std::fabs(ady * bdx));
    if (std::fabs(det) <= 1e-11 * mag) flag = true;
    return det;
}

struct Tri {
    std::array<int, 3> v;
    std::array<int, 3> n{-1, -1, -1};  // n[k] is across the edge opposite v[k]
    bool alive = true;
};

struct BowyerWatson {
    std::vector<Vec2> pts;
    std::vector<Tri> tris;
    bool degenerate = false;
    int last = 0;

    int locate(const Vec2& p) {
        int t = last;
        if (!tris[t].alive) t = 0;
        while (!tris[t].alive) ++t;
        const std::size_t limit = 4 * tris.size() + 16;
        for (std::size_t step = 0; step < limit; ++step) {
            const Tri& tr = tris[t];
            int next = -1;
            for (int k = 0; k < 3; ++k) {
                const int e = (k + static_cast<int>(step)) % 3;
                const Vec2& a = pts[tr.v[(e + 1) % 3]];
                const Vec2& b = pts[tr.v[(e + 2) % 3]];
                if (orient(a, b, p) < 0.0) {
                    next = tr.n[e];
                    break;
                }
            }
            if (next < 0) return t;
            t = next;
        }
        for (std::size_t i = 0; i < tris.size(); ++i) {
            if (!tris[i].alive) continue;
            const auto& v = tris[i].v;
            if (orient(pts[v[0]], pts[v[1]], p) >= 0 && orient(pts[v[1]], pts[v[2]], p) >= 0 &&
                orient(pts[v[2]], pts[v[0]], p) >= 0)
                return static_cast<int>(i);
        }
        throw NumericError("delaunay point location failed");
    }

    void insert(int pi) {
        const Vec2 p = pts[pi];
        const int t0 = locate(p);
        std::vector<int> cavity{t0}, stack{t0};
        std::vector<std::uint8_t> in_cavity_mark;
        std::unordered_map<int, bool> seen{{t0, true}};
        while (!stack.empty()) {
            const int t = stack.back();
            stack.pop_back();
            for (int k = 0; k < 3; ++k) {
                const int nb = tris[t].n[k];
                if (nb < 0 || seen.count(nb)) continue;
                const auto& v = tris[nb].v;
                const bool inside = incircle(pts[v[0]], pts[v[1]], pts[v[2]], p, degenerate) > 0.0;
                seen[nb] = inside;
                if (inside) {
                    cavity.push_back(nb);
                    stack.push_back(nb);
                }
            }
        }
        // Boundary edges of the cavity, each with the triangle outside it.
        struct BEdge {
            int a, b, outside;
        };
        std::vector<BEdge> boundary;
        for (int t : cavity) {
            for (int k = 0; k < 3; ++k) {
                const int nb = tris[t].n[k];
                if (nb >= 0 && seen.count(nb) && seen[nb]) continue;
                boundary.push_back({tris[t].v[(k + 1) % 3], tris[t].v[(k + 2) % 3], nb});
            }
        }
        for (int t : cavity) tris[t].alive = false;
        std::unordered_map<int, int> by_start, by_end;
        std::vector<int> created;
        for (const auto& e : boundary) {
            if (orient(pts[e.a], pts[e.b], p) <= 0.0) degenerate = true;
            Tri nt;
            nt.v = {e.a, e.b, pi};
            nt.n[2] = e.outside;
            const int id = static_cast<int>(tris.size());
            tris.push_back(nt);
            created.push_back(id);
            if (e.outside >= 0) {
                auto& on = tris[e.outside];
                for (int k = 0; k < 3; ++k) {
                    const int a = on.v[(k + 1) % 3], b = on.v[(k + 2) % 3];
                    if (a == e.b && b == e.a) on.n[k] = id;
                }
            }
            by_start[e.a] = id;
            by_end[e.b] = id;
        }
        for (int id : created) {
            Tri& t = tris[id];
            // Opposite v[0] = a: edge (b, p), shared with the triangle starting at b.
            t.n[0] = by_start.count(t.v[1]) ? by_start[t.v[1]] : -1;
            // Opposite v[1] = b: edge (p, a), shared with the triangle ending at a.
            t.n[1] = by_end.count(t.v[0]) ? by_end[t.v[0]] : -1;
        }
        last = created.empty() ? 0 : created.back();
    }
};

Triangulation triangulate_once(const std::vector<Vec2>& input, bool& degenerate) {
    const std::size_t n = input.size();
    Vec2 lo = input[0], hi = input[0];
    for (const auto& p : input)
        for (int i = 0; i < 2; ++i) {
            lo[i] = std::min(lo[i], p[i]);
            hi[i] = std::max(hi[i], p[i]);
        }
    const Vec2 c = (lo + hi) * 0.5;
    const double ext = std::max({hi[0] - lo[0], hi[1] - lo[1], 1e-300});
    BowyerWatson bw;
    bw.pts = input;
    const double big = 1e4 * ext;
    bw.pts.push_back(c + Vec2{{-big, -big}});
    bw.pts.push_back(c + Vec2{{big, -big}});
    bw.pts.push_back(c + Vec2{{0.0, big}});
    Tri super;
    super.v = {static_cast<int>(n), static_cast<int>(n + 1), static_cast<int>(n + 2)};
    bw.tris.push_back(super);
    // Insertion along a space-filling order keeps walks short.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto key = [&](int i) {
        const auto qx = static_cast<std::uint32_t>((input[i][0] - lo[0]) / ext * 65535.0);
        const auto qy = static_cast<std::uint32_t>((input[i][1] - lo[1]) / ext * 65535.0);
        std::uint64_t k = 0;
        for (int b = 15; b >= 0; --b) {
            const std::uint32_t x = (qx >> b) & 1u, y = (qy >> b) & 1u;
            k = (k << 2) | ((x << 1) | (x ^ y));
        }
        return k;
    };
    std::vector<std::uint64_t> keys(n);
    for (std::size_t i = 0; i < n; ++i) keys[i] = key(static_cast<int>(i));
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return keys[a] < keys[b]; });
    for (int i : order) bw.insert(i);
    Triangulation out;
    out.points = input;
    for (const auto& t : bw.tris) {
        if (!t.alive) continue;
        if (t.v[0] >= static_cast<int>(n) || t.v[1] >= static_cast<int>(n) || t.v[2] >= static_cast<int>(n)) continue;
        out.triangles.push_back(t.v);
    }
    degenerate = bw.degenerate;
    return out;
}

}  // namespace

Vec2 circumcenter(const Vec2& a, const Vec2& b, const Vec2& c) {
    const Vec2 ba = b - a, ca = c - a;
    const double d = 2.0 * cross(ba, ca);
    const double bl = norm2(ba), cl = norm2(ca);
    return a + Vec2{{(ca[1] * bl - ba[1] * cl) / d, (ba[0] * cl - ca[0] * bl) / d}};
}

Triangulation delaunay_triangulation(const std::vector<Vec2>& points) {
    if (points.size() < 3) throw ParameterError("delaunay needs at least 3 points");
    bool degenerate = false;
    Triangulation t = triangulate_once(points, degenerate);
    if (!degenerate) return t;
    Vec2 lo = points[0], hi = points[0];
    for (const auto& p : points)
        for (int i = 0; i < 2; ++i) {
            lo[i] = std::min(lo[i], p[i]);
            hi[i] = std::max(hi[i], p[i]);
        }
    const double scale = 1e-10 * std::max(hi[0] - lo[0], hi[1] - lo[1]);
    Rng rng(Seed{0x5eed, 0, hash_tag("delaunay-perturbation")});
    std::vector<Vec2> moved = points;
    for (auto& p : moved) p += Vec2{{rng.uniform(-scale, scale), rng.uniform(-scale, scale)}};
    bool again = false;
    t = triangulate_once(moved, again);
    t.points = points;
    t.perturbed = true;
    return t;
}

Tessellation2 delaunay(const PointPattern2& p) {
    const Window2& w = p.window;
    w.validate();
    p.validate();
    Tessellation2 t;
    t.model = "delaunay";
    t.window = w;
    t.generators = p;
    std::vector<Vec2> pts = p.points;
    if (w.mode == EdgeMode::periodic) pts = periodic_tiling<2>(p).points;
    const Triangulation tri = delaunay_triangulation(pts);
    if (tri.perturbed) t.warnings.push_back("degenerate input: triangulated a perturbed copy");
    const ConvexPolygon win = ConvexPolygon::box(w.lo, w.hi);
    for (const auto& v : tri.triangles) {
        const Vec2 a = pts[v[0]], b = pts[v[1]], c = pts[v[2]];
        if (w.mode == EdgeMode::periodic && !w.contains_half_open(circumcenter(a, b, c))) continue;
        ConvexPolygon poly = ConvexPolygon::from_trusted_ring({a, b, c});
        if (w.mode == EdgeMode::plus && !intersect(poly, win, 0.0)) continue;
        Cell2 cell;
        cell.polygon = std::move(poly);
        cell.tag = static_cast<long long>(v[0] % static_cast<int>(p.size()));
        t.cells.push_back(std::move(cell));
    }
    build_lattice(t);
    t.normal = false;
    return t;
}

double beta_constant(double beta, int d) {
    if (!(beta > -1.0)) throw ParameterError("beta must exceed -1");
    return std::exp(std::lgamma(0.5 * d + beta + 1.0) - 0.5 * d * std::log(M_PI) - std::lgamma(beta + 1.0));
}

double beta_prime_constant(double beta, int d) {
    if (!(beta > 0.5 * d)) throw ParameterError("beta' needs beta > d/2");
    return std::exp(std::lgamma(beta) - 0.5 * d * std::log(M_PI) - std::lgamma(beta - 0.5 * d));
}

double default_beta_h_max(double gamma, double beta, double area) {
    const double c = beta_constant(beta);
    // A generator at height h keeps its own location with probability
    // exp(-gamma c pi h^(beta+2) / ((beta+1)(beta+2))); cut where this is 1e-3 / N.
    const double expected = std::max(1.0, gamma * area);
    const double kappa = gamma * c * M_PI / ((beta + 1.0) * (beta + 2.0));
    return std::pow(std::log(1000.0 * expected) / kappa, 1.0 / (beta + 2.0));
}

Tessellation2 beta_delaunay(const Window2& w, const BetaDelaunayParams& prm, const Seed& seed) {
    w.validate();
    if (!(prm.gamma > 0.0)) throw ParameterError("gamma must be > 0");
    if (!(prm.margin >= 0.0)) throw ParameterError("margin must be >= 0");
    Window2 ext = w;
    ext.mode = EdgeMode::none;
    ext.margin = 0.0;
    for (int i = 0; i < 2; ++i) {
        ext.lo[i] -= prm.margin;
        ext.hi[i] += prm.margin;
    }
    const double area = ext.content();
    Rng rng(seed.derive("beta-heights"));
    PointPattern2 gen;
    gen.window = ext;
    std::vector<double> heights;
    double cut = prm.h_max;
    std::string variant;
    if (prm.variant == BetaVariant::beta) {
        variant = "beta";
        const double c = beta_constant(prm.beta);
        if (cut <= 0.0) cut = default_beta_h_max(prm.gamma, prm.beta, area);
        const double mean = prm.gamma * c * area * std::pow(cut, prm.beta + 1.0) / (prm.beta + 1.0);
        if (mean > 1e7) throw ResourceError("beta-Delaunay: too many generators below the height cut");
        const auto n = rng.poisson(mean);
        for (std::uint64_t i = 0; i < n; ++i) {
            gen.points.push_back({{rng.uniform(ext.lo[0], ext.hi[0]), rng.uniform(ext.lo[1], ext.hi[1])}});
            heights.push_back(cut * std::pow(rng.uniform_pos(), 1.0 / (prm.beta + 1.0)));
        }
    } else {
        variant = "beta_prime";
        const double c = beta_prime_constant(prm.beta);
        if (!(cut > 0.0)) throw ParameterError("beta' needs an explicit lower cut h_max > 0");
        const double mean = prm.gamma * c * area * std::pow(cut, 1.0 - prm.beta) / (prm.beta - 1.0);
        if (mean > 1e7) throw ResourceError("beta'-Delaunay: too many generators above the cut");
        const auto n = rng.poisson(mean);
        for (std::uint64_t i = 0; i < n; ++i) {
            gen.points.push_back({{rng.uniform(ext.lo[0], ext.hi[0]), rng.uniform(ext.lo[1], ext.hi[1])}});
            heights.push_back(-cut * std::pow(rng.uniform_pos(), -1.0 / (prm.beta - 1.0)));
        }
    }
    Tessellation2 t;
    t.model = "beta-delaunay";
    t.window = w;
    t.window.mode = EdgeMode::plus;
    t.window.margin = prm.margin;
    t.params = {{"gamma", prm.gamma}, {"beta", prm.beta}, {"variant", variant}, {"h_max", cut}, {"margin", prm.margin}};
    gen.weights.resize(heights.size());
    for (std::size_t i = 0; i < heights.size(); ++i) gen.weights[i] = -heights[i];
    gen.times = heights;
    t.generators = gen;
    if (gen.size() < 3) {
        t.warnings.push_back("fewer than 3 generators: no dual triangles");
        build_lattice(t);
        return t;
    }
    const Tessellation2 lag = power_diagram(gen, gen.weights);
    // Dual: each interior Laguerre vertex spans the generators of its cells.
    std::vector<std::vector<int>> owners(lag.vertices.size());
    for (const auto& c : lag.cells)
        for (int v : c.ring) owners[v].push_back(c.generator);
    const ConvexPolygon win = ConvexPolygon::box(w.lo, w.hi);
    bool near_cut = false;
    for (std::size_t v = 0; v < lag.vertices.size(); ++v) {
        if (lag.vertex_boundary[v]) continue;
        auto& g = owners[v];
        std::sort(g.begin(), g.end());
        g.erase(std::unique(g.begin(), g.end()), g.end());
        if (g.size() < 3) continue;
        // Fan over the generators in angular order around the vertex.
        const Vec2 o = lag.vertices[v];
        std::sort(g.begin(), g.end(), [&](int a, int b) {
            const Vec2 da = gen.points[a] - o, db = gen.points[b] - o;
            return std::atan2(da[1], da[0]) < std::atan2(db[1], db[0]);
        });
        for (std::size_t k = 1; k + 1 < g.size(); ++k) {
            std::vector<Vec2> ring{gen.points[g[0]], gen.points[g[k]], gen.points[g[k + 1]]};
            if (orient(ring[0], ring[1], ring[2]) <= 0.0) continue;
            ConvexPolygon poly = ConvexPolygon::from_trusted_ring(std::move(ring));
            if (!intersect(poly, win, 0.0)) continue;
            Cell2 cell;
            cell.polygon = std::move(poly);
            cell.generator = g[0];
            t.cells.push_back(std::move(cell));
        }
    }
    for (const auto& c : lag.cells) {
        if (!intersect(c.polygon, win, 0.0)) continue;
        const double h = std::fabs(heights[c.generator]);
        if (prm.variant == BetaVariant::beta ? h >= 0.99 * cut : h <= 1.01 * cut) near_cut = true;
    }
    if (near_cut) t.warnings.push_back("truncation: a cell-owning generator lies within 1% of the height cut");
    t.empty_cells = lag.empty_cells;
    build_lattice(t);
    t.normal = false;
    return t;
}

}  // namespace tessera
