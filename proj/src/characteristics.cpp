#include "tessera/characteristics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numeric>

#include "tessera/errors.hpp"
#include "tessera/rose.hpp"

namespace tessera {

double CharacteristicsReport::operator[](const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) throw ParameterError("report has no characteristic '" + name + "'");
    return it->second.value;
}

double OracleValues::operator[](const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) throw ParameterError("oracle has no value '" + name + "'");
    return it->second;
}

namespace {

template <int D>
Vec<D> shrink(const Vec<D>& x, const Vec<D>& c, double f) { return c + (x - c) * f; }

bool in_box(const Vec2& p, const Box2& b) { return p[0] >= b.lo[0] && p[0] < b.hi[0] && p[1] >= b.lo[1] && p[1] < b.hi[1]; }

bool in_box(const Vec3& p, const Box3& b) {
    for (int i = 0; i < 3; ++i)
        if (!(p[i] >= b.lo[i] && p[i] < b.hi[i])) return false;
    return true;
}

struct Kahan {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

void add(Measurements& m, const std::string& key, double num, double den) {
    auto& r = m[key];
    r.num += num;
    r.den += den;
}

}  // namespace

Box2 reference_box(const Window2& w, double f) {
    if (w.mode != EdgeMode::none) return {w.lo, w.hi};
    const Vec2 c = w.center();
    return {shrink<2>(w.lo, c, f), shrink<2>(w.hi, c, f)};
}

Box3 reference_box(const Window3& w, double f) {
    if (w.mode != EdgeMode::none) return {w.lo, w.hi};
    const Vec3 c = w.center();
    return {shrink<3>(w.lo, c, f), shrink<3>(w.hi, c, f)};
}

SegmentCounts segment_decomposition(const Tessellation2& t, double tol_angle) {
    SegmentCounts s;
    std::vector<int> interior_edges;
    for (std::size_t i = 0; i < t.edges.size(); ++i)
        if (!t.edges[i].boundary) interior_edges.push_back(static_cast<int>(i));
    s.K = interior_edges.size();

    // J: distinct cell sides between consecutive corners, keyed by end ids and shift.
    std::map<std::tuple<int, int, int, int>, int> sides;
    const Vec2 size = t.window.size();
    for (const auto& c : t.cells) {
        const std::size_t n = c.ring.size();
        std::vector<std::size_t> corners;
        for (std::size_t k = 0; k < n; ++k)
            if (c.corner[k]) corners.push_back(k);
        for (std::size_t q = 0; q < corners.size(); ++q) {
            const std::size_t k0 = corners[q], k1 = corners[(q + 1) % corners.size()];
            int a = c.ring[k0], b = c.ring[k1];
            Shift2 rel{c.shift[k1][0] - c.shift[k0][0], c.shift[k1][1] - c.shift[k0][1]};
            Vec2 pa = t.vertices[a], pb = t.vertices[b];
            pa += Vec2{{c.shift[k0][0] * size[0], c.shift[k0][1] * size[1]}};
            pb += Vec2{{c.shift[k1][0] * size[0], c.shift[k1][1] * size[1]}};
            if (t.window.mode != EdgeMode::periodic && t.vertex_boundary[a] && t.vertex_boundary[b]) {
                // A side along the domain boundary is not a tessellation segment.
                const int l = locate_cell(t, (pa + pb) * 0.5 + perp(normalized(pb - pa)) * (-1e-7 * norm(size)));
                if (l < 0) continue;
            }
            if (a > b || (a == b && (rel[0] < 0 || (rel[0] == 0 && rel[1] < 0)))) {
                std::swap(a, b);
                rel = {-rel[0], -rel[1]};
            }
            sides[{a, b, rel[0], rel[1]}] = 1;
        }
    }
    s.J = sides.size();

    // I: union of interior edges meeting straight through a vertex.
    std::vector<int> parent(t.edges.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<std::vector<std::pair<int, Vec2>>> at(t.vertices.size());
    for (int e : interior_edges) {
        const auto& ed = t.edges[e];
        const Vec2 d = normalized(ed.b - ed.a);
        at[ed.v0].push_back({e, d});
        at[ed.v1].push_back({e, -d});
    }
    const double cos_tol = std::cos(tol_angle);
    for (const auto& list : at)
        for (std::size_t i = 0; i < list.size(); ++i)
            for (std::size_t j = i + 1; j < list.size(); ++j)
                if (dot(list[i].second, list[j].second) <= -cos_tol) parent[find(list[i].first)] = find(list[j].first);
    std::vector<std::uint8_t> root(t.edges.size(), 0);
    for (int e : interior_edges) root[find(e)] = 1;
    s.I = static_cast<std::size_t>(std::count(root.begin(), root.end(), 1));

    const auto pi = pi_vertices(t);
    for (std::size_t v = 0; v < t.vertices.size(); ++v) {
        if (t.vertex_boundary[v]) continue;
        ++s.interior_vertices;
        if (pi[v]) ++s.pi_vertices;
    }
    s.phi = s.interior_vertices ? static_cast<double>(s.pi_vertices) / static_cast<double>(s.interior_vertices) : 0.0;
    return s;
}

Measurements measure(const Tessellation2& t, const CentroidRule& rule, double inner_fraction) {
    Measurements m;
    const bool periodic = t.window.mode == EdgeMode::periodic;
    const Box2 ref = reference_box(t.window, inner_fraction);
    const double area = ref.area();
    const ConvexPolygon refpoly = ConvexPolygon::box(ref.lo, ref.hi);
    auto counted = [&](const Vec2& p) { return periodic || in_box(p, ref); };

    // Vertices.
    const auto dirs = vertex_edge_directions(t);
    const auto ncells = vertex_cell_counts(t);
    const auto pi = pi_vertices(t);
    double n0 = 0, cells_at = 0, deg = 0, nx = 0, ny = 0, nt = 0, no = 0, npi = 0;
    for (std::size_t v = 0; v < t.vertices.size(); ++v) {
        if (t.vertex_boundary[v] || !counted(t.vertices[v])) continue;
        n0 += 1;
        cells_at += ncells[v];
        deg += static_cast<double>(dirs[v].size());
        if (pi[v]) npi += 1;
        VertexType ty = VertexType::other;
        if (dirs[v].size() >= 3) ty = classify_vertex(dirs[v]);
        switch (ty) {
            case VertexType::X: nx += 1; break;
            case VertexType::Y: ny += 1; break;
            case VertexType::T: nt += 1; break;
            case VertexType::other: no += 1; break;
        }
    }
    add(m, "gamma0", n0, area);
    add(m, "mu0", n0, area);
    add(m, "N02", cells_at, n0);
    add(m, "N01", deg, n0);
    add(m, "phi", npi, n0);
    add(m, "frac_X", nx, n0);
    add(m, "frac_Y", ny, n0);
    add(m, "frac_T", nt, n0);
    add(m, "frac_other", no, n0);

    // Edges.
    double n1 = 0, len = 0;
    Kahan mu1;
    for (const auto& e : t.edges) {
        if (e.boundary) continue;
        if (periodic) {
            mu1.add(e.length());
        } else if (const auto c = clip_segment(refpoly, e.a, e.b)) {
            mu1.add(distance(c->first, c->second));
        }
        if (!counted(e.midpoint())) continue;
        n1 += 1;
        len += e.length();
    }
    add(m, "gamma1", n1, area);
    add(m, "mu1", mu1.sum, area);
    add(m, "L1", len, n1);

    // Cells.
    double n2 = 0, corners = 0, lattice_vertices = 0;
    Kahan a2, p2, rd, mu2;
    for (const auto& c : t.cells) {
        if (periodic) {
            mu2.add(c.polygon.area());
        } else if (const auto q = intersect(c.polygon, refpoly, 0.0)) {
            mu2.add(q->area());
        }
        if (!counted(centroid(c.polygon, rule))) continue;
        n2 += 1;
        a2.add(c.polygon.area());
        p2.add(c.polygon.perimeter());
        rd.add(c.polygon.roundness());
        corners += static_cast<double>(c.polygon.size());
        lattice_vertices += static_cast<double>(c.ring.size());
    }
    add(m, "gamma2", n2, area);
    add(m, "mu2", mu2.sum, area);
    add(m, "A2", a2.sum, n2);
    add(m, "P2", p2.sum, n2);
    add(m, "RD", rd.sum, n2);
    add(m, "n2", corners, n2);
    add(m, "N20", lattice_vertices, n2);

    const SegmentCounts s = segment_decomposition(t);
    add(m, "K", static_cast<double>(s.K), 1.0);
    add(m, "J", static_cast<double>(s.J), 1.0);
    add(m, "I", static_cast<double>(s.I), 1.0);
    return m;
}

Measurements measure(const Tessellation3& t, const CentroidRule& rule, double inner_fraction) {
    Measurements m;
    const bool periodic = t.window.mode == EdgeMode::periodic;
    const Box3 ref = reference_box(t.window, inner_fraction);
    const double vol = ref.volume();
    const ConvexPolyhedron refpoly = ConvexPolyhedron::box(ref.lo, ref.hi);
    auto counted = [&](const Vec3& p) { return periodic || in_box(p, ref); };

    std::vector<int> vcells(t.vertices.size(), 0);
    for (const auto& c : t.cells) {
        std::vector<int> ids = c.vertex_ids;
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (int v : ids) ++vcells[v];
    }
    double n0 = 0, cells_at = 0;
    for (std::size_t v = 0; v < t.vertices.size(); ++v) {
        if (t.vertex_boundary[v] || !counted(t.vertices[v])) continue;
        n0 += 1;
        cells_at += vcells[v];
    }
    add(m, "gamma0", n0, vol);
    add(m, "mu0", n0, vol);
    add(m, "N03", cells_at, n0);

    double n1 = 0, len = 0;
    Kahan mu1;
    for (const auto& e : t.edges) {
        if (e.boundary) continue;
        if (periodic) {
            mu1.add(e.length());
        } else if (const auto c = clip_segment(Box3{ref.lo, ref.hi}, e.a, e.b)) {
            mu1.add(distance(c->first, c->second));
        }
        if (!counted((e.a + e.b) * 0.5)) continue;
        n1 += 1;
        len += e.length();
    }
    add(m, "gamma1", n1, vol);
    add(m, "mu1", mu1.sum, vol);
    add(m, "L1", len, n1);

    double n2 = 0, edges_per_facet = 0;
    Kahan mu2, a2, p2;
    for (const auto& f : t.facets) {
        if (f.boundary) continue;
        if (periodic) {
            mu2.add(polygon_area_3d(f.loop));
        } else {
            const auto clipped = clip_polygon_3d(f.loop, refpoly);
            if (clipped.size() >= 3) mu2.add(polygon_area_3d(clipped));
        }
        if (!counted(centroid_of_face<3>(std::span<const Vec3>(f.loop), rule))) continue;
        n2 += 1;
        a2.add(polygon_area_3d(f.loop));
        double per = 0.0;
        for (std::size_t i = 0; i < f.loop.size(); ++i) per += distance(f.loop[i], f.loop[(i + 1) % f.loop.size()]);
        p2.add(per);
        edges_per_facet += static_cast<double>(f.loop.size());
    }
    add(m, "gamma2", n2, vol);
    add(m, "mu2", mu2.sum, vol);
    add(m, "A2", a2.sum, n2);
    add(m, "P2", p2.sum, n2);
    add(m, "N21", edges_per_facet, n2);

    double n3 = 0, nverts = 0, nfacets = 0;
    Kahan mu3, v3, s3, b3, l3;
    for (const auto& c : t.cells) {
        if (periodic) {
            mu3.add(c.polyhedron.volume());
        } else {
            std::optional<ConvexPolyhedron> q = c.polyhedron;
            for (int i = 0; i < 3 && q; ++i) {
                Vec3 u{};
                u[i] = 1.0;
                q = clip_halfspace(*q, Plane3(u, ref.hi[i]), Side::below, 0.0);
                if (q) q = clip_halfspace(*q, Plane3(u, ref.lo[i]), Side::above, 0.0);
            }
            if (q) mu3.add(q->volume());
        }
        if (!counted(centroid(c.polyhedron, rule))) continue;
        n3 += 1;
        v3.add(c.polyhedron.volume());
        s3.add(c.polyhedron.surface_area());
        b3.add(c.polyhedron.mean_width());
        l3.add(c.polyhedron.total_edge_length());
        nverts += static_cast<double>(c.polyhedron.vertices().size());
        nfacets += static_cast<double>(c.polyhedron.facets().size());
    }
    add(m, "gamma3", n3, vol);
    add(m, "mu3", mu3.sum, vol);
    add(m, "V3", v3.sum, n3);
    add(m, "S3", s3.sum, n3);
    add(m, "B3", b3.sum, n3);
    add(m, "L3", l3.sum, n3);
    add(m, "N30", nverts, n3);
    add(m, "N32", nfacets, n3);
    return m;
}

CharacteristicsReport pool(const std::vector<Measurements>& reps, int dim) {
    CharacteristicsReport r;
    r.dim = dim;
    r.replicates = reps.size();
    if (reps.empty()) throw InsufficientSampleError("no replicates to pool");
    const std::string cell_key = dim == 2 ? "A2" : "V3";
    double cells = 0.0;
    for (const auto& m : reps) {
        auto it = m.find(cell_key);
        if (it != m.end()) cells += it->second.den;
    }
    if (!(cells > 0.0)) throw InsufficientSampleError("no cell centre in the reference set");
    for (const auto& [key, unused] : reps.front()) {
        Kahan num, den;
        for (const auto& m : reps) {
            auto it = m.find(key);
            if (it == m.end()) continue;
            num.add(it->second.num);
            den.add(it->second.den);
        }
        if (!(den.sum > 0.0)) continue;
        const double v = num.sum / den.sum;
        double se = std::numeric_limits<double>::quiet_NaN();
        const double n = static_cast<double>(reps.size());
        if (reps.size() > 1) {
            Kahan ss;
            for (const auto& m : reps) {
                auto it = m.find(key);
                const double a = it == m.end() ? 0.0 : it->second.num, b = it == m.end() ? 0.0 : it->second.den;
                ss.add((a - v * b) * (a - v * b));
            }
            se = std::sqrt(n / (n - 1.0) * ss.sum) / den.sum;
        }
        r.values[key] = {v, se};
    }
    return r;
}

CharacteristicsReport estimate(const Tessellation2& t, const CentroidRule& rule) { return pool({measure(t, rule)}, 2); }
CharacteristicsReport estimate(const Tessellation3& t, const CentroidRule& rule) { return pool({measure(t, rule)}, 3); }

int zero_cell(const Tessellation2& t, const Vec2& origin) {
    const int i = locate_cell(t, origin);
    if (i < 0) throw ParameterError("origin is not covered by the tessellation");
    return i;
}

double poisson_voronoi_mu(double lambda, int d, int k) {
    const double dd = d, kk = k;
    const double lg = std::lgamma(dd - kk + kk / dd) + std::lgamma((dd * dd - dd * kk + kk + 1) / 2) +
                      (dd - kk + kk / dd) * std::lgamma(1 + dd / 2) - std::lgamma((kk + 1) / 2) -
                      std::lgamma((dd * dd - dd * kk + kk) / 2) - (dd - kk) * std::lgamma((dd + 1) / 2);
    const double pre = std::pow(2.0, dd - kk + 1) * std::pow(M_PI, (dd - kk) / 2) / (dd * std::tgamma(dd - kk + 2));
    return std::pow(lambda, (dd - kk) / dd) * pre * std::exp(lg);
}

OracleValues oracle_poisson_voronoi(double lambda, int d) {
    if (!(lambda > 0.0)) throw ParameterError("lambda must be > 0");
    OracleValues o;
    o.model = d == 2 ? "pv2" : "pv3";
    auto& v = o.values;
    if (d == 2) {
        v["gamma0"] = v["mu0"] = 2 * lambda;
        v["gamma1"] = 3 * lambda;
        v["gamma2"] = lambda;
        v["mu1"] = 2 * std::sqrt(lambda);
        v["mu2"] = 1.0;
        v["N02"] = 3;
        v["N20"] = v["n2"] = 6;
        v["N01"] = 3;
        v["L1"] = 2 / (3 * std::sqrt(lambda));
        v["P2"] = 4 / std::sqrt(lambda);
        v["A2"] = 1 / lambda;
        v["phi"] = 0.0;
    } else if (d == 3) {
        const double pi2 = M_PI * M_PI;
        v["gamma0"] = v["mu0"] = 24 * pi2 / 35 * lambda;
        v["gamma1"] = 48 * pi2 / 35 * lambda;
        v["gamma2"] = (24 * pi2 / 35 + 1) * lambda;
        v["gamma3"] = lambda;
        v["mu1"] = 16.0 / 15 * std::cbrt(0.75) * std::pow(M_PI, 5.0 / 3) * std::tgamma(4.0 / 3) * std::pow(lambda, 2.0 / 3);
        v["mu2"] = 4 * std::cbrt(M_PI / 6) * std::tgamma(5.0 / 3) * std::cbrt(lambda);
        v["mu3"] = 1.0;
        v["N21"] = 144 * pi2 / (24 * pi2 + 35);
        v["N30"] = 96 * pi2 / 35;
        v["N31"] = 144 * pi2 / 35;
        v["N32"] = 48 * pi2 / 35 + 2;
        v["N03"] = 4;
        v["L1"] = 7 * std::tgamma(1.0 / 3) / (9 * std::cbrt(36 * M_PI)) / std::cbrt(lambda);
        v["A2"] = 35 * std::pow(2.0, 8.0 / 3) * std::tgamma(2.0 / 3) * std::cbrt(M_PI) / ((24 * pi2 + 35) * std::pow(9.0, 2.0 / 3)) /
                  std::pow(lambda, 2.0 / 3);
        v["P2"] = 7 * std::pow(2.0, 10.0 / 3) * std::tgamma(1.0 / 3) * std::pow(M_PI, 5.0 / 3) / ((24 * pi2 + 35) * std::cbrt(9.0)) /
                  std::cbrt(lambda);
        v["V3"] = 1 / lambda;
        v["S3"] = std::cbrt(256 * M_PI / 3) * std::tgamma(5.0 / 3) / std::pow(lambda, 2.0 / 3);
        v["B3"] = 0.2 * std::cbrt(16 * std::pow(M_PI, 5) / 243) * std::tgamma(1.0 / 3) / std::cbrt(lambda);
        // Every edge of a normal tessellation bounds three cells.
        v["L3"] = 3 * v["mu1"] / lambda;
    } else {
        throw ParameterError("Poisson-Voronoi oracle needs d = 2 or 3");
    }
    return o;
}

OracleValues oracle_poisson_line(double la) {
    if (!(la > 0.0)) throw ParameterError("length intensity must be > 0");
    const double rho = 2 * la / M_PI;
    OracleValues o;
    o.model = "plt";
    auto& v = o.values;
    v["gamma0"] = v["mu0"] = M_PI * rho * rho / 4;
    v["gamma1"] = M_PI * rho * rho / 2;
    v["gamma2"] = M_PI * rho * rho / 4;
    v["mu1"] = la;
    v["mu2"] = 1.0;
    v["L1"] = 1 / rho;
    v["A2"] = 4 / (M_PI * rho * rho);
    v["P2"] = 4 / rho;
    v["N02"] = 4;
    v["N20"] = v["n2"] = 4;
    v["N01"] = 4;
    v["phi"] = 0.0;
    v["frac_X"] = 1.0;
    return o;
}

OracleValues oracle_poisson_delaunay(double lambda) {
    if (!(lambda > 0.0)) throw ParameterError("lambda must be > 0");
    OracleValues o;
    o.model = "pdt";
    auto& v = o.values;
    const double s = std::sqrt(lambda);
    v["gamma0"] = v["mu0"] = lambda;
    v["gamma1"] = 3 * lambda;
    v["gamma2"] = 2 * lambda;
    v["L1"] = 32 / (9 * M_PI * s);
    v["mu1"] = 32 * s / (3 * M_PI);
    v["mu2"] = 1.0;
    v["A2"] = 1 / (2 * lambda);
    v["P2"] = 32 / (3 * M_PI * s);
    v["N20"] = v["n2"] = 3;
    v["N02"] = 6;
    v["N01"] = 6;
    v["phi"] = 0.0;
    return o;
}

OracleValues oracle_stit(double a) {
    const OracleValues plt = oracle_poisson_line(a);
    OracleValues o;
    o.model = "stit";
    for (const char* k : {"gamma2", "mu1", "mu2", "A2", "P2", "n2"}) o.values[k] = plt[k];
    o.values["phi"] = 1.0;
    o.values["frac_T"] = 1.0;
    return o;
}

double oracle_johnson_mehl_mu(double lambda, const MarkDistribution& q, int d, int k) {
    if (!(lambda > 0.0)) throw ParameterError("lambda must be > 0");
    if (d != 2 && d != 3) throw ParameterError("Johnson-Mehl oracle needs d = 2 or 3");
    if (!(k > 0 && k < d)) throw ParameterError("Johnson-Mehl oracle needs 0 < k < d");
    q.validate();
    const auto [smin, smax] = q.support();
    if (smin < 0.0) throw ParameterError("arrival times must be >= 0");
    const int m = d - k;
    const double dd = d, mm = m, kk = k;
    const double c = std::pow(2.0, mm + 1) * std::pow(M_PI, (mm + 1) * dd / 2) * std::tgamma((dd * mm + kk + 1) / 2) /
                     (std::tgamma(mm + 2) * std::tgamma((dd * mm + kk) / 2) * std::pow(std::tgamma((dd + 1) / 2), mm) *
                      std::tgamma((kk + 1) / 2));
    const double kappa = std::pow(M_PI, dd / 2) / std::tgamma(dd / 2 + 1);
    using boost::math::quadrature::gauss_kronrod;
    // Moments int_0^t (t - s)^p Q(ds).
    auto moment = [&](double t, int p) -> double {
        if (t <= smin) return 0.0;
        switch (q.kind) {
            case MarkDistribution::Kind::constant:
                return std::pow(t - q.a, p);
            case MarkDistribution::Kind::uniform: {
                const double hi = std::min(t, q.b);
                if (q.b == q.a) return std::pow(t - q.a, p);
                return (std::pow(t - q.a, p + 1) - std::pow(t - hi, p + 1)) / ((p + 1) * (q.b - q.a));
            }
            default: {
                double err = 0.0;
                const double v = gauss_kronrod<double, 31>::integrate(
                    [&](double s) { return std::pow(t - s, p) * q.pdf(s); }, smin, t, 15, 1e-12, &err);
                return v;
            }
        }
    };
    auto integrand = [&](double t) {
        const double g = moment(t, d - 1);
        if (g <= 0.0) return 0.0;
        return std::pow(lambda, mm + 1) * c * std::pow(g, mm + 1) * std::exp(-lambda * kappa * moment(t, d));
    };
    double err = 0.0;
    const double v = gauss_kronrod<double, 61>::integrate(integrand, smin, std::numeric_limits<double>::infinity(), 20,
                                                          1e-12, &err);
    if (!std::isfinite(v) || err > 1e-8 * std::fabs(v) + 1e-300) throw NumericError("Johnson-Mehl quadrature did not converge");
    return v;
}

ConvexPolygon sample_pdt_typical_cell(double lambda, Rng& rng) {
    if (!(lambda > 0.0)) throw ParameterError("lambda must be > 0");
    const double max_area = 3.0 * std::sqrt(3.0) / 4.0;
    std::array<double, 3> ang{};
    for (;;) {
        for (auto& a : ang) a = rng.uniform(0.0, 2 * M_PI);
        std::sort(ang.begin(), ang.end());
        const Vec2 u0 = unit_from_angle(ang[0]), u1 = unit_from_angle(ang[1]), u2 = unit_from_angle(ang[2]);
        const double area = 0.5 * std::fabs(cross(u1 - u0, u2 - u0));
        if (rng.uniform() * max_area < area) break;
    }
    const double r = std::sqrt(rng.gamma(2.0, 1.0 / (lambda * M_PI)));
    std::vector<Vec2> ring;
    for (double a : ang) ring.push_back(unit_from_angle(a) * r);
    return ConvexPolygon::from_trusted_ring(std::move(ring));
}

LambdaEstimate estimate_lambda(const CharacteristicsReport& r, const std::string& model) {
    LambdaEstimate e;
    auto& f = e.per_formula;
    auto have = [&](const char* k) { return r.has(k) && std::isfinite(r[k]) && r[k] > 0.0; };
    if (model == "pv2") {
        if (have("gamma2")) f["gamma2"] = r["gamma2"];
        if (have("gamma0")) f["gamma0"] = r["gamma0"] / 2;
        if (have("gamma1")) f["gamma1"] = r["gamma1"] / 3;
        if (have("mu1")) f["mu1"] = std::pow(r["mu1"] / 2, 2);
        if (have("A2")) f["A2"] = 1 / r["A2"];
    } else if (model == "pv3") {
        const OracleValues unit = oracle_poisson_voronoi(1.0, 3);
        if (have("gamma3")) f["gamma3"] = r["gamma3"];
        if (have("gamma0")) f["gamma0"] = r["gamma0"] / unit["gamma0"];
        if (have("mu1")) f["mu1"] = std::pow(r["mu1"] / unit["mu1"], 1.5);
        if (have("mu2")) f["mu2"] = std::pow(r["mu2"] / unit["mu2"], 3);
        if (have("V3")) f["V3"] = 1 / r["V3"];
    } else if (model == "plt") {
        // rho = 2 L_A / pi; lambda is the length intensity L_A.
        if (have("mu1")) f["mu1"] = r["mu1"];
        if (have("gamma0")) f["gamma0"] = M_PI / 2 * std::sqrt(4 * r["gamma0"] / M_PI);
        if (have("A2")) f["A2"] = M_PI / 2 * std::sqrt(4 / (M_PI * r["A2"]));
        if (have("L1")) f["L1"] = M_PI / (2 * r["L1"]);
    } else if (model == "pdt") {
        if (have("gamma0")) f["gamma0"] = r["gamma0"];
        if (have("gamma1")) f["gamma1"] = r["gamma1"] / 3;
        if (have("gamma2")) f["gamma2"] = r["gamma2"] / 2;
        if (have("A2")) f["A2"] = 1 / (2 * r["A2"]);
    } else {
        throw ParameterError("estimate_lambda: unknown model '" + model + "' (pv2, pv3, plt, pdt)");
    }
    if (f.empty()) throw InsufficientSampleError("report carries no invertible characteristic");
    double sum = 0.0, lo = INFINITY, hi = -INFINITY;
    for (const auto& [k, v] : f) {
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    e.lambda = sum / static_cast<double>(f.size());
    e.spread = hi - lo;
    return e;
}

}  // namespace tessera
