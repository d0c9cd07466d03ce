#include "tessera/raster.hpp"

#include <algorithm>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/lognormal.hpp>
#include <cmath>
#include <limits>
#include <numeric>

#include "tessera/errors.hpp"

namespace tessera {

const char* to_string(RasterModel m) {
    switch (m) {
        case RasterModel::voronoi_l1: return "voronoi_l1";
        case RasterModel::voronoi_l2: return "voronoi_l2";
        case RasterModel::voronoi_linf: return "voronoi_linf";
        case RasterModel::johnson_mehl: return "johnson_mehl";
        case RasterModel::multiplicative: return "multiplicative";
        case RasterModel::gbpd: return "gbpd";
    }
    return "voronoi_l2";
}

RasterModel parse_raster_model(const std::string& s) {
    for (auto m : {RasterModel::voronoi_l1, RasterModel::voronoi_l2, RasterModel::voronoi_linf, RasterModel::johnson_mehl,
                   RasterModel::multiplicative, RasterModel::gbpd})
        if (s == to_string(m)) return m;
    if (s == "l1" || s == "manhattan") return RasterModel::voronoi_l1;
    if (s == "l2" || s == "voronoi" || s == "euclidean") return RasterModel::voronoi_l2;
    if (s == "linf" || s == "max") return RasterModel::voronoi_linf;
    if (s == "jm") return RasterModel::johnson_mehl;
    throw ParameterError("unknown raster model '" + s +
                         "' (voronoi_l1, voronoi_l2, voronoi_linf, johnson_mehl, multiplicative, gbpd)");
}

RasterTessellation make_grid(const Window2& w, int resolution) {
    if (resolution < 16) throw ParameterError("raster resolution must be >= 16");
    RasterTessellation r;
    r.window = w;
    r.nx = resolution;
    r.pixel = w.extent(0) / resolution;
    r.ny = std::max(1, static_cast<int>(std::lround(w.extent(1) / r.pixel)));
    if (static_cast<double>(r.nx) * r.ny > 4e8) throw ResourceError("raster grid too large");
    r.labels.assign(static_cast<std::size_t>(r.nx) * r.ny, -1);
    return r;
}

namespace {

struct Site {
    Vec2 x;
    double r = 0.0;
    double w = 1.0;
    Matrix<2> m{{1, 0, 0, 1}};
    int label = 0;
};

double discrepancy(RasterModel model, const Site& s, const Vec2& y) {
    const double dx = y[0] - s.x[0], dy = y[1] - s.x[1];
    switch (model) {
        case RasterModel::voronoi_l1: return std::fabs(dx) + std::fabs(dy);
        case RasterModel::voronoi_l2: return dx * dx + dy * dy;
        case RasterModel::voronoi_linf: return std::max(std::fabs(dx), std::fabs(dy));
        case RasterModel::johnson_mehl: return std::sqrt(dx * dx + dy * dy) - s.r;
        case RasterModel::multiplicative: return s.w * std::sqrt(dx * dx + dy * dy);
        case RasterModel::gbpd:
            return s.m[0] * dx * dx + (s.m[1] + s.m[2]) * dx * dy + s.m[3] * dy * dy - s.w;
    }
    return 0.0;
}

/// Pixel columns whose centres lie in [xl, xr].
std::pair<int, int> column_range(const RasterTessellation& r, double xl, double xr) {
    const double a = (xl - r.window.lo[0]) / r.pixel - 0.5;
    const double b = (xr - r.window.lo[0]) / r.pixel - 0.5;
    int i0 = static_cast<int>(std::ceil(a)), i1 = static_cast<int>(std::floor(b));
    i0 = std::max(i0, 0);
    i1 = std::min(i1, r.nx - 1);
    return {i0, i1};
}

/// Calls f(ix, iy) for each pixel centre inside the convex polygon.
template <class F>
void scan_polygon(const RasterTessellation& r, const std::vector<Vec2>& ring, F&& f) {
    double ylo = INFINITY, yhi = -INFINITY;
    for (const auto& p : ring) {
        ylo = std::min(ylo, p[1]);
        yhi = std::max(yhi, p[1]);
    }
    int j0 = std::max(0, static_cast<int>(std::ceil((ylo - r.window.lo[1]) / r.pixel - 0.5)));
    int j1 = std::min(r.ny - 1, static_cast<int>(std::floor((yhi - r.window.lo[1]) / r.pixel - 0.5)));
    const std::size_t n = ring.size();
    for (int iy = j0; iy <= j1; ++iy) {
        const double y = r.window.lo[1] + (iy + 0.5) * r.pixel;
        double xl = INFINITY, xr = -INFINITY;
        for (std::size_t k = 0; k < n; ++k) {
            const Vec2& a = ring[k];
            const Vec2& b = ring[(k + 1) % n];
            if ((a[1] <= y && b[1] >= y) || (b[1] <= y && a[1] >= y)) {
                if (a[1] == b[1]) {
                    xl = std::min({xl, a[0], b[0]});
                    xr = std::max({xr, a[0], b[0]});
                } else {
                    const double x = a[0] + (y - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
                    xl = std::min(xl, x);
                    xr = std::max(xr, x);
                }
            }
        }
        if (!(xl <= xr)) continue;
        const auto [i0, i1] = column_range(r, xl, xr);
        for (int ix = i0; ix <= i1; ++ix) f(ix, iy);
    }
}

template <class F>
void scan_disc(const RasterTessellation& r, const Vec2& c, double rad, F&& f) {
    int j0 = std::max(0, static_cast<int>(std::ceil((c[1] - rad - r.window.lo[1]) / r.pixel - 0.5)));
    int j1 = std::min(r.ny - 1, static_cast<int>(std::floor((c[1] + rad - r.window.lo[1]) / r.pixel - 0.5)));
    for (int iy = j0; iy <= j1; ++iy) {
        const double y = r.window.lo[1] + (iy + 0.5) * r.pixel;
        const double h2 = rad * rad - (y - c[1]) * (y - c[1]);
        if (h2 < 0.0) continue;
        const double h = std::sqrt(h2);
        const auto [i0, i1] = column_range(r, c[0] - h, c[0] + h);
        for (int ix = i0; ix <= i1; ++ix) f(ix, iy);
    }
}

}  // namespace

RasterTessellation raster_assign(const PointPattern2& p, RasterModel model, int resolution, Backend backend) {
    if (p.empty()) throw ParameterError("raster assignment needs at least one generator");
    p.validate();
    const std::size_t n = p.size();
    if (model == RasterModel::johnson_mehl && p.radii.size() != n)
        throw ParameterError("johnson_mehl raster needs radii marks");
    if (model == RasterModel::multiplicative) {
        if (p.weights.size() != n) throw ParameterError("multiplicative raster needs weights");
        for (double w : p.weights)
            if (!(w > 0.0)) throw ParameterError("multiplicative weights must be > 0");
    }
    if (model == RasterModel::gbpd && (p.matrices.size() != n || p.weights.size() != n))
        throw ParameterError("gbpd raster needs matrices and weights");

    RasterTessellation r = make_grid(p.window, resolution);
    r.model = std::string("raster-") + to_string(model);
    r.generators = p;

    const bool periodic = p.window.mode == EdgeMode::periodic;
    std::vector<Site> sites;
    const Vec2 size = p.window.size();
    for (int sx = 0; sx < (periodic ? 3 : 1); ++sx)
        for (int sy = 0; sy < (periodic ? 3 : 1); ++sy) {
            const Vec2 shift{{periodic ? (sx == 0 ? 0.0 : sx == 1 ? -size[0] : size[0]) : 0.0,
                              periodic ? (sy == 0 ? 0.0 : sy == 1 ? -size[1] : size[1]) : 0.0}};
            for (std::size_t i = 0; i < n; ++i) {
                Site s;
                s.x = p.points[i] + shift;
                if (!p.radii.empty()) s.r = p.radii[i];
                if (!p.weights.empty()) s.w = p.weights[i];
                if (!p.matrices.empty()) s.m = p.matrices[i];
                s.label = static_cast<int>(i);
                sites.push_back(s);
            }
        }

    auto row = [&](int iy) {
        for (int ix = 0; ix < r.nx; ++ix) {
            const Vec2 y = r.pixel_center(ix, iy);
            double best = std::numeric_limits<double>::infinity();
            int lab = -1;
            for (const auto& s : sites) {
                const double d = discrepancy(model, s, y);
                if (d < best || (d == best && s.label < lab)) {
                    best = d;
                    lab = s.label;
                }
            }
            r.labels[static_cast<std::size_t>(iy) * r.nx + ix] = lab;
        }
    };
    if (backend == Backend::parallel) {
#pragma omp parallel for schedule(static)
        for (int iy = 0; iy < r.ny; ++iy) row(iy);
    } else {
        for (int iy = 0; iy < r.ny; ++iy) row(iy);
    }
    return r;
}

RasterTessellation rasterize(const Tessellation2& t, int resolution) {
    RasterTessellation r = make_grid(t.window, resolution);
    r.model = t.model;
    r.generators = t.generators;
    r.generators.window = t.window;
    const bool periodic = t.window.mode == EdgeMode::periodic;
    const Vec2 size = t.window.size();
    for (std::size_t c = 0; c < t.cells.size(); ++c) {
        const auto& cell = t.cells[c];
        const int lab = cell.generator >= 0 ? cell.generator : static_cast<int>(c);
        const std::vector<Vec2>& ring = cell.polygon.ring();
        for (int sx = -1; sx <= 1; ++sx)
            for (int sy = -1; sy <= 1; ++sy) {
                if (!periodic && (sx || sy)) continue;
                std::vector<Vec2> moved = ring;
                for (auto& q : moved) q += Vec2{{sx * size[0], sy * size[1]}};
                scan_polygon(r, moved, [&](int ix, int iy) {
                    auto& l = r.labels[static_cast<std::size_t>(iy) * r.nx + ix];
                    if (l < 0) l = lab;
                });
            }
    }
    for (int iy = 0; iy < r.ny; ++iy)
        for (int ix = 0; ix < r.nx; ++ix) {
            auto& l = r.labels[static_cast<std::size_t>(iy) * r.nx + ix];
            if (l >= 0) continue;
            const int c = locate_cell(t, r.pixel_center(ix, iy));
            if (c >= 0) {
                l = t.cells[c].generator >= 0 ? t.cells[c].generator : c;
            } else {
                l = ix > 0 ? r.labels[static_cast<std::size_t>(iy) * r.nx + ix - 1] : 0;
            }
        }
    return r;
}

double label_agreement(const RasterTessellation& a, const RasterTessellation& b) {
    if (a.nx != b.nx || a.ny != b.ny) throw ParameterError("raster grids differ");
    std::size_t same = 0;
    for (std::size_t i = 0; i < a.labels.size(); ++i) same += a.labels[i] == b.labels[i];
    return static_cast<double>(same) / static_cast<double>(a.labels.size());
}

std::vector<RasterCell> extract_raster_stats(const RasterTessellation& rt) {
    const int nx = rt.nx, ny = rt.ny;
    if (nx <= 0 || ny <= 0 || rt.labels.size() != static_cast<std::size_t>(nx) * ny)
        throw FormatError("raster grid size does not match its labels");
    std::int32_t maxlab = -1;
    for (auto l : rt.labels) {
        if (l < 0) throw FormatError("unlabelled raster pixel");
        maxlab = std::max(maxlab, l);
    }
    const bool periodic = rt.window.mode == EdgeMode::periodic;
    std::vector<std::size_t> count(maxlab + 1, 0);
    std::vector<Vec2> sum(maxlab + 1, Vec2{});
    std::vector<std::set<std::int32_t>> nb(maxlab + 1);
    std::vector<int> parent(rt.labels.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto link = [&](int a, int b) {
        const auto la = rt.labels[a], lb = rt.labels[b];
        if (la == lb) {
            parent[find(a)] = find(b);
        } else {
            nb[la].insert(lb);
            nb[lb].insert(la);
        }
    };
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const int k = iy * nx + ix;
            const auto l = rt.labels[k];
            ++count[l];
            sum[l] += rt.pixel_center(ix, iy);
            if (ix + 1 < nx) link(k, k + 1);
            else if (periodic && nx > 1) link(k, iy * nx);
            if (iy + 1 < ny) link(k, k + nx);
            else if (periodic && ny > 1) link(k, ix);
        }
    std::vector<int> comps(maxlab + 1, 0);
    for (std::size_t k = 0; k < rt.labels.size(); ++k)
        if (find(static_cast<int>(k)) == static_cast<int>(k)) ++comps[rt.labels[k]];
    std::vector<RasterCell> out;
    for (std::int32_t l = 0; l <= maxlab; ++l) {
        if (count[l] == 0) continue;
        RasterCell c;
        c.label = l;
        c.pixels = count[l];
        c.area = static_cast<double>(count[l]) * rt.pixel_area();
        c.centroid = sum[l] * (1.0 / static_cast<double>(count[l]));
        c.neighbors = std::move(nb[l]);
        c.components = comps[l];
        out.push_back(std::move(c));
    }
    return out;
}

Measurements measure_raster(const RasterTessellation& rt, double inner_fraction) {
    const auto cells = extract_raster_stats(rt);
    const bool periodic = rt.window.mode == EdgeMode::periodic;
    const Box2 ref = reference_box(rt.window, inner_fraction);
    auto inside = [&](const Vec2& p) {
        return periodic || (p[0] >= ref.lo[0] && p[0] < ref.hi[0] && p[1] >= ref.lo[1] && p[1] < ref.hi[1]);
    };
    Measurements m;
    double n = 0, area = 0, nbs = 0, comps = 0;
    for (const auto& c : cells) {
        if (!inside(c.centroid)) continue;
        n += 1;
        area += c.area;
        nbs += static_cast<double>(c.neighbors.size());
        comps += c.components;
    }
    const double ref_area = ref.area();
    m["gamma2"] = {n, ref_area};
    m["A2"] = {area, n};
    m["N22"] = {nbs, n};
    m["components"] = {comps, n};
    m["mu2"] = {1.0, 1.0};

    // Transitions between pixel pairs whose midpoint lies in the reference box.
    const int nx = rt.nx, ny = rt.ny;
    double straight = 0, diagonal = 0;
    auto lab = [&](int ix, int iy, bool& ok) -> std::int32_t {
        if (periodic) {
            ix = (ix + nx) % nx;
            iy = (iy + ny) % ny;
        } else if (ix < 0 || iy < 0 || ix >= nx || iy >= ny) {
            ok = false;
            return -1;
        }
        return rt.at(ix, iy);
    };
    static const int dirs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const auto l = rt.at(ix, iy);
            const Vec2 c = rt.pixel_center(ix, iy);
            for (int d = 0; d < 4; ++d) {
                bool ok = true;
                const auto o = lab(ix + dirs[d][0], iy + dirs[d][1], ok);
                if (!ok || o == l) continue;
                const Vec2 mid = c + Vec2{{0.5 * dirs[d][0] * rt.pixel, 0.5 * dirs[d][1] * rt.pixel}};
                if (!inside(mid)) continue;
                (d < 2 ? straight : diagonal) += 1;
            }
        }
    const double length = M_PI / 8.0 * rt.pixel * (straight + diagonal / std::sqrt(2.0));
    m["mu1"] = {length, ref_area};
    return m;
}

CharacteristicsReport estimate_raster(const RasterTessellation& rt, double inner_fraction) {
    const Measurements m = measure_raster(rt, inner_fraction);
    if (!(m.at("gamma2").num > 0.0)) throw InsufficientSampleError("no raster cell centre in the reference set");
    return pool({m}, 2);
}

void LeafModel::validate() const {
    size.validate();
    const auto [lo, hi] = size.support();
    if (!(hi > 0.0)) throw ParameterError("leaf size must be > 0");
    if (lo < 0.0) throw ParameterError("leaf size must be >= 0");
    if (shape == Shape::polygon) {
        if (polygon.size() < 3) throw ParameterError("leaf polygon template needs >= 3 vertices");
        double a = 0.0;
        for (std::size_t i = 0; i < polygon.size(); ++i) a += cross(polygon[i], polygon[(i + 1) % polygon.size()]);
        if (!(a > 0.0)) throw ParameterError("leaf polygon template must have positive area (counterclockwise)");
    }
}

double LeafModel::reach(double s) const {
    if (shape != Shape::polygon) return s;
    double r = 0.0;
    for (const auto& p : polygon) r = std::max(r, norm(p));
    return r * s;
}

namespace {

double upper_size(const MarkDistribution& q) {
    const auto [lo, hi] = q.support();
    if (std::isfinite(hi)) return hi;
    const double p = 1.0 - 1e-9;
    if (q.kind == MarkDistribution::Kind::lognormal) return boost::math::quantile(boost::math::lognormal(q.a, q.b), p);
    return boost::math::quantile(boost::math::gamma_distribution<>(q.a, q.b), p);
}

}  // namespace

RasterTessellation dead_leaves(const Window2& w, const LeafModel& leaves, int resolution, const Seed& seed,
                               std::size_t max_leaves) {
    if (resolution < 64) throw ParameterError("dead leaves resolution must be >= 64");
    leaves.validate();
    RasterTessellation r = make_grid(w, resolution);
    r.model = "dead-leaves";
    r.generators.window = w;
    const double reach = leaves.reach(upper_size(leaves.size));
    if (!std::isfinite(reach)) throw ParameterError("leaf size distribution has no usable upper bound");
    if (!std::isfinite(leaves.size.support().second))
        r.warnings.push_back("leaf sizes above the 1 - 1e-9 quantile land only near the window");
    const Vec2 lo = w.lo - Vec2{{reach, reach}}, hi = w.hi + Vec2{{reach, reach}};
    Rng rng(seed.derive("leaves"));
    std::size_t uncovered = r.labels.size();
    std::size_t drawn = 0;
    while (uncovered > 0) {
        if (drawn >= max_leaves) throw ResourceError("dead leaves did not cover the window within the leaf limit");
        const double s = leaves.size.sample(rng);
        const Vec2 c{{rng.uniform(lo[0], hi[0]), rng.uniform(lo[1], hi[1])}};
        const double theta = rng.uniform(0.0, 2.0 * M_PI);
        const std::int64_t id = static_cast<std::int64_t>(drawn++);
        if (!(s > 0.0)) continue;
        const auto label = static_cast<std::int32_t>(r.leaf_ids.size());
        std::size_t claimed = 0;
        auto claim = [&](int ix, int iy) {
            auto& l = r.labels[static_cast<std::size_t>(iy) * r.nx + ix];
            if (l >= 0) return;
            l = label;
            ++claimed;
        };
        if (leaves.shape == LeafModel::Shape::disc) {
            scan_disc(r, c, s, claim);
        } else {
            std::vector<Vec2> ring;
            if (leaves.shape == LeafModel::Shape::triangle) {
                for (int k = 0; k < 3; ++k) ring.push_back(c + unit_from_angle(theta + 2.0 * M_PI * k / 3.0) * s);
            } else {
                const double ct = std::cos(theta), st = std::sin(theta);
                for (const auto& p : leaves.polygon)
                    ring.push_back(c + Vec2{{s * (ct * p[0] - st * p[1]), s * (st * p[0] + ct * p[1])}});
            }
            scan_polygon(r, ring, claim);
        }
        if (claimed == 0) continue;
        uncovered -= claimed;
        r.leaf_ids.push_back(id);
        r.generators.points.push_back(c);
        r.generators.radii.push_back(s);
    }
    return r;
}

}  // namespace tessera
