#include "tessera/division.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "tessera/errors.hpp"
#include "tessera/lines.hpp"

namespace tessera {

const char* to_string(Lifetime l) { return l == Lifetime::stit ? "L_STIT" : "L_AREA"; }

const char* to_string(Division d) {
    switch (d) {
        case Division::stit: return "D_STIT";
        case Division::gauss: return "D_GAUSS";
        case Division::rdmin: return "D_RDMIN";
        case Division::rdssq: return "D_RDSSQ";
    }
    return "D_STIT";
}

Lifetime parse_lifetime(const std::string& s) {
    if (s == "L_STIT" || s == "stit") return Lifetime::stit;
    if (s == "L_AREA" || s == "area") return Lifetime::area;
    throw ParameterError("unknown lifetime rule '" + s + "'");
}

Division parse_division(const std::string& s) {
    if (s == "D_STIT" || s == "stit") return Division::stit;
    if (s == "D_GAUSS" || s == "gauss") return Division::gauss;
    if (s == "D_RDMIN" || s == "rdmin") return Division::rdmin;
    if (s == "D_RDSSQ" || s == "rdssq") return Division::rdssq;
    throw ParameterError("unknown division rule '" + s + "'");
}

void DivisionConfig::validate() const {
    if (!(asa_min_angle >= 0.0 && asa_min_angle < M_PI / 2)) throw ParameterError("asa_min_angle must lie in [0, pi/2)");
    if ((stop_time > 0.0) == (target_cells > 0)) throw ParameterError("give exactly one of stop_time and target_cells");
    if (!std::isfinite(stop_time) || stop_time < 0.0) throw ParameterError("stop_time must be finite and >= 0");
    if (rose.dim() != 2) throw ParameterError("cell division needs a planar rose");
}

namespace {

std::uint64_t child_key(std::uint64_t key, int side) { return splitmix64(key ^ (side ? 0xa5a5a5a5a5a5a5a5ULL : 0x5a5a5a5a5a5a5a5aULL)); }

Rng cell_rng(const Seed& seed, std::uint64_t key) { return Rng(Seed{seed.master, seed.replicate, key}); }

double min_side_angle(const ConvexPolygon& p, const Line2& h) {
    const auto c = chord(p, h);
    if (!c) return 0.0;
    const Vec2 t = perp(h.normal);
    double worst = M_PI / 2;
    const auto& r = p.ring();
    for (const Vec2& q : *c) {
        double best = INFINITY;
        std::size_t side = 0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            const Vec2 a = r[i], b = r[(i + 1) % r.size()];
            const Vec2 e = b - a;
            const double s = std::clamp(dot(q - a, e) / norm2(e), 0.0, 1.0);
            const double d = distance(q, a + e * s);
            if (d < best) {
                best = d;
                side = i;
            }
        }
        const Vec2 e = normalized(r[(side + 1) % r.size()] - r[side]);
        worst = std::min(worst, std::acos(std::min(1.0, std::fabs(dot(t, e)))));
    }
    return worst;
}

double objective(const ConvexPolygon& p, const Vec2& u, double r, Division rule) {
    const Line2 h(u, r);
    const auto a = clip_halfspace(p, h, Side::below, 0.0);
    const auto b = clip_halfspace(p, h, Side::above, 0.0);
    if (!a || !b) return -1.0;
    const double ra = a->roundness(), rb = b->roundness();
    return rule == Division::rdmin ? std::min(ra, rb) : ra * ra + rb * rb;
}

/// Offset maximizing the shape objective for direction u: coarse grid, then
/// golden-section refinement around the best node.
double optimize_offset(const ConvexPolygon& p, const Vec2& u, Division rule) {
    const auto [lo, hi] = p.support_interval(u);
    constexpr int n = 16;
    const double step = (hi - lo) / (n + 1);
    int best = 1;
    double fbest = -INFINITY;
    for (int i = 1; i <= n; ++i) {
        const double f = objective(p, u, lo + i * step, rule);
        if (f > fbest) {
            fbest = f;
            best = i;
        }
    }
    double a = lo + (best - 1) * step, b = lo + (best + 1) * step;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = objective(p, u, x1, rule), f2 = objective(p, u, x2, rule);
    for (int it = 0; it < 40; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = objective(p, u, x2, rule);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = objective(p, u, x1, rule);
        }
    }
    return 0.5 * (a + b);
}

Line2 draw_split(const ConvexPolygon& p, const DivisionConfig& cfg, Rng& rng) {
    switch (cfg.division) {
        case Division::stit:
            return sample_chord(p, cfg.rose, rng);
        case Division::gauss: {
            const Vec2 u = cfg.rose.sample2(rng);
            const auto [lo, hi] = p.support_interval(u);
            const double mu = dot(p.centroid(), u), sd = (hi - lo) / 6.0;
            for (int i = 0; i < 1000; ++i) {
                const double r = rng.normal(mu, sd);
                if (r > lo && r < hi) return Line2(u, r);
            }
            return Line2(u, mu);
        }
        case Division::rdmin:
        case Division::rdssq: {
            const Vec2 u = sample_chord(p, cfg.rose, rng).normal;
            return Line2(u, optimize_offset(p, u, cfg.division));
        }
    }
    return sample_chord(p, cfg.rose, rng);
}

struct Live {
    ConvexPolygon poly;
    std::uint64_t key = 0;
    double death = 0.0;
    int depth = 0;
};

struct Later {
    bool operator()(const Live& a, const Live& b) const {
        return a.death > b.death || (a.death == b.death && a.key > b.key);
    }
};

double rate_of(const ConvexPolygon& p, const DivisionConfig& cfg) {
    return cfg.lifetime == Lifetime::stit ? cfg.rose.hitting_measure(p) : p.area();
}

}  // namespace

Tessellation2 cell_division(const Window2& w, const DivisionConfig& cfg, const Seed& seed) {
    w.validate();
    cfg.validate();
    if (w.mode == EdgeMode::periodic) throw ParameterError("cell division does not support periodic windows");
    const ConvexPolygon domain = ConvexPolygon::box(w.sim_lo(), w.sim_hi());
    const double min_area = 1e-12 * domain.area();
    Tessellation2 t;
    t.window = w;
    std::priority_queue<Live, std::vector<Live>, Later> queue;
    std::vector<ConvexPolygon> frozen;
    std::vector<int> frozen_depth;
    const double stop = cfg.stop_time > 0.0 ? cfg.stop_time : INFINITY;
    auto schedule = [&](ConvexPolygon p, std::uint64_t key, double birth, int depth) {
        Rng rng = cell_rng(seed, key);
        const double d = birth + rng.exponential(rate_of(p, cfg));
        if (d > stop) {
            frozen.push_back(std::move(p));
            frozen_depth.push_back(depth);
        } else {
            queue.push({std::move(p), key, d, depth});
        }
    };
    schedule(domain, splitmix64(seed.tag ^ hash_tag("division-root")), 0.0, 0);
    std::size_t asa_exhausted = 0;
    while (!queue.empty()) {
        if (cfg.target_cells > 0 && queue.size() + frozen.size() >= cfg.target_cells) break;
        if (queue.size() + frozen.size() > cfg.max_cells) throw ResourceError("cell division exceeded the cell limit");
        Live c = queue.top();
        queue.pop();
        Rng rng = cell_rng(seed, c.key);
        rng.exponential(1.0);  // the lifetime draw
        Line2 h = draw_split(c.poly, cfg, rng);
        if (cfg.asa_min_angle > 0.0) {
            int tries = 1;
            while (min_side_angle(c.poly, h) < cfg.asa_min_angle && tries < 100) {
                h = draw_split(c.poly, cfg, rng);
                ++tries;
            }
            if (tries == 100 && min_side_angle(c.poly, h) < cfg.asa_min_angle) ++asa_exhausted;
        }
        auto a = clip_halfspace(c.poly, h, Side::below, min_area);
        auto b = clip_halfspace(c.poly, h, Side::above, min_area);
        if (!a || !b) {
            // Sliver split: the cell survives with a fresh clock.
            const std::uint64_t key = child_key(c.key, 2);
            Rng again = cell_rng(seed, key);
            const double d = c.death + again.exponential(rate_of(c.poly, cfg));
            if (d > stop) {
                frozen.push_back(std::move(c.poly));
                frozen_depth.push_back(c.depth);
            } else {
                queue.push({std::move(c.poly), key, d, c.depth});
            }
            continue;
        }
        if (const auto ch = chord(c.poly, h)) t.segments.push_back(*ch);
        schedule(std::move(*a), child_key(c.key, 0), c.death, c.depth + 1);
        schedule(std::move(*b), child_key(c.key, 1), c.death, c.depth + 1);
    }
    while (!queue.empty()) {
        frozen.push_back(queue.top().poly);
        frozen_depth.push_back(queue.top().depth);
        queue.pop();
    }
    if (asa_exhausted > 0)
        t.warnings.push_back("ASA: " + std::to_string(asa_exhausted) + " splits accepted after 100 rejected proposals");
    for (std::size_t i = 0; i < frozen.size(); ++i) {
        Cell2 cell;
        cell.polygon = std::move(frozen[i]);
        cell.tag = frozen_depth[i];
        t.cells.push_back(std::move(cell));
    }
    t.model = "division";
    t.params = {{"lifetime", to_string(cfg.lifetime)},
                {"division", to_string(cfg.division)},
                {"asa_min_angle", cfg.asa_min_angle},
                {"stop_time", cfg.stop_time},
                {"target_cells", cfg.target_cells}};
    build_lattice(t);
    return t;
}

Tessellation2 stit(const Window2& w, double a, const DirectionRose& rose, const Seed& seed) {
    if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("STIT stopping time must be > 0");
    DivisionConfig cfg;
    cfg.rose = rose;
    cfg.stop_time = a;
    Tessellation2 t = cell_division(w, cfg, seed);
    t.model = "stit";
    t.params = {{"a", a}};
    return t;
}

Tessellation2 stit_reference(const Window2& w, double a, const DirectionRose& rose, const Seed& seed) {
    w.validate();
    if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("STIT stopping time must be > 0");
    const ConvexPolygon domain = ConvexPolygon::box(w.sim_lo(), w.sim_hi());
    const double rate = rose.hitting_measure(domain);
    const double min_area = 1e-12 * domain.area();
    Tessellation2 t;
    t.window = w;
    t.model = "stit";
    t.params = {{"a", a}, {"engine", "reference"}};
    struct Job {
        ConvexPolygon poly;
        std::uint64_t key;
        double time;
    };
    std::vector<Job> stack{{domain, splitmix64(seed.tag ^ hash_tag("stit-reference")), 0.0}};
    std::vector<ConvexPolygon> cells;
    while (!stack.empty()) {
        Job j = std::move(stack.back());
        stack.pop_back();
        Rng rng = cell_rng(seed, j.key);
        double time = j.time;
        bool split = false;
        while (true) {
            time += rng.exponential(rate);
            if (time > a) break;
            const Line2 h = sample_chord(domain, rose, rng);
            auto lo = clip_halfspace(j.poly, h, Side::below, min_area);
            auto hi = clip_halfspace(j.poly, h, Side::above, min_area);
            if (!lo || !hi) continue;
            if (const auto ch = chord(j.poly, h)) t.segments.push_back(*ch);
            stack.push_back({std::move(*lo), child_key(j.key, 0), time});
            stack.push_back({std::move(*hi), child_key(j.key, 1), time});
            split = true;
            break;
        }
        if (!split) cells.push_back(std::move(j.poly));
        if (cells.size() + stack.size() > 1'000'000) throw ResourceError("STIT exceeded the cell limit");
    }
    for (auto& p : cells) {
        Cell2 c;
        c.polygon = std::move(p);
        t.cells.push_back(std::move(c));
    }
    build_lattice(t);
    return t;
}

namespace {

double ray_exit(const Vec2& x, const Vec2& d, const Vec2& lo, const Vec2& hi) {
    double t = INFINITY;
    for (int i = 0; i < 2; ++i) {
        if (d[i] > 0.0) t = std::min(t, (hi[i] - x[i]) / d[i]);
        if (d[i] < 0.0) t = std::min(t, (lo[i] - x[i]) / d[i]);
    }
    return std::max(t, 0.0);
}

}  // namespace

Tessellation2 gilbert(const Window2& w, double lambda, GilbertMode mode, const Seed& seed) {
    w.validate();
    if (!(lambda > 0.0)) throw ParameterError("Gilbert intensity must be > 0");
    if (w.mode == EdgeMode::periodic) throw ParameterError("Gilbert does not support periodic windows");
    const PointPattern2 seeds = sample_poisson<2>(w, lambda, seed.derive("seeds"));
    Rng rng(seed.derive("directions"));
    const std::size_t n = seeds.size();
    const Vec2 lo = w.sim_lo(), hi = w.sim_hi();
    std::vector<Vec2> origin(2 * n), dir(2 * n);
    std::vector<double> exit(2 * n), stop(2 * n, INFINITY);
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 d;
        if (mode == GilbertMode::isotropic) {
            d = unit_from_angle(rng.uniform(0.0, M_PI));
        } else {
            d = rng.coin() ? Vec2{{1.0, 0.0}} : Vec2{{0.0, 1.0}};
        }
        for (int k = 0; k < 2; ++k) {
            origin[2 * i + k] = seeds.points[i];
            dir[2 * i + k] = k == 0 ? d : -d;
            exit[2 * i + k] = ray_exit(seeds.points[i], dir[2 * i + k], lo, hi);
        }
    }
    struct Event {
        double time;
        std::size_t arm;
        std::size_t other;  // == arm for the boundary
        double other_time;
        bool operator>(const Event& e) const { return time > e.time || (time == e.time && arm > e.arm); }
    };
    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
    for (std::size_t a = 0; a < 2 * n; ++a) queue.push({exit[a], a, a, 0.0});
    for (std::size_t a = 0; a < 2 * n; ++a) {
        for (std::size_t b = a + 1; b < 2 * n; ++b) {
            if (a / 2 == b / 2) continue;
            const double den = cross(dir[a], dir[b]);
            if (std::fabs(den) < 1e-14) continue;
            const Vec2 q = origin[b] - origin[a];
            const double s = cross(q, dir[b]) / den;
            const double r = cross(q, dir[a]) / den;
            if (s < 0.0 || r < 0.0 || s > exit[a] || r > exit[b]) continue;
            if (std::fabs(s - r) <= 1e-12) {
                queue.push({b > a ? r : s, std::max(a, b), std::min(a, b), b > a ? s : r});
            } else if (s > r) {
                queue.push({s, a, b, r});
            } else {
                queue.push({r, b, a, s});
            }
        }
    }
    while (!queue.empty()) {
        const Event e = queue.top();
        queue.pop();
        if (std::isfinite(stop[e.arm])) continue;
        if (e.other != e.arm && stop[e.other] < e.other_time) continue;
        stop[e.arm] = e.time;
    }
    Tessellation2 t;
    t.window = w;
    t.model = "gilbert";
    t.params = {{"lambda", lambda}, {"mode", mode == GilbertMode::isotropic ? "isotropic" : "rectangular"}};
    t.generators = seeds;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 p = origin[2 * i] + dir[2 * i] * stop[2 * i];
        const Vec2 q = origin[2 * i + 1] + dir[2 * i + 1] * stop[2 * i + 1];
        t.segments.push_back({q, p});
    }
    for (auto& poly : polygonize(t.segments, ConvexPolygon::box(lo, hi))) {
        Cell2 c;
        c.polygon = std::move(poly);
        t.cells.push_back(std::move(c));
    }
    build_lattice(t);
    return t;
}

Tessellation2 acs(const ConvexPolygon& region, double lambda, const Seed& seed) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ParameterError("ACS intensity must be finite and >= 0");
    Rng line_rng(seed.derive("boundary-lines"));
    const auto lines = sample_poisson_lines(region, lambda, DirectionRose::isotropic(2), line_rng);
    Rng rng(seed.derive("particles"));
    struct Particle {
        Vec2 o, d;  // d[0] > 0
        double exit_x = 0.0;
        Vec2 exit_pt;
        Vec2 end;
        bool alive = true;
    };
    enum class Kind { birth, exit, branch, collide };
    struct Event {
        double x;
        std::uint64_t seq;
        Kind kind;
        int p, q;
        Vec2 at;
        bool operator>(const Event& e) const { return x > e.x || (x == e.x && seq > e.seq); }
    };
    std::vector<Particle> parts;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
    std::uint64_t seq = 0;
    const double branch_rate = lambda / M_PI;

    auto line_through = [&](const Vec2& p, Vec2 d) -> std::optional<Particle> {
        if (d[0] < 0.0) d = -d;
        if (!(d[0] > 1e-14)) return std::nullopt;
        const auto c = chord(region, Line2(normalized(perp(d)), dot(p, normalized(perp(d)))));
        Particle q;
        q.o = p;
        q.d = d;
        if (c) {
            const Vec2 e = (*c)[0][0] > (*c)[1][0] ? (*c)[0] : (*c)[1];
            q.exit_x = e[0];
            q.exit_pt = e;
        } else {
            q.exit_x = p[0];
            q.exit_pt = p;
        }
        return q;
    };
    auto schedule_branch = [&](int id, const Vec2& from) {
        const Particle& p = parts[id];
        const double len = rng.exponential(branch_rate > 0.0 ? branch_rate : 1.0);
        const Vec2 at = from + p.d * len;
        if (branch_rate > 0.0 && at[0] < p.exit_x) queue.push({at[0], seq++, Kind::branch, id, -1, at});
    };
    auto start = [&](Particle np, int parent) {
        const int id = static_cast<int>(parts.size());
        parts.push_back(np);
        const Particle& p = parts.back();
        queue.push({p.exit_x, seq++, Kind::exit, id, -1, p.exit_pt});
        for (int q = 0; q < id; ++q) {
            if (!parts[q].alive || q == parent) continue;
            const Particle& o = parts[q];
            const double den = cross(p.d, o.d);
            if (std::fabs(den) < 1e-14) continue;
            const double s = cross(o.o - p.o, o.d) / den;
            const Vec2 at = p.o + p.d * s;
            if (at[0] <= p.o[0] + 1e-12 || at[0] >= p.exit_x || at[0] >= o.exit_x || at[0] <= o.o[0]) continue;
            queue.push({at[0], seq++, Kind::collide, id, q, at});
        }
        schedule_branch(id, p.o);
    };
    // Boundary births: entry points of the lines hitting the region; the birth
    // event's sequence number indexes pending.
    std::vector<Particle> pending;
    for (const auto& h : lines) {
        const auto c = chord(region, h);
        if (!c) continue;
        const bool first = (*c)[0][0] < (*c)[1][0];
        const Vec2 entry = first ? (*c)[0] : (*c)[1];
        const Vec2 other = first ? (*c)[1] : (*c)[0];
        if (!(other[0] > entry[0])) continue;
        Particle p;
        p.o = entry;
        p.d = normalized(other - entry);
        p.exit_x = other[0];
        p.exit_pt = other;
        queue.push({entry[0], seq++, Kind::birth, -1, -1, entry});
        pending.push_back(p);
    }
    while (!queue.empty()) {
        const Event e = queue.top();
        queue.pop();
        switch (e.kind) {
            case Kind::birth:
                start(pending[e.seq], -1);
                break;
            case Kind::exit:
                if (!parts[e.p].alive) break;
                parts[e.p].alive = false;
                parts[e.p].end = e.at;
                break;
            case Kind::branch: {
                if (!parts[e.p].alive) break;
                const double phi = std::acos(1.0 - 2.0 * rng.uniform());
                const Vec2 d = parts[e.p].d;
                const Vec2 nd{{d[0] * std::cos(phi) - d[1] * std::sin(phi), d[0] * std::sin(phi) + d[1] * std::cos(phi)}};
                if (auto np = line_through(e.at, nd)) start(*np, e.p);
                schedule_branch(e.p, e.at);
                break;
            }
            case Kind::collide: {
                if (!parts[e.p].alive || !parts[e.q].alive) break;
                const int dead = rng.coin() ? e.p : e.q;
                parts[dead].alive = false;
                parts[dead].end = e.at;
                break;
            }
        }
    }
    Tessellation2 t;
    t.model = "acs";
    t.params = {{"lambda", lambda}};
    t.shape = region;
    const Box2 b = region.bounds();
    t.window = Window2::box(b.lo, b.hi);
    for (const auto& p : parts)
        if (distance(p.o, p.end) > 0.0) t.segments.push_back({p.o, p.end});
    for (auto& poly : polygonize(t.segments, region)) {
        Cell2 c;
        c.polygon = std::move(poly);
        t.cells.push_back(std::move(c));
    }
    build_lattice(t);
    return t;
}

Tessellation2 acs(const Window2& w, double lambda, const Seed& seed) {
    w.validate();
    if (w.mode == EdgeMode::periodic) throw ParameterError("ACS does not support periodic windows");
    Tessellation2 t = acs(ConvexPolygon::box(w.sim_lo(), w.sim_hi()), lambda, seed);
    t.window = w;
    t.shape = ConvexPolygon();
    return t;
}

Tessellation2 iterate(const Tessellation2& t0, const ComponentGenerator& component, IterateMode mode,
                      double bernoulli_p, const Seed& seed) {
    if (!(bernoulli_p >= 0.0 && bernoulli_p <= 1.0)) throw ParameterError("bernoulli_p must lie in [0, 1]");
    const double min_area = 1e-12 * t0.domain().area();
    std::vector<ConvexPolygon> out;
    std::vector<long long> parent;
    auto cut = [&](const ConvexPolygon& cell, std::size_t i, const Tessellation2& comp) {
        const Box2 cb = cell.bounds();
        for (const auto& c : comp.cells) {
            const Box2 b = c.polygon.bounds();
            if (b.lo[0] >= cb.hi[0] || b.hi[0] <= cb.lo[0] || b.lo[1] >= cb.hi[1] || b.hi[1] <= cb.lo[1]) continue;
            if (auto piece = intersect(c.polygon, cell, min_area)) {
                out.push_back(std::move(*piece));
                parent.push_back(static_cast<long long>(i));
            }
        }
    };
    if (mode == IterateMode::nest) {
        Rng coin(seed.derive("bernoulli"));
        for (std::size_t i = 0; i < t0.cells.size(); ++i) {
            const ConvexPolygon& cell = t0.cells[i].polygon;
            if (!(coin.uniform() < bernoulli_p)) {
                out.push_back(cell);
                parent.push_back(static_cast<long long>(i));
                continue;
            }
            const Box2 b = cell.bounds();
            const Seed s{seed.master, seed.replicate, splitmix64(seed.tag ^ hash_tag("component") ^ (i * 0x9E3779B97F4A7C15ULL))};
            cut(cell, i, component(Window2::box(b.lo, b.hi), s));
        }
    } else {
        const Box2 b = t0.domain().bounds();
        const Tessellation2 comp = component(Window2::box(b.lo, b.hi), seed.derive("component"));
        for (std::size_t i = 0; i < t0.cells.size(); ++i) cut(t0.cells[i].polygon, i, comp);
    }
    Tessellation2 t;
    t.model = "iterate";
    t.window = t0.window;
    t.shape = t0.shape;
    t.params = {{"mode", mode == IterateMode::nest ? "nest" : "superpose"}, {"bernoulli_p", bernoulli_p}};
    for (std::size_t i = 0; i < out.size(); ++i) {
        Cell2 c;
        c.polygon = std::move(out[i]);
        c.tag = parent[i];
        t.cells.push_back(std::move(c));
    }
    build_lattice(t);
    return t;
}

Tessellation2 scale(const Tessellation2& t, double f) {
    if (!(f > 0.0)) throw ParameterError("scale factor must be > 0");
    Tessellation2 s;
    s.model = t.model;
    s.params = t.params;
    s.seed = t.seed;
    s.window = t.window;
    s.window.lo = t.window.lo * f;
    s.window.hi = t.window.hi * f;
    s.window.margin = t.window.margin * f;
    s.generators = t.generators;
    s.generators.window = s.window;
    for (auto& p : s.generators.points) p = p * f;
    for (auto& r : s.generators.radii) r *= f;
    if (!t.shape.empty()) s.shape = t.shape.scaled(f);
    for (const auto& seg : t.segments) s.segments.push_back({seg[0] * f, seg[1] * f});
    s.warnings = t.warnings;
    for (const auto& c : t.cells) {
        Cell2 n;
        n.polygon = c.polygon.scaled(f);
        n.generator = c.generator;
        n.tag = c.tag;
        s.cells.push_back(std::move(n));
    }
    build_lattice(s);
    return s;
}

}  // namespace tessera
