#pragma once

#include <string>

#include "tessera/errors.hpp"
#include "tessera/polygon.hpp"
#include "tessera/polyhedron.hpp"
#include "tessera/vec.hpp"

namespace tessera {

enum class EdgeMode { none, plus, periodic };

const char* to_string(EdgeMode m);
EdgeMode parse_edge_mode(const std::string& s);

/// Axis-aligned simulation box with an edge treatment.
template <int D>
struct Window {
    Vec<D> lo{};
    Vec<D> hi{};
    EdgeMode mode = EdgeMode::none;
    double margin = 0.0;

    static Window unit(EdgeMode m = EdgeMode::none, double margin = 0.0) {
        Window w;
        for (int i = 0; i < D; ++i) w.hi[i] = 1.0;
        w.mode = m;
        w.margin = margin;
        w.validate();
        return w;
    }
    static Window box(const Vec<D>& lo, const Vec<D>& hi, EdgeMode m = EdgeMode::none, double margin = 0.0) {
        Window w{lo, hi, m, margin};
        w.validate();
        return w;
    }

    void validate() const {
        for (int i = 0; i < D; ++i)
            if (!(hi[i] > lo[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i]))
                throw ParameterError("window box must have positive finite extent");
        if (!(margin >= 0.0) || !std::isfinite(margin)) throw ParameterError("window margin must be >= 0");
    }

    [[nodiscard]] double extent(int i) const { return hi[i] - lo[i]; }
    [[nodiscard]] Vec<D> size() const { return hi - lo; }
    [[nodiscard]] Vec<D> center() const { return (lo + hi) * 0.5; }
    [[nodiscard]] double content() const {
        double v = 1.0;
        for (int i = 0; i < D; ++i) v *= extent(i);
        return v;
    }
    /// Simulation domain: the box dilated by the margin in plus mode.
    [[nodiscard]] Vec<D> sim_lo() const { return mode == EdgeMode::plus ? lo - fill(margin) : lo; }
    [[nodiscard]] Vec<D> sim_hi() const { return mode == EdgeMode::plus ? hi + fill(margin) : hi; }
    [[nodiscard]] double sim_content() const {
        const Vec<D> s = sim_hi() - sim_lo();
        double v = 1.0;
        for (int i = 0; i < D; ++i) v *= s[i];
        return v;
    }
    [[nodiscard]] bool contains(const Vec<D>& p) const {
        for (int i = 0; i < D; ++i)
            if (p[i] < lo[i] || p[i] > hi[i]) return false;
        return true;
    }
    /// Half-open membership, used for periodic and centroid counting.
    [[nodiscard]] bool contains_half_open(const Vec<D>& p) const {
        for (int i = 0; i < D; ++i)
            if (p[i] < lo[i] || p[i] >= hi[i]) return false;
        return true;
    }
    /// Wrap into [lo, hi) for periodic windows.
    [[nodiscard]] Vec<D> wrap(Vec<D> p) const {
        for (int i = 0; i < D; ++i) {
            const double l = extent(i);
            p[i] -= std::floor((p[i] - lo[i]) / l) * l;
            if (p[i] >= hi[i]) p[i] -= l;
            if (p[i] < lo[i]) p[i] = lo[i];
        }
        return p;
    }

private:
    static Vec<D> fill(double v) {
        Vec<D> r;
        for (int i = 0; i < D; ++i) r[i] = v;
        return r;
    }
};

using Window2 = Window<2>;
using Window3 = Window<3>;

inline ConvexPolygon to_polygon(const Vec2& lo, const Vec2& hi) { return ConvexPolygon::box(lo, hi); }
inline ConvexPolyhedron to_polyhedron(const Vec3& lo, const Vec3& hi) { return ConvexPolyhedron::box(lo, hi); }

/// Box scaled about its centre by factor s (reference set for minus sampling).
template <int D>
std::pair<Vec<D>, Vec<D>> scaled_box(const Vec<D>& lo, const Vec<D>& hi, double s) {
    const Vec<D> c = (lo + hi) * 0.5;
    return {c + (lo - c) * s, c + (hi - c) * s};
}

}  // namespace tessera
