#pragma once

#include <cmath>

#include "tessera/errors.hpp"
#include "tessera/vec.hpp"

namespace tessera {

/// H(u, r) = { x : <x, u> = r } with unit normal u.
template <int D>
struct Hyperplane {
    Vec<D> normal{};
    double offset = 0.0;

    Hyperplane() = default;
    Hyperplane(const Vec<D>& u, double r) : normal(u), offset(r) {
        if (std::fabs(norm(u) - 1.0) > 1e-12) throw ParameterError("hyperplane normal must be a unit vector");
    }
    /// Plane {<x, n> = c} for an arbitrary nonzero n.
    static Hyperplane from_unnormalized(const Vec<D>& n, double c) {
        const double len = norm(n);
        if (!(len > 0.0)) throw ParameterError("hyperplane normal must be nonzero");
        Hyperplane h;
        h.normal = n / len;
        h.offset = c / len;
        return h;
    }

    [[nodiscard]] double signed_distance(const Vec<D>& x) const { return dot(x, normal) - offset; }
};

using Line2 = Hyperplane<2>;
using Plane3 = Hyperplane<3>;

/// Which half-space a clip keeps: below keeps <x,u> - r <= 0, above keeps >= 0.
enum class Side { below, above };

}  // namespace tessera
