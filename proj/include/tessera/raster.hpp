#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "tessera/characteristics.hpp"
#include "tessera/points.hpp"
#include "tessera/power.hpp"
#include "tessera/tessellation.hpp"

namespace tessera {

enum class RasterModel { voronoi_l1, voronoi_l2, voronoi_linf, johnson_mehl, multiplicative, gbpd };

const char* to_string(RasterModel m);
RasterModel parse_raster_model(const std::string& s);

/// Label grid over the window; square pixels, row-major from the lower-left corner.
struct RasterTessellation {
    std::string model;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 0;
    Window2 window;
    int nx = 0;
    int ny = 0;
    double pixel = 0.0;
    std::vector<std::int32_t> labels;
    PointPattern2 generators;
    /// Dead leaves: draw index of the leaf behind each label.
    std::vector<std::int64_t> leaf_ids;
    std::vector<std::string> warnings;

    [[nodiscard]] Vec2 pixel_center(int ix, int iy) const {
        return {{window.lo[0] + (ix + 0.5) * pixel, window.lo[1] + (iy + 0.5) * pixel}};
    }
    [[nodiscard]] std::int32_t at(int ix, int iy) const { return labels[static_cast<std::size_t>(iy) * nx + ix]; }
    [[nodiscard]] double pixel_area() const { return pixel * pixel; }
};

/// Grid of n pixels along x and as many square pixels along y as fit.
RasterTessellation make_grid(const Window2& w, int resolution);

/// Each pixel centre goes to the generator of least discrepancy; ties to the lowest index.
/// Marks: johnson_mehl uses radii (|y - x| - r), multiplicative uses weights (w |y - x|),
/// gbpd uses matrices and weights ((y - x)^T M (y - x) - w).
RasterTessellation raster_assign(const PointPattern2& p, RasterModel model, int resolution,
                                 Backend backend = Backend::parallel);

/// Pixel labels of an exact tessellation: the cell's generator, or the cell index without one.
RasterTessellation rasterize(const Tessellation2& t, int resolution);

/// Fraction of pixels with equal labels (grids must match).
double label_agreement(const RasterTessellation& a, const RasterTessellation& b);

struct RasterCell {
    std::int32_t label = 0;
    std::size_t pixels = 0;
    double area = 0.0;
    Vec2 centroid{};
    std::set<std::int32_t> neighbors;
    int components = 0;
};

/// Per-label areas, 4-neighbour adjacency and 4-connected component counts, by label.
std::vector<RasterCell> extract_raster_stats(const RasterTessellation& rt);

/// gamma2, A2, mean neighbour count (N22), mean component count, and mu1 from
/// boundary transitions along four directions with the Cauchy-Crofton weights.
CharacteristicsReport estimate_raster(const RasterTessellation& rt, double inner_fraction = 0.8);
Measurements measure_raster(const RasterTessellation& rt, double inner_fraction = 0.8);

struct LeafModel {
    enum class Shape { disc, triangle, polygon };
    Shape shape = Shape::disc;
    /// Disc radius, triangle circumradius, or template scale factor.
    MarkDistribution size = MarkDistribution::constant(0.1);
    /// Template for Shape::polygon (counterclockwise, about the origin).
    std::vector<Vec2> polygon;
    void validate() const;
    /// Largest distance from the leaf centre to its outline for a given size.
    [[nodiscard]] double reach(double s) const;
};

/// Leaves fall in reverse time; each pixel keeps the first leaf that covers it.
RasterTessellation dead_leaves(const Window2& w, const LeafModel& leaves, int resolution, const Seed& seed,
                               std::size_t max_leaves = 10000000);

}  // namespace tessera
