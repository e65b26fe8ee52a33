#ifndef LEVELSET_RASTER_HPP
#define LEVELSET_RASTER_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "levelset/common.hpp"
#include "levelset/geometry.hpp"

namespace levelset {

/// Boolean grid over a bounding box; a cell is addressed by (row, col) with
/// row 0 at ymin. Cell (r, c) represents the point at its center.
class RasterMask {
public:
    RasterMask() = default;
    RasterMask(const Box& bbox, int resolution);

    const Box& bbox() const { return bbox_; }
    int resolution() const { return res_; }
    double cell_width() const { return cw_; }
    double cell_height() const { return ch_; }
    double cell_area() const { return cw_ * ch_; }
    double cell_diag() const { return std::hypot(cw_, ch_); }

    bool get(int row, int col) const { return bits_[idx(row, col)] != 0; }
    void set(int row, int col, bool v) { bits_[idx(row, col)] = v ? 1 : 0; }
    Point center(int row, int col) const {
        return {bbox_.xmin + (col + 0.5) * cw_, bbox_.ymin + (row + 0.5) * ch_};
    }

    std::size_t count() const;
    double area() const { return static_cast<double>(count()) * cell_area(); }
    bool empty() const { return count() == 0; }
    bool same_grid(const RasterMask& o) const;

    const std::vector<std::uint8_t>& bits() const { return bits_; }
    std::vector<std::uint8_t>& bits() { return bits_; }

private:
    std::size_t idx(int row, int col) const {
        return static_cast<std::size_t>(row) * res_ + col;
    }

    Box bbox_;
    int res_ = 0;
    double cw_ = 0.0, ch_ = 0.0;
    std::vector<std::uint8_t> bits_;
};

/// Exact squared Euclidean distance (world units) from every cell center to
/// the nearest set cell center. Set cells get 0; INF when the mask is empty.
std::vector<double> squared_distance_transform(const RasterMask& mask);

enum class MorphOp { dilate, erode };

/// Dilation/erosion by the closed Euclidean ball of the given radius,
/// evaluated on cell centers. closing = erode(dilate(m, r), r).
RasterMask minkowski(const RasterMask& mask, double radius, MorphOp op);
RasterMask closing(const RasterMask& mask, double radius);

/// Hausdorff distance between the set-cell centers, exact for the
/// rasterized sets. Both masks must share bbox/resolution and be non-empty.
double hausdorff(const RasterMask& a, const RasterMask& b);

/// Lebesgue measure of the symmetric difference (cell counting).
double measure_distance(const RasterMask& a, const RasterMask& b);

/// 8-connected component count of the set cells.
int component_count(const RasterMask& mask);

/// Boundary cells: set cells 4-adjacent to an unset cell or the border.
RasterMask boundary_cells(const RasterMask& mask);

/// True iff every set cell of `inner` is set in dilate(outer, cells*cell).
bool contained_within_dilation(const RasterMask& inner, const RasterMask& outer, int cells);

/// Rasterize a predicate (cell center membership).
RasterMask rasterize(const Box& bbox, int resolution, const std::function<bool(const Point&)>& member);

/// Membership rasterization of an r-convex region. Uses a precomputed
/// nearest-site distance grid to resolve cells far from the boundary and the
/// exact witness search only in the ambiguous band; the result equals the
/// per-cell membership predicate.
RasterMask rasterize(const RConvexRegion& region, const Box& bbox, int resolution);

}  // namespace levelset

#endif
