#ifndef LEVELSET_IO_HPP
#define LEVELSET_IO_HPP

#include <string>
#include <vector>

#include "levelset/geometry.hpp"
#include "levelset/raster.hpp"
#include "levelset/splitter.hpp"

namespace levelset {

/// Flatten a ring's arcs to a closed polyline; the sagitta of every emitted
/// chord stays below chord_tol.
std::vector<Point> flatten_ring(const Ring& ring, double chord_tol);

/// GeoJSON FeatureCollection: one MultiPolygon feature (outer rings with
/// their holes) plus a MultiPoint feature when isolated generators exist.
std::string boundary_to_geojson(const ArcPolygonBoundary& boundary, double chord_tol);

/// Native schema preserving the arc parameters exactly.
std::string boundary_to_native_json(const ArcPolygonBoundary& boundary);

/// Deterministic SVG figure: sample points colored by split class plus the
/// boundary rings.
std::string render_svg(const SplitSample& split, const ArcPolygonBoundary* boundary,
                       double chord_tol);

/// Portable bitmap (P1 ascii / P4 binary) over a given bbox.
RasterMask read_pbm(const std::string& path, const Box& bbox);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace levelset

#endif
