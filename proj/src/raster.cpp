#include "levelset/raster.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "levelset/parallel.hpp"

namespace levelset {

RasterMask::RasterMask(const Box& bbox, int resolution) : bbox_(bbox), res_(resolution) {
    if (!bbox.valid()) fail(Error::Code::invalid_argument, "raster: degenerate bbox");
    if (resolution < 1) fail(Error::Code::invalid_argument, "raster: resolution must be positive");
    cw_ = bbox.width() / res_;
    ch_ = bbox.height() / res_;
    bits_.assign(static_cast<std::size_t>(res_) * res_, 0);
}

std::size_t RasterMask::count() const {
    std::size_t n = 0;
    for (auto b : bits_) n += b;
    return n;
}

bool RasterMask::same_grid(const RasterMask& o) const {
    return res_ == o.res_ && bbox_.xmin == o.bbox_.xmin && bbox_.xmax == o.bbox_.xmax &&
           bbox_.ymin == o.bbox_.ymin && bbox_.ymax == o.bbox_.ymax;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// 1-D squared distance transform (lower envelope of parabolas) with sample
/// spacing `step`: out[i] = min_j f[j] + ((i-j)*step)^2.
void dt1d(const std::vector<double>& f, std::vector<double>& out, int n, double step,
          std::vector<int>& v, std::vector<double>& z) {
    const double s2 = step * step;
    int k = 0;
    int first = -1;
    for (int q = 0; q < n; ++q)
        if (f[q] != kInf) {
            first = q;
            break;
        }
    if (first < 0) {
        for (int q = 0; q < n; ++q) out[q] = kInf;
        return;
    }
    v[0] = first;
    z[0] = -kInf;
    z[1] = kInf;
    for (int q = first + 1; q < n; ++q) {
        if (f[q] == kInf) continue;
        double s = 0.0;
        for (;;) {
            int p = v[k];
            s = ((f[q] + s2 * q * q) - (f[p] + s2 * p * p)) / (2.0 * s2 * (q - p));
            if (s > z[k]) break;
            --k;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        int p = v[k];
        double d = (q - p) * step;
        out[q] = f[p] + d * d;
    }
}

}  // namespace

std::vector<double> squared_distance_transform(const RasterMask& mask) {
    const int n = mask.resolution();
    std::vector<double> grid(static_cast<std::size_t>(n) * n);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = mask.bits()[i] ? 0.0 : kInf;

    std::vector<double> f(n), out(n), z(n + 1);
    std::vector<int> v(n);
    for (int r = 0; r < n; ++r) {  // along x
        for (int c = 0; c < n; ++c) f[c] = grid[static_cast<std::size_t>(r) * n + c];
        dt1d(f, out, n, mask.cell_width(), v, z);
        for (int c = 0; c < n; ++c) grid[static_cast<std::size_t>(r) * n + c] = out[c];
    }
    for (int c = 0; c < n; ++c) {  // along y
        for (int r = 0; r < n; ++r) f[r] = grid[static_cast<std::size_t>(r) * n + c];
        dt1d(f, out, n, mask.cell_height(), v, z);
        for (int r = 0; r < n; ++r) grid[static_cast<std::size_t>(r) * n + c] = out[r];
    }
    return grid;
}

RasterMask minkowski(const RasterMask& mask, double radius, MorphOp op) {
    if (radius < 0) fail(Error::Code::invalid_argument, "minkowski: radius must be >= 0");
    const int n = mask.resolution();
    RasterMask out(mask.bbox(), n);
    const double r2 = radius * radius * (1.0 + 1e-12);
    if (op == MorphOp::dilate) {
        auto d = squared_distance_transform(mask);
        for (std::size_t i = 0; i < d.size(); ++i) out.bits()[i] = d[i] <= r2 ? 1 : 0;
    } else {
        RasterMask comp(mask.bbox(), n);
        for (std::size_t i = 0; i < comp.bits().size(); ++i)
            comp.bits()[i] = mask.bits()[i] ? 0 : 1;
        auto d = squared_distance_transform(comp);
        for (std::size_t i = 0; i < d.size(); ++i) out.bits()[i] = d[i] > r2 ? 1 : 0;
    }
    return out;
}

RasterMask closing(const RasterMask& mask, double radius) {
    return minkowski(minkowski(mask, radius, MorphOp::dilate), radius, MorphOp::erode);
}

double hausdorff(const RasterMask& a, const RasterMask& b) {
    if (!a.same_grid(b)) fail(Error::Code::invalid_argument, "hausdorff: grid mismatch");
    if (a.empty() || b.empty()) fail(Error::Code::invalid_argument, "hausdorff: empty mask");
    auto da = squared_distance_transform(a);
    auto db = squared_distance_transform(b);
    double worst = 0.0;
    for (std::size_t i = 0; i < da.size(); ++i) {
        if (a.bits()[i]) worst = std::max(worst, db[i]);
        if (b.bits()[i]) worst = std::max(worst, da[i]);
    }
    return std::sqrt(worst);
}

double measure_distance(const RasterMask& a, const RasterMask& b) {
    if (!a.same_grid(b)) fail(Error::Code::invalid_argument, "measure_distance: grid mismatch");
    std::size_t diff = 0;
    for (std::size_t i = 0; i < a.bits().size(); ++i)
        diff += (a.bits()[i] != b.bits()[i]) ? 1 : 0;
    return static_cast<double>(diff) * a.cell_area();
}

int component_count(const RasterMask& mask) {
    const int n = mask.resolution();
    std::vector<char> seen(static_cast<std::size_t>(n) * n, 0);
    int comps = 0;
    std::queue<std::pair<int, int>> q;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            std::size_t i = static_cast<std::size_t>(r) * n + c;
            if (!mask.bits()[i] || seen[i]) continue;
            ++comps;
            seen[i] = 1;
            q.push({r, c});
            while (!q.empty()) {
                auto [cr, cc] = q.front();
                q.pop();
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        int nr = cr + dr, nc = cc + dc;
                        if (nr < 0 || nr >= n || nc < 0 || nc >= n) continue;
                        std::size_t ni = static_cast<std::size_t>(nr) * n + nc;
                        if (mask.bits()[ni] && !seen[ni]) {
                            seen[ni] = 1;
                            q.push({nr, nc});
                        }
                    }
                }
            }
        }
    }
    return comps;
}

RasterMask boundary_cells(const RasterMask& mask) {
    const int n = mask.resolution();
    RasterMask out(mask.bbox(), n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            if (!mask.get(r, c)) continue;
            bool edge = r == 0 || r == n - 1 || c == 0 || c == n - 1;
            if (!edge) {
                edge = !mask.get(r - 1, c) || !mask.get(r + 1, c) || !mask.get(r, c - 1) ||
                       !mask.get(r, c + 1);
            }
            if (edge) out.set(r, c, true);
        }
    }
    return out;
}

bool contained_within_dilation(const RasterMask& inner, const RasterMask& outer, int cells) {
    if (!inner.same_grid(outer)) fail(Error::Code::invalid_argument, "containment: grid mismatch");
    double rad = cells * std::max(outer.cell_width(), outer.cell_height());
    RasterMask grown = minkowski(outer, rad, MorphOp::dilate);
    for (std::size_t i = 0; i < inner.bits().size(); ++i)
        if (inner.bits()[i] && !grown.bits()[i]) return false;
    return true;
}

RasterMask rasterize(const Box& bbox, int resolution,
                     const std::function<bool(const Point&)>& member) {
    RasterMask out(bbox, resolution);
    parallel_for(resolution, [&](std::size_t row) {
        for (int c = 0; c < resolution; ++c) {
            Point p = out.center(static_cast<int>(row), c);
            if (member(p)) out.set(static_cast<int>(row), c, true);
        }
    });
    return out;
}

RasterMask rasterize(const RConvexRegion& region, const Box& bbox, int resolution) {
    const Triangulation& tri = region.triangulation();
    RasterMask out(bbox, resolution);

    auto exact_everywhere = [&] {
        parallel_for(resolution, [&](std::size_t row) {
            for (int c = 0; c < resolution; ++c)
                if (region.contains(out.center(static_cast<int>(row), c)))
                    out.set(static_cast<int>(row), c, true);
        });
    };

    if (region.convex() || tri.degenerate()) {
        exact_everywhere();
        return out;
    }

    const double r = region.radius();
    const double eps = tri.eps();
    const double rho = r - eps;
    const double halfdiag = 0.5 * out.cell_diag();

    // Nearest-site distance bounds from an EDT over quantized sites; used
    // only to filter, ambiguous cells get the exact witness search.
    bool sites_in_bbox = true;
    RasterMask sitemask(bbox, resolution);
    for (const auto& s : tri.sites()) {
        if (!bbox.contains(s)) {
            sites_in_bbox = false;
            break;
        }
        int col = std::min(resolution - 1, static_cast<int>((s.x - bbox.xmin) / out.cell_width()));
        int row = std::min(resolution - 1, static_cast<int>((s.y - bbox.ymin) / out.cell_height()));
        sitemask.set(row, col, true);
    }
    if (!sites_in_bbox) {
        exact_everywhere();
        return out;
    }

    auto sq = squared_distance_transform(sitemask);
    std::vector<double> sd(sq.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sd[i] = std::sqrt(sq[i]);

    // Voronoi vertices deep enough to host an interior witness
    std::vector<Point> deep;
    for (const auto& t : tri.triangles())
        if (t.circumradius >= rho - halfdiag) deep.push_back(t.circumcenter);
    KdTree deep_tree(deep);

    const double spacing = std::max(out.cell_width(), out.cell_height());
    const int samples = std::clamp(static_cast<int>(std::ceil(M_PI * rho / spacing)), 16, 4096);
    const double arc_gap = 2.0 * M_PI * rho / samples;
    // sd read at the containing node: site quantization + node displacement
    const double read_err = 2.0 * halfdiag;
    const double margin = read_err + 0.5 * arc_gap;

    auto sd_at = [&](const Point& p) -> double {
        int col = static_cast<int>((p.x - bbox.xmin) / out.cell_width());
        int row = static_cast<int>((p.y - bbox.ymin) / out.cell_height());
        if (col < 0 || col >= resolution || row < 0 || row >= resolution) return -1.0;
        return sd[static_cast<std::size_t>(row) * resolution + col];
    };

    parallel_for(resolution, [&](std::size_t rr) {
        int row = static_cast<int>(rr);
        for (int c = 0; c < resolution; ++c) {
            Point q = out.center(row, c);
            double d0 = sd[static_cast<std::size_t>(row) * resolution + c];
            if (d0 - halfdiag >= rho) continue;  // certainly its own witness
            bool decided = false;
            bool value = false;
            if (deep_tree.size() == 0 || !deep_tree.any_closer_than(q, rho + halfdiag)) {
                double worst = -kInf;
                bool usable = true;
                for (int k = 0; k < samples; ++k) {
                    double a = k * (2.0 * M_PI / samples);
                    Point p{q.x + rho * std::cos(a), q.y + rho * std::sin(a)};
                    double v = sd_at(p);
                    if (v < 0) {
                        usable = false;
                        break;
                    }
                    if (v - read_err >= rho) {  // certified witness on the circle
                        decided = true;
                        value = false;
                        break;
                    }
                    worst = std::max(worst, v);
                }
                if (!decided && usable && worst + margin < rho) {
                    decided = true;
                    value = true;
                }
            }
            if (!decided) value = tri.hull_contains(r, q);
            if (value) out.set(row, c, true);
        }
    });
    return out;
}

}  // namespace levelset
