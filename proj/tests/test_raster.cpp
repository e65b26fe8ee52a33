#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "levelset/raster.hpp"
#include "levelset/rng.hpp"

using namespace levelset;

namespace {

RasterMask rect_mask(const Box& bbox, int res, double x0, double y0, double x1, double y1) {
    return rasterize(bbox, res, [&](const Point& p) {
        return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
    });
}

RasterMask disk_mask(const Box& bbox, int res, Point c, double r) {
    return rasterize(bbox, res, [&](const Point& p) { return dist(p, c) <= r; });
}

RasterMask random_mask(const Box& bbox, int res, Rng& rng) {
    // union of a few random disks, so masks are blobby rather than noise
    std::vector<std::pair<Point, double>> disks;
    for (int k = 0; k < 4; ++k)
        disks.push_back({{rng.uniform(bbox.xmin, bbox.xmax), rng.uniform(bbox.ymin, bbox.ymax)},
                         rng.uniform(0.1, 0.5)});
    return rasterize(bbox, res, [&](const Point& p) {
        for (const auto& [c, r] : disks)
            if (dist(p, c) <= r) return true;
        return false;
    });
}

}  // namespace

TEST_CASE("hausdorff: identity, translation, dilation") {
    Box bb{.xmin = -1, .ymin = -1, .xmax = 5, .ymax = 5};
    int res = 256;
    auto a = rect_mask(bb, res, 0, 0, 1, 1);
    CHECK(hausdorff(a, a) == 0.0);

    auto b = rect_mask(bb, res, 3, 0, 4, 1);
    CHECK(hausdorff(a, b) == doctest::Approx(3.0).epsilon(0.02));

    auto d = disk_mask(bb, res, {2, 2}, 1.0);
    auto dd = minkowski(d, 0.5, MorphOp::dilate);
    CHECK(hausdorff(d, dd) == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("measure distance: identity, additivity, nesting") {
    Box bb{.xmin = -1, .ymin = -1, .xmax = 5, .ymax = 5};
    int res = 512;
    auto a = rect_mask(bb, res, 0, 0, 1, 1);
    CHECK(measure_distance(a, a) == 0.0);

    auto b = rect_mask(bb, res, 3, 0, 4, 1);
    CHECK(measure_distance(a, b) == doctest::Approx(2.0).epsilon(0.03));

    auto big = disk_mask(bb, res, {2, 2}, 2.0);
    auto small = disk_mask(bb, res, {2, 2}, 1.0);
    CHECK(measure_distance(big, small) == doctest::Approx(big.area() - small.area()));
}

TEST_CASE("minkowski: radius zero is the identity") {
    Rng rng(3);
    Box bb{.xmin = 0, .ymin = 0, .xmax = 2, .ymax = 2};
    auto m = random_mask(bb, 128, rng);
    auto d = minkowski(m, 0.0, MorphOp::dilate);
    auto e = minkowski(m, 0.0, MorphOp::erode);
    CHECK(measure_distance(m, d) == 0.0);
    CHECK(measure_distance(m, e) == 0.0);
}

TEST_CASE("minkowski: closing leaves a convex mask unchanged up to one cell") {
    Box bb{.xmin = -2, .ymin = -2, .xmax = 2, .ymax = 2};
    int res = 256;
    auto m = disk_mask(bb, res, {0, 0}, 1.0);
    for (double r : {0.1, 0.5}) {
        auto cl = closing(m, r);
        CHECK(contained_within_dilation(cl, m, 1));
        CHECK(contained_within_dilation(m, cl, 1));
    }
}

TEST_CASE("minkowski: closing of two disks transitions at the bridging radius") {
    // disks of radius 0.5 centered 2 apart; the closing first grows at the
    // gap corners once gamma exceeds (centre gap)/2 - R = 0.5
    Box bb{.xmin = -2.2, .ymin = -1.6, .xmax = 2.2, .ymax = 1.6};
    int res = 512;
    auto m = rasterize(bb, res, [&](const Point& p) {
        return dist(p, {-1, 0}) <= 0.5 || dist(p, {1, 0}) <= 0.5;
    });
    auto band = minkowski(boundary_cells(m), 3.0 * std::max(m.cell_width(), m.cell_height()),
                          MorphOp::dilate);
    auto equal_up_to_band = [&](const RasterMask& cl) {
        for (int r = 0; r < res; ++r)
            for (int c = 0; c < res; ++c)
                if (cl.get(r, c) != m.get(r, c) && !band.get(r, c)) return false;
        return true;
    };
    CHECK(equal_up_to_band(closing(m, 0.4)));
    CHECK(!equal_up_to_band(closing(m, 0.65)));
}

TEST_CASE("metric axioms on random masks") {
    Rng rng(17);
    Box bb{.xmin = 0, .ymin = 0, .xmax = 2, .ymax = 2};
    int res = 128;
    for (int rep = 0; rep < 5; ++rep) {
        auto a = random_mask(bb, res, rng);
        auto b = random_mask(bb, res, rng);
        auto c = random_mask(bb, res, rng);
        if (a.empty() || b.empty() || c.empty()) continue;
        CHECK(hausdorff(a, b) == hausdorff(b, a));
        CHECK(measure_distance(a, b) == measure_distance(b, a));
        CHECK(hausdorff(a, b) + hausdorff(b, c) >= hausdorff(a, c) - 1e-12);
        CHECK(measure_distance(a, b) + measure_distance(b, c) >=
              measure_distance(a, c) - 1e-12);
        CHECK((hausdorff(a, b) == 0.0) == (measure_distance(a, b) == 0.0));
    }
}

TEST_CASE("rasterize: singleton region is a single cell") {
    PointCloud c({{0.0, 0.0}});
    RConvexRegion region(c, 0.5);
    Box bb{.xmin = -1, .ymin = -1, .xmax = 1, .ymax = 1};
    auto m = rasterize(region, bb, 256);
    CHECK(m.count() <= 1);
}

TEST_CASE("rasterize: infinite radius fills the convex hull") {
    PointCloud c({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    RConvexRegion region(c, std::numeric_limits<double>::infinity());
    Box bb{.xmin = -0.5, .ymin = -0.5, .xmax = 1.5, .ymax = 1.5};
    auto m = rasterize(region, bb, 256);
    CHECK(m.area() == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("rasterize: resolution refinement changes area by < 2%") {
    Rng rng(23);
    PointCloud c;
    for (int i = 0; i < 120; ++i) c.add({rng.uniform(0, 1), rng.uniform(0, 1)});
    RConvexRegion region(c, 0.25);
    Box bb{.xmin = -0.3, .ymin = -0.3, .xmax = 1.3, .ymax = 1.3};
    double a1 = rasterize(region, bb, 256).area();
    double a2 = rasterize(region, bb, 512).area();
    CHECK(std::abs(a2 - a1) / a2 < 0.02);
}

TEST_CASE("rasterize: filtered path equals the per-cell membership predicate") {
    Rng rng(29);
    PointCloud c;
    for (int i = 0; i < 150; ++i) {
        Point p{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        if (norm(p) <= 1.0 && norm(p) >= 0.45) c.add(p);
    }
    RConvexRegion region(c, 0.3);
    Box bb{.xmin = -1.5, .ymin = -1.5, .xmax = 1.5, .ymax = 1.5};
    auto fast = rasterize(region, bb, 200);
    auto exact = rasterize(bb, 200, [&](const Point& p) { return region.contains(p); });
    CHECK(measure_distance(fast, exact) == 0.0);
}

TEST_CASE("closing identity at raster level (erode/dilate sandwich)") {
    Rng rng(41);
    for (int rep = 0; rep < 3; ++rep) {
        PointCloud c;
        for (int i = 0; i < 150; ++i) c.add({rng.uniform(0, 1), rng.uniform(0, 1)});
        double r = 0.22;
        RConvexRegion region(c, r);
        Box bb{.xmin = -0.4, .ymin = -0.4, .xmax = 1.4, .ymax = 1.4};
        int res = 360;
        auto hull_mask = rasterize(region, bb, res);

        RasterMask pts(bb, res);
        for (const auto& p : c.points()) {
            int col = std::min(res - 1, static_cast<int>((p.x - bb.xmin) / pts.cell_width()));
            int row = std::min(res - 1, static_cast<int>((p.y - bb.ymin) / pts.cell_height()));
            pts.set(row, col, true);
        }
        auto closed = closing(pts, r);
        // inclusion sandwich; snapping generators to cells costs one extra
        // cell on top of the morphology rounding
        CHECK(contained_within_dilation(hull_mask, closed, 2));
        CHECK(contained_within_dilation(closed, hull_mask, 2));
    }
}

TEST_CASE("component count") {
    Box bb{.xmin = 0, .ymin = 0, .xmax = 4, .ymax = 4};
    auto m = rasterize(bb, 128, [&](const Point& p) {
        return dist(p, {1, 1}) <= 0.5 || dist(p, {3, 3}) <= 0.5;
    });
    CHECK(component_count(m) == 2);
}

TEST_CASE("hausdorff errors on empty input") {
    Box bb{.xmin = 0, .ymin = 0, .xmax = 1, .ymax = 1};
    RasterMask empty(bb, 32);
    auto full = rect_mask(bb, 32, 0, 0, 1, 1);
    CHECK_THROWS_AS(hausdorff(empty, full), Error);
}
