#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "levelset/density.hpp"
#include "levelset/rng.hpp"

using namespace levelset;

namespace {

PointCloud gaussian_cloud(std::size_t n, Rng& rng, double sx = 1.0, double sy = 1.0) {
    PointCloud c;
    for (std::size_t i = 0; i < n; ++i) c.add({sx * rng.normal(), sy * rng.normal()});
    return c;
}

/// Quadrature oracle for the LSCV criterion: numeric integral of fhat^2 on a
/// padded grid plus the literal leave-one-out sum.
double lscv_quadrature(const PointCloud& sample, const Bandwidth& bw, int grid = 500) {
    Box bb = sample.bbox();
    double pad = 8.0 * std::max(bw.h1, bw.h2);
    bb.pad(pad);
    KdeModel model(sample, bw);
    double hx = bb.width() / grid, hy = bb.height() / grid;
    double integral = 0.0;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            Point p{bb.xmin + (i + 0.5) * hx, bb.ymin + (j + 0.5) * hy};
            double f = model.eval(p);
            integral += f * f * hx * hy;
        }
    }
    const auto& pts = sample.points();
    const std::size_t n = pts.size();
    double loo = 0.0;
    const double norm = 1.0 / (2.0 * std::numbers::pi * bw.h1 * bw.h2);
    for (std::size_t i = 0; i < n; ++i) {
        double fi = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double zx = (pts[i].x - pts[j].x) / bw.h1;
            double zy = (pts[i].y - pts[j].y) / bw.h2;
            fi += norm * std::exp(-0.5 * (zx * zx + zy * zy));
        }
        loo += fi / static_cast<double>(n - 1);
    }
    return integral - 2.0 * loo / static_cast<double>(n);
}

}  // namespace

TEST_CASE("kde: value at the mode of a single kernel") {
    KdeModel m(PointCloud({{0, 0}}), Bandwidth(1, 1));
    CHECK(m.eval({0, 0}) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("kde: integrates to one on a padded grid") {
    Rng rng(1);
    PointCloud c = gaussian_cloud(40, rng);
    KdeModel m(c, Bandwidth(0.4, 0.6));
    Box bb = c.bbox();
    bb.pad(6.0);
    int grid = 400;
    double hx = bb.width() / grid, hy = bb.height() / grid;
    double total = 0.0;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j)
            total += m.eval({bb.xmin + (i + 0.5) * hx, bb.ymin + (j + 0.5) * hy}) * hx * hy;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("kde: symmetric sample gives symmetric estimate") {
    KdeModel m(PointCloud({{-0.8, 0}, {0.8, 0}}), Bandwidth(0.5, 0.5));
    for (double y : {-1.0, -0.2, 0.4, 2.0}) {
        CHECK(m.eval({0, y}) == doctest::Approx(m.eval({0, -y})).epsilon(1e-12));
        CHECK(m.eval({0.3, y}) == doctest::Approx(m.eval({-0.3, y})).epsilon(1e-12));
    }
}

TEST_CASE("kde: eval matches a literal two-loop summation to 1e-12 relative") {
    Rng rng(2);
    PointCloud c = gaussian_cloud(60, rng);
    Bandwidth bw(0.3, 0.7);
    KdeModel m(c, bw);
    for (int k = 0; k < 100; ++k) {
        Point q{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        double literal = 0.0;
        for (const auto& p : c.points()) {
            double zx = (q.x - p.x) / bw.h1;
            double zy = (q.y - p.y) / bw.h2;
            literal += std::exp(-0.5 * (zx * zx + zy * zy)) /
                       (2.0 * std::numbers::pi * bw.h1 * bw.h2);
        }
        literal /= static_cast<double>(c.size());
        CHECK(m.eval(q) == doctest::Approx(literal).epsilon(1e-12));
    }
}

TEST_CASE("kde: batched cutoff evaluation stays within its error bound") {
    Rng rng(3);
    PointCloud c = gaussian_cloud(50, rng);
    KdeModel m(c, Bandwidth(0.3, 0.3));
    std::vector<Point> qs;
    for (int k = 0; k < 50; ++k) qs.push_back({rng.uniform(-4, 4), rng.uniform(-4, 4)});
    auto a = m.eval(qs);
    auto b = m.eval_cutoff(qs);
    for (std::size_t i = 0; i < qs.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-20);
}

TEST_CASE("lscv: closed form matches the quadrature oracle") {
    Rng rng(4);
    for (int rep = 0; rep < 3; ++rep) {
        PointCloud c = gaussian_cloud(20, rng);
        Bandwidth bw(rng.uniform(0.25, 0.8), rng.uniform(0.25, 0.8));
        double closed = lscv_objective(c, bw);
        double quad = lscv_quadrature(c, bw);
        CHECK(std::abs(closed - quad) < 1e-6);
    }
}

TEST_CASE("lscv: joint rescaling scales the objective by c^-2") {
    Rng rng(5);
    PointCloud c = gaussian_cloud(30, rng);
    Bandwidth bw(0.4, 0.5);
    double base = lscv_objective(c, bw);
    for (double s : {3.0, 10.0}) {
        PointCloud scaled;
        for (const auto& p : c.points()) scaled.add({p.x * s, p.y * s});
        double v = lscv_objective(scaled, Bandwidth(bw.h1 * s, bw.h2 * s));
        CHECK(v == doctest::Approx(base / (s * s)).epsilon(1e-10));
    }
}

TEST_CASE("lscv: objective blows up as h -> 0 on distinct points") {
    Rng rng(6);
    PointCloud c = gaussian_cloud(25, rng);
    double spread = c.bbox().diameter();
    double tiny = lscv_objective(c, Bandwidth(1e-6 * spread, 1e-6 * spread));
    double plugin = lscv_objective(c, Bandwidth(0.3, 0.3));
    CHECK(tiny > plugin);
}

TEST_CASE("fit_lscv: near the normal-reference scale on Gaussian samples") {
    Rng rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        PointCloud c = gaussian_cloud(500, rng);
        Bandwidth fitted = fit_lscv(c);
        double ref = std::pow(500.0, -1.0 / 6.0);  // sd is 1
        CHECK(fitted.h1 > ref / 2.0);
        CHECK(fitted.h1 < ref * 2.0);
        CHECK(fitted.h2 > ref / 2.0);
        CHECK(fitted.h2 < ref * 2.0);
    }
}

TEST_CASE("fit_lscv: affine equivariance and determinism") {
    Rng rng(8);
    PointCloud c = gaussian_cloud(200, rng);
    Bandwidth a = fit_lscv(c);
    Bandwidth b = fit_lscv(c);
    CHECK(a.h1 == b.h1);
    CHECK(a.h2 == b.h2);
    PointCloud scaled;
    for (const auto& p : c.points()) scaled.add({10.0 * p.x, 10.0 * p.y});
    Bandwidth s = fit_lscv(scaled);
    CHECK(s.h1 == doctest::Approx(10.0 * a.h1).epsilon(1e-6));
    CHECK(s.h2 == doctest::Approx(10.0 * a.h2).epsilon(1e-6));
}

TEST_CASE("fit_lscv: fitted point is a local minimum") {
    Rng rng(9);
    PointCloud c;
    for (int i = 0; i < 150; ++i) {
        double side = rng.uniform() < 0.5 ? -2.0 : 2.0;
        c.add({side + 0.4 * rng.normal(), 0.4 * rng.normal()});
    }
    Bandwidth fit = fit_lscv(c);
    double at = lscv_objective(c, fit);
    for (double fx : {0.9, 1.1}) {
        for (double fy : {0.9, 1.1}) {
            CHECK(at <= lscv_objective(c, Bandwidth(fit.h1 * fx, fit.h2 * fy)) + 1e-12);
        }
    }
}

TEST_CASE("fit_lscv: rejects degenerate samples") {
    PointCloud flat({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}});
    CHECK_THROWS_AS(fit_lscv(flat), Error);
    PointCloud tiny({{0, 0}, {1, 1}});
    CHECK_THROWS_AS(fit_lscv(tiny), Error);
}

TEST_CASE("quantile: order statistics") {
    std::vector<double> v{4, 2, 1, 3};
    CHECK(quantile_threshold(v, 0.5) == 2.0);
    CHECK(quantile_threshold(v, 0.001) == 1.0);
    CHECK(quantile_threshold(v, 0.999) == 4.0);
    CHECK_THROWS_AS(quantile_threshold(v, 0.0), Error);
    CHECK_THROWS_AS(quantile_threshold(v, 1.0), Error);
    CHECK_THROWS_AS(quantile_threshold(std::vector<double>{}, 0.5), Error);
}

TEST_CASE("quantile: monotone in tau and fraction above matches 1 - tau") {
    Rng rng(10);
    std::vector<double> v;
    for (int i = 0; i < 400; ++i) v.push_back(rng.uniform());
    double prev = -1;
    for (double tau : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        double q = quantile_threshold(v, tau);
        CHECK(q >= prev);
        prev = q;
        std::size_t above = 0;
        for (double x : v)
            if (x >= q) ++above;
        double frac = static_cast<double>(above) / v.size();
        CHECK(std::abs(frac - (1.0 - tau)) <= 1.0 / v.size() + 1e-12);
    }
}
