#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "levelset/synthref.hpp"

using namespace levelset;

TEST_CASE("sampler: area ratios for the uniform disc union") {
    auto d = SyntheticDensity::two_discs();
    Rng rng(100);
    PointCloud c = d.sample(100000, rng);
    std::size_t in_half = 0, in_left = 0;
    for (const auto& p : c.points()) {
        if (dist(p, {-1, 0}) <= 0.25) ++in_half;
        if (p.x < 0) ++in_left;
    }
    // half-radius disc harbours a quarter of its disc's mass; discs are equal
    double frac = static_cast<double>(in_half) / c.size();
    CHECK(frac == doctest::Approx(0.125).epsilon(0.04));
    CHECK(static_cast<double>(in_left) / c.size() == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("sampler: seed determinism") {
    auto d = SyntheticDensity::bimodal();
    Rng a(42), b(42);
    PointCloud ca = d.sample(500, a);
    PointCloud cb = d.sample(500, b);
    REQUIRE(ca.size() == cb.size());
    for (std::size_t i = 0; i < ca.size(); ++i) {
        CHECK(ca[i].x == cb[i].x);
        CHECK(ca[i].y == cb[i].y);
    }
}

TEST_CASE("sampler: gaussian mixture moments within CLT bounds") {
    auto d = SyntheticDensity::bimodal();
    Rng rng(7);
    std::size_t n = 40000;
    PointCloud c = d.sample(n, rng);
    double mx = 0, my = 0;
    for (const auto& p : c.points()) {
        mx += p.x;
        my += p.y;
    }
    mx /= c.size();
    my /= c.size();
    // mean is (0,0); x-variance is 1 + 0.35^2
    double sx = std::sqrt(1.0 + 0.35 * 0.35);
    CHECK(std::abs(mx) <= 3.0 * sx / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(my) <= 3.0 * 0.35 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("sampler agrees with the density: chi-square on a coarse raster") {
    for (const auto& name : SyntheticDensity::names()) {
        auto d = SyntheticDensity::by_name(name);
        Rng rng(11);
        std::size_t n = 100000;
        PointCloud c = d.sample(n, rng);
        const Box bb = d.reference_bbox();
        const int g = 10;
        // cell probabilities integrated on a fine subgrid
        std::vector<double> prob(g * g, 0.0);
        const int sub = 24;
        double cw = bb.width() / g, ch = bb.height() / g;
        for (int r = 0; r < g; ++r)
            for (int cc = 0; cc < g; ++cc) {
                double mass = 0.0;
                for (int i = 0; i < sub; ++i)
                    for (int j = 0; j < sub; ++j) {
                        Point p{bb.xmin + cc * cw + (i + 0.5) * cw / sub,
                                bb.ymin + r * ch + (j + 0.5) * ch / sub};
                        mass += d.pdf(p) * (cw / sub) * (ch / sub);
                    }
                prob[r * g + cc] = mass;
            }
        std::vector<std::size_t> count(g * g, 0);
        std::size_t inside = 0;
        for (const auto& p : c.points()) {
            int cc = static_cast<int>((p.x - bb.xmin) / cw);
            int r = static_cast<int>((p.y - bb.ymin) / ch);
            if (cc < 0 || cc >= g || r < 0 || r >= g) continue;
            ++count[r * g + cc];
            ++inside;
        }
        CHECK(static_cast<double>(inside) / n > 0.99);
        double chi2 = 0.0;
        int dof = -1;
        for (int i = 0; i < g * g; ++i) {
            double expect = prob[i] * n;
            if (expect < 5.0) continue;
            ++dof;
            chi2 += (count[i] - expect) * (count[i] - expect) / expect;
        }
        REQUIRE(dof > 3);
        // Wilson-Hilferty 99.9% quantile of chi-square with dof degrees
        double k = dof;
        double crit = k * std::pow(1.0 - 2.0 / (9 * k) + 3.0902 * std::sqrt(2.0 / (9 * k)), 3.0);
        CHECK(chi2 < crit);
    }
}

TEST_CASE("true level mask: flat density fills the support for sub-plateau t") {
    auto d = SyntheticDensity::two_discs();
    auto m = true_level_mask(d, d.default_threshold(), d.reference_bbox(), 256);
    CHECK(m.area() == doctest::Approx(2.0 * M_PI * 0.25).epsilon(0.02));
    CHECK(component_count(m) == 2);
}

TEST_CASE("true level mask: component count flips at the saddle") {
    auto d = SyntheticDensity::bimodal();
    double saddle = d.pdf({0, 0});
    auto below = true_level_mask(d, saddle * 0.5, d.reference_bbox(), 256);
    auto above = true_level_mask(d, saddle * 2.0, d.reference_bbox(), 256);
    CHECK(component_count(below) == 1);
    CHECK(component_count(above) == 2);
}

TEST_CASE("true level mask: nesting in the threshold") {
    auto d = SyntheticDensity::bimodal();
    auto lo = true_level_mask(d, 0.1, d.reference_bbox(), 200);
    auto hi = true_level_mask(d, 0.3, d.reference_bbox(), 200);
    for (std::size_t i = 0; i < lo.bits().size(); ++i)
        if (hi.bits()[i]) CHECK(lo.bits()[i]);
}

TEST_CASE("content mode: probability content matches 1 - tau") {
    auto d = SyntheticDensity::bimodal();
    for (double tau : {0.3, 0.7}) {
        double f_tau = 0.0;
        auto m = true_level_mask_content(d, tau, d.reference_bbox(), 400, &f_tau);
        CHECK(f_tau > 0.0);
        // re-integrate the density over the mask
        double mass = 0.0;
        for (int r = 0; r < m.resolution(); ++r)
            for (int c = 0; c < m.resolution(); ++c)
                if (m.get(r, c)) mass += d.pdf(m.center(r, c)) * m.cell_area();
        CHECK(mass == doctest::Approx(1.0 - tau).epsilon(0.005));
    }
}

TEST_CASE("r0 oracle: convex truth returns the top of the grid") {
    Box bb{.xmin = -2, .ymin = -2, .xmax = 2, .ymax = 2};
    auto disk = rasterize(bb, 256, [](const Point& p) { return norm(p) <= 1.0; });
    auto grid = default_gamma_grid(1.0);
    CHECK(r0_grid_oracle(disk, grid) == doctest::Approx(grid.back()));
}

TEST_CASE("r0 oracle: two discs bridge at half the gap minus the radius") {
    auto d = SyntheticDensity::two_discs();
    auto grid = default_gamma_grid(d.characteristic_length());
    auto truth512 = true_level_mask(d, d.default_threshold(), d.reference_bbox(), 512);
    double r512 = r0_grid_oracle(truth512, grid);
    auto truth1024 = true_level_mask(d, d.default_threshold(), d.reference_bbox(), 1024);
    double r1024 = r0_grid_oracle(truth1024, grid);
    CHECK(std::abs(r512 - r1024) / r1024 < 0.05);
    CHECK(r512 == doctest::Approx(0.5).epsilon(0.12));
}

TEST_CASE("r0 oracle: annulus closes once gamma exceeds the hole radius") {
    auto d = SyntheticDensity::annulus();
    auto grid = default_gamma_grid(d.characteristic_length());
    auto truth512 = true_level_mask(d, d.default_threshold(), d.reference_bbox(), 512);
    double r512 = r0_grid_oracle(truth512, grid);
    auto truth1024 = true_level_mask(d, d.default_threshold(), d.reference_bbox(), 1024);
    double r1024 = r0_grid_oracle(truth1024, grid);
    CHECK(std::abs(r512 - r1024) / r1024 < 0.05);
    CHECK(r512 == doctest::Approx(0.5).epsilon(0.12));
}

TEST_CASE("run_convergence: smoke report is well-formed") {
    ConvergenceConfig cfg;
    cfg.density = "two-discs";
    cfg.n_grid = {500};
    cfg.replicates = 2;
    cfg.resolution = 256;
    cfg.seed = 5;
    auto report = run_convergence(cfg);
    CHECK(report.rows.size() == 2);
    CHECK(report.per_n.size() == 1);
    CHECK(report.oracle_r0 > 0);
    CHECK(report.truth_area > 0);
    for (const auto& row : report.rows) {
        CHECK(!row.failed);
        CHECK(row.d_mu >= 0);
        CHECK(row.n_plus + row.n_minus + row.n_unassigned == 500);
        CHECK(!std::isnan(row.plugin_d_mu));
    }
    // determinism
    auto again = run_convergence(cfg);
    CHECK(again.rows[0].d_mu == report.rows[0].d_mu);
    CHECK(again.rows[1].r_hat == report.rows[1].r_hat);
}
