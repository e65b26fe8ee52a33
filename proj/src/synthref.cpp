#include "levelset/synthref.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levelset/estimator.hpp"
#include "levelset/parallel.hpp"
#include "levelset/splitter.hpp"

namespace levelset {

namespace {

constexpr double kPi = std::numbers::pi;

double median_of(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

SyntheticDensity SyntheticDensity::two_discs() {
    SyntheticDensity d;
    d.name_ = "two-discs";
    d.kind_ = Kind::disc_union;
    d.discs_ = {{{-1.0, 0.0}, 0.5}, {{1.0, 0.0}, 0.5}};
    d.bbox_ = {-2.0, -1.1, 2.0, 1.1};
    d.default_t_ = 1.0 / kPi;  // half the plateau density 2/pi
    d.char_length_ = 1.0;
    return d;
}

SyntheticDensity SyntheticDensity::annulus() {
    SyntheticDensity d;
    d.name_ = "annulus";
    d.kind_ = Kind::annulus;
    d.annulus_center_ = {0.0, 0.0};
    d.annulus_inner_ = 0.5;
    d.annulus_outer_ = 1.0;
    d.bbox_ = {-1.6, -1.6, 1.6, 1.6};
    d.default_t_ = 0.5 / (kPi * 0.75);  // half the plateau density
    d.char_length_ = 1.0;
    return d;
}

SyntheticDensity SyntheticDensity::bimodal() {
    SyntheticDensity d;
    d.name_ = "bimodal";
    d.kind_ = Kind::gaussian_mixture;
    d.gauss_ = {{0.5, {-1.0, 0.0}, 0.35, 0.35}, {0.5, {1.0, 0.0}, 0.35, 0.35}};
    d.bbox_ = {-2.6, -1.8, 2.6, 1.8};
    d.default_t_ = 0.15;  // two oval components (saddle value ~ 0.022)
    d.char_length_ = 1.0;
    return d;
}

SyntheticDensity SyntheticDensity::by_name(const std::string& name) {
    if (name == "two-discs") return two_discs();
    if (name == "annulus") return annulus();
    if (name == "bimodal") return bimodal();
    fail(Error::Code::invalid_argument,
         "unknown density '" + name + "'; available: two-discs, annulus, bimodal");
}

std::vector<std::string> SyntheticDensity::names() { return {"two-discs", "annulus", "bimodal"}; }

double SyntheticDensity::pdf(const Point& p) const {
    switch (kind_) {
        case Kind::disc_union: {
            double total = 0.0;
            bool inside = false;
            for (const auto& d : discs_) {
                total += kPi * d.radius * d.radius;
                if (dist(p, d.center) <= d.radius) inside = true;
            }
            return inside ? 1.0 / total : 0.0;
        }
        case Kind::annulus: {
            double r = dist(p, annulus_center_);
            if (r >= annulus_inner_ && r <= annulus_outer_)
                return 1.0 / (kPi * (annulus_outer_ * annulus_outer_ -
                                     annulus_inner_ * annulus_inner_));
            return 0.0;
        }
        case Kind::gaussian_mixture: {
            double f = 0.0;
            for (const auto& g : gauss_) {
                double zx = (p.x - g.mean.x) / g.sx;
                double zy = (p.y - g.mean.y) / g.sy;
                f += g.weight / (2.0 * kPi * g.sx * g.sy) * std::exp(-0.5 * (zx * zx + zy * zy));
            }
            return f;
        }
    }
    return 0.0;
}

PointCloud SyntheticDensity::sample(std::size_t n, Rng& rng) const {
    PointCloud out;
    switch (kind_) {
        case Kind::disc_union: {
            double total = 0.0;
            std::vector<double> cum;
            for (const auto& d : discs_) {
                total += d.radius * d.radius;
                cum.push_back(total);
            }
            while (out.size() < n) {
                double u = rng.uniform() * total;
                std::size_t k = 0;
                while (cum[k] < u) ++k;
                const auto& d = discs_[k];
                for (;;) {  // rejection from the bounding square
                    Point p{rng.uniform(-d.radius, d.radius), rng.uniform(-d.radius, d.radius)};
                    if (norm2(p) <= d.radius * d.radius) {
                        out.add({d.center.x + p.x, d.center.y + p.y});
                        break;
                    }
                }
            }
            break;
        }
        case Kind::annulus: {
            while (out.size() < n) {
                Point p{rng.uniform(-annulus_outer_, annulus_outer_),
                        rng.uniform(-annulus_outer_, annulus_outer_)};
                double r2 = norm2(p);
                if (r2 <= annulus_outer_ * annulus_outer_ &&
                    r2 >= annulus_inner_ * annulus_inner_)
                    out.add({annulus_center_.x + p.x, annulus_center_.y + p.y});
            }
            break;
        }
        case Kind::gaussian_mixture: {
            for (std::size_t i = 0; i < n; ++i) {
                double u = rng.uniform();
                std::size_t k = 0;
                double acc = gauss_[0].weight;
                while (u > acc && k + 1 < gauss_.size()) acc += gauss_[++k].weight;
                const auto& g = gauss_[k];
                out.add({g.mean.x + g.sx * rng.normal(), g.mean.y + g.sy * rng.normal()});
            }
            break;
        }
    }
    return out;
}

RasterMask true_level_mask(const SyntheticDensity& density, double t, const Box& bbox,
                           int resolution) {
    return rasterize(bbox, resolution, [&](const Point& p) { return density.pdf(p) >= t; });
}

RasterMask true_level_mask_content(const SyntheticDensity& density, double tau, const Box& bbox,
                                   int resolution, double* f_tau_out) {
    if (!(tau > 0 && tau < 1)) fail(Error::Code::invalid_argument, "tau must lie in (0,1)");
    RasterMask grid(bbox, resolution);
    std::vector<double> pdf(static_cast<std::size_t>(resolution) * resolution);
    parallel_for(resolution, [&](std::size_t r) {
        for (int c = 0; c < resolution; ++c)
            pdf[r * resolution + c] = density.pdf(grid.center(static_cast<int>(r), c));
    });
    double cell = grid.cell_area();
    double top = *std::max_element(pdf.begin(), pdf.end());
    auto content = [&](double y) {
        double mass = 0.0;
        for (double f : pdf)
            if (f >= y) mass += f * cell;
        return mass;
    };
    // f_tau = sup{y : content(y) >= 1 - tau}
    double lo = 0.0, hi = top;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (content(mid) >= 1.0 - tau)
            lo = mid;
        else
            hi = mid;
        if (std::abs(content(lo) - (1.0 - tau)) < 1e-4 && hi - lo < 1e-9 * top) break;
    }
    if (f_tau_out) *f_tau_out = lo;
    RasterMask out(bbox, resolution);
    for (std::size_t i = 0; i < pdf.size(); ++i) out.bits()[i] = pdf[i] >= lo ? 1 : 0;
    return out;
}

double r0_grid_oracle(const RasterMask& truth, const std::vector<double>& gamma_grid) {
    if (truth.empty()) fail(Error::Code::empty_input, "r0 oracle: empty truth mask");
    const double band = 3.0 * std::max(truth.cell_width(), truth.cell_height());
    auto bcells = boundary_cells(truth);
    auto bdist = squared_distance_transform(bcells);
    const double band2 = band * band * (1.0 + 1e-12);
    const int res = truth.resolution();

    std::vector<double> gammas(gamma_grid);
    std::sort(gammas.begin(), gammas.end());
    double best = 0.0;
    for (double g : gammas) {
        // pad the grid so the dilation never clips at the frame
        int k = static_cast<int>(std::ceil(g / std::min(truth.cell_width(), truth.cell_height()))) + 2;
        Box big = truth.bbox();
        big.xmin -= k * truth.cell_width();
        big.xmax += k * truth.cell_width();
        big.ymin -= k * truth.cell_height();
        big.ymax += k * truth.cell_height();
        RasterMask embedded(big, res + 2 * k);
        for (int r = 0; r < res; ++r)
            for (int c = 0; c < res; ++c)
                if (truth.get(r, c)) embedded.set(r + k, c + k, true);
        auto closed = closing(embedded, g);
        bool ok = true;
        for (int r = 0; r < res && ok; ++r)
            for (int c = 0; c < res && ok; ++c) {
                if (closed.get(r + k, c + k) == truth.get(r, c)) continue;
                if (bdist[static_cast<std::size_t>(r) * res + c] > band2) ok = false;
            }
        if (!ok) break;
        best = g;
    }
    return best;
}

std::vector<double> default_gamma_grid(double char_length) {
    std::vector<double> out;
    double lo = 0.01 * char_length, hi = 2.0 * char_length;
    const int n = 120;  // 4.5% multiplicative steps
    for (int i = 0; i < n; ++i)
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1.0)));
    return out;
}

ConvergenceReport run_convergence(const ConvergenceConfig& cfg) {
    if (cfg.n_grid.empty() || cfg.replicates < 1)
        fail(Error::Code::invalid_argument, "run_convergence: empty experiment grid");
    SyntheticDensity density = SyntheticDensity::by_name(cfg.density);
    const Box bbox = density.reference_bbox();

    ConvergenceReport report;
    report.config = cfg;

    double t = cfg.threshold.value_or(density.default_threshold());
    RasterMask truth;
    if (cfg.tau) {
        double f_tau = 0.0;
        truth = true_level_mask_content(density, *cfg.tau, bbox, cfg.resolution, &f_tau);
        t = f_tau;
    } else {
        truth = true_level_mask(density, t, bbox, cfg.resolution);
    }
    report.threshold_used = t;
    report.truth_area = truth.area();
    report.oracle_r0 = r0_grid_oracle(truth, default_gamma_grid(density.characteristic_length()));

    const int plugin_res = std::min(cfg.resolution, 128);
    RasterMask plugin_truth =
        cfg.plugin_baseline ? true_level_mask(density, t, bbox, plugin_res) : RasterMask{};

    const std::size_t total = cfg.n_grid.size() * static_cast<std::size_t>(cfg.replicates);
    report.rows.resize(total);

    parallel_for(total, [&](std::size_t slot) {
        const int n = cfg.n_grid[slot / cfg.replicates];
        const int rep = static_cast<int>(slot % cfg.replicates);
        ReplicateRow row;
        row.n = n;
        row.replicate = rep;
        Rng rng(cfg.seed, (static_cast<std::uint64_t>(n) << 20) + static_cast<std::uint64_t>(rep));
        try {
            PointCloud sample = density.sample(static_cast<std::size_t>(n), rng);
            Bandwidth bw =
                cfg.bandwidth == BandwidthRule::lscv
                    ? fit_lscv(sample)
                    : reference_bandwidth(
                          sample, std::pow(std::log(static_cast<double>(n)) / n, 1.0 / 6.0));
            KdeModel model(sample, bw);

            MarginSchedule sched = auto_margin(model, cfg.margin_p, rng);
            double dn = sched.dn(sample.size());
            SplitSample split = split_margin(model, sample, t, dn);
            row.n_plus = split.plus.size();
            row.n_minus = split.minus.size();
            row.n_unassigned = split.unassigned.size();

            auto [rm0, rM0] = default_bracket(split.plus);
            LevelSetEstimate est = estimate_level_set(split, cfg.nu, cfg.iterations, rm0, rM0);
            row.r_hat = est.radius_estimate.r_hat;
            row.convex_fallback = est.radius_estimate.convex_fallback;

            RasterMask est_mask = rasterize(est.region, bbox, cfg.resolution);
            if (est_mask.empty()) {
                row.failed = true;
                row.note = "empty estimate raster";
            } else {
                row.d_mu = measure_distance(est_mask, truth);
                row.d_hausdorff = hausdorff(est_mask, truth);
                row.contained = contained_within_dilation(est_mask, truth, 2);
            }

            if (cfg.plugin_baseline) {
                RasterMask plug(bbox, plugin_res);
                std::vector<Point> centers;
                centers.reserve(static_cast<std::size_t>(plugin_res) * plugin_res);
                for (int r = 0; r < plugin_res; ++r)
                    for (int c = 0; c < plugin_res; ++c) centers.push_back(plug.center(r, c));
                auto vals = model.eval_cutoff(centers);
                for (std::size_t i = 0; i < vals.size(); ++i)
                    plug.bits()[i] = vals[i] >= t ? 1 : 0;
                row.plugin_d_mu = measure_distance(plug, plugin_truth);
            } else {
                row.plugin_d_mu = std::numeric_limits<double>::quiet_NaN();
            }
        } catch (const Error& e) {
            row.failed = true;
            row.note = e.what();
        }
        report.rows[slot] = std::move(row);
    });

    // aggregates per sample size
    for (std::size_t gi = 0; gi < cfg.n_grid.size(); ++gi) {
        LevelAggregate agg;
        agg.n = cfg.n_grid[gi];
        std::vector<double> dmu, dh, rel, plug;
        int contained = 0, ok = 0;
        for (int rep = 0; rep < cfg.replicates; ++rep) {
            const auto& row = report.rows[gi * cfg.replicates + rep];
            if (row.failed) {
                ++agg.failures;
                continue;
            }
            ++ok;
            dmu.push_back(row.d_mu);
            dh.push_back(row.d_hausdorff);
            if (!std::isnan(row.plugin_d_mu)) plug.push_back(row.plugin_d_mu);
            if (row.contained) ++contained;
            if (report.oracle_r0 > 0) {
                double r = std::isinf(row.r_hat) ? 10.0 * report.oracle_r0 : row.r_hat;
                rel.push_back(std::abs(r - report.oracle_r0) / report.oracle_r0);
            }
        }
        agg.median_d_mu = median_of(dmu);
        agg.median_d_hausdorff = median_of(dh);
        agg.median_rel_r_err = median_of(rel);
        agg.plugin_median_d_mu = median_of(plug);
        agg.containment_rate = ok > 0 ? static_cast<double>(contained) / ok : 0.0;
        report.per_n.push_back(agg);
    }

    // log-log least-squares slope of median d_mu against n
    std::vector<double> xs, ys;
    for (const auto& agg : report.per_n) {
        if (agg.median_d_mu > 0) {
            xs.push_back(std::log(static_cast<double>(agg.n)));
            ys.push_back(std::log(agg.median_d_mu));
        }
    }
    if (xs.size() >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= xs.size();
        my /= ys.size();
        double num = 0, den = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            num += (xs[i] - mx) * (ys[i] - my);
            den += (xs[i] - mx) * (xs[i] - mx);
        }
        report.loglog_slope_d_mu = den > 0 ? num / den : 0.0;
    }
    return report;
}

}  // namespace levelset
