#include "levelset/calibration.hpp"

#include <algorithm>
#include <cmath>

#include "levelset/parallel.hpp"
#include "levelset/splitter.hpp"

namespace levelset {

double CalibrationConfig::resolved_delta(std::size_t n) const {
    if (delta) return *delta;
    double nd = static_cast<double>(n);
    double d = std::min({(1.0 - tau - 3.0 / nd) / grid_halfsize,
                         (tau - 3.0 / nd) / grid_halfsize, 0.01});
    return d;
}

int CalibrationConfig::resolved_mc_size(std::size_t n) const {
    if (mc_size) return *mc_size;
    return std::max<int>(3000, static_cast<int>(3 * n));
}

void CalibrationConfig::validate(std::size_t n) const {
    if (!(tau > 0 && tau < 1)) fail(Error::Code::invalid_argument, "calibration: tau not in (0,1)");
    if (grid_halfsize < 1) fail(Error::Code::invalid_argument, "calibration: I must be >= 1");
    if (replicates < 1) fail(Error::Code::invalid_argument, "calibration: B must be >= 1");
    if (iterations < 1 || iterations > 200)
        fail(Error::Code::invalid_argument, "calibration: J out of range");
    if (k_grid.empty()) fail(Error::Code::invalid_argument, "calibration: empty k grid");
    for (int k : k_grid)
        if (k < 1 || k % 2 == 0)
            fail(Error::Code::invalid_argument, "calibration: k grid entries must be odd");
    double d = resolved_delta(n);
    if (!(d > 0))
        fail(Error::Code::invalid_argument,
             "calibration: grid step is non-positive; tau too extreme for this sample size");
    double nd = static_cast<double>(n);
    if (tau + grid_halfsize * d > (nd - 1.0) / nd + 1e-12 ||
        tau - grid_halfsize * d < 1.0 / nd - 1e-12)
        fail(Error::Code::invalid_argument,
             "calibration: tau grid leaves the admissible quantile range");
    if (resolved_mc_size(n) < 10)
        fail(Error::Code::invalid_argument, "calibration: Monte-Carlo size too small");
}

PointCloud sample_from_kde(const KdeModel& model, std::size_t n, Rng& rng) {
    PointCloud out;
    const auto& pts = model.sample().points();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& base = pts[rng.uniform_index(pts.size())];
        out.add({base.x + model.bandwidth().h1 * rng.normal(),
                 base.y + model.bandwidth().h2 * rng.normal()});
    }
    return out;
}

double mc_threshold(const KdeModel& model, double tau, int mc_size, Rng& rng) {
    if (mc_size < 1) fail(Error::Code::invalid_argument, "mc_threshold: size must be positive");
    PointCloud draw = sample_from_kde(model, static_cast<std::size_t>(mc_size), rng);
    return quantile_threshold(model.eval(draw.points()), tau);
}

double mc_measure_error(const KdeModel& model, double f_star,
                        const std::function<bool(const Point&)>& member, int mc_size, Rng& rng) {
    PointCloud draw = sample_from_kde(model, static_cast<std::size_t>(mc_size), rng);
    auto values = model.eval(draw.points());
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        bool in_lstar = values[i] >= f_star;
        bool in_est = member(draw[i]);
        if (in_lstar != in_est) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(mc_size);
}

double mc_measure_error(const KdeModel& model, double f_star, const RConvexRegion& estimate,
                        int mc_size, Rng& rng) {
    return mc_measure_error(
        model, f_star, [&](const Point& p) { return estimate.contains(p); }, mc_size, rng);
}

namespace {

/// Error of a region against L*(tau) on a shared evaluation sample.
double count_error(const std::vector<Point>& draw, const std::vector<double>& fn_at_draw,
                   double f_star, const RConvexRegion& region) {
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < draw.size(); ++i) {
        bool in_lstar = fn_at_draw[i] >= f_star;
        bool in_est = region.contains(draw[i]);
        if (in_lstar != in_est) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(draw.size());
}

}  // namespace

ReplicateSlice bootstrap_replicate(const KdeModel& model, const CalibrationConfig& cfg,
                                   double f_star, int replicate_index) {
    const std::size_t n = model.size();
    const std::size_t I1 = static_cast<std::size_t>(cfg.grid_halfsize) + 1;
    const std::size_t K = cfg.k_grid.size();
    const std::size_t cells = I1 * I1 * K;
    const double delta = cfg.resolved_delta(n);
    const int M = cfg.resolved_mc_size(n);

    ReplicateSlice slice;
    slice.error.assign(cells, 1.0);
    slice.failed.assign(cells, 1);

    Rng rng(cfg.seed, 0x10000 + static_cast<std::uint64_t>(replicate_index));
    try {
        PointCloud boot = sample_from_kde(model, n, rng);
        Bandwidth h_star = fit_lscv(boot);  // the bootstrap world refits its bandwidth
        KdeModel boot_model(boot, h_star);
        std::vector<double> boot_values = boot_model.eval(boot.points());

        PointCloud eval_draw = sample_from_kde(model, static_cast<std::size_t>(M), rng);
        std::vector<double> fn_at_draw = model.eval_cutoff(eval_draw.points());

        for (std::size_t j1 = 0; j1 < I1; ++j1) {
            double tau_plus = cfg.tau + static_cast<double>(j1) * delta;
            double f_plus = quantile_threshold(boot_values, tau_plus);
            for (std::size_t j2 = 0; j2 < I1; ++j2) {
                double tau_minus = cfg.tau - static_cast<double>(j2) * delta;
                double f_minus = quantile_threshold(boot_values, tau_minus);
                SplitSample split =
                    split_calibrated(boot_model, boot, ThresholdPair(f_plus, f_minus));
                for (std::size_t j3 = 0; j3 < K; ++j3) {
                    std::size_t cell = (j1 * I1 + j2) * K + j3;
                    try {
                        SplitSample full = split;
                        if (!split.unassigned.empty()) {
                            if (split.plus.empty()) {
                                // nothing confidently inside: failure cell
                                continue;
                            }
                            if (split.minus.empty()) {
                                // no outside evidence: the remainder joins the inner set
                                for (const auto& p : split.unassigned.points())
                                    full.plus.add(p);
                                full.unassigned = PointCloud{};
                            } else {
                                full = classify_remainder(split, cfg.k_grid[j3]);
                            }
                        }
                        if (full.plus.empty()) continue;
                        auto [rm0, rM0] = default_bracket(full.plus);
                        LevelSetEstimate est =
                            estimate_level_set(full, 1.0, cfg.iterations, rm0, rM0);
                        slice.error[cell] =
                            count_error(eval_draw.points(), fn_at_draw, f_star, est.region);
                        slice.failed[cell] = 0;
                    } catch (const Error&) {
                        // keep the failure score
                    }
                }
            }
        }
    } catch (const Error&) {
        // whole replicate failed; all cells keep the failure score
    }
    return slice;
}

CalibrationResult calibrate(const KdeModel& model, const CalibrationConfig& cfg) {
    const std::size_t n = model.size();
    if (n < 30) fail(Error::Code::invalid_argument, "calibrate: needs at least 30 points");
    cfg.validate(n);

    const std::size_t I1 = static_cast<std::size_t>(cfg.grid_halfsize) + 1;
    const std::size_t K = cfg.k_grid.size();
    const std::size_t cells = I1 * I1 * K;
    const double delta = cfg.resolved_delta(n);
    const int M = cfg.resolved_mc_size(n);

    Rng step1(cfg.seed, 1);
    double f_star = mc_threshold(model, cfg.tau, M, step1);

    std::vector<ReplicateSlice> slices(cfg.replicates);
    parallel_for(static_cast<std::size_t>(cfg.replicates), [&](std::size_t b) {
        slices[b] = bootstrap_replicate(model, cfg, f_star, static_cast<int>(b));
    });

    CalibrationResult out;
    out.f_star = f_star;
    out.delta_used = delta;
    out.mc_size_used = M;
    out.replicates_used = cfg.replicates;
    out.seed = cfg.seed;
    out.k_grid = cfg.k_grid;
    for (std::size_t j = 0; j < I1; ++j) {
        out.tau_plus_grid.push_back(cfg.tau + static_cast<double>(j) * delta);
        out.tau_minus_grid.push_back(cfg.tau - static_cast<double>(j) * delta);
    }
    out.mean_error.assign(cells, 0.0);
    out.failure_count.assign(cells, 0);
    for (int b = 0; b < cfg.replicates; ++b) {
        for (std::size_t c = 0; c < cells; ++c) {
            out.mean_error[c] += slices[b].error[c];
            out.failure_count[c] += slices[b].failed[c];
        }
    }
    for (std::size_t c = 0; c < cells; ++c) out.mean_error[c] /= cfg.replicates;

    bool any_ok = false;
    for (std::size_t c = 0; c < cells; ++c)
        if (out.failure_count[c] < cfg.replicates) any_ok = true;
    if (!any_ok) fail(Error::Code::degenerate, "calibrate: every grid cell failed");

    // argmin: lowest mean error, then least grid trimming, then smallest k
    std::size_t best = 0;
    auto better = [&](std::size_t a, std::size_t bcell) {
        if (out.mean_error[a] != out.mean_error[bcell])
            return out.mean_error[a] < out.mean_error[bcell];
        auto trim = [&](std::size_t cell) {
            std::size_t j3 = cell % K;
            std::size_t j2 = (cell / K) % I1;
            std::size_t j1 = cell / (K * I1);
            return std::pair<std::size_t, int>{j1 + j2, cfg.k_grid[j3]};
        };
        return trim(a) < trim(bcell);
    };
    for (std::size_t c = 1; c < cells; ++c)
        if (better(c, best)) best = c;

    std::size_t j3 = best % K;
    std::size_t j2 = (best / K) % I1;
    std::size_t j1 = best / (K * I1);
    out.tau_plus_hat = out.tau_plus_grid[j1];
    out.tau_minus_hat = out.tau_minus_grid[j2];
    out.k_hat = cfg.k_grid[j3];

    auto original_values = model.eval(model.sample().points());
    double f_plus = quantile_threshold(original_values, out.tau_plus_hat);
    double f_minus = quantile_threshold(original_values, out.tau_minus_hat);
    out.thresholds = ThresholdPair(f_plus, f_minus);
    return out;
}

CalibrationResult calibrate(const PointCloud& sample, const CalibrationConfig& cfg) {
    KdeModel model(sample, fit_lscv(sample));
    return calibrate(model, cfg);
}

}  // namespace levelset
