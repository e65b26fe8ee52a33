#include "levelset/density.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "levelset/parallel.hpp"

namespace levelset {

namespace {

constexpr double kInvTwoPi = 1.0 / (2.0 * std::numbers::pi);

/// Centered bivariate Gaussian density with covariance diag(s1^2, s2^2).
double gauss2(double zx, double zy, double s1, double s2) {
    double qx = zx / s1, qy = zy / s2;
    return kInvTwoPi / (s1 * s2) * std::exp(-0.5 * (qx * qx + qy * qy));
}

}  // namespace

KdeModel::KdeModel(PointCloud sample, Bandwidth bw) : sample_(std::move(sample)), bw_(bw) {
    if (sample_.empty()) fail(Error::Code::empty_input, "kde: empty sample");
    if (!sample_.all_finite()) fail(Error::Code::invalid_argument, "kde: non-finite sample");
    inv_h1_ = 1.0 / bw_.h1;
    inv_h2_ = 1.0 / bw_.h2;
    norm_ = kInvTwoPi * inv_h1_ * inv_h2_ / static_cast<double>(sample_.size());
}

double KdeModel::eval(const Point& x) const {
    double acc = 0.0;
    for (const auto& p : sample_.points()) {
        double zx = (x.x - p.x) * inv_h1_;
        double zy = (x.y - p.y) * inv_h2_;
        acc += std::exp(-0.5 * (zx * zx + zy * zy));
    }
    return acc * norm_;
}

std::vector<double> KdeModel::eval(const std::vector<Point>& xs) const {
    std::vector<double> out(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { out[i] = eval(xs[i]); });
    return out;
}

std::vector<double> KdeModel::eval_cutoff(const std::vector<Point>& xs, double cutoff) const {
    std::vector<double> out(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
        double acc = 0.0;
        for (const auto& p : sample_.points()) {
            double zx = (xs[i].x - p.x) * inv_h1_;
            double zy = (xs[i].y - p.y) * inv_h2_;
            double q = zx * zx + zy * zy;
            if (q < cutoff) acc += std::exp(-0.5 * q);
        }
        out[i] = acc * norm_;
    });
    return out;
}

double lscv_objective(const PointCloud& sample, const Bandwidth& bw) {
    const std::size_t n = sample.size();
    if (n < 2) fail(Error::Code::invalid_argument, "lscv: needs at least 2 points");
    const auto& pts = sample.points();
    const double h1 = bw.h1, h2 = bw.h2;
    const double s1 = std::numbers::sqrt2 * h1, s2 = std::numbers::sqrt2 * h2;

    // n^-2 sum_{i,j} phi_{2H}(Xi-Xj) - 2/(n(n-1)) sum_{i != j} phi_H(Xi-Xj);
    // pair terms with a huge standardized distance underflow and are skipped
    const double peak2 = kInvTwoPi / (s1 * s2);
    const double peak1 = kInvTwoPi / (h1 * h2);
    const std::size_t blocks = std::min<std::size_t>(worker_count() * 8, n);
    std::vector<double> partial2(blocks, 0.0), partial1(blocks, 0.0);
    parallel_for(blocks, [&](std::size_t blk) {
        double a2 = 0.0, a1 = 0.0;
        for (std::size_t i = blk; i < n; i += blocks) {
            const Point& pi = pts[i];
            for (std::size_t j = i + 1; j < n; ++j) {
                double dx = pi.x - pts[j].x;
                double dy = pi.y - pts[j].y;
                double q2 = 0.5 * ((dx * dx) / (s1 * s1) + (dy * dy) / (s2 * s2));
                if (q2 < 120.0) a2 += std::exp(-q2);
                double q1 = 0.5 * ((dx * dx) / (h1 * h1) + (dy * dy) / (h2 * h2));
                if (q1 < 120.0) a1 += std::exp(-q1);
            }
        }
        partial2[blk] = a2;
        partial1[blk] = a1;
    });
    double cross2 = 0.0, cross1 = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
        cross2 += partial2[b];
        cross1 += partial1[b];
    }
    const double nd = static_cast<double>(n);
    double term_sq = (nd * peak2 + 2.0 * peak2 * cross2) / (nd * nd);
    double term_cv = 2.0 * (2.0 * peak1 * cross1) / (nd * (nd - 1.0));
    return term_sq - term_cv;
}

namespace {

struct SampleStats {
    double sd1, sd2, spread;
};

SampleStats sample_stats(const PointCloud& sample) {
    const auto& pts = sample.points();
    double mx = 0, my = 0;
    for (const auto& p : pts) {
        mx += p.x;
        my += p.y;
    }
    mx /= pts.size();
    my /= pts.size();
    double vx = 0, vy = 0;
    for (const auto& p : pts) {
        vx += (p.x - mx) * (p.x - mx);
        vy += (p.y - my) * (p.y - my);
    }
    vx /= (pts.size() - 1);
    vy /= (pts.size() - 1);
    Box bb = sample.bbox();
    double spread = std::max(bb.diameter(), 1e-12);
    return {std::sqrt(vx), std::sqrt(vy), spread};
}

/// Nelder-Mead on fn over R^2, deterministic. Returns best point found.
std::pair<std::array<double, 2>, double> nelder_mead(
    const std::function<double(const std::array<double, 2>&)>& fn, std::array<double, 2> start,
    double step, int max_evals) {
    struct V {
        std::array<double, 2> x;
        double f;
    };
    int evals = 0;
    auto eval = [&](const std::array<double, 2>& x) {
        ++evals;
        return fn(x);
    };
    std::array<V, 3> s;
    s[0] = {start, eval(start)};
    s[1] = {{start[0] + step, start[1]}, 0};
    s[1].f = eval(s[1].x);
    s[2] = {{start[0], start[1] + step}, 0};
    s[2].f = eval(s[2].x);

    while (evals < max_evals) {
        std::sort(s.begin(), s.end(), [](const V& a, const V& b) { return a.f < b.f; });
        if (std::abs(s[2].f - s[0].f) < 1e-12 * (std::abs(s[0].f) + 1e-300) &&
            std::hypot(s[2].x[0] - s[0].x[0], s[2].x[1] - s[0].x[1]) < 1e-10)
            break;
        std::array<double, 2> cen{(s[0].x[0] + s[1].x[0]) / 2, (s[0].x[1] + s[1].x[1]) / 2};
        auto mix = [&](double t) {
            return std::array<double, 2>{cen[0] + t * (cen[0] - s[2].x[0]),
                                         cen[1] + t * (cen[1] - s[2].x[1])};
        };
        auto xr = mix(1.0);
        double fr = eval(xr);
        if (fr < s[0].f) {
            auto xe = mix(2.0);
            double fe = eval(xe);
            if (fe < fr)
                s[2] = {xe, fe};
            else
                s[2] = {xr, fr};
        } else if (fr < s[1].f) {
            s[2] = {xr, fr};
        } else {
            auto xc = mix(fr < s[2].f ? 0.5 : -0.5);
            double fc = eval(xc);
            if (fc < std::min(fr, s[2].f)) {
                s[2] = {xc, fc};
            } else {  // shrink
                for (int i = 1; i < 3; ++i) {
                    s[i].x = {s[0].x[0] + 0.5 * (s[i].x[0] - s[0].x[0]),
                              s[0].x[1] + 0.5 * (s[i].x[1] - s[0].x[1])};
                    s[i].f = eval(s[i].x);
                }
            }
        }
    }
    std::sort(s.begin(), s.end(), [](const V& a, const V& b) { return a.f < b.f; });
    return {s[0].x, s[0].f};
}

}  // namespace

Bandwidth reference_bandwidth(const PointCloud& sample, double factor) {
    if (sample.size() < 2) fail(Error::Code::invalid_argument, "bandwidth: needs >= 2 points");
    auto st = sample_stats(sample);
    double floor = 1e-6 * st.spread;
    return {std::max(st.sd1 * factor, floor), std::max(st.sd2 * factor, floor)};
}

Bandwidth fit_lscv(const PointCloud& sample) {
    const std::size_t n = sample.size();
    if (n < 5) fail(Error::Code::invalid_argument, "fit_lscv: needs at least 5 points");
    auto st = sample_stats(sample);
    if (st.sd1 <= 1e-12 * st.spread || st.sd2 <= 1e-12 * st.spread)
        fail(Error::Code::degenerate, "fit_lscv: a coordinate is (nearly) constant");

    const double nf = std::pow(static_cast<double>(n), -1.0 / 6.0);
    std::array<double, 2> start{std::log(st.sd1 * nf), std::log(st.sd2 * nf)};

    auto objective = [&](const std::array<double, 2>& u) {
        Bandwidth bw{std::exp(u[0]), std::exp(u[1])};
        return lscv_objective(sample, bw);
    };

    std::array<double, 2> best{};
    double best_f = std::numeric_limits<double>::infinity();
    const double ln2 = std::numbers::ln2;
    for (double off : {0.0, ln2, -ln2}) {
        std::array<double, 2> s0{start[0] + off, start[1] + off};
        auto [x, f] = nelder_mead(objective, s0, 0.35, 220);
        if (f < best_f) {
            best_f = f;
            best = x;
        }
    }
    return {std::exp(best[0]), std::exp(best[1])};
}

double quantile_threshold(const std::vector<double>& values, double tau) {
    if (values.empty()) fail(Error::Code::empty_input, "quantile: empty values");
    if (!(tau > 0.0 && tau < 1.0))
        fail(Error::Code::invalid_argument, "quantile: tau must lie in (0,1)");
    for (double v : values)
        if (!std::isfinite(v)) fail(Error::Code::invalid_argument, "quantile: non-finite value");
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    std::size_t n = sorted.size();
    std::size_t idx = static_cast<std::size_t>(std::ceil(tau * static_cast<double>(n)));
    idx = std::min(std::max<std::size_t>(idx, 1), n);
    return sorted[idx - 1];
}

}  // namespace levelset
