#ifndef LEVELSET_DENSITY_HPP
#define LEVELSET_DENSITY_HPP

#include <vector>

#include "levelset/common.hpp"

namespace levelset {

/// Diagonal bandwidth: H = diag(h1^2, h2^2), so h1/h2 are the kernel
/// standard deviations along each axis.
struct Bandwidth {
    double h1 = 0.0;
    double h2 = 0.0;

    Bandwidth() = default;
    Bandwidth(double a, double b) : h1(a), h2(b) {
        if (!(h1 > 0) || !(h2 > 0))
            fail(Error::Code::invalid_argument, "bandwidth entries must be positive");
    }
};

/// Gaussian kernel density estimate over a fixed sample. Immutable after
/// construction; evaluation is thread-safe.
class KdeModel {
public:
    KdeModel(PointCloud sample, Bandwidth bw);

    const PointCloud& sample() const { return sample_; }
    const Bandwidth& bandwidth() const { return bw_; }
    std::size_t size() const { return sample_.size(); }

    /// Exact evaluation of the kernel sum at x (no fast path).
    double eval(const Point& x) const;

    /// Batched evaluation, parallel over queries.
    std::vector<double> eval(const std::vector<Point>& xs) const;

    /// Batched evaluation that skips kernel terms with a squared
    /// standardized distance above `cutoff` (absolute error per query is
    /// below exp(-cutoff/2) times the kernel peak). For thresholding masks
    /// and plots, not for the exact estimator path.
    std::vector<double> eval_cutoff(const std::vector<Point>& xs, double cutoff = 120.0) const;

    /// Values at the model's own sample points.
    std::vector<double> self_values() const { return eval(sample_.points()); }

private:
    PointCloud sample_;
    Bandwidth bw_;
    double inv_h1_, inv_h2_, norm_;
};

/// Closed-form least-squares cross-validation score for the Gaussian
/// kernel with diagonal bandwidth.
double lscv_objective(const PointCloud& sample, const Bandwidth& bw);

/// Minimizes lscv_objective over diagonal bandwidths: log-scale
/// Nelder-Mead from the normal-reference start with restarts at twice and
/// half that start. Deterministic given the sample.
Bandwidth fit_lscv(const PointCloud& sample);

/// Normal-reference (rate) bandwidth: h_i = sd_i * factor.
Bandwidth reference_bandwidth(const PointCloud& sample, double factor);

/// Type-1 empirical quantile: sorted ascending, entry ceil(tau*n) (1-based).
double quantile_threshold(const std::vector<double>& values, double tau);

/// Upper/lower density thresholds bracketing a level.
struct ThresholdPair {
    double f_plus = 0.0;
    double f_minus = 0.0;

    ThresholdPair() = default;
    ThresholdPair(double plus, double minus) : f_plus(plus), f_minus(minus) {
        if (!(f_plus >= f_minus) || !(f_minus >= 0.0))
            fail(Error::Code::invalid_argument, "thresholds must satisfy f_plus >= f_minus >= 0");
    }
};

}  // namespace levelset

#endif
