#ifndef LEVELSET_SPLITTER_HPP
#define LEVELSET_SPLITTER_HPP

#include <utility>

#include "levelset/density.hpp"
#include "levelset/rng.hpp"

namespace levelset {

/// Margin sequence D_n = M (log n / n)^(p/(d+2p)).
struct MarginSchedule {
    double M = 1.0;
    int p = 2;
    int d = 2;

    double dn(std::size_t n) const;
};

enum class SplitMode { margin, calibrated };

/// Three-way partition of a sample by density thresholds. The multiset
/// union of plus/minus/unassigned always equals the input sample.
struct SplitSample {
    PointCloud plus;
    PointCloud minus;
    PointCloud unassigned;
    double t_plus = 0.0;
    double t_minus = 0.0;
    SplitMode mode = SplitMode::margin;
    bool minus_vacuous = false;  // lower threshold was <= 0
    bool plus_empty = false;
};

SplitSample split_margin(const KdeModel& model, const PointCloud& sample, double t, double dn);
SplitSample split_calibrated(const KdeModel& model, const PointCloud& sample,
                             const ThresholdPair& thresholds);

/// Classifies queries by majority vote among the k nearest labeled points.
/// k must be odd; distance ties resolve toward plus, then lower index.
std::pair<PointCloud, PointCloud> knn_classify(const PointCloud& plus, const PointCloud& minus,
                                               int k, const PointCloud& queries);

/// Runs knn_classify on split.unassigned and merges the results.
SplitSample classify_remainder(const SplitSample& split, int k);

/// Practical margin constant: M is chosen so that D_n matches the mean
/// bootstrap standard deviation of f_n over the sample (quick smoothed
/// resamples with the fitted bandwidth).
MarginSchedule auto_margin(const KdeModel& model, int p, Rng& rng, int refits = 30);

}  // namespace levelset

#endif
