#ifndef LEVELSET_CALIBRATION_HPP
#define LEVELSET_CALIBRATION_HPP

#include <functional>
#include <optional>
#include <vector>

#include "levelset/density.hpp"
#include "levelset/estimator.hpp"
#include "levelset/rng.hpp"

namespace levelset {

/// Inputs of the bootstrap calibration of (tau+, tau-, k).
struct CalibrationConfig {
    double tau = 0.5;
    int grid_halfsize = 10;           // I
    std::optional<double> delta;      // default min{(1-tau-3/n)/I, (tau-3/n)/I, 0.01}
    int replicates = 500;             // B
    std::optional<int> mc_size;       // M; default max(3000, 3n)
    std::vector<int> k_grid{1, 3, 5};
    int iterations = 40;              // dichotomy steps
    std::uint64_t seed = 1;

    double resolved_delta(std::size_t n) const;
    int resolved_mc_size(std::size_t n) const;
    void validate(std::size_t n) const;
};

/// Full calibration output: the selected cell plus the averaged error table
/// indexed by (j1, j2, j3) -> ((j1 * (I+1)) + j2) * K + j3.
struct CalibrationResult {
    double tau_plus_hat = 0.0;
    double tau_minus_hat = 0.0;
    int k_hat = 0;
    ThresholdPair thresholds;
    double f_star = 0.0;  // bootstrap-world threshold from step 1
    std::vector<double> tau_plus_grid;
    std::vector<double> tau_minus_grid;
    std::vector<int> k_grid;
    std::vector<double> mean_error;
    std::vector<int> failure_count;
    double delta_used = 0.0;
    int mc_size_used = 0;
    int replicates_used = 0;
    std::uint64_t seed = 0;

    std::size_t cell_index(std::size_t j1, std::size_t j2, std::size_t j3) const {
        return (j1 * tau_minus_grid.size() + j2) * k_grid.size() + j3;
    }
};

/// Step 1: Monte-Carlo threshold in the bootstrap world; draws mc_size
/// points from the kernel estimate and takes the tau-quantile of its values.
double mc_threshold(const KdeModel& model, double tau, int mc_size, Rng& rng);

/// Step 2(c)vi: error of a candidate region against L*(tau) = {f_n >= f_star},
/// estimated by counting misclassified fresh draws from f_n.
double mc_measure_error(const KdeModel& model, double f_star,
                        const std::function<bool(const Point&)>& member, int mc_size, Rng& rng);
double mc_measure_error(const KdeModel& model, double f_star, const RConvexRegion& estimate,
                        int mc_size, Rng& rng);

/// One bootstrap replicate: returns the error grid slice (failures score 1
/// and are flagged). Deterministic given (model, cfg, f_star, index).
struct ReplicateSlice {
    std::vector<double> error;
    std::vector<std::uint8_t> failed;
};
ReplicateSlice bootstrap_replicate(const KdeModel& model, const CalibrationConfig& cfg,
                                   double f_star, int replicate_index);

/// The full procedure: step 1 once, B replicates (parallel, derived RNG
/// streams), average, argmin with deterministic tie-breaking, thresholds on
/// the original sample's kernel values.
CalibrationResult calibrate(const PointCloud& sample, const CalibrationConfig& cfg);
CalibrationResult calibrate(const KdeModel& model, const CalibrationConfig& cfg);

/// Smoothed-bootstrap draw from a kernel estimate.
PointCloud sample_from_kde(const KdeModel& model, std::size_t n, Rng& rng);

}  // namespace levelset

#endif
