#ifndef LEVELSET_SYNTHREF_HPP
#define LEVELSET_SYNTHREF_HPP

#include <optional>
#include <string>
#include <vector>

#include "levelset/density.hpp"
#include "levelset/raster.hpp"
#include "levelset/rng.hpp"

namespace levelset {

/// Reference density with an exact pointwise pdf and an exact sampler.
class SyntheticDensity {
public:
    enum class Kind { gaussian_mixture, disc_union, annulus };

    struct GaussComponent {
        double weight;
        Point mean;
        double sx, sy;
    };
    struct Disc {
        Point center;
        double radius;
    };

    static SyntheticDensity two_discs();
    static SyntheticDensity annulus();
    static SyntheticDensity bimodal();
    static SyntheticDensity by_name(const std::string& name);
    static std::vector<std::string> names();

    const std::string& name() const { return name_; }
    Kind kind() const { return kind_; }

    double pdf(const Point& p) const;
    PointCloud sample(std::size_t n, Rng& rng) const;

    /// Canonical bbox covering the support (or essentially all mass).
    const Box& reference_bbox() const { return bbox_; }
    /// A threshold that makes {f >= t} a nonconvex reference shape.
    double default_threshold() const { return default_t_; }
    /// Scale used to build the oracle's gamma grid.
    double characteristic_length() const { return char_length_; }

private:
    std::string name_;
    Kind kind_ = Kind::gaussian_mixture;
    std::vector<GaussComponent> gauss_;
    std::vector<Disc> discs_;
    Point annulus_center_;
    double annulus_inner_ = 0.0, annulus_outer_ = 0.0;
    Box bbox_;
    double default_t_ = 0.0;
    double char_length_ = 1.0;
};

/// Rasterized {f >= t}.
RasterMask true_level_mask(const SyntheticDensity& density, double t, const Box& bbox,
                           int resolution);

/// Rasterized L(tau): the threshold f_tau is found by bisection on the
/// probability-content constraint evaluated on the raster (content tolerance
/// 1e-4); returns the mask and reports f_tau.
RasterMask true_level_mask_content(const SyntheticDensity& density, double tau, const Box& bbox,
                                   int resolution, double* f_tau_out = nullptr);

/// Largest gamma in the grid (ascending scan) whose raster closing leaves
/// the truth unchanged up to a 3-cell boundary band; 0 when none passes.
double r0_grid_oracle(const RasterMask& truth, const std::vector<double>& gamma_grid);

/// 60 log-spaced gammas on [0.01, 2] x characteristic length.
std::vector<double> default_gamma_grid(double char_length);

enum class BandwidthRule { rate, lscv };

struct ConvergenceConfig {
    std::string density = "two-discs";
    std::optional<double> threshold;  // default: density's reference threshold
    std::optional<double> tau;        // content mode when set
    std::vector<int> n_grid{500, 1000, 2000, 4000};
    int replicates = 20;
    double nu = 1.0;
    int iterations = 40;
    int resolution = 512;
    int margin_p = 2;
    BandwidthRule bandwidth = BandwidthRule::rate;
    std::uint64_t seed = 1;
    bool plugin_baseline = true;
};

struct ReplicateRow {
    int n = 0;
    int replicate = 0;
    double r_hat = 0.0;  // infinity on convex fallback, NaN on failure
    bool convex_fallback = false;
    bool failed = false;
    std::string note;
    double d_mu = 0.0;
    double d_hausdorff = 0.0;
    double plugin_d_mu = 0.0;  // NaN when disabled
    bool contained = false;    // estimate inside truth dilated by 2 cells
    std::size_t n_plus = 0, n_minus = 0, n_unassigned = 0;
};

struct LevelAggregate {
    int n = 0;
    double median_d_mu = 0.0;
    double median_d_hausdorff = 0.0;
    double median_rel_r_err = 0.0;  // vs the oracle r0
    double plugin_median_d_mu = 0.0;
    double containment_rate = 0.0;
    int failures = 0;
};

struct ConvergenceReport {
    ConvergenceConfig config;
    double threshold_used = 0.0;
    double oracle_r0 = 0.0;
    double truth_area = 0.0;
    std::vector<ReplicateRow> rows;
    std::vector<LevelAggregate> per_n;
    double loglog_slope_d_mu = 0.0;  // least-squares slope of log median d_mu vs log n
};

ConvergenceReport run_convergence(const ConvergenceConfig& cfg);

}  // namespace levelset

#endif
