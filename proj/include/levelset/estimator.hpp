#ifndef LEVELSET_ESTIMATOR_HPP
#define LEVELSET_ESTIMATOR_HPP

#include <memory>
#include <optional>
#include <vector>

#include "levelset/geometry.hpp"
#include "levelset/splitter.hpp"

namespace levelset {

/// Result of the dichotomy search for the largest radius whose hull of the
/// inner points avoids the outer points.
struct RadiusEstimate {
    double r_hat = 0.0;  // infinity when the convex fallback applies
    std::vector<std::pair<double, double>> bracket_trace;
    int iterations_used = 0;
    bool convex_fallback = false;
};

/// TRUE iff some point of `minus` lies in C_r(plus sites).
bool predicate_hits(const Triangulation& plus_tri, const PointCloud& minus, double r);

RadiusEstimate estimate_r0(std::shared_ptr<const Triangulation> plus_tri,
                           const PointCloud& minus, double r_m0, double r_M0, int iterations);
RadiusEstimate estimate_r0(const PointCloud& plus, const PointCloud& minus, double r_m0,
                           double r_M0, int iterations);

/// The final set estimate: the (nu * r_hat)-convex hull of the inner points
/// (convex hull when the fallback applies).
struct LevelSetEstimate {
    RConvexRegion region;
    RadiusEstimate radius_estimate;
    double nu = 1.0;
    SplitSample split;
    bool singleton_plus = false;
};

LevelSetEstimate estimate_level_set(const SplitSample& split, double nu, int iterations,
                                    double r_m0, double r_M0);

/// Default bracket from the data scale: (1e-3 * diameter, 2 * diameter).
std::pair<double, double> default_bracket(const PointCloud& plus);

}  // namespace levelset

#endif
