#include "levelset/estimator.hpp"

#include <atomic>
#include <cmath>

#include "levelset/parallel.hpp"

namespace levelset {

bool predicate_hits(const Triangulation& plus_tri, const PointCloud& minus, double r) {
    if (minus.empty()) return false;
    const auto& pts = minus.points();
    if (pts.size() < 32) {
        for (const auto& q : pts)
            if (plus_tri.hull_contains(r, q)) return true;
        return false;
    }
    std::atomic<bool> hit{false};
    parallel_for(pts.size(), [&](std::size_t i) {
        if (hit.load(std::memory_order_relaxed)) return;
        if (plus_tri.hull_contains(r, pts[i])) hit.store(true, std::memory_order_relaxed);
    });
    return hit.load();
}

RadiusEstimate estimate_r0(std::shared_ptr<const Triangulation> plus_tri, const PointCloud& minus,
                           double r_m0, double r_M0, int iterations) {
    if (!plus_tri || plus_tri->sites().empty())
        fail(Error::Code::empty_input, "estimate_r0: empty inner set");
    if (!(r_m0 > 0) || !(r_M0 > r_m0))
        fail(Error::Code::invalid_argument, "estimate_r0: need 0 < r_m0 < r_M0");
    if (iterations < 1 || iterations > 200)
        fail(Error::Code::invalid_argument, "estimate_r0: iterations out of range");

    RadiusEstimate out;

    // no outer points: the hull is unconstrained, keep the convex hull
    if (minus.empty()) {
        out.r_hat = std::numeric_limits<double>::infinity();
        out.convex_fallback = true;
        return out;
    }

    if (predicate_hits(*plus_tri, minus, r_m0))
        fail(Error::Code::bad_bracket,
             "estimate_r0: hull already meets the outer points at r_m0; choose a smaller r_m0");

    double rM_top = r_M0;
    if (!predicate_hits(*plus_tri, minus, rM_top)) {
        bool conv_hit = false;
        for (const auto& q : minus.points())
            if (plus_tri->convex_contains(q)) {
                conv_hit = true;
                break;
            }
        if (!conv_hit) {
            out.r_hat = std::numeric_limits<double>::infinity();
            out.convex_fallback = true;
            return out;
        }
        // outer points that the convex hull reaches only through boundary
        // slivers: grow the top until the hull actually meets them
        bool found = false;
        for (int grow = 0; grow < 8; ++grow) {
            rM_top *= 2.0;
            if (predicate_hits(*plus_tri, minus, rM_top)) {
                found = true;
                break;
            }
        }
        if (!found) {
            out.r_hat = std::numeric_limits<double>::infinity();
            out.convex_fallback = true;
            return out;
        }
    }

    double rm = r_m0, rM = rM_top;
    for (int j = 0; j < iterations; ++j) {
        out.bracket_trace.emplace_back(rm, rM);
        double mid = 0.5 * (rm + rM);
        if (predicate_hits(*plus_tri, minus, mid))
            rM = mid;
        else
            rm = mid;
    }
    out.bracket_trace.emplace_back(rm, rM);
    out.iterations_used = iterations;
    out.r_hat = rm;
    return out;
}

RadiusEstimate estimate_r0(const PointCloud& plus, const PointCloud& minus, double r_m0,
                           double r_M0, int iterations) {
    auto tri = std::make_shared<Triangulation>(plus);
    return estimate_r0(tri, minus, r_m0, r_M0, iterations);
}

LevelSetEstimate estimate_level_set(const SplitSample& split, double nu, int iterations,
                                    double r_m0, double r_M0) {
    if (split.plus.empty())
        fail(Error::Code::empty_level_set, "estimated level set empty at this threshold");
    if (!(nu > 0.0) || !(nu <= 1.0))
        fail(Error::Code::invalid_argument, "estimate_level_set: nu must lie in (0, 1]");

    auto tri = std::make_shared<Triangulation>(split.plus);
    RadiusEstimate rad = estimate_r0(tri, split.minus, r_m0, r_M0, iterations);

    double radius = std::isinf(rad.r_hat) ? rad.r_hat : nu * rad.r_hat;
    RConvexRegion region(split.plus, radius, tri);
    return LevelSetEstimate{std::move(region), std::move(rad), nu, split,
                            tri->sites().size() == 1};
}

std::pair<double, double> default_bracket(const PointCloud& plus) {
    Box bb = plus.bbox();
    double diam = std::max(bb.diameter(), 1e-9);
    return {1e-3 * diam, 2.0 * diam};
}

}  // namespace levelset
