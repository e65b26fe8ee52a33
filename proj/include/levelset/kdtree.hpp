#ifndef LEVELSET_KDTREE_HPP
#define LEVELSET_KDTREE_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "levelset/common.hpp"

namespace levelset {

/// Static 2-d kd-tree over a point array. Queries are read-only and
/// thread-safe.
class KdTree {
public:
    KdTree() = default;

    explicit KdTree(const std::vector<Point>& pts) : pts_(pts) {
        idx_.resize(pts_.size());
        std::iota(idx_.begin(), idx_.end(), std::size_t{0});
        if (!idx_.empty()) build(0, idx_.size(), 0);
    }

    std::size_t size() const { return pts_.size(); }

    /// Index of the nearest point and its squared distance.
    std::pair<std::size_t, double> nearest(const Point& q) const {
        std::size_t best = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        nearest_rec(0, idx_.size(), 0, q, best, best_d2);
        return {best, best_d2};
    }

    double nearest_dist(const Point& q) const { return std::sqrt(nearest(q).second); }

    /// True iff some point lies strictly closer than d. Aborts early, so it
    /// is much cheaper than a full nearest query when the answer is yes.
    bool any_closer_than(const Point& q, double d) const {
        if (idx_.empty()) return false;
        return any_rec(0, idx_.size(), 0, q, d * d);
    }

    /// Indices of the k nearest points, ordered by (distance, index).
    /// Distance ties are broken toward the lower index.
    std::vector<std::size_t> k_nearest(const Point& q, std::size_t k) const {
        k = std::min(k, idx_.size());
        std::vector<std::pair<double, std::size_t>> heap;  // max-heap on (d2, -index)
        heap.reserve(k + 1);
        knn_rec(0, idx_.size(), 0, q, k, heap);
        std::sort(heap.begin(), heap.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first < b.first;
            return a.second < b.second;
        });
        std::vector<std::size_t> out(heap.size());
        for (std::size_t i = 0; i < heap.size(); ++i) out[i] = heap[i].second;
        return out;
    }

private:
    static double coord(const Point& p, int axis) { return axis == 0 ? p.x : p.y; }

    void build(std::size_t lo, std::size_t hi, int axis) {
        if (hi - lo <= 1) return;
        std::size_t mid = (lo + hi) / 2;
        std::nth_element(idx_.begin() + lo, idx_.begin() + mid, idx_.begin() + hi,
                         [&](std::size_t a, std::size_t b) {
                             double ca = coord(pts_[a], axis), cb = coord(pts_[b], axis);
                             if (ca != cb) return ca < cb;
                             return a < b;
                         });
        build(lo, mid, 1 - axis);
        build(mid + 1, hi, 1 - axis);
    }

    void nearest_rec(std::size_t lo, std::size_t hi, int axis, const Point& q,
                     std::size_t& best, double& best_d2) const {
        if (lo >= hi) return;
        std::size_t mid = (lo + hi) / 2;
        const Point& p = pts_[idx_[mid]];
        double d2 = dist2(p, q);
        if (d2 < best_d2 || (d2 == best_d2 && idx_[mid] < best)) {
            best_d2 = d2;
            best = idx_[mid];
        }
        double delta = coord(q, axis) - coord(p, axis);
        std::size_t first_lo = lo, first_hi = mid, second_lo = mid + 1, second_hi = hi;
        if (delta > 0) {
            std::swap(first_lo, second_lo);
            std::swap(first_hi, second_hi);
        }
        nearest_rec(first_lo, first_hi, 1 - axis, q, best, best_d2);
        if (delta * delta < best_d2) nearest_rec(second_lo, second_hi, 1 - axis, q, best, best_d2);
    }

    bool any_rec(std::size_t lo, std::size_t hi, int axis, const Point& q, double d2_lim) const {
        if (lo >= hi) return false;
        std::size_t mid = (lo + hi) / 2;
        const Point& p = pts_[idx_[mid]];
        if (dist2(p, q) < d2_lim) return true;
        double delta = coord(q, axis) - coord(p, axis);
        std::size_t first_lo = lo, first_hi = mid, second_lo = mid + 1, second_hi = hi;
        if (delta > 0) {
            std::swap(first_lo, second_lo);
            std::swap(first_hi, second_hi);
        }
        if (any_rec(first_lo, first_hi, 1 - axis, q, d2_lim)) return true;
        if (delta * delta < d2_lim) return any_rec(second_lo, second_hi, 1 - axis, q, d2_lim);
        return false;
    }

    void knn_rec(std::size_t lo, std::size_t hi, int axis, const Point& q, std::size_t k,
                 std::vector<std::pair<double, std::size_t>>& heap) const {
        if (lo >= hi) return;
        std::size_t mid = (lo + hi) / 2;
        std::size_t i = idx_[mid];
        double d2 = dist2(pts_[i], q);
        // heap front is the worst kept candidate: largest (distance, index)
        auto before = [](const std::pair<double, std::size_t>& a,
                         const std::pair<double, std::size_t>& b) {
            if (a.first != b.first) return a.first < b.first;
            return a.second < b.second;
        };
        if (heap.size() < k) {
            heap.emplace_back(d2, i);
            std::push_heap(heap.begin(), heap.end(), before);
        } else if (before({d2, i}, heap.front())) {
            std::pop_heap(heap.begin(), heap.end(), before);
            heap.back() = {d2, i};
            std::push_heap(heap.begin(), heap.end(), before);
        }
        double delta = coord(q, axis) - coord(pts_[i], axis);
        std::size_t first_lo = lo, first_hi = mid, second_lo = mid + 1, second_hi = hi;
        if (delta > 0) {
            std::swap(first_lo, second_lo);
            std::swap(first_hi, second_hi);
        }
        knn_rec(first_lo, first_hi, 1 - axis, q, k, heap);
        if (heap.size() < k || delta * delta <= heap.front().first)
            knn_rec(second_lo, second_hi, 1 - axis, q, k, heap);
    }

    std::vector<Point> pts_;
    std::vector<std::size_t> idx_;
};

}  // namespace levelset

#endif
