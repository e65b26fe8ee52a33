#include "levelset/common.hpp"

#include <bit>
#include <unordered_set>

namespace levelset {

namespace {

struct PointKey {
    std::uint64_t x;
    std::uint64_t y;
    bool operator==(const PointKey& o) const { return x == o.x && y == o.y; }
};

struct PointKeyHash {
    std::size_t operator()(const PointKey& k) const {
        std::uint64_t h = k.x * 0x9e3779b97f4a7c15ULL;
        h ^= k.y + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

PointKey key_of(const Point& p) {
    return {std::bit_cast<std::uint64_t>(p.x), std::bit_cast<std::uint64_t>(p.y)};
}

}  // namespace

std::size_t PointCloud::duplicate_count() const {
    std::unordered_set<PointKey, PointKeyHash> seen;
    seen.reserve(points_.size());
    std::size_t dups = 0;
    for (const auto& p : points_)
        if (!seen.insert(key_of(p)).second) ++dups;
    return dups;
}

std::vector<Point> PointCloud::distinct() const {
    std::unordered_set<PointKey, PointKeyHash> seen;
    seen.reserve(points_.size());
    std::vector<Point> out;
    out.reserve(points_.size());
    for (const auto& p : points_)
        if (seen.insert(key_of(p)).second) out.push_back(p);
    return out;
}

}  // namespace levelset
