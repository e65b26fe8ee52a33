#ifndef LEVELSET_COMMON_HPP
#define LEVELSET_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace levelset {

struct Point {
    double x = 0.0;
    double y = 0.0;

    Point() = default;
    Point(double px, double py) : x(px), y(py) {}

    Point operator+(const Point& o) const { return {x + o.x, y + o.y}; }
    Point operator-(const Point& o) const { return {x - o.x, y - o.y}; }
    Point operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Point& o) const { return x == o.x && y == o.y; }
};

inline double dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point& a, const Point& b) { return a.x * b.y - a.y * b.x; }
inline double norm2(const Point& a) { return a.x * a.x + a.y * a.y; }
inline double norm(const Point& a) { return std::sqrt(norm2(a)); }
inline double dist(const Point& a, const Point& b) { return norm(a - b); }
inline double dist2(const Point& a, const Point& b) { return norm2(a - b); }

/// Axis-aligned bounding box.
struct Box {
    double xmin = std::numeric_limits<double>::infinity();
    double ymin = std::numeric_limits<double>::infinity();
    double xmax = -std::numeric_limits<double>::infinity();
    double ymax = -std::numeric_limits<double>::infinity();

    void expand(const Point& p) {
        xmin = std::min(xmin, p.x);
        ymin = std::min(ymin, p.y);
        xmax = std::max(xmax, p.x);
        ymax = std::max(ymax, p.y);
    }
    void pad(double m) {
        xmin -= m;
        ymin -= m;
        xmax += m;
        ymax += m;
    }
    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double diameter() const { return std::hypot(width(), height()); }
    bool valid() const { return xmax > xmin && ymax > ymin; }
    bool contains(const Point& p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
};

/// An ordered finite multiset of 2-D sample points.
class PointCloud {
public:
    PointCloud() = default;
    explicit PointCloud(std::vector<Point> pts) : points_(std::move(pts)) {}

    const std::vector<Point>& points() const { return points_; }
    std::vector<Point>& points() { return points_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const Point& operator[](std::size_t i) const { return points_[i]; }
    void add(const Point& p) { points_.push_back(p); }

    Box bbox() const {
        Box b;
        for (const auto& p : points_) b.expand(p);
        return b;
    }

    /// True iff every coordinate is finite.
    bool all_finite() const {
        for (const auto& p : points_)
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
        return true;
    }

    /// Number of points that exactly coincide with an earlier point.
    std::size_t duplicate_count() const;

    /// Distinct points, preserving first-occurrence order.
    std::vector<Point> distinct() const;

private:
    std::vector<Point> points_;
};

class Error : public std::runtime_error {
public:
    enum class Code {
        invalid_argument,
        empty_input,
        degenerate,
        bad_bracket,
        empty_level_set,
        io,
        parse,
        internal,
    };

    Error(Code c, const std::string& msg) : std::runtime_error(msg), code_(c) {}
    Code code() const { return code_; }

private:
    Code code_;
};

[[noreturn]] inline void fail(Error::Code c, const std::string& msg) { throw Error(c, msg); }

constexpr double kEpsRel = 1e-9;  // relative geometric tolerance (× bbox diameter)

}  // namespace levelset

#endif
