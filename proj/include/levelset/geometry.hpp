#ifndef LEVELSET_GEOMETRY_HPP
#define LEVELSET_GEOMETRY_HPP

#include <memory>
#include <optional>
#include <vector>

#include "levelset/common.hpp"
#include "levelset/kdtree.hpp"

namespace levelset {

/// One element of a boundary ring: a line segment or a circular arc.
/// Arcs are parametrized by center/radius and the signed sweep from the
/// angle of `a`; sweep > 0 is counterclockwise.
struct ArcElement {
    bool is_arc = false;
    Point a;
    Point b;
    Point center;
    double radius = 0.0;
    double sweep = 0.0;

    static ArcElement segment(const Point& a, const Point& b) {
        ArcElement e;
        e.is_arc = false;
        e.a = a;
        e.b = b;
        return e;
    }
    static ArcElement arc(const Point& a, const Point& b, const Point& c, double radius,
                          double sweep) {
        ArcElement e;
        e.is_arc = true;
        e.a = a;
        e.b = b;
        e.center = c;
        e.radius = radius;
        e.sweep = sweep;
        return e;
    }
};

struct Ring {
    std::vector<ArcElement> elements;
    /// Signed area (positive when traversed counterclockwise).
    double signed_area() const;
};

/// Closed arc-polygon boundary: rings plus degenerate single-point
/// components (isolated generators).
struct ArcPolygonBoundary {
    std::vector<Ring> rings;
    std::vector<Point> isolated;

    /// Total signed area (holes traversed clockwise contribute negatively).
    double area() const;
};

/// Delaunay triangulation of a deduplicated site set, with the dual Voronoi
/// structure and the witness-center machinery for r-convex hull membership.
/// Immutable after construction; queries are thread-safe.
class Triangulation {
public:
    explicit Triangulation(const PointCloud& generators);

    const std::vector<Point>& sites() const { return sites_; }
    std::size_t duplicate_count() const { return duplicates_; }
    bool degenerate() const { return degenerate_; }
    double eps() const { return eps_; }
    double diameter() const { return diameter_; }

    struct Triangle {
        std::size_t v[3];      // site indices, counterclockwise
        Point circumcenter;
        double circumradius;
    };
    const std::vector<Triangle>& triangles() const { return triangles_; }

    /// Dual Voronoi edge of a Delaunay edge (i, j). Finite edges run between
    /// two circumcenters; hull edges extend as rays to infinity.
    struct VoronoiEdge {
        std::size_t site_i;
        std::size_t site_j;
        Point origin;       // circumcenter of the incident triangle
        Point second;       // other circumcenter (finite case)
        Point dir;          // unit direction (ray case)
        bool is_ray = false;
        double clear_origin = 0.0;  // distance from origin to site_i
        double clear_second = 0.0;  // distance from second to site_i (finite)
        double max_clearance = 0.0; // infinity for rays
    };
    const std::vector<VoronoiEdge>& voronoi_edges() const { return edges_; }

    /// Convex hull of the sites, counterclockwise (indices into sites()).
    const std::vector<std::size_t>& hull() const { return hull_; }

    /// Exact membership in C_r(sites). The witness-center search maximizes
    /// the nearest-site distance over the closed disk of radius r - eps
    /// around q; candidates are q, Voronoi vertices inside the disk, Voronoi
    /// edge / circle crossings, and the per-site far points of the circle.
    /// Boundary-ambiguous queries resolve to member.
    bool hull_contains(double r, const Point& q) const;

    /// Membership in the convex hull of the sites (within eps of the
    /// boundary counts as inside). Used for the radius = infinity case.
    bool convex_contains(const Point& q) const;

    double nearest_site_dist(const Point& q) const { return site_tree_.nearest_dist(q); }
    const KdTree& site_tree() const { return site_tree_; }

private:
    void build_delaunay();
    void build_voronoi();
    void build_hull();
    bool collinear_contains(double r, const Point& q) const;

    std::vector<Point> sites_;
    std::size_t duplicates_ = 0;
    bool degenerate_ = false;  // fewer than 3 distinct sites or all collinear
    double eps_ = 0.0;
    double diameter_ = 0.0;
    KdTree site_tree_;

    std::vector<Triangle> triangles_;
    std::vector<VoronoiEdge> edges_;
    std::vector<std::size_t> hull_;
    std::vector<std::size_t> tris_by_clearance_;   // descending circumradius
    std::vector<std::size_t> edges_by_clearance_;  // descending max clearance

    // collinear case: sites sorted along the spanning line
    Point line_base_;
    Point line_dir_;
    std::vector<std::size_t> line_order_;

    friend class RConvexRegion;
    friend ArcPolygonBoundary boundary_of(const Triangulation& tri, double r);
};

/// r-convex hull C_r(S) of a generator set; radius may be infinity
/// (convex hull semantics). Immutable; membership queries are thread-safe.
class RConvexRegion {
public:
    RConvexRegion(PointCloud generators, double radius);
    RConvexRegion(PointCloud generators, double radius, std::shared_ptr<const Triangulation> tri);

    const PointCloud& generators() const { return generators_; }
    double radius() const { return radius_; }
    bool convex() const { return std::isinf(radius_); }
    const Triangulation& triangulation() const { return *tri_; }
    std::shared_ptr<const Triangulation> shared_triangulation() const { return tri_; }

    bool contains(const Point& q) const;

    /// True when the last contains() had to use the degenerate path.
    bool degenerate() const { return tri_->degenerate(); }

private:
    PointCloud generators_;
    double radius_;
    std::shared_ptr<const Triangulation> tri_;
};

/// Independent membership oracle: scans a grid_density x grid_density
/// lattice of candidate ball centers over the disk of radius r about q and
/// reports member iff no lattice center is at distance >= r - eps from all
/// sites. Finite radius only.
bool brute_force_contains(const RConvexRegion& region, const Point& q, int grid_density);
bool brute_force_contains(const std::vector<Point>& sites, double r, const Point& q,
                          int grid_density, double eps);

/// Counterclockwise convex hull ring (segments only); collinear interior
/// points excluded. Degenerate inputs give a single- or two-vertex ring.
ArcPolygonBoundary convex_hull(const PointCloud& cloud);

/// Arc-polygon boundary of C_r(sites) for finite r.
ArcPolygonBoundary boundary_of(const Triangulation& tri, double r);
ArcPolygonBoundary boundary(const RConvexRegion& region);

}  // namespace levelset

#endif
