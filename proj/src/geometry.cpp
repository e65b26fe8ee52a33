#include "levelset/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace levelset {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_positive(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0) a += kTwoPi;
    return a;
}

Point perp(const Point& v) { return {-v.y, v.x}; }

Point unit(const Point& v) {
    double n = norm(v);
    return {v.x / n, v.y / n};
}

double angle_of(const Point& v) { return std::atan2(v.y, v.x); }

/// Signed sweep from a to b around c that passes through `via`.
double sweep_through(const Point& c, const Point& a, const Point& b, const Point& via) {
    double aa = angle_of(a - c);
    double ab = angle_of(b - c);
    double av = angle_of(via - c);
    double ccw = wrap_positive(ab - aa);
    if (wrap_positive(av - aa) <= ccw + 1e-15) return ccw;
    return ccw - kTwoPi;
}

}  // namespace

// ---------------------------------------------------------------------------
// Arc polygons

double Ring::signed_area() const {
    double area = 0.0;
    for (const auto& e : elements) {
        if (!e.is_arc) {
            area += 0.5 * cross(e.a, e.b);
        } else {
            area += 0.5 * (cross(e.center, e.b - e.a) + e.radius * e.radius * e.sweep);
        }
    }
    return area;
}

double ArcPolygonBoundary::area() const {
    double total = 0.0;
    for (const auto& r : rings) total += r.signed_area();
    return total;
}

// ---------------------------------------------------------------------------
// Delaunay triangulation (Bowyer-Watson over a far enclosing square)

namespace {

struct BwTriangle {
    std::size_t v[3];
    long long adj[3];  // neighbor across edge (v[e], v[(e+1)%3]); -1 if none
    bool alive = true;
};

double orient(const Point& a, const Point& b, const Point& c) {
    return cross(b - a, c - a);
}

/// > 0 iff p lies strictly inside the circumcircle of CCW triangle (a,b,c).
double incircle_det(const Point& a, const Point& b, const Point& c, const Point& p) {
    double ax = a.x - p.x, ay = a.y - p.y;
    double bx = b.x - p.x, by = b.y - p.y;
    double cx = c.x - p.x, cy = c.y - p.y;
    double an = ax * ax + ay * ay;
    double bn = bx * bx + by * by;
    double cn = cx * cx + cy * cy;
    return ax * (by * cn - bn * cy) - ay * (bx * cn - bn * cx) + an * (bx * cy - by * cx);
}

bool in_circumcircle(const Point& a, const Point& b, const Point& c, const Point& p) {
    double det = incircle_det(a, b, c, p);
    double m = std::max({std::abs(a.x - p.x) + std::abs(a.y - p.y),
                         std::abs(b.x - p.x) + std::abs(b.y - p.y),
                         std::abs(c.x - p.x) + std::abs(c.y - p.y)});
    double tol = 1e-12 * m * m * m * m;
    return det > tol;
}

std::pair<Point, double> circumcircle(const Point& a, const Point& b, const Point& c) {
    Point u = b - a, v = c - a;
    double d = 2.0 * cross(u, v);
    double un = norm2(u), vn = norm2(v);
    Point off{(v.y * un - u.y * vn) / d, (u.x * vn - v.x * un) / d};
    return {a + off, norm(off)};
}

}  // namespace

Triangulation::Triangulation(const PointCloud& generators) {
    if (generators.empty()) fail(Error::Code::empty_input, "triangulation: empty generator set");
    if (!generators.all_finite())
        fail(Error::Code::invalid_argument, "triangulation: non-finite coordinate");

    sites_ = generators.distinct();
    duplicates_ = generators.size() - sites_.size();

    Box bb;
    for (const auto& p : sites_) bb.expand(p);
    diameter_ = sites_.size() > 1 ? bb.diameter() : 0.0;
    eps_ = kEpsRel * (diameter_ > 0 ? diameter_ : 1.0 + std::abs(sites_[0].x) + std::abs(sites_[0].y));
    site_tree_ = KdTree(sites_);

    // collinearity check against the two most distant-ish points
    degenerate_ = true;
    if (sites_.size() >= 3) {
        std::size_t far = 1;
        double best = 0.0;
        for (std::size_t i = 1; i < sites_.size(); ++i) {
            double d = dist2(sites_[0], sites_[i]);
            if (d > best) {
                best = d;
                far = i;
            }
        }
        Point base = sites_[0], dir = sites_[far] - sites_[0];
        double span = norm(dir);
        for (const auto& p : sites_) {
            if (std::abs(cross(dir, p - base)) > eps_ * span) {
                degenerate_ = false;
                break;
            }
        }
    }

    if (degenerate_) {
        // order sites along the spanning line
        line_base_ = sites_[0];
        line_dir_ = {1.0, 0.0};
        if (sites_.size() > 1) {
            std::size_t far = 1;
            double best = 0.0;
            for (std::size_t i = 1; i < sites_.size(); ++i) {
                double d = dist2(sites_[0], sites_[i]);
                if (d > best) {
                    best = d;
                    far = i;
                }
            }
            line_dir_ = unit(sites_[far] - sites_[0]);
        }
        line_order_.resize(sites_.size());
        for (std::size_t i = 0; i < sites_.size(); ++i) line_order_[i] = i;
        std::sort(line_order_.begin(), line_order_.end(), [&](std::size_t a, std::size_t b) {
            return dot(sites_[a] - line_base_, line_dir_) < dot(sites_[b] - line_base_, line_dir_);
        });
        build_hull();
        return;
    }

    build_delaunay();
    build_voronoi();
    build_hull();
}

void Triangulation::build_delaunay() {
    const std::size_t n = sites_.size();
    Box bb;
    for (const auto& p : sites_) bb.expand(p);
    const Point center{(bb.xmin + bb.xmax) / 2, (bb.ymin + bb.ymax) / 2};
    const double half = 1000.0 * std::max(diameter_, 1e-12);

    std::vector<Point> pts = sites_;
    pts.push_back({center.x - half, center.y - half});
    pts.push_back({center.x + half, center.y - half});
    pts.push_back({center.x + half, center.y + half});
    pts.push_back({center.x - half, center.y + half});

    std::vector<BwTriangle> tris;
    tris.push_back({{n, n + 1, n + 2}, {-1, -1, 1}, true});
    tris.push_back({{n, n + 2, n + 3}, {0, -1, -1}, true});

    // insertion order with spatial locality (grid serpentine)
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    const int gcells = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n) / 2.0)));
    auto cell_key = [&](const Point& p) {
        int gx = std::min(gcells - 1, std::max(0, static_cast<int>((p.x - bb.xmin) / std::max(bb.width(), 1e-300) * gcells)));
        int gy = std::min(gcells - 1, std::max(0, static_cast<int>((p.y - bb.ymin) / std::max(bb.height(), 1e-300) * gcells)));
        int col = (gy % 2 == 0) ? gx : (gcells - 1 - gx);
        return gy * gcells + col;
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        int ka = cell_key(pts[a]), kb = cell_key(pts[b]);
        if (ka != kb) return ka < kb;
        return a < b;
    });

    std::size_t hint = 0;
    std::vector<long long> bad;
    std::vector<char> is_bad;

    for (std::size_t oi = 0; oi < n; ++oi) {
        const std::size_t pi = order[oi];
        const Point& p = pts[pi];

        // locate a triangle whose circumcircle contains p (walk, then scan)
        long long cur = static_cast<long long>(hint);
        if (!tris[cur].alive) {
            cur = -1;
            for (std::size_t t = tris.size(); t-- > 0;)
                if (tris[t].alive) {
                    cur = static_cast<long long>(t);
                    break;
                }
        }
        std::size_t steps = 0;
        const std::size_t max_steps = 4 * tris.size() + 64;
        long long located = -1;
        while (cur >= 0 && steps++ < max_steps) {
            const BwTriangle& t = tris[cur];
            long long next = -1;
            for (int e = 0; e < 3; ++e) {
                const Point& ea = pts[t.v[e]];
                const Point& eb = pts[t.v[(e + 1) % 3]];
                if (orient(ea, eb, p) < -eps_ * (std::abs(eb.x - ea.x) + std::abs(eb.y - ea.y))) {
                    if (t.adj[e] >= 0) {
                        next = t.adj[e];
                        break;
                    }
                }
            }
            if (next < 0) {
                located = cur;
                break;
            }
            cur = next;
        }
        if (located < 0) {
            for (std::size_t t = 0; t < tris.size(); ++t) {
                if (!tris[t].alive) continue;
                const BwTriangle& tt = tris[t];
                if (in_circumcircle(pts[tt.v[0]], pts[tt.v[1]], pts[tt.v[2]], p)) {
                    located = static_cast<long long>(t);
                    break;
                }
            }
            if (located < 0) continue;  // numerically coincident with an existing vertex
        }

        // cavity = connected bad region around the located triangle
        bad.clear();
        is_bad.assign(tris.size(), 0);
        auto consider = [&](long long ti) {
            if (ti < 0 || is_bad[ti] || !tris[ti].alive) return;
            const BwTriangle& t = tris[ti];
            if (in_circumcircle(pts[t.v[0]], pts[t.v[1]], pts[t.v[2]], p)) {
                is_bad[ti] = 1;
                bad.push_back(ti);
            }
        };
        is_bad[located] = 1;
        bad.push_back(located);
        for (std::size_t k = 0; k < bad.size(); ++k) {
            const BwTriangle t = tris[bad[k]];
            for (int e = 0; e < 3; ++e) consider(t.adj[e]);
        }

        // cavity boundary: edges of bad triangles facing non-bad territory
        struct CavityEdge {
            std::size_t a, b;
            long long outside;
        };
        std::vector<CavityEdge> rim;
        for (long long ti : bad) {
            const BwTriangle& t = tris[ti];
            for (int e = 0; e < 3; ++e) {
                long long nb = t.adj[e];
                if (nb < 0 || !is_bad[nb]) rim.push_back({t.v[e], t.v[(e + 1) % 3], nb});
            }
        }
        for (long long ti : bad) tris[ti].alive = false;

        // retriangulate the cavity as a fan around p
        std::map<std::size_t, std::size_t> start_of;  // rim edge start vertex -> new tri
        std::size_t first_new = tris.size();
        for (const auto& re : rim) {
            BwTriangle nt{{re.a, re.b, pi}, {re.outside, -1, -1}, true};
            std::size_t idx = tris.size();
            if (re.outside >= 0) {
                BwTriangle& ot = tris[re.outside];
                for (int e = 0; e < 3; ++e)
                    if (ot.v[e] == re.b && ot.v[(e + 1) % 3] == re.a) ot.adj[e] = static_cast<long long>(idx);
            }
            start_of[re.a] = idx;
            tris.push_back(nt);
            is_bad.push_back(0);
        }
        for (std::size_t idx = first_new; idx < tris.size(); ++idx) {
            BwTriangle& t = tris[idx];
            t.adj[1] = static_cast<long long>(start_of[t.v[1]]);  // across (b, p)
            // across (p, a): the new triangle whose rim edge ends at a
            // i.e. the one whose v[1] == a; find via start vertex of that edge
        }
        // second pass for (p, a) neighbors via an end-vertex map
        {
            std::map<std::size_t, std::size_t> end_of;
            for (std::size_t idx = first_new; idx < tris.size(); ++idx) end_of[tris[idx].v[1]] = idx;
            for (std::size_t idx = first_new; idx < tris.size(); ++idx)
                tris[idx].adj[2] = static_cast<long long>(end_of[tris[idx].v[0]]);
        }
        hint = tris.size() - 1;
    }

    // keep triangles made of real sites only
    triangles_.clear();
    for (const auto& t : tris) {
        if (!t.alive) continue;
        if (t.v[0] >= n || t.v[1] >= n || t.v[2] >= n) continue;
        auto [cc, cr] = circumcircle(pts[t.v[0]], pts[t.v[1]], pts[t.v[2]]);
        triangles_.push_back({{t.v[0], t.v[1], t.v[2]}, cc, cr});
    }
    if (triangles_.empty()) {
        degenerate_ = true;  // numerically collinear after all
        line_base_ = sites_[0];
        line_dir_ = sites_.size() > 1 ? unit(sites_.back() - sites_[0]) : Point{1.0, 0.0};
        line_order_.resize(sites_.size());
        for (std::size_t i = 0; i < sites_.size(); ++i) line_order_[i] = i;
        std::sort(line_order_.begin(), line_order_.end(), [&](std::size_t a, std::size_t b) {
            return dot(sites_[a] - line_base_, line_dir_) < dot(sites_[b] - line_base_, line_dir_);
        });
    }
}

void Triangulation::build_voronoi() {
    // undirected Delaunay edge -> incident triangles
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> inc;
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        for (int e = 0; e < 3; ++e) {
            std::size_t a = triangles_[t].v[e], b = triangles_[t].v[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            inc[{a, b}].push_back(t);
        }
    }
    edges_.clear();
    for (const auto& [key, ts] : inc) {
        VoronoiEdge ve;
        ve.site_i = key.first;
        ve.site_j = key.second;
        const Point& si = sites_[ve.site_i];
        const Point& sj = sites_[ve.site_j];
        if (ts.size() == 2) {
            ve.origin = triangles_[ts[0]].circumcenter;
            ve.second = triangles_[ts[1]].circumcenter;
            ve.is_ray = false;
            ve.clear_origin = dist(ve.origin, si);
            ve.clear_second = dist(ve.second, si);
            ve.max_clearance = std::max(ve.clear_origin, ve.clear_second);
        } else {
            const auto& t = triangles_[ts[0]];
            ve.origin = t.circumcenter;
            // outward: away from the vertex opposite the hull edge
            std::size_t other = t.v[0] + t.v[1] + t.v[2] - ve.site_i - ve.site_j;
            Point mid = (si + sj) * 0.5;
            Point d = perp(sj - si);
            if (dot(d, sites_[other] - mid) > 0) d = d * -1.0;
            ve.dir = unit(d);
            ve.is_ray = true;
            ve.clear_origin = dist(ve.origin, si);
            ve.clear_second = std::numeric_limits<double>::infinity();
            ve.max_clearance = std::numeric_limits<double>::infinity();
        }
        edges_.push_back(ve);
    }

    tris_by_clearance_.resize(triangles_.size());
    for (std::size_t i = 0; i < triangles_.size(); ++i) tris_by_clearance_[i] = i;
    std::sort(tris_by_clearance_.begin(), tris_by_clearance_.end(), [&](std::size_t a, std::size_t b) {
        return triangles_[a].circumradius > triangles_[b].circumradius;
    });
    edges_by_clearance_.resize(edges_.size());
    for (std::size_t i = 0; i < edges_.size(); ++i) edges_by_clearance_[i] = i;
    std::sort(edges_by_clearance_.begin(), edges_by_clearance_.end(), [&](std::size_t a, std::size_t b) {
        return edges_[a].max_clearance > edges_[b].max_clearance;
    });
}

void Triangulation::build_hull() {
    hull_.clear();
    if (degenerate_) {
        if (!line_order_.empty()) {
            hull_.push_back(line_order_.front());
            if (line_order_.size() > 1) hull_.push_back(line_order_.back());
        }
        return;
    }
    // directed boundary edges (interior on the left) chained into a cycle
    std::map<std::pair<std::size_t, std::size_t>, int> count;
    for (const auto& t : triangles_) {
        for (int e = 0; e < 3; ++e) {
            std::size_t a = t.v[e], b = t.v[(e + 1) % 3];
            count[{std::min(a, b), std::max(a, b)}]++;
        }
    }
    std::map<std::size_t, std::size_t> next;
    for (const auto& t : triangles_) {
        for (int e = 0; e < 3; ++e) {
            std::size_t a = t.v[e], b = t.v[(e + 1) % 3];
            if (count[{std::min(a, b), std::max(a, b)}] == 1) next[a] = b;
        }
    }
    if (next.empty()) return;
    std::size_t start = next.begin()->first, cur = start;
    do {
        hull_.push_back(cur);
        auto it = next.find(cur);
        if (it == next.end()) break;
        cur = it->second;
    } while (cur != start && hull_.size() <= next.size() + 1);
}

// ---------------------------------------------------------------------------
// Membership

bool Triangulation::convex_contains(const Point& q) const {
    if (degenerate_) {
        if (sites_.size() == 1) return dist(q, sites_[0]) <= eps_;
        const Point a = sites_[line_order_.front()];
        const Point b = sites_[line_order_.back()];
        Point ab = b - a;
        double len2 = norm2(ab);
        double t = len2 > 0 ? std::clamp(dot(q - a, ab) / len2, 0.0, 1.0) : 0.0;
        return dist(q, a + ab * t) <= eps_;
    }
    for (std::size_t k = 0; k < hull_.size(); ++k) {
        const Point& a = sites_[hull_[k]];
        const Point& b = sites_[hull_[(k + 1) % hull_.size()]];
        double len = dist(a, b);
        if (len <= 0) continue;
        if (cross(b - a, q - a) < -eps_ * len) return false;
    }
    return true;
}

bool Triangulation::collinear_contains(double r, const Point& q) const {
    // union of ball hulls (lenses) of consecutive collinear sites
    for (std::size_t k = 0; k + 1 < line_order_.size(); ++k) {
        const Point& a = sites_[line_order_[k]];
        const Point& b = sites_[line_order_[k + 1]];
        double d = dist(a, b);
        if (d > 2.0 * r || d <= eps_) continue;
        Point m = (a + b) * 0.5;
        double h = std::sqrt(std::max(0.0, r * r - 0.25 * d * d));
        Point n = perp(unit(b - a));
        Point wp = m + n * h, wm = m - n * h;
        if (dist(q, wp) <= r + eps_ && dist(q, wm) <= r + eps_) return true;
    }
    return false;
}

bool Triangulation::hull_contains(double r, const Point& q) const {
    if (!(r > 0)) fail(Error::Code::invalid_argument, "hull_contains: radius must be positive");
    if (!std::isfinite(q.x) || !std::isfinite(q.y)) return false;
    if (std::isinf(r)) return convex_contains(q);

    if (site_tree_.any_closer_than(q, eps_)) return true;  // generator membership
    if (degenerate_) return collinear_contains(r, q);

    const double rho = r - eps_;
    if (rho <= 0) return false;
    const double rho2 = rho * rho;

    // 1) q as its own witness center
    if (!site_tree_.any_closer_than(q, rho)) return false;

    // 2) Voronoi vertices inside the search disk
    for (std::size_t idx : tris_by_clearance_) {
        const auto& t = triangles_[idx];
        if (t.circumradius < rho) break;
        if (dist2(t.circumcenter, q) <= rho2) return false;
    }

    // 3) Voronoi edge / circle crossings (clearance on an edge is the
    //    distance to its defining sites)
    for (std::size_t idx : edges_by_clearance_) {
        const auto& e = edges_[idx];
        if (e.max_clearance < rho) break;
        Point u;
        double tmax;
        if (e.is_ray) {
            u = e.dir;
            tmax = std::numeric_limits<double>::infinity();
        } else {
            Point seg = e.second - e.origin;
            double len = norm(seg);
            if (len <= 0) continue;
            u = seg * (1.0 / len);
            tmax = len;
        }
        Point oq = e.origin - q;
        double b = dot(u, oq);
        double disc = b * b - (norm2(oq) - rho2);
        if (disc < 0) continue;
        double sq = std::sqrt(disc);
        const Point& si = sites_[e.site_i];
        for (double t : {-b - sq, -b + sq}) {
            if (t < -eps_ || t > tmax + eps_) continue;
            Point c = e.origin + u * t;
            if (dist(c, si) >= rho) return false;
        }
    }

    // 4) per-site far points of the search circle
    for (const auto& s : sites_) {
        Point d = q - s;
        double dn = norm(d);
        if (dn <= eps_) continue;
        Point c = q + d * (rho / dn);
        if (!site_tree_.any_closer_than(c, rho)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// RConvexRegion

RConvexRegion::RConvexRegion(PointCloud generators, double radius)
    : RConvexRegion(std::move(generators), radius, nullptr) {}

RConvexRegion::RConvexRegion(PointCloud generators, double radius,
                             std::shared_ptr<const Triangulation> tri)
    : generators_(std::move(generators)), radius_(radius), tri_(std::move(tri)) {
    if (!(radius_ > 0)) fail(Error::Code::invalid_argument, "region: radius must be positive");
    if (!tri_) tri_ = std::make_shared<Triangulation>(generators_);
}

bool RConvexRegion::contains(const Point& q) const {
    if (convex()) {
        if (tri_->site_tree().any_closer_than(q, tri_->eps())) return true;
        return tri_->convex_contains(q);
    }
    return tri_->hull_contains(radius_, q);
}

// ---------------------------------------------------------------------------
// Brute-force oracle

bool brute_force_contains(const std::vector<Point>& sites, double r, const Point& q,
                          int grid_density, double eps) {
    if (!(r > 0) || std::isinf(r))
        fail(Error::Code::invalid_argument, "brute_force_contains: finite positive radius required");
    if (grid_density < 1) fail(Error::Code::invalid_argument, "brute_force_contains: grid_density >= 1");
    KdTree tree(sites);
    if (tree.any_closer_than(q, eps)) return true;
    const double rho = r - eps;
    const double step = 2.0 * r / grid_density;
    for (int i = 0; i < grid_density; ++i) {
        double cx = q.x - r + (i + 0.5) * step;
        for (int j = 0; j < grid_density; ++j) {
            double cy = q.y - r + (j + 0.5) * step;
            Point c{cx, cy};
            if (dist(c, q) > rho) continue;
            if (!tree.any_closer_than(c, rho)) return false;
        }
    }
    return true;
}

bool brute_force_contains(const RConvexRegion& region, const Point& q, int grid_density) {
    return brute_force_contains(region.triangulation().sites(), region.radius(), q, grid_density,
                                region.triangulation().eps());
}

// ---------------------------------------------------------------------------
// Convex hull (monotone chain)

ArcPolygonBoundary convex_hull(const PointCloud& cloud) {
    if (cloud.empty()) fail(Error::Code::empty_input, "convex_hull: empty input");
    if (!cloud.all_finite()) fail(Error::Code::invalid_argument, "convex_hull: non-finite coordinate");
    std::vector<Point> pts = cloud.distinct();
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    });

    ArcPolygonBoundary out;
    Ring ring;
    if (pts.size() == 1) {
        ring.elements.push_back(ArcElement::segment(pts[0], pts[0]));
        out.rings.push_back(ring);
        return out;
    }

    Box bb;
    for (const auto& p : pts) bb.expand(p);
    const double tol = 1e-12 * bb.diameter() * bb.diameter();

    std::vector<Point> h(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {  // lower
        while (k >= 2 && cross(h[k - 1] - h[k - 2], p - h[k - 2]) <= tol) --k;
        h[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {  // upper
        const Point& p = pts[i];
        while (k >= lower && cross(h[k - 1] - h[k - 2], p - h[k - 2]) <= tol) --k;
        h[k++] = p;
    }
    h.resize(k > 1 ? k - 1 : k);

    for (std::size_t i = 0; i < h.size(); ++i)
        ring.elements.push_back(ArcElement::segment(h[i], h[(i + 1) % h.size()]));
    out.rings.push_back(ring);
    return out;
}

// ---------------------------------------------------------------------------
// Boundary extraction

namespace {

struct DirectedArc {
    std::size_t from, to;  // site indices
    Point center;
    double radius;
    double sweep;  // negative: region on the left while orbiting clockwise
    bool used = false;
};

Point arc_tangent_at(const DirectedArc& a, const Point& p) {
    Point v = p - a.center;
    Point t = a.sweep >= 0 ? perp(v) : Point{v.y, -v.x};
    return unit(t);
}

}  // namespace

ArcPolygonBoundary boundary_of(const Triangulation& tri, double r) {
    if (!(r > 0) || std::isinf(r))
        fail(Error::Code::invalid_argument, "boundary: finite positive radius required");
    const auto& sites = tri.sites();
    const double eps = tri.eps();
    ArcPolygonBoundary out;

    if (tri.degenerate()) {
        // lenses of consecutive collinear sites; lone sites are isolated
        std::vector<char> paired(sites.size(), 0);
        std::vector<std::size_t> order;
        for (std::size_t i = 0; i < sites.size(); ++i) order.push_back(i);
        // reuse the triangulation's ordering via projections
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (sites[a].x != sites[b].x) return sites[a].x < sites[b].x;
            return sites[a].y < sites[b].y;
        });
        for (std::size_t k = 0; k + 1 < order.size(); ++k) {
            const Point& a = sites[order[k]];
            const Point& b = sites[order[k + 1]];
            double d = dist(a, b);
            if (d > 2.0 * r || d <= eps) continue;
            paired[order[k]] = paired[order[k + 1]] = 1;
            Point m = (a + b) * 0.5;
            double h = std::sqrt(std::max(0.0, r * r - 0.25 * d * d));
            Point n = perp(unit(b - a));
            Point wp = m + n * h, wm = m - n * h;
            Point lo = m - n * (r - h), hi = m + n * (r - h);
            Ring ring;
            ring.elements.push_back(ArcElement::arc(a, b, wp, r, sweep_through(wp, a, b, lo)));
            ring.elements.push_back(ArcElement::arc(b, a, wm, r, sweep_through(wm, b, a, hi)));
            if (ring.signed_area() < 0)
                for (auto& e : ring.elements) {
                    std::swap(e.a, e.b);
                    e.sweep = -e.sweep;
                }
            if (ring.signed_area() < 0) std::reverse(ring.elements.begin(), ring.elements.end());
            out.rings.push_back(ring);
        }
        for (std::size_t i = 0; i < sites.size(); ++i)
            if (!paired[i]) out.isolated.push_back(sites[i]);
        return out;
    }

    const double delta = 16.0 * eps;
    std::vector<DirectedArc> arcs;
    std::vector<char> has_arc(sites.size(), 0);

    for (const auto& e : tri.voronoi_edges()) {
        const Point& si = sites[e.site_i];
        const Point& sj = sites[e.site_j];
        double d = dist(si, sj);
        if (d > 2.0 * r - eps || d <= eps) continue;
        double h = std::sqrt(std::max(0.0, r * r - 0.25 * d * d));
        if (h <= eps) continue;
        Point m = (si + sj) * 0.5;
        Point n = perp(unit(sj - si));
        for (int side = 0; side < 2; ++side) {
            Point c = side == 0 ? m + n * h : m - n * h;
            // the tangent ball is empty iff its center lies on the dual edge
            double tmax = e.is_ray ? std::numeric_limits<double>::infinity()
                                   : dist(e.second, e.origin);
            if (!e.is_ray && tmax <= eps) {
                if (dist(c, e.origin) > eps) continue;
            } else {
                Point u = e.is_ray ? e.dir : unit(e.second - e.origin);
                double t = dot(c - e.origin, u);
                if (t < -eps || t > tmax + eps) continue;
            }
            // drop arcs washed out by other empty balls (thin components)
            Point probe = c + unit(m - c) * (r + delta);
            if (!tri.hull_contains(r, probe)) continue;
            // orient clockwise around the empty center: region on the left
            Point via = c + unit(m - c) * r;
            double sweep = sweep_through(c, si, sj, via);
            if (sweep <= 0) {
                arcs.push_back({e.site_i, e.site_j, c, r, sweep, false});
            } else {
                arcs.push_back({e.site_j, e.site_i, c, r, sweep_through(c, sj, si, via), false});
            }
            has_arc[e.site_i] = has_arc[e.site_j] = 1;
        }
    }

    // assemble rings: follow arcs, at multi-way sites take the tightest
    // right turn (first outgoing direction clockwise from the reversed
    // incoming tangent)
    std::vector<std::vector<std::size_t>> outgoing(sites.size());
    for (std::size_t i = 0; i < arcs.size(); ++i) outgoing[arcs[i].from].push_back(i);

    for (std::size_t start = 0; start < arcs.size(); ++start) {
        if (arcs[start].used) continue;
        Ring ring;
        std::size_t cur = start;
        std::size_t guard = 0;
        while (!arcs[cur].used && guard++ <= arcs.size()) {
            DirectedArc& a = arcs[cur];
            a.used = true;
            ring.elements.push_back(
                ArcElement::arc(sites[a.from], sites[a.to], a.center, a.radius, a.sweep));
            const auto& cands = outgoing[a.to];
            std::size_t next = arcs.size();
            if (cands.size() == 1 && !arcs[cands[0]].used) {
                next = cands[0];
            } else {
                Point rev = arc_tangent_at(a, sites[a.to]) * -1.0;
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t ci : cands) {
                    if (arcs[ci].used) continue;
                    Point tout = arc_tangent_at(arcs[ci], sites[arcs[ci].from]);
                    double angle = wrap_positive(angle_of(rev) - angle_of(tout));
                    if (angle < 1e-12) angle += kTwoPi;
                    if (angle < best) {
                        best = angle;
                        next = ci;
                    }
                }
            }
            if (next >= arcs.size()) break;
            cur = next;
        }
        if (!ring.elements.empty()) out.rings.push_back(ring);
    }

    // isolated sites: no incident arc and a small neighborhood probe finds
    // no member other than the site itself
    for (std::size_t i = 0; i < sites.size(); ++i) {
        if (has_arc[i]) continue;
        bool interior = false;
        for (int k = 0; k < 8 && !interior; ++k) {
            double ang = k * (kTwoPi / 8.0);
            Point probe{sites[i].x + 3.0 * delta * std::cos(ang),
                        sites[i].y + 3.0 * delta * std::sin(ang)};
            if (tri.hull_contains(r, probe)) interior = true;
        }
        if (!interior) out.isolated.push_back(sites[i]);
    }
    return out;
}

ArcPolygonBoundary boundary(const RConvexRegion& region) {
    if (region.convex()) return convex_hull(region.generators());
    return boundary_of(region.triangulation(), region.radius());
}

}  // namespace levelset
