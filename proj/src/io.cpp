#include "levelset/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace levelset {

using nlohmann::json;

std::vector<Point> flatten_ring(const Ring& ring, double chord_tol) {
    std::vector<Point> out;
    for (const auto& e : ring.elements) {
        if (!e.is_arc) {
            out.push_back(e.a);
            continue;
        }
        double span = std::abs(e.sweep);
        // sagitta of a chord under angle step: r (1 - cos(step/2)) <= tol
        double max_step = 2.0 * std::acos(std::max(0.0, 1.0 - chord_tol / e.radius));
        int segments = std::max(1, static_cast<int>(std::ceil(span / std::max(max_step, 1e-4))));
        double a0 = std::atan2(e.a.y - e.center.y, e.a.x - e.center.x);
        for (int s = 0; s < segments; ++s) {
            double ang = a0 + e.sweep * (static_cast<double>(s) / segments);
            out.push_back({e.center.x + e.radius * std::cos(ang),
                           e.center.y + e.radius * std::sin(ang)});
        }
    }
    if (!out.empty()) out.push_back(out.front());
    return out;
}

namespace {

bool point_in_polyline(const std::vector<Point>& poly, const Point& p) {
    bool in = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        if ((poly[i].y > p.y) != (poly[j].y > p.y)) {
            double xcross = poly[j].x + (poly[i].x - poly[j].x) * (p.y - poly[j].y) /
                                             (poly[i].y - poly[j].y);
            if (p.x < xcross) in = !in;
        }
    }
    return in;
}

json coords_of(const std::vector<Point>& poly) {
    json arr = json::array();
    for (const auto& p : poly) arr.push_back({p.x, p.y});
    return arr;
}

}  // namespace

std::string boundary_to_geojson(const ArcPolygonBoundary& boundary, double chord_tol) {
    struct Flat {
        std::vector<Point> poly;
        double area;
    };
    std::vector<Flat> outers, holes;
    for (const auto& ring : boundary.rings) {
        Flat f{flatten_ring(ring, chord_tol), ring.signed_area()};
        if (f.poly.size() < 4) continue;  // closed ring needs >= 3 distinct vertices
        if (f.area >= 0)
            outers.push_back(std::move(f));
        else
            holes.push_back(std::move(f));
    }

    json polygons = json::array();
    std::vector<json> polys(outers.size());
    for (std::size_t i = 0; i < outers.size(); ++i) {
        polys[i] = json::array();
        polys[i].push_back(coords_of(outers[i].poly));
    }
    for (auto& h : holes) {
        // attach to the smallest enclosing outer ring
        std::size_t best = outers.size();
        double best_area = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < outers.size(); ++i) {
            if (point_in_polyline(outers[i].poly, h.poly.front()) && outers[i].area < best_area) {
                best = i;
                best_area = outers[i].area;
            }
        }
        if (best < outers.size()) {
            // negative signed area means the ring already winds clockwise,
            // which is the GeoJSON hole orientation
            polys[best].push_back(coords_of(h.poly));
        }
    }
    for (auto& p : polys) polygons.push_back(p);

    json features = json::array();
    json region = {{"type", "Feature"},
                   {"properties", {{"role", "region"}}},
                   {"geometry", {{"type", "MultiPolygon"}, {"coordinates", polygons}}}};
    features.push_back(region);
    if (!boundary.isolated.empty()) {
        json pts = json::array();
        for (const auto& p : boundary.isolated) pts.push_back({p.x, p.y});
        features.push_back({{"type", "Feature"},
                            {"properties", {{"role", "isolated-generators"}}},
                            {"geometry", {{"type", "MultiPoint"}, {"coordinates", pts}}}});
    }
    json root = {{"type", "FeatureCollection"}, {"features", features}};
    return root.dump(2);
}

std::string boundary_to_native_json(const ArcPolygonBoundary& boundary) {
    json rings = json::array();
    for (const auto& ring : boundary.rings) {
        json elems = json::array();
        for (const auto& e : ring.elements) {
            if (e.is_arc) {
                elems.push_back({{"type", "arc"},
                                 {"from", {e.a.x, e.a.y}},
                                 {"to", {e.b.x, e.b.y}},
                                 {"center", {e.center.x, e.center.y}},
                                 {"radius", e.radius},
                                 {"sweep", e.sweep}});
            } else {
                elems.push_back(
                    {{"type", "segment"}, {"from", {e.a.x, e.a.y}}, {"to", {e.b.x, e.b.y}}});
            }
        }
        rings.push_back({{"elements", elems}, {"signed_area", ring.signed_area()}});
    }
    json pts = json::array();
    for (const auto& p : boundary.isolated) pts.push_back({p.x, p.y});
    json root = {{"rings", rings}, {"isolated", pts}};
    return root.dump(2);
}

namespace {

void svg_line(std::string& out, const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, ap);
    va_end(ap);
    out += buf;
}

}  // namespace

std::string render_svg(const SplitSample& split, const ArcPolygonBoundary* boundary,
                       double chord_tol) {
    Box bb;
    for (const auto& p : split.plus.points()) bb.expand(p);
    for (const auto& p : split.minus.points()) bb.expand(p);
    for (const auto& p : split.unassigned.points()) bb.expand(p);
    if (!bb.valid()) {
        bb = Box{0, 0, 1, 1};
    }
    double pad = 0.05 * std::max(bb.width(), bb.height());
    bb.pad(pad > 0 ? pad : 0.5);

    const double width = 800.0;
    const double scale = width / bb.width();
    const double height = bb.height() * scale;
    auto X = [&](double x) { return (x - bb.xmin) * scale; };
    auto Y = [&](double y) { return (bb.ymax - y) * scale; };

    std::string svg;
    svg_line(svg,
             "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
             "viewBox=\"0 0 %.2f %.2f\">\n",
             width, height, width, height);
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    auto draw_points = [&](const PointCloud& cloud, const char* color, const char* cls) {
        svg_line(svg, "<g fill=\"%s\" class=\"%s\">\n", color, cls);
        for (const auto& p : cloud.points())
            svg_line(svg, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"2.2\"/>\n", X(p.x), Y(p.y));
        svg += "</g>\n";
    };
    draw_points(split.minus, "#5b8fd9", "minus");
    draw_points(split.unassigned, "#b0b0b0", "unassigned");
    draw_points(split.plus, "#d26464", "plus");

    if (boundary) {
        svg += "<g fill=\"none\" stroke=\"#222222\" stroke-width=\"1.8\" class=\"boundary\">\n";
        for (const auto& ring : boundary->rings) {
            auto poly = flatten_ring(ring, chord_tol);
            if (poly.size() < 2) continue;
            std::string d = "M";
            char buf[64];
            for (std::size_t i = 0; i < poly.size(); ++i) {
                std::snprintf(buf, sizeof(buf), " %.3f %.3f", X(poly[i].x), Y(poly[i].y));
                d += buf;
                if (i == 0) d += " L";
            }
            d += " Z";
            svg_line(svg, "<path d=\"%s\"/>\n", d.c_str());
        }
        for (const auto& p : boundary->isolated)
            svg_line(svg,
                     "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"3.5\" fill=\"none\" "
                     "stroke=\"#222222\"/>\n",
                     X(p.x), Y(p.y));
        svg += "</g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

RasterMask read_pbm(const std::string& path, const Box& bbox) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Error::Code::io, "cannot open bitmap '" + path + "'");
    std::string magic;
    in >> magic;
    if (magic != "P1" && magic != "P4") fail(Error::Code::parse, "bitmap must be P1 or P4");
    auto next_token = [&]() {
        std::string tok;
        for (;;) {
            if (!(in >> tok)) fail(Error::Code::parse, "truncated bitmap header");
            if (tok[0] == '#') {
                std::string junk;
                std::getline(in, junk);
                continue;
            }
            return tok;
        }
    };
    int w = std::stoi(next_token());
    int h = std::stoi(next_token());
    if (w != h) fail(Error::Code::parse, "bitmap must be square (cells-per-axis resolution)");
    RasterMask mask(bbox, w);
    if (magic == "P1") {
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) {
                std::string tok = next_token();
                // PBM row 0 is the top; raster row 0 is ymin
                mask.set(h - 1 - r, c, tok == "1");
            }
    } else {
        in.get();  // single whitespace after the header
        int rowbytes = (w + 7) / 8;
        std::vector<unsigned char> row(rowbytes);
        for (int r = 0; r < h; ++r) {
            in.read(reinterpret_cast<char*>(row.data()), rowbytes);
            if (!in) fail(Error::Code::parse, "truncated bitmap data");
            for (int c = 0; c < w; ++c)
                mask.set(h - 1 - r, c, (row[c / 8] >> (7 - c % 8)) & 1);
        }
    }
    return mask;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Error::Code::io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Error::Code::io, "cannot write '" + path + "'");
    out << content;
}

}  // namespace levelset
