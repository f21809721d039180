#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rieszlab {

struct Point2 {
    double x = 0.0, y = 0.0;
};

struct GeometryError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class DomainKind { interval, rectangle, box, disk, polygon };

struct BoundingBox {
    std::array<double, 3> lo{}, hi{};
};

// Immutable; volume and boundary measure are derived from the parameters.
class Domain {
public:
    static Domain interval(double length) {
        positive(length, "interval length");
        Domain d(DomainKind::interval, 1);
        d.extent_ = {length, 0.0, 0.0};
        d.finish();
        return d;
    }
    static Domain rectangle(double w, double h) {
        positive(w, "rectangle width");
        positive(h, "rectangle height");
        Domain d(DomainKind::rectangle, 2);
        d.extent_ = {w, h, 0.0};
        d.finish();
        return d;
    }
    static Domain box(double w, double h, double depth) {
        positive(w, "box width");
        positive(h, "box height");
        positive(depth, "box depth");
        Domain d(DomainKind::box, 3);
        d.extent_ = {w, h, depth};
        d.finish();
        return d;
    }
    // disk centred at (R, R) so that it sits in the positive quadrant like the others
    static Domain disk(double radius) {
        positive(radius, "disk radius");
        Domain d(DomainKind::disk, 2);
        d.extent_ = {radius, 0.0, 0.0};
        d.finish();
        return d;
    }
    static Domain polygon(std::vector<Point2> v);

    DomainKind kind() const { return kind_; }
    int dim() const { return dim_; }
    double volume() const { return volume_; }
    double boundary_measure() const { return boundary_; }
    const BoundingBox& bounding_box() const { return bbox_; }
    const std::array<double, 3>& extent() const { return extent_; }
    double radius() const { return extent_[0]; }
    const std::vector<Point2>& vertices() const { return verts_; }
    double diameter() const {
        if (kind_ == DomainKind::polygon) {
            double best = 0.0;
            for (const auto& p : verts_)
                for (const auto& q : verts_) best = std::max(best, std::hypot(p.x - q.x, p.y - q.y));
            return best;
        }
        if (kind_ == DomainKind::disk) return 2.0 * radius();
        double s = 0.0;
        for (int i = 0; i < dim_; ++i) s += std::pow(bbox_.hi[i] - bbox_.lo[i], 2);
        return std::sqrt(s);
    }

    // Boundary points count as inside.
    bool contains(const std::array<double, 3>& p) const {
        for (int i = 0; i < dim_; ++i)
            if (p[i] < bbox_.lo[i] || p[i] > bbox_.hi[i]) return false;
        switch (kind_) {
            case DomainKind::interval:
            case DomainKind::rectangle:
            case DomainKind::box: return true;
            case DomainKind::disk: {
                const double r = extent_[0];
                return std::hypot(p[0] - r, p[1] - r) <= r;
            }
            case DomainKind::polygon: return polygon_contains({p[0], p[1]});
        }
        return false;
    }
    bool contains(double x, double y = 0.0, double z = 0.0) const { return contains({x, y, z}); }

    Domain scaled(double s) const {
        positive(s, "scale factor");
        Domain d = *this;
        for (auto& e : d.extent_) e *= s;
        for (auto& v : d.verts_) {
            v.x *= s;
            v.y *= s;
        }
        d.finish();
        return d;
    }

    // Canonical spec string, inverse of parse_domain.
    std::string spec() const {
        std::ostringstream o;
        o.precision(17);
        switch (kind_) {
            case DomainKind::interval: o << "interval:" << extent_[0]; break;
            case DomainKind::rectangle: o << "rect:" << extent_[0] << 'x' << extent_[1]; break;
            case DomainKind::box: o << "box:" << extent_[0] << 'x' << extent_[1] << 'x' << extent_[2]; break;
            case DomainKind::disk: o << "disk:" << extent_[0]; break;
            case DomainKind::polygon:
                o << "poly:";
                for (std::size_t i = 0; i < verts_.size(); ++i)
                    o << (i ? ";" : "") << verts_[i].x << ',' << verts_[i].y;
                break;
        }
        return o.str();
    }

private:
    Domain(DomainKind k, int dim) : kind_(k), dim_(dim) {}

    static void positive(double v, const char* what) {
        if (!(v > 0.0) || !std::isfinite(v)) throw GeometryError(std::string(what) + " must be positive and finite");
    }

    bool polygon_contains(Point2 p) const {
        const std::size_t n = verts_.size();
        bool inside = false;
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const Point2 a = verts_[j], b = verts_[i];
            // on-edge test first so the boundary is inside
            const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
            const double len = std::hypot(b.x - a.x, b.y - a.y);
            if (std::abs(cross) <= 1e-12 * len * std::max(1.0, len) && p.x >= std::min(a.x, b.x) - 1e-12 &&
                p.x <= std::max(a.x, b.x) + 1e-12 && p.y >= std::min(a.y, b.y) - 1e-12 &&
                p.y <= std::max(a.y, b.y) + 1e-12)
                return true;
            if ((a.y > p.y) != (b.y > p.y) && p.x < a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y)) inside = !inside;
        }
        return inside;
    }

    void finish() {
        bbox_ = {};
        const double pi = std::numbers::pi;
        switch (kind_) {
            case DomainKind::interval:
                volume_ = extent_[0];
                boundary_ = 2.0;  // counting measure of the two endpoints
                break;
            case DomainKind::rectangle:
                volume_ = extent_[0] * extent_[1];
                boundary_ = 2.0 * (extent_[0] + extent_[1]);
                break;
            case DomainKind::box: {
                const double a = extent_[0], b = extent_[1], c = extent_[2];
                volume_ = a * b * c;
                boundary_ = 2.0 * (a * b + b * c + a * c);
                break;
            }
            case DomainKind::disk:
                volume_ = pi * extent_[0] * extent_[0];
                boundary_ = 2.0 * pi * extent_[0];
                bbox_.hi = {2.0 * extent_[0], 2.0 * extent_[0], 0.0};
                return;
            case DomainKind::polygon: {
                double a2 = 0.0, per = 0.0;
                bbox_.lo = {verts_[0].x, verts_[0].y, 0.0};
                bbox_.hi = bbox_.lo;
                for (std::size_t i = 0; i < verts_.size(); ++i) {
                    const Point2 p = verts_[i], q = verts_[(i + 1) % verts_.size()];
                    a2 += p.x * q.y - q.x * p.y;
                    per += std::hypot(q.x - p.x, q.y - p.y);
                    bbox_.lo[0] = std::min(bbox_.lo[0], p.x);
                    bbox_.lo[1] = std::min(bbox_.lo[1], p.y);
                    bbox_.hi[0] = std::max(bbox_.hi[0], p.x);
                    bbox_.hi[1] = std::max(bbox_.hi[1], p.y);
                }
                volume_ = 0.5 * a2;
                boundary_ = per;
                return;
            }
        }
        for (int i = 0; i < dim_; ++i) bbox_.hi[i] = extent_[i];
    }

    DomainKind kind_;
    int dim_;
    std::array<double, 3> extent_{};
    std::vector<Point2> verts_;
    double volume_ = 0.0, boundary_ = 0.0;
    BoundingBox bbox_;
};

namespace detail {

inline double orient(Point2 a, Point2 b, Point2 c) { return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x); }

inline bool on_segment(Point2 a, Point2 b, Point2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

inline bool segments_touch(Point2 a, Point2 b, Point2 c, Point2 d) {
    const double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

}  // namespace detail

// Rejects fewer than three vertices, repeated vertices, zero area and
// self-intersections; clockwise input is reversed.
inline Domain Domain::polygon(std::vector<Point2> v) {
    if (v.size() < 3) throw GeometryError("polygon needs at least 3 vertices");
    for (const auto& p : v)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw GeometryError("polygon vertex is not finite");
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = v[i], b = v[(i + 1) % n];
        if (a.x == b.x && a.y == b.y) throw GeometryError("polygon has a repeated vertex");
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;  // adjacent edges share a vertex
            if (detail::segments_touch(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
                throw GeometryError("polygon is not simple");
        }
    double a2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) a2 += v[i].x * v[(i + 1) % n].y - v[(i + 1) % n].x * v[i].y;
    if (a2 == 0.0) throw GeometryError("polygon has zero area");
    if (a2 < 0.0) std::reverse(v.begin(), v.end());
    Domain d(DomainKind::polygon, 2);
    d.verts_ = std::move(v);
    d.finish();
    return d;
}

namespace detail {

inline double parse_number(const std::string& s) {
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw GeometryError("malformed number '" + s + "'");
    }
    if (used != s.size()) throw GeometryError("malformed number '" + s + "'");
    return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

}  // namespace detail

// interval:L, rect:WxH, box:WxHxD, disk:R, poly:x0,y0;x1,y1;...
inline Domain parse_domain(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw GeometryError("domain spec needs the form kind:parameters");
    const std::string kind = spec.substr(0, colon), rest = spec.substr(colon + 1);
    auto dims = [&](std::size_t want) {
        const auto parts = detail::split(rest, 'x');
        if (parts.size() != want) throw GeometryError("domain '" + kind + "' expects " + std::to_string(want) + " sizes");
        std::vector<double> v;
        for (const auto& p : parts) v.push_back(detail::parse_number(p));
        return v;
    };
    if (kind == "interval") return Domain::interval(dims(1)[0]);
    if (kind == "rect") {
        const auto v = dims(2);
        return Domain::rectangle(v[0], v[1]);
    }
    if (kind == "box") {
        const auto v = dims(3);
        return Domain::box(v[0], v[1], v[2]);
    }
    if (kind == "disk") return Domain::disk(dims(1)[0]);
    if (kind == "poly") {
        std::vector<Point2> pts;
        for (const auto& item : detail::split(rest, ';')) {
            const auto xy = detail::split(item, ',');
            if (xy.size() != 2) throw GeometryError("polygon vertex '" + item + "' is not x,y");
            pts.push_back({detail::parse_number(xy[0]), detail::parse_number(xy[1])});
        }
        return Domain::polygon(std::move(pts));
    }
    throw GeometryError("unknown domain kind '" + kind + "'");
}

}  // namespace rieszlab
