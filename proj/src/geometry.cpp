#include "pathdist/geometry.hpp"

#include <algorithm>
#include <limits>

namespace pathdist {

FreeInterval::FreeInterval(double lo, double hi) : lo_(lo), hi_(hi), empty_(false) {
    if (!(lo <= hi)) {
        throw std::invalid_argument("FreeInterval: lo > hi");
    }
}

FreeInterval free_interval(Point2D p, const Segment& seg, double eps) {
    const Point2D d = seg.b - seg.a;
    const double len2 = squared_norm(d);
    if (len2 == 0.0) {
        return distance(seg.a, p) <= eps ? FreeInterval(0.0, 1.0) : FreeInterval::empty();
    }
    const double len = std::sqrt(len2);
    const double t0 = dot(p - seg.a, d) / len2;
    const double h = cross(d, p - seg.a) / len;
    const double rest = eps * eps - h * h;
    if (rest < 0.0) {
        return FreeInterval::empty();
    }
    const double w = std::sqrt(rest) / len;
    const double lo = std::max(0.0, t0 - w);
    const double hi = std::min(1.0, t0 + w);
    if (lo > hi) {
        return FreeInterval::empty();
    }
    return {lo, hi};
}

double closest_parameter(Point2D p, const Segment& seg) {
    const Point2D d = seg.b - seg.a;
    const double len2 = squared_norm(d);
    if (len2 == 0.0) {
        return 0.0;
    }
    return std::clamp(dot(p - seg.a, d) / len2, 0.0, 1.0);
}

double point_segment_distance(Point2D p, const Segment& seg) {
    return distance(p, seg.at(closest_parameter(p, seg)));
}

namespace {

int orientation(Point2D a, Point2D b, Point2D c) {
    const double v = cross(b - a, c - a);
    return (v > 0.0) - (v < 0.0);
}

bool on_segment(Point2D a, Point2D b, Point2D p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(const Segment& s, const Segment& t) {
    const int o1 = orientation(s.a, s.b, t.a);
    const int o2 = orientation(s.a, s.b, t.b);
    const int o3 = orientation(t.a, t.b, s.a);
    const int o4 = orientation(t.a, t.b, s.b);
    if (o1 != o2 && o3 != o4) {
        return true;
    }
    return (o1 == 0 && on_segment(s.a, s.b, t.a)) || (o2 == 0 && on_segment(s.a, s.b, t.b)) ||
           (o3 == 0 && on_segment(t.a, t.b, s.a)) || (o4 == 0 && on_segment(t.a, t.b, s.b));
}

double segment_segment_distance(const Segment& s, const Segment& t) {
    if (segments_intersect(s, t)) {
        return 0.0;
    }
    return std::min({point_segment_distance(s.a, t), point_segment_distance(s.b, t),
                     point_segment_distance(t.a, s), point_segment_distance(t.b, s)});
}

PolyLine::PolyLine(std::vector<Point2D> points) : points_(std::move(points)) {}

PolyLine::PolyLine(std::initializer_list<Point2D> points) : points_(points) {}

double PolyLine::length() const {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
        total += distance(points_[i], points_[i + 1]);
    }
    return total;
}

PolyLine PolyLine::reversed() const {
    return PolyLine(std::vector<Point2D>(points_.rbegin(), points_.rend()));
}

PolyLine PolyLine::collapsed() const {
    PolyLine out;
    out.points_.reserve(points_.size());
    for (const Point2D& p : points_) {
        out.append(p);
    }
    return out;
}

PolyLine PolyLine::resampled(double max_spacing) const {
    if (!(max_spacing > 0.0)) {
        throw InputError("resampled: spacing must be positive");
    }
    PolyLine out;
    if (points_.empty()) {
        return out;
    }
    out.points_.push_back(points_.front());
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
        const Point2D a = points_[i];
        const Point2D b = points_[i + 1];
        const auto pieces = static_cast<std::size_t>(std::ceil(distance(a, b) / max_spacing));
        for (std::size_t j = 1; j < pieces; ++j) {
            out.points_.push_back(lerp(a, b, static_cast<double>(j) / static_cast<double>(pieces)));
        }
        out.points_.push_back(b);
    }
    return out;
}

Point2D PolyLine::point_at_arc(double s) const {
    if (points_.empty()) {
        throw InputError("point_at_arc on empty polyline");
    }
    double walked = 0.0;
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
        const double len = distance(points_[i], points_[i + 1]);
        if (s <= walked + len && len > 0.0) {
            return lerp(points_[i], points_[i + 1], std::clamp((s - walked) / len, 0.0, 1.0));
        }
        walked += len;
    }
    return points_.back();
}

void PolyLine::append(Point2D p) {
    if (points_.empty() || points_.back() != p) {
        points_.push_back(p);
    }
}

void validate(const PolyLine& curve, const char* what) {
    if (curve.empty()) {
        throw InputError(std::string(what) + ": empty polyline");
    }
    for (const Point2D& p : curve.points()) {
        if (!is_finite(p)) {
            throw InputError(std::string(what) + ": non-finite coordinate");
        }
    }
}

double point_to_polyline_distance(Point2D p, const PolyLine& g) {
    validate(g, "point_to_polyline_distance");
    if (g.size() == 1) {
        return distance(p, g.front());
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.segment_count(); ++i) {
        best = std::min(best, point_segment_distance(p, g.segment(i)));
    }
    return best;
}

}  // namespace pathdist
