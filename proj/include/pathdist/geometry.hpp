#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pathdist {

/// Thrown when caller-supplied data violates a documented precondition
/// (non-finite coordinates, empty curves, malformed files).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Point2D {
    double x = 0.0;
    double y = 0.0;

    friend Point2D operator+(Point2D a, Point2D b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2D operator-(Point2D a, Point2D b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2D operator*(double s, Point2D a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Point2D a, Point2D b) = default;
};

inline double dot(Point2D a, Point2D b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2D a, Point2D b) { return a.x * b.y - a.y * b.x; }
inline double squared_norm(Point2D a) { return dot(a, a); }
inline double norm(Point2D a) { return std::hypot(a.x, a.y); }
inline double distance(Point2D a, Point2D b) { return norm(a - b); }
inline Point2D lerp(Point2D a, Point2D b, double t) { return a + t * (b - a); }
inline bool is_finite(Point2D p) { return std::isfinite(p.x) && std::isfinite(p.y); }

struct Segment {
    Point2D a;
    Point2D b;

    Point2D at(double t) const { return lerp(a, b, t); }
    double length() const { return distance(a, b); }
};

/// Closed parameter interval [lo, hi] inside [0, 1]. Emptiness is an explicit
/// flag; lo <= hi always holds for a non-empty interval.
class FreeInterval {
public:
    FreeInterval() = default;
    FreeInterval(double lo, double hi);

    static FreeInterval empty() { return {}; }

    bool is_empty() const { return empty_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    bool contains(double t) const { return !empty_ && lo_ <= t && t <= hi_; }

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
    bool empty_ = true;
};

/// Parameters t in [0,1] with |seg(t) - p| <= eps, from the closed-form
/// intersection of the segment with the disc of radius eps around p.
FreeInterval free_interval(Point2D p, const Segment& seg, double eps);

/// Parameter of the point on seg closest to p.
double closest_parameter(Point2D p, const Segment& seg);
double point_segment_distance(Point2D p, const Segment& seg);
double segment_segment_distance(const Segment& s, const Segment& t);
bool segments_intersect(const Segment& s, const Segment& t);

/// Ordered point sequence. Always holds at least one point.
class PolyLine {
public:
    PolyLine() = default;
    explicit PolyLine(std::vector<Point2D> points);
    PolyLine(std::initializer_list<Point2D> points);

    std::span<const Point2D> points() const& { return points_; }
    std::span<const Point2D> points() const&& = delete;
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const Point2D& front() const { return points_.front(); }
    const Point2D& back() const { return points_.back(); }
    const Point2D& operator[](std::size_t i) const { return points_[i]; }

    std::size_t segment_count() const { return points_.empty() ? 0 : points_.size() - 1; }
    Segment segment(std::size_t i) const { return {points_[i], points_[i + 1]}; }

    double length() const;
    PolyLine reversed() const;
    /// Drops consecutive duplicate points; a fully degenerate curve keeps one point.
    PolyLine collapsed() const;
    /// Inserts points so that no segment is longer than max_spacing. Original
    /// vertices are kept.
    PolyLine resampled(double max_spacing) const;
    /// Point at arc length s from the start (clamped to [0, length]).
    Point2D point_at_arc(double s) const;

    /// Appends p unless it equals the current last point.
    void append(Point2D p);

    friend bool operator==(const PolyLine&, const PolyLine&) = default;

private:
    std::vector<Point2D> points_;
};

/// Throws InputError on an empty curve or non-finite coordinates.
void validate(const PolyLine& curve, const char* what);

double point_to_polyline_distance(Point2D p, const PolyLine& g);

}  // namespace pathdist
