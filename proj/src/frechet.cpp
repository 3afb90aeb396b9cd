#include "pathdist/frechet.hpp"

#include <algorithm>
#include <vector>

namespace pathdist {

namespace {

bool constant_curve_decision(Point2D p, const PolyLine& g, double eps) {
    // The farthest point of a polyline from p is one of its vertices.
    return std::ranges::all_of(g.points(), [&](Point2D q) { return distance(p, q) <= eps; });
}

// Earliest reachable point of a free boundary interval, given the reachable
// interval on the opposite boundary of the same cell.
FreeInterval clip_from(const FreeInterval& reach, const FreeInterval& free) {
    if (reach.is_empty() || free.is_empty()) {
        return FreeInterval::empty();
    }
    const double lo = std::max(reach.lo(), free.lo());
    return lo <= free.hi() ? FreeInterval(lo, free.hi()) : FreeInterval::empty();
}

}  // namespace

bool frechet_decision(const PolyLine& f_in, const PolyLine& g_in, double eps) {
    validate(f_in, "frechet_decision");
    validate(g_in, "frechet_decision");
    if (!(eps >= 0.0)) {
        throw InputError("frechet_decision: eps must be non-negative");
    }
    const PolyLine f = f_in.collapsed();
    const PolyLine g = g_in.collapsed();
    if (f.size() == 1) {
        return constant_curve_decision(f.front(), g, eps);
    }
    if (g.size() == 1) {
        return constant_curve_decision(g.front(), f, eps);
    }
    if (distance(f.front(), g.front()) > eps || distance(f.back(), g.back()) > eps) {
        return false;
    }

    const std::size_t m = f.segment_count();
    const std::size_t n = g.segment_count();

    // left[j]: reachable part of the vertical boundary at the current column
    // (f at vertex i, parameter along g's segment j).
    std::vector<FreeInterval> left(n);
    // bottom: reachable part of the horizontal boundary below the current cell.
    FreeInterval bottom;

    // Column 0: f stays at its first vertex while g advances.
    bool open = true;
    for (std::size_t j = 0; j < n; ++j) {
        const FreeInterval free = free_interval(f[0], g.segment(j), eps);
        if (open && free.contains(0.0)) {
            left[j] = free;
            open = free.hi() >= 1.0;
        } else {
            open = false;
        }
    }

    std::vector<FreeInterval> right(n);
    bool bottom_open = true;
    for (std::size_t i = 0; i < m; ++i) {
        const Segment fi = f.segment(i);
        // Row 0 boundary: g stays at its first vertex while f advances.
        const FreeInterval free_bottom = free_interval(g[0], fi, eps);
        if (bottom_open && free_bottom.contains(0.0)) {
            bottom = free_bottom;
            bottom_open = free_bottom.hi() >= 1.0;
        } else {
            bottom = FreeInterval::empty();
            bottom_open = false;
        }
        for (std::size_t j = 0; j < n; ++j) {
            const FreeInterval free_right = free_interval(f[i + 1], g.segment(j), eps);
            const FreeInterval free_top = free_interval(g[j + 1], fi, eps);
            const FreeInterval& reach_left = left[j];

            FreeInterval top;
            if (!reach_left.is_empty()) {
                top = free_top;
            } else {
                top = clip_from(bottom, free_top);
            }
            if (!bottom.is_empty()) {
                right[j] = free_right;
            } else {
                right[j] = clip_from(reach_left, free_right);
            }
            bottom = top;
        }
        std::swap(left, right);
    }
    // Accept iff the top-right corner is reachable.
    return left[n - 1].contains(1.0) || bottom.contains(1.0);
}

double frechet_distance(const PolyLine& f_in, const PolyLine& g_in, double tol) {
    validate(f_in, "frechet_distance");
    validate(g_in, "frechet_distance");
    if (!(tol > 0.0)) {
        throw InputError("frechet_distance: tolerance must be positive");
    }
    const PolyLine f = f_in.collapsed();
    const PolyLine g = g_in.collapsed();

    double lo = std::max(distance(f.front(), g.front()), distance(f.back(), g.back()));
    if (frechet_decision(f, g, lo)) {
        return lo;
    }
    double hi = lo;
    for (const Point2D& p : f.points()) {
        for (const Point2D& q : g.points()) {
            hi = std::max(hi, distance(p, q));
        }
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (frechet_decision(f, g, mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

double discrete_frechet(const PolyLine& f, const PolyLine& g) {
    validate(f, "discrete_frechet");
    validate(g, "discrete_frechet");
    const std::size_t n = g.size();
    std::vector<double> prev(n);
    std::vector<double> cur(n);
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double d = distance(f[i], g[j]);
            double best;
            if (i == 0 && j == 0) {
                best = d;
            } else if (i == 0) {
                best = std::max(cur[j - 1], d);
            } else if (j == 0) {
                best = std::max(prev[0], d);
            } else {
                best = std::max(std::min({prev[j], prev[j - 1], cur[j - 1]}), d);
            }
            cur[j] = best;
        }
        std::swap(prev, cur);
    }
    return prev[n - 1];
}

}  // namespace pathdist
