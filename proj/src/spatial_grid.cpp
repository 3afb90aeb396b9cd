#include "pathdist/spatial_grid.hpp"

#include <algorithm>
#include <cmath>

namespace pathdist {

namespace {

// Liang-Barsky: does the segment touch the closed box [lo, hi]?
bool segment_touches_box(const Segment& s, Point2D lo, Point2D hi) {
    double t0 = 0.0;
    double t1 = 1.0;
    const Point2D d = s.b - s.a;
    const double p[4] = {-d.x, d.x, -d.y, d.y};
    const double q[4] = {s.a.x - lo.x, hi.x - s.a.x, s.a.y - lo.y, hi.y - s.a.y};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) {
                return false;
            }
            continue;
        }
        const double r = q[i] / p[i];
        if (p[i] < 0.0) {
            t0 = std::max(t0, r);
        } else {
            t1 = std::min(t1, r);
        }
        if (t0 > t1) {
            return false;
        }
    }
    return true;
}

}  // namespace

SpatialGrid::SpatialGrid(std::span<const Segment> segments, double cell_size) : cell_size_(cell_size) {
    if (!(cell_size > 0.0)) {
        throw InputError("SpatialGrid: cell size must be positive");
    }
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const Segment& s = segments[i];
        const std::int64_t x0 = cell_of(std::min(s.a.x, s.b.x));
        const std::int64_t x1 = cell_of(std::max(s.a.x, s.b.x));
        const std::int64_t y0 = cell_of(std::min(s.a.y, s.b.y));
        const std::int64_t y1 = cell_of(std::max(s.a.y, s.b.y));
        const bool single = x0 == x1 && y0 == y1;
        for (std::int64_t ix = x0; ix <= x1; ++ix) {
            for (std::int64_t iy = y0; iy <= y1; ++iy) {
                const Point2D lo{static_cast<double>(ix) * cell_size_, static_cast<double>(iy) * cell_size_};
                const Point2D hi{lo.x + cell_size_, lo.y + cell_size_};
                if (single || segment_touches_box(s, lo, hi)) {
                    buckets_[{ix, iy}].push_back(i);
                }
            }
        }
        if (i == 0) {
            min_ix_ = x0, max_ix_ = x1, min_iy_ = y0, max_iy_ = y1;
        } else {
            min_ix_ = std::min(min_ix_, x0), max_ix_ = std::max(max_ix_, x1);
            min_iy_ = std::min(min_iy_, y0), max_iy_ = std::max(max_iy_, y1);
        }
    }
}

std::int64_t SpatialGrid::cell_of(double coordinate) const {
    return static_cast<std::int64_t>(std::floor(coordinate / cell_size_));
}

void SpatialGrid::query(Point2D lo, Point2D hi, std::vector<std::size_t>& out) const {
    if (buckets_.empty()) {
        return;
    }
    const std::int64_t x0 = std::max(min_ix_, cell_of(lo.x));
    const std::int64_t x1 = std::min(max_ix_, cell_of(hi.x));
    const std::int64_t y0 = std::max(min_iy_, cell_of(lo.y));
    const std::int64_t y1 = std::min(max_iy_, cell_of(hi.y));
    if (x0 > x1 || y0 > y1) {
        return;
    }
    const std::size_t start = out.size();
    const auto cells = static_cast<double>(x1 - x0 + 1) * static_cast<double>(y1 - y0 + 1);
    if (cells > static_cast<double>(buckets_.size())) {
        for (const auto& [key, items] : buckets_) {
            if (key.ix >= x0 && key.ix <= x1 && key.iy >= y0 && key.iy <= y1) {
                out.insert(out.end(), items.begin(), items.end());
            }
        }
    } else {
        for (std::int64_t ix = x0; ix <= x1; ++ix) {
            for (std::int64_t iy = y0; iy <= y1; ++iy) {
                const auto it = buckets_.find({ix, iy});
                if (it != buckets_.end()) {
                    out.insert(out.end(), it->second.begin(), it->second.end());
                }
            }
        }
    }
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(start), out.end());
    out.erase(std::unique(out.begin() + static_cast<std::ptrdiff_t>(start), out.end()), out.end());
}

}  // namespace pathdist
