#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "pathdist/geometry.hpp"

namespace pathdist {

/// Uniform bucket grid over a fixed set of segments. Each segment is
/// registered in every cell its geometry crosses.
class SpatialGrid {
public:
    SpatialGrid() = default;
    SpatialGrid(std::span<const Segment> segments, double cell_size);

    double cell_size() const { return cell_size_; }

    /// Appends (sorted, without duplicates) every segment registered in a cell
    /// overlapping the box [lo, hi]. May include segments outside the box.
    void query(Point2D lo, Point2D hi, std::vector<std::size_t>& out) const;

    /// Segments in cells overlapping the box of half-width r around p.
    void query_radius(Point2D p, double r, std::vector<std::size_t>& out) const {
        query({p.x - r, p.y - r}, {p.x + r, p.y + r}, out);
    }

private:
    struct CellKey {
        std::int64_t ix;
        std::int64_t iy;
        friend bool operator==(const CellKey&, const CellKey&) = default;
    };
    struct CellHash {
        std::size_t operator()(const CellKey& k) const noexcept {
            return static_cast<std::size_t>(k.ix * 73856093) ^ static_cast<std::size_t>(k.iy * 19349663);
        }
    };

    std::int64_t cell_of(double coordinate) const;

    double cell_size_ = 50.0;
    std::int64_t min_ix_ = 0, max_ix_ = -1, min_iy_ = 0, max_iy_ = -1;
    std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> buckets_;
};

}  // namespace pathdist
