#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "thickknot/geometry.hpp"

namespace thickknot {

/// Strictly convex hull of a planar point set.
///
/// `vertices` holds input indices of the hull corners in counterclockwise order; when several
/// inputs coincide with a corner the representative is the smallest (x, y, index). `boundary`
/// lists every other input lying on a hull edge or coinciding with a corner within the
/// collinearity band, and `interior` the rest.
struct Hull2D {
    std::vector<std::size_t> vertices;
    std::vector<Vec2> corners;
    std::vector<std::size_t> boundary;
    std::vector<std::size_t> interior;
    bool subdimensional = false;

    std::size_t size() const { return corners.size(); }

    /// Outward unit normal of hull edge k (corner k to corner k+1). Requires size() >= 2.
    Vec2 outward_normal(std::size_t k) const;

    /// Signed distance of p beyond the supporting line of edge k (positive = outside).
    double offset(std::size_t k, const Vec2& p) const;

    /// Whether p lies inside or on the hull within `eps`.
    bool contains(const Vec2& p, double eps) const;

    /// Whether p lies on the hull boundary within `eps`.
    bool on_boundary(const Vec2& p, double eps) const;
};

Hull2D convex_hull_2d(std::span<const Vec2> points);

}  // namespace thickknot
