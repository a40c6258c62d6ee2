#pragma once

#include <array>
#include <span>

#include "thickknot/geometry.hpp"
#include "thickknot/polygon.hpp"

namespace thickknot {

/// Proper rigid motion x -> R x + t.
struct RigidTransform {
    std::array<std::array<double, 3>, 3> rotation{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    Vec3 translation{0, 0, 0};

    Point3 apply(const Point3& p) const;
};

struct Alignment {
    RigidTransform transform;
    double rms = 0.0;
};

/// Least-squares proper rigid motion taking `moving[i]` onto `target[i]` (Kabsch). Both spans
/// must have the same non-zero length.
Alignment align_points(std::span<const Point3> moving, std::span<const Point3> target);

/// RMS vertex distance after optimal alignment of `k` onto `target`, vertex i matched to vertex i.
double aligned_rms(const KnotPolygon& k, const KnotPolygon& target);

KnotPolygon transform_polygon(const KnotPolygon& k, const RigidTransform& t);

}  // namespace thickknot
