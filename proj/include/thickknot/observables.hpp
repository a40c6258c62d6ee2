#pragma once

#include <cstddef>
#include <cstdint>

#include "thickknot/geometry.hpp"
#include "thickknot/polygon.hpp"

namespace thickknot {

/// Vertex-based radius of gyration sqrt((1/n) sum |v_i - c|^2), c the vertex centroid.
double radius_of_gyration(const KnotPolygon& k);
double radius_of_gyration_squared(const KnotPolygon& k);

struct CrossingDiagramInfo {
    Vec3 direction;
    std::size_t crossings = 0;
    int attempts = 0;
};

/// |Alexander polynomial at -1| from a generic projection. 1 for the unknot, 3 for the trefoil,
/// 5 for the figure-eight; a value of 1 does not prove the knot is trivial.
/// Throws NoGenericProjection after 64 directions.
std::int64_t alexander_determinant(const KnotPolygon& k, CrossingDiagramInfo* info = nullptr);

/// Same, projecting along `direction`; throws NoGenericProjection if that projection is not generic.
std::int64_t alexander_determinant_along(const KnotPolygon& k, const Vec3& direction);

}  // namespace thickknot
