#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "thickknot/polygon.hpp"

namespace testgen {

/// Regular n-gon scrambled by `reflections` unconstrained random reflection moves.
thickknot::KnotPolygon random_polygon(std::size_t n, int reflections, std::uint64_t seed);

/// Same, restricted to polygons whose thickness is at least `min_thickness` (retries by seed).
thickknot::KnotPolygon random_thick_polygon(std::size_t n, int reflections, double min_thickness,
                                            std::uint64_t seed);

/// Random rigid motion (rotation + translation) applied to the polygon.
thickknot::KnotPolygon random_rigid_motion(const thickknot::KnotPolygon& k, std::uint64_t seed);

/// Planar convex equilateral hexagon in z = 0 whose vertices 0..2 have the given interior angles
/// in degrees; closure forces the other three. Throws if no such hexagon exists.
thickknot::KnotPolygon convex_hexagon(const std::array<double, 3>& degrees);

}  // namespace testgen
