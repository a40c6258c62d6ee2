#pragma once

namespace thickknot::tol {

inline constexpr double edge = 1e-9;      // unit edge-length validation
inline constexpr double geom = 1e-9;      // collinearity / boundary-membership band
inline constexpr double angle = 1e-12;    // regular-angle classification
inline constexpr double flat = 1e-8;      // planarity of flattened polygons
inline constexpr double axis = 1e-9;      // minimum reflection axis length
inline constexpr double progress = 1e-12; // minimum useful gain of the expose phase

}  // namespace thickknot::tol
