#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "thickknot/polygon.hpp"

namespace thickknot {

enum class ArcChoice { Forward, Complement };

/// Reflect one arc between v_i and v_j across the plane through both at angle `theta`
/// around their axis (see reflection_plane for the parametrization).
struct ReflectionMove {
    std::size_t i = 0;
    std::size_t j = 0;
    double theta = 0.0;
    ArcChoice arc = ArcChoice::Forward;
};

/// Applied left to right; an empty batch is the identity.
using MoveBatch = std::vector<ReflectionMove>;

struct Plane {
    Point3 point;
    Vec3 normal;
};

/// Orthonormal frame (b1, b2) perpendicular to the v_i -> v_j axis. b1 comes from the first
/// standard basis vector e with |e . u| < 0.9, b2 = u x b1.
struct AxisFrame {
    Point3 origin;
    Vec3 axis;
    Vec3 b1;
    Vec3 b2;
};

AxisFrame axis_frame(const KnotPolygon& k, std::size_t i, std::size_t j);

/// Plane through v_i and v_j with normal cos(theta) b1 + sin(theta) b2.
/// Throws DegenerateAxis when v_i and v_j coincide.
Plane reflection_plane(const KnotPolygon& k, std::size_t i, std::size_t j, double theta);

/// Angle theta whose plane has the given normal; the normal must be perpendicular to the axis.
double theta_for_normal(const KnotPolygon& k, std::size_t i, std::size_t j, const Vec3& normal);

/// Indices strictly inside the chosen arc between i and j.
std::vector<std::size_t> arc_interior(std::size_t n, std::size_t i, std::size_t j, ArcChoice arc);

Point3 reflect_point(const Point3& p, const Plane& plane);

KnotPolygon apply_reflection(const KnotPolygon& k, const ReflectionMove& m);

KnotPolygon apply_batch(const KnotPolygon& k, const MoveBatch& batch);

/// Rigidly rotates the forward arc i -> j by phi about the v_i -> v_j axis (right-handed),
/// realized as two reflections at theta = 0 and theta = phi / 2.
KnotPolygon apply_arc_rotation(const KnotPolygon& k, std::size_t i, std::size_t j, double phi);

/// Rotation of the whole polygon by `angle` about the line through `origin` along unit `axis`.
KnotPolygon rotate_polygon(const KnotPolygon& k, const Point3& origin, const Vec3& axis, double angle);

KnotPolygon translate_polygon(const KnotPolygon& k, const Vec3& offset);

Point3 rotate_point(const Point3& p, const Point3& origin, const Vec3& axis, double angle);

/// Four distinguished vertices in forward cyclic order v1, w1, v2, w2.
struct VertexQuad {
    std::size_t v1 = 0;
    std::size_t w1 = 0;
    std::size_t v2 = 0;
    std::size_t w2 = 0;
};

/// Product of the quadrilateral's turning vectors at v1 and v2, (e4 x e1) . (e2 x e3), with
/// e1 = w1 - v1, e2 = v2 - w1, e3 = w2 - v2, e4 = v1 - w2. Vanishes when v1 or v2 lies on the w1 w2 line.
double quad_diagnostic(const KnotPolygon& k, const VertexQuad& q);

/// The six-reflection move T_theta on a convex polygon lying in a horizontal plane. Folds the
/// arc through v1 about w1 w2, re-planarizes the quadrilateral by reflecting the arc through
/// w2 about v1 v2, reflects up to four flaps back into the common plane and finally rotates
/// that plane back to horizontal about the w1 v2 line.
KnotPolygon apply_hextuple(const KnotPolygon& k, const VertexQuad& q, double theta);

}  // namespace thickknot
