#include "thickknot/moves.hpp"

#include <cmath>
#include <string>

#include "thickknot/errors.hpp"
#include "thickknot/tolerances.hpp"

namespace thickknot {

namespace {

// Points this close to the mirror are treated as lying on it and left bit-identical.
constexpr double kOnPlane = 1e-14;

constexpr Vec3 kUp{0.0, 0.0, 1.0};

}  // namespace

AxisFrame axis_frame(const KnotPolygon& k, std::size_t i, std::size_t j) {
    const Vec3 d = k.vertex(static_cast<long long>(j)) - k.vertex(static_cast<long long>(i));
    const double len = norm(d);
    if (len <= tol::axis || i == j) {
        throw DegenerateAxis("vertices " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
    }
    const Vec3 u = d / len;
    const Vec3 basis[3] = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
    Vec3 e = basis[2];
    for (const auto& cand : basis) {
        if (std::abs(dot(cand, u)) < 0.9) {
            e = cand;
            break;
        }
    }
    const Vec3 b1 = normalized(e - u * dot(e, u));
    return {k.vertex(static_cast<long long>(i)), u, b1, cross(u, b1)};
}

Plane reflection_plane(const KnotPolygon& k, std::size_t i, std::size_t j, double theta) {
    const AxisFrame f = axis_frame(k, i, j);
    return {f.origin, f.b1 * std::cos(theta) + f.b2 * std::sin(theta)};
}

double theta_for_normal(const KnotPolygon& k, std::size_t i, std::size_t j, const Vec3& normal) {
    const AxisFrame f = axis_frame(k, i, j);
    return std::atan2(dot(normal, f.b2), dot(normal, f.b1));
}

std::vector<std::size_t> arc_interior(std::size_t n, std::size_t i, std::size_t j, ArcChoice arc) {
    std::size_t from = i;
    std::size_t to = j;
    if (arc == ArcChoice::Complement) {
        std::swap(from, to);
    }
    std::vector<std::size_t> out;
    for (std::size_t v = (from + 1) % n; v != to; v = (v + 1) % n) {
        out.push_back(v);
    }
    return out;
}

Point3 reflect_point(const Point3& p, const Plane& plane) {
    const double d = dot(p - plane.point, plane.normal);
    if (std::abs(d) <= kOnPlane) {
        return p;
    }
    return p - plane.normal * (2.0 * d);
}

KnotPolygon apply_reflection(const KnotPolygon& k, const ReflectionMove& m) {
    const Plane plane = reflection_plane(k, m.i, m.j, m.theta);
    std::vector<Point3> v(k.vertices().begin(), k.vertices().end());
    for (std::size_t idx : arc_interior(k.size(), m.i, m.j, m.arc)) {
        v[idx] = reflect_point(v[idx], plane);
    }
    return KnotPolygon::from_trusted(std::move(v));
}

KnotPolygon apply_batch(const KnotPolygon& k, const MoveBatch& batch) {
    KnotPolygon cur = k;
    for (const auto& m : batch) {
        cur = apply_reflection(cur, m);
    }
    return cur;
}

KnotPolygon apply_arc_rotation(const KnotPolygon& k, std::size_t i, std::size_t j, double phi) {
    const KnotPolygon once = apply_reflection(k, {i, j, 0.0, ArcChoice::Forward});
    return apply_reflection(once, {i, j, phi / 2.0, ArcChoice::Forward});
}

Point3 rotate_point(const Point3& p, const Point3& origin, const Vec3& axis, double angle) {
    const Vec3 r = p - origin;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return origin + r * c + cross(axis, r) * s + axis * (dot(axis, r) * (1.0 - c));
}

KnotPolygon rotate_polygon(const KnotPolygon& k, const Point3& origin, const Vec3& axis, double angle) {
    std::vector<Point3> v;
    v.reserve(k.size());
    for (const auto& p : k.vertices()) {
        v.push_back(rotate_point(p, origin, axis, angle));
    }
    return KnotPolygon::from_trusted(std::move(v));
}

KnotPolygon translate_polygon(const KnotPolygon& k, const Vec3& offset) {
    std::vector<Point3> v;
    v.reserve(k.size());
    for (const auto& p : k.vertices()) {
        v.push_back(p + offset);
    }
    return KnotPolygon::from_trusted(std::move(v));
}

double quad_diagnostic(const KnotPolygon& k, const VertexQuad& q) {
    const Vec3 e1 = k[q.w1] - k[q.v1];
    const Vec3 e2 = k[q.v2] - k[q.w1];
    const Vec3 e3 = k[q.w2] - k[q.v2];
    const Vec3 e4 = k[q.v1] - k[q.w2];
    return dot(cross(e4, e1), cross(e2, e3));
}

namespace {

// Reflection of the forward arc a -> b whose mirror maps unit direction `from` onto `to`
// (both perpendicular to the a-b axis). No-op when they already agree.
KnotPolygon swing_arc(const KnotPolygon& k, std::size_t a, std::size_t b, const Vec3& from, const Vec3& to) {
    const Vec3 diff = to - from;
    if (norm(diff) <= 1e-15) {
        return k;
    }
    // Mirror normal lies in the axis-normal plane, perpendicular to the bisector of from and to.
    // The cross-product form stays accurate when the two directions nearly coincide.
    const Vec3 sum = to + from;
    const Vec3 axis = normalized(k[b] - k[a]);
    const Vec3 normal = norm(sum) > norm(diff) ? normalized(cross(axis, sum)) : normalized(diff);
    return apply_reflection(k, {a, b, theta_for_normal(k, a, b, normal), ArcChoice::Forward});
}

}  // namespace

KnotPolygon apply_hextuple(const KnotPolygon& k, const VertexQuad& q, double theta) {
    // Step 1: fold the arc w2 -> v1 -> w1 about the w1 w2 line, lifting v1 to z >= 0.
    const Point3 W1 = k[q.w1];
    const Point3 W2 = k[q.w2];
    const Vec3 u = normalized(W2 - W1);
    Vec3 side = normalized(cross(kUp, u));
    if (dot(k[q.v1] - W1, side) < 0.0) {
        side = -side;
    }
    const Vec3 n1 = kUp * std::cos(theta) - side * std::sin(theta);
    KnotPolygon cur = k;
    if (theta != 0.0) {
        cur = apply_reflection(cur, {q.w2, q.w1, theta_for_normal(cur, q.w2, q.w1, n1), ArcChoice::Forward});
    }

    // Step 2: bring w2 into the plane of v1, w1, v2 by reflecting the arc v2 -> w2 -> v1.
    const Point3 V1 = cur[q.v1];
    const Point3 V2 = cur[q.v2];
    const Vec3 plane_cross = cross(cur[q.w1] - V1, V2 - V1);
    if (norm(plane_cross) <= 1e-12) {
        throw NotCoplanarizable("v1, w1, v2 are collinear; no common plane exists", norm(plane_cross));
    }
    // Orient the plane normal so that it is +z at theta = 0 and follows theta continuously.
    const double sign0 = cross(k[q.w1] - k[q.v1], k[q.v2] - k[q.v1]).z >= 0.0 ? 1.0 : -1.0;
    const Vec3 nq = normalized(plane_cross) * sign0;
    const Vec3 u2 = normalized(V2 - V1);
    const Point3 w2 = cur[q.w2];
    const Point3 centre = V1 + u2 * dot(w2 - V1, u2);
    const Vec3 radial = w2 - centre;
    const double rho = norm(radial);
    if (rho > 1e-15) {
        const Vec3 in_plane = normalized(cross(nq, u2));
        const Point3 up = centre + in_plane * rho;
        const Point3 down = centre - in_plane * rho;
        // Keep the quadrilateral unfolded: w2 ends opposite w1 across the v1 v2 diagonal.
        const Vec3 w1_side = cur[q.w1] - V1 - u2 * dot(cur[q.w1] - V1, u2);
        const Point3 target = dot(up - centre, w1_side) <= 0.0 ? up : down;
        cur = swing_arc(cur, q.v2, q.v1, normalized(radial), normalized(target - centre));
    }

    // Step 3: each flap between consecutive distinguished vertices swings into the common plane,
    // landing outside the quadrilateral. For small theta this is also the shorter swing.
    const Point3 quad_centre = (cur[q.v1] + cur[q.w1] + cur[q.v2] + cur[q.w2]) * 0.25;
    const std::array<std::pair<std::size_t, std::size_t>, 4> flaps = {
        std::pair{q.v1, q.w1}, std::pair{q.w1, q.v2}, std::pair{q.v2, q.w2}, std::pair{q.w2, q.v1}};
    for (const auto& [a, b] : flaps) {
        const auto inner = arc_interior(cur.size(), a, b, ArcChoice::Forward);
        if (inner.empty()) {
            continue;
        }
        const Point3 A = cur[a];
        const Vec3 ax = normalized(cur[b] - A);
        Vec3 flap_dir{};
        double best = 0.0;
        for (std::size_t idx : inner) {
            const Vec3 r = cur[idx] - A;
            const Vec3 perp = r - ax * dot(r, ax);
            if (norm(perp) > best) {
                best = norm(perp);
                flap_dir = perp;
            }
        }
        if (best <= 1e-12) {
            continue;
        }
        flap_dir = normalized(flap_dir);
        Vec3 target = normalized(cross(nq, ax));
        if (dot(target, quad_centre - A) > 0.0) {
            target = -target;
        }
        cur = swing_arc(cur, a, b, flap_dir, target);
    }

    // Rigid re-alignment: w1 and v2 never move, so the common plane is turned back to horizontal
    // about their (horizontal) line. A signed angle keeps this continuous even past vertical.
    const Vec3 a = normalized(cur[q.v2] - cur[q.w1]);
    const Vec3 b = cross(a, kUp);
    const double phi = std::atan2(dot(nq, b), dot(nq, kUp));
    if (phi != 0.0) {
        cur = rotate_polygon(cur, cur[q.w1], a, -phi);
    }
    return cur;
}

}  // namespace thickknot
