#include "thickknot/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <numbers>

#include "thickknot/errors.hpp"
#include "thickknot/tolerances.hpp"

namespace thickknot {

Point3 position(const KnotPolygon& k, const KnotPoint& p) {
    const Point3& a = k.vertex(static_cast<long long>(p.edge));
    return a + k.edge(static_cast<long long>(p.edge)) * p.t;
}

double max_edge_deviation(const KnotPolygon& k) {
    double worst = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        worst = std::max(worst, std::abs(norm(k.edge(static_cast<long long>(i))) - 1.0));
    }
    return worst;
}

ValidatedPolygon validate_polygon(std::span<const Point3> vertices) {
    if (vertices.size() < 3) {
        throw TooFewVertices(vertices.size());
    }
    for (const auto& v : vertices) {
        if (!is_finite(v)) {
            throw KnotError("vertex coordinates must be finite");
        }
    }
    const std::size_t n = vertices.size();
    std::size_t worst_index = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dev = std::abs(distance(vertices[(i + 1) % n], vertices[i]) - 1.0);
        if (dev > worst) {
            worst = dev;
            worst_index = i;
        }
    }
    if (worst > tol::edge) {
        throw EdgeLengthViolation(worst_index, worst);
    }
    ValidatedPolygon out;
    out.polygon = KnotPolygon::from_trusted({vertices.begin(), vertices.end()});
    out.embedded = is_embedded(out.polygon);
    return out;
}

bool is_embedded(const KnotPolygon& k) {
    const std::size_t n = k.size();
    for (std::size_t i = 0; i < n; ++i) {
        // Adjacent edges overlap only when the polygon folds back on itself.
        if (angle_between(k.edge(static_cast<long long>(i) - 1) * -1.0, k.edge(static_cast<long long>(i))) <= tol::geom) {
            return false;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) {
                continue;
            }
            const auto c = closest_segment_points(k.vertex(i), k.vertex(i + 1), k.vertex(j), k.vertex(j + 1));
            if (c.distance <= tol::geom) {
                return false;
            }
        }
    }
    return true;
}

KnotPolygon regular_polygon(std::size_t n) {
    if (n < 3) {
        throw TooFewVertices(n);
    }
    const double pi = std::numbers::pi;
    const double radius = 1.0 / (2.0 * std::sin(pi / static_cast<double>(n)));
    std::vector<Point3> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = 2.0 * pi * static_cast<double>(i) / static_cast<double>(n);
        v[i] = {radius * std::cos(a), radius * std::sin(a), 0.0};
    }
    return KnotPolygon::from_trusted(std::move(v));
}

double regular_interior_angle(std::size_t n) {
    return std::numbers::pi * static_cast<double>(n - 2) / static_cast<double>(n);
}

AngleClass classify_angle(double interior, std::size_t n) {
    const double diff = interior - regular_interior_angle(n);
    if (diff > tol::angle) {
        return AngleClass::Large;
    }
    if (diff < -tol::angle) {
        return AngleClass::Small;
    }
    return AngleClass::Regular;
}

VertexAngles vertex_angles(const KnotPolygon& k, long long i) {
    const Vec3 fwd = k.vertex(i + 1) - k.vertex(i);
    const Vec3 back = k.vertex(i - 1) - k.vertex(i);
    if (norm(fwd) < tol::edge || norm(back) < tol::edge) {
        throw DegenerateAngle("vertex " + std::to_string(k.wrap(i)) + " has a zero-length incident edge");
    }
    VertexAngles out;
    out.interior = angle_between(fwd, back);
    out.turning = std::numbers::pi - out.interior;
    out.kind = classify_angle(out.interior, k.size());
    return out;
}

std::vector<double> turning_angles(const KnotPolygon& k) {
    std::vector<double> out(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) {
        out[i] = std::numbers::pi - angle_between(k.edge(static_cast<long long>(i)), -k.edge(static_cast<long long>(i) - 1));
    }
    return out;
}

namespace {

KnotPoint normalize_point(const KnotPolygon& k, KnotPoint p) {
    if (p.edge >= k.size() || !(p.t >= 0.0) || p.t > 1.0) {
        throw PointNotOnKnot("point (" + std::to_string(p.edge) + ", " + std::to_string(p.t) + ") is not on the knot");
    }
    if (p.t == 1.0) {
        p = {(p.edge + 1) % k.size(), 0.0};
    }
    return p;
}

}  // namespace

double total_curvature(const KnotPolygon& k, const KnotPoint& a_in, const KnotPoint& b_in) {
    const KnotPoint a = normalize_point(k, a_in);
    const KnotPoint b = normalize_point(k, b_in);
    const auto turn = turning_angles(k);
    return total_curvature(turn, a, b);
}

double total_curvature(std::span<const double> turn, const KnotPoint& a, const KnotPoint& b) {
    if (a.edge == b.edge && a.t == b.t) {
        return 0.0;
    }
    const double n = static_cast<double>(turn.size());
    const double pa = static_cast<double>(a.edge) + a.t;
    const double pb = static_cast<double>(b.edge) + b.t;
    const double span = std::fmod(pb - pa + n, n);
    double total = 0.0;
    double inside = 0.0;
    for (std::size_t v = 0; v < turn.size(); ++v) {
        total += turn[v];
        const double d = std::fmod(static_cast<double>(v) - pa + n, n);
        if (d > 0.0 && d < span) {
            inside += turn[v];
        }
    }
    const double ends = (a.is_vertex() ? turn[a.edge] : 0.0) + (b.is_vertex() ? turn[b.edge] : 0.0);
    // Endpoints that are vertices belong to both arcs.
    return std::min(inside + ends, total - inside);
}

}  // namespace thickknot
