#include "thickknot/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "thickknot/errors.hpp"
#include "thickknot/tolerances.hpp"

namespace thickknot {

double radius_of_gyration_squared(const KnotPolygon& k) {
    Vec3 c{0.0, 0.0, 0.0};
    for (const auto& p : k.vertices()) c = c + p;
    c = c / static_cast<double>(k.size());
    double s = 0.0;
    for (const auto& p : k.vertices()) {
        const Vec3 d = p - c;
        s += dot(d, d);
    }
    return s / static_cast<double>(k.size());
}

double radius_of_gyration(const KnotPolygon& k) { return std::sqrt(radius_of_gyration_squared(k)); }

namespace {

struct Event {
    std::size_t edge = 0;
    double param = 0.0;
    std::size_t crossing = 0;
    bool under = false;
};

double seg_dist(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 d = b - a;
    const double dd = dot(d, d);
    const double t = dd == 0.0 ? 0.0 : std::clamp(dot(p - a, d) / dd, 0.0, 1.0);
    return distance(p, a + t * d);
}

// Crossing events of the projection along `dir`, or nothing if the projection is not generic.
std::optional<std::vector<Event>> crossing_events(const KnotPolygon& k, const Vec3& dir) {
    const double eps = tol::geom;
    const std::size_t n = k.size();
    const Vec3 d = normalized(dir);
    const Vec3 helper = std::abs(d.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    const Vec3 e1 = normalized(cross(d, helper));
    const Vec3 e2 = cross(d, e1);
    std::vector<Vec2> p(n);
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = {dot(k[i], e1), dot(k[i], e2)};
        h[i] = dot(k[i], d);
    }
    auto nxt = [n](std::size_t i) { return (i + 1) % n; };

    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = p[i] - p[(i + n - 1) % n];
        const Vec2 b = p[nxt(i)] - p[i];
        if (norm(a) <= eps) return std::nullopt;
        // Projected edges folding back over each other at a vertex.
        if (std::abs(cross(a, b)) <= eps * norm(a) * norm(b) && dot(a, b) < 0.0) return std::nullopt;
        for (std::size_t e = 0; e < n; ++e) {
            if (e == i || nxt(e) == i) continue;
            if (seg_dist(p[i], p[e], p[nxt(e)]) <= eps) return std::nullopt;
        }
    }

    std::vector<Event> events;
    std::vector<Vec2> points;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (nxt(i) == j || nxt(j) == i) continue;
            const Vec2 a0 = p[i], a1 = p[nxt(i)], b0 = p[j], b1 = p[nxt(j)];
            const Vec2 r = a1 - a0, s = b1 - b0;
            const double den = cross(r, s);
            const double c1 = cross(b0 - a0, s);
            const double c2 = cross(b0 - a0, r);
            if (den == 0.0) continue;  // parallel; overlaps were rejected by the vertex checks
            const double u = c1 / den;
            const double v = c2 / den;
            if (!(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0)) continue;
            const Vec2 x = a0 + u * r;
            for (const auto& q : points) {
                if (distance(q, x) <= eps) return std::nullopt;
            }
            const double hi = h[i] + u * (h[nxt(i)] - h[i]);
            const double hj = h[j] + v * (h[nxt(j)] - h[j]);
            if (std::abs(hi - hj) <= eps) return std::nullopt;
            const std::size_t id = points.size();
            points.push_back(x);
            // Larger height along the direction is nearer the viewer looking down -d: "over".
            events.push_back({i, u, id, hi < hj});
            events.push_back({j, v, id, hj < hi});
        }
    }
    return events;
}

std::int64_t bareiss_abs_det(std::vector<std::vector<__int128>> a) {
    const std::size_t m = a.size();
    if (m == 0) return 1;
    __int128 prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k < m; ++k) {
        if (a[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < m && a[r][k] == 0) ++r;
            if (r == m) return 0;
            std::swap(a[k], a[r]);
            sign = -sign;
        }
        if (k + 1 == m) break;
        for (std::size_t i = k + 1; i < m; ++i) {
            for (std::size_t j = k + 1; j < m; ++j) {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    __int128 det = a[m - 1][m - 1] * sign;
    if (det < 0) det = -det;
    return static_cast<std::int64_t>(det);
}

std::int64_t determinant_from_events(std::vector<Event> events) {
    const std::size_t c = events.size() / 2;
    if (c == 0) return 1;
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        return a.edge != b.edge ? a.edge < b.edge : a.param < b.param;
    });
    std::vector<std::size_t> over(c), in(c), out(c);
    std::size_t unders = 0;
    for (const auto& e : events) {
        if (e.under) {
            in[e.crossing] = unders % c;
            out[e.crossing] = (unders + 1) % c;
            ++unders;
        } else {
            over[e.crossing] = unders % c;
        }
    }
    // Coloring matrix at t = -1, one row per crossing; any first minor gives the determinant.
    std::vector<std::vector<__int128>> m(c, std::vector<__int128>(c, 0));
    for (std::size_t x = 0; x < c; ++x) {
        m[x][over[x]] += 2;
        m[x][in[x]] -= 1;
        m[x][out[x]] -= 1;
    }
    std::vector<std::vector<__int128>> minor(c - 1, std::vector<__int128>(c - 1));
    for (std::size_t r = 0; r + 1 < c; ++r) {
        for (std::size_t col = 0; col + 1 < c; ++col) minor[r][col] = m[r][col];
    }
    return bareiss_abs_det(std::move(minor));
}

}  // namespace

std::int64_t alexander_determinant_along(const KnotPolygon& k, const Vec3& direction) {
    const auto events = crossing_events(k, direction);
    if (!events) {
        throw NoGenericProjection("projection direction is not generic");
    }
    return determinant_from_events(*events);
}

std::int64_t alexander_determinant(const KnotPolygon& k, CrossingDiagramInfo* info) {
    constexpr int kAttempts = 64;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int a = 0; a < kAttempts; ++a) {
        // Deterministic spiral of tilts away from +z.
        const double tilt = 0.05 * std::sqrt(static_cast<double>(a));
        const Vec3 dir = normalized(Vec3{tilt * std::cos(a * golden), tilt * std::sin(a * golden), 1.0});
        const auto events = crossing_events(k, dir);
        if (!events) continue;
        if (info) *info = {dir, events->size() / 2, a + 1};
        return determinant_from_events(*events);
    }
    throw NoGenericProjection("no generic projection after 64 directions");
}

}  // namespace thickknot
