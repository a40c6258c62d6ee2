#include "thickknot/hull2d.hpp"

#include <algorithm>
#include <numeric>

#include "thickknot/tolerances.hpp"

namespace thickknot {

namespace {

double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 d = b - a;
    const double dd = dot(d, d);
    const double t = dd == 0.0 ? 0.0 : std::clamp(dot(p - a, d) / dd, 0.0, 1.0);
    return distance(p, a + t * d);
}

// Distance of c to the left of the directed line a->b (negative = right side).
double left_offset(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double len = distance(a, b);
    return len == 0.0 ? 0.0 : cross(b - a, c - a) / len;
}

}  // namespace

Vec2 Hull2D::outward_normal(std::size_t k) const {
    const Vec2& a = corners[k];
    const Vec2& b = corners[(k + 1) % corners.size()];
    const Vec2 d = b - a;
    const double len = norm(d);
    return {d.y / len, -d.x / len};
}

double Hull2D::offset(std::size_t k, const Vec2& p) const {
    return dot(p - corners[k], outward_normal(k));
}

bool Hull2D::contains(const Vec2& p, double eps) const {
    if (corners.size() == 1) {
        return distance(p, corners[0]) <= eps;
    }
    if (subdimensional) {
        return segment_distance(p, corners[0], corners[1]) <= eps;
    }
    for (std::size_t k = 0; k < corners.size(); ++k) {
        if (offset(k, p) > eps) {
            return false;
        }
    }
    return true;
}

bool Hull2D::on_boundary(const Vec2& p, double eps) const {
    if (corners.size() == 1) {
        return distance(p, corners[0]) <= eps;
    }
    for (std::size_t k = 0; k < corners.size(); ++k) {
        if (segment_distance(p, corners[k], corners[(k + 1) % corners.size()]) <= eps) {
            return true;
        }
    }
    return false;
}

Hull2D convex_hull_2d(std::span<const Vec2> points) {
    const double eps = tol::geom;
    Hull2D hull;
    if (points.empty()) {
        return hull;
    }
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (points[a].x != points[b].x) return points[a].x < points[b].x;
        if (points[a].y != points[b].y) return points[a].y < points[b].y;
        return a < b;
    });
    // Drop near-duplicates; the first in sorted order represents them.
    std::vector<std::size_t> uniq;
    for (std::size_t idx : order) {
        bool dup = false;
        for (std::size_t u : uniq) {
            if (distance(points[u], points[idx]) <= eps) {
                dup = true;
                break;
            }
        }
        if (!dup) {
            uniq.push_back(idx);
        }
    }

    std::vector<std::size_t> chain;
    if (uniq.size() <= 2) {
        chain = uniq;
    } else {
        // Andrew's monotone chain; nearly collinear middle points are popped.
        std::vector<std::size_t> h(2 * uniq.size());
        std::size_t k = 0;
        for (std::size_t idx : uniq) {
            while (k >= 2 && left_offset(points[h[k - 2]], points[idx], points[h[k - 1]]) >= -eps) --k;
            h[k++] = idx;
        }
        for (std::size_t i = uniq.size() - 1, lower = k + 1; i-- > 0;) {
            const std::size_t idx = uniq[i];
            while (k >= lower && left_offset(points[h[k - 2]], points[idx], points[h[k - 1]]) >= -eps) --k;
            h[k++] = idx;
        }
        chain.assign(h.begin(), h.begin() + static_cast<long>(k - 1));
        if (chain.size() < 2) {
            chain = {uniq.front(), uniq.back()};
        }
    }
    hull.vertices = chain;
    for (std::size_t idx : chain) {
        hull.corners.push_back(points[idx]);
    }
    hull.subdimensional = hull.corners.size() < 3;
    if (hull.corners.size() == 2) {
        // The segment's far endpoint is the point farthest from the first corner.
        std::size_t far = chain[1];
        for (std::size_t idx : uniq) {
            if (distance(points[idx], points[chain[0]]) > distance(points[far], points[chain[0]])) far = idx;
        }
        hull.vertices[1] = far;
        hull.corners[1] = points[far];
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (std::find(hull.vertices.begin(), hull.vertices.end(), i) != hull.vertices.end()) {
            continue;
        }
        if (hull.on_boundary(points[i], eps)) {
            hull.boundary.push_back(i);
        } else {
            hull.interior.push_back(i);
        }
    }
    return hull;
}

}  // namespace thickknot
