#include "thickknot/thickness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "thickknot/tolerances.hpp"

namespace thickknot {

namespace {

constexpr double kStep = 1e-7;      // one-sided probe length for local-extremum checks
constexpr double kSlack = 1e-12;
constexpr double kGolden = 0.6180339887498949;
constexpr double kSearchTol = 1e-10;

// Change in distance to `target` when moving from vertex `v` by kStep along unit `dir`.
double probe(const Vec3& v, const Vec3& dir, const Vec3& target) {
    const Vec3 r = v - target;
    const double d0 = norm(r);
    const double sq_change = 2.0 * kStep * dot(dir, r) + kStep * kStep * dot(dir, dir);
    const double d1 = std::sqrt(std::max(0.0, d0 * d0 + sq_change));
    return d0 + d1 == 0.0 ? 0.0 : sq_change / (d0 + d1);
}

bool vertex_is_extremum(const KnotPolygon& k, long long i, const Vec3& target) {
    const Vec3& v = k.vertex(i);
    const double fwd = probe(v, normalized(k.vertex(i + 1) - v), target);
    const double back = probe(v, normalized(k.vertex(i - 1) - v), target);
    const bool local_min = fwd >= -kSlack && back >= -kSlack;
    const bool local_max = fwd <= kSlack && back <= kSlack;
    return local_min || local_max;
}

bool edges_share_vertex(std::size_t i, std::size_t j, std::size_t n) {
    return i == j || (i + 1) % n == j || (j + 1) % n == i;
}

template <class F>
double golden_min(F&& f, double lo, double hi, double* arg = nullptr) {
    double a = lo;
    double b = hi;
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > kSearchTol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = f(x2);
        }
    }
    // The minimizer may sit on the boundary of the interval.
    double best_x = f1 <= f2 ? x1 : x2;
    double best = std::min(f1, f2);
    for (double x : {lo, hi}) {
        const double fx = f(x);
        if (fx < best) {
            best = fx;
            best_x = x;
        }
    }
    if (arg != nullptr) *arg = best_x;
    return best;
}

}  // namespace

MinRad minrad(const KnotPolygon& k) {
    MinRad out{std::numeric_limits<double>::infinity(), 0};
    for (std::size_t i = 0; i < k.size(); ++i) {
        const double interior = angle_between(k.edge(static_cast<long long>(i)), -k.edge(static_cast<long long>(i) - 1));
        const double half = interior / 2.0;
        const double d = half >= std::numbers::pi / 2.0 ? std::numeric_limits<double>::infinity() : 0.5 * std::tan(half);
        if (d < out.value) {
            out = {d, i};
        }
    }
    return out;
}

std::vector<DoublyCriticalPair> doubly_critical_pairs(const KnotPolygon& k) {
    const std::size_t n = k.size();
    std::vector<DoublyCriticalPair> pairs;
    const auto ll = [](std::size_t i) { return static_cast<long long>(i); };

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec3& a = k[i];
            const Vec3& b = k[j];
            if (vertex_is_extremum(k, ll(i), b) && vertex_is_extremum(k, ll(j), a)) {
                pairs.push_back({PairKind::VertexVertex, {i, 0.0}, {j, 0.0}, distance(a, b)});
            }
        }
    }

    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t e = 0; e < n; ++e) {
            if (v == e || v == (e + 1) % n) {
                continue;
            }
            const Vec3& p = k[v];
            const Vec3& a = k.vertex(ll(e));
            const Vec3 d = k.edge(ll(e));
            const double t = dot(p - a, d) / dot(d, d);
            if (!(t > 0.0 && t < 1.0)) {
                continue;
            }
            const Vec3 foot = a + d * t;
            if (vertex_is_extremum(k, ll(v), foot)) {
                pairs.push_back({PairKind::VertexEdge, {v, 0.0}, {e, t}, distance(p, foot)});
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (edges_share_vertex(i, j, n)) {
                continue;
            }
            const Vec3& p0 = k[i];
            const Vec3& q0 = k[j];
            const Vec3 d1 = k.edge(ll(i));
            const Vec3 d2 = k.edge(ll(j));
            const Vec3 r = p0 - q0;
            const double a = dot(d1, d1);
            const double b = dot(d1, d2);
            const double c = dot(d1, r);
            const double e = dot(d2, d2);
            const double f = dot(d2, r);
            const double denom = a * e - b * b;
            double s = 0.0;
            double t = 0.0;
            if (denom > 1e-14 * a * e) {
                s = (b * f - c * e) / denom;
                t = (a * f - b * c) / denom;
            } else {
                // Parallel edges: every common perpendicular has the same length; take the
                // middle of the overlap of the two parameter ranges.
                const double t0 = f / e;
                const double t1 = (f + b) / e;
                const double lo = std::max(0.0, std::min(t0, t1));
                const double hi = std::min(1.0, std::max(t0, t1));
                if (!(lo < hi)) {
                    continue;
                }
                t = 0.5 * (lo + hi);
                s = (t - t0) / (t1 - t0);
            }
            if (s > 0.0 && s < 1.0 && t > 0.0 && t < 1.0) {
                const double dist = distance(p0 + d1 * s, q0 + d2 * t);
                pairs.push_back({PairKind::EdgeEdge, {i, s}, {j, t}, dist});
            }
        }
    }

    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const auto& x, const auto& y) { return x.distance < y.distance; });
    return pairs;
}

ThicknessReport injectivity_radius(const KnotPolygon& k) {
    ThicknessReport rep;
    const MinRad mr = minrad(k);
    rep.minrad = mr.value;
    rep.minrad_vertex = mr.vertex;
    rep.arclength = static_cast<double>(k.size());
    rep.injectivity_radius = mr.value;
    auto pairs = doubly_critical_pairs(k);
    if (!pairs.empty()) {
        rep.dcsd = pairs.front().distance;
        rep.dcsd_pair = pairs.front();
        rep.injectivity_radius = std::min(rep.minrad, *rep.dcsd / 2.0);
    }
    rep.thickness = rep.injectivity_radius / rep.arclength;
    return rep;
}

double thickness(const KnotPolygon& k) {
    return injectivity_radius(k).thickness;
}

double radius_via_tc(const KnotPolygon& k) {
    const std::size_t n = k.size();
    const auto turn = turning_angles(k);
    const double threshold = std::numbers::pi + tol::angle;
    const auto ll = [](std::size_t i) { return static_cast<long long>(i); };
    double best = std::numeric_limits<double>::infinity();

    // Turning is constant on each cell (vertex or open edge) x (vertex or open edge), so TC is a
    // union of such cells; the infimum over a cell is the minimum over its closure.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (total_curvature(turn, {i, 0.0}, {j, 0.0}) > threshold) {
                best = std::min(best, distance(k[i], k[j]));
            }
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t e = 0; e < n; ++e) {
            if (total_curvature(turn, {v, 0.0}, {e, 0.5}) <= threshold) {
                continue;
            }
            const Vec3& p = k[v];
            const Vec3& a = k.vertex(ll(e));
            const Vec3 d = k.edge(ll(e));
            best = std::min(best, golden_min([&](double t) { return distance(p, a + d * t); }, 0.0, 1.0));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (total_curvature(turn, {i, 0.5}, {j, 0.5}) <= threshold) {
                continue;
            }
            const Vec3& p0 = k.vertex(ll(i));
            const Vec3 d1 = k.edge(ll(i));
            const Vec3& q0 = k.vertex(ll(j));
            const Vec3 d2 = k.edge(ll(j));
            const auto inner = [&](double s) {
                const Vec3 p = p0 + d1 * s;
                return golden_min([&](double t) { return distance(p, q0 + d2 * t); }, 0.0, 1.0);
            };
            best = std::min(best, golden_min(inner, 0.0, 1.0));
        }
    }
    return std::min(minrad(k).value, best / 2.0);
}

bool boundary_turning_check(const KnotPolygon& k) {
    const std::size_t n = k.size();
    const auto turn = turning_angles(k);
    const double bound = 2.0 * minrad(k).value - 1e-9;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double tc = total_curvature(turn, {i, 0.0}, {j, 0.0});
            if (std::abs(tc - std::numbers::pi) <= tol::angle && distance(k[i], k[j]) < bound) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace thickknot
