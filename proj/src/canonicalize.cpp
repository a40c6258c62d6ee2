#include "thickknot/canonicalize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "thickknot/errors.hpp"
#include "thickknot/hull2d.hpp"
#include "thickknot/thickness.hpp"
#include "thickknot/tolerances.hpp"

namespace thickknot {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Vec3 kUp{0.0, 0.0, 1.0};
constexpr double kThicknessSlack = 1e-9;
constexpr double kResidualAngle = 1e-9;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<Vec2> projection(const KnotPolygon& k) {
    std::vector<Vec2> out;
    out.reserve(k.size());
    for (const auto& p : k.vertices()) {
        out.push_back(project_xy(p));
    }
    return out;
}

Vec2 unit(const Vec2& v) {
    const double r = norm(v);
    return {v.x / r, v.y / r};
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 d = b - a;
    const double dd = dot(d, d);
    const double t = dd == 0.0 ? 0.0 : std::clamp(dot(p - a, d) / dd, 0.0, 1.0);
    return distance(p, a + t * d);
}

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double v = cross(b - a, c - a);
    return (v > 0.0) - (v < 0.0);
}

double segment_segment_distance(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
    const int o1 = orientation(a0, a1, b0);
    const int o2 = orientation(a0, a1, b1);
    const int o3 = orientation(b0, b1, a0);
    const int o4 = orientation(b0, b1, a1);
    if (o1 * o2 < 0 && o3 * o4 < 0) {
        return 0.0;
    }
    return std::min({point_segment_distance(a0, b0, b1), point_segment_distance(a1, b0, b1),
                     point_segment_distance(b0, a0, a1), point_segment_distance(b1, a0, a1)});
}

// Edges s->a and s->b overlap beyond their common point s.
bool folds_back(const Vec2& s, const Vec2& a, const Vec2& b) {
    const double eps = tol::geom;
    if (distance(s, a) <= eps || distance(s, b) <= eps) {
        return false;
    }
    return point_segment_distance(a, s, b) <= eps || point_segment_distance(b, s, a) <= eps;
}

std::size_t reversal_count(std::span<const Vec2> p) {
    const std::size_t n = p.size();
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (folds_back(p[i], p[(i + n - 1) % n], p[(i + 1) % n])) {
            ++count;
        }
    }
    return count;
}

double mu_of(std::span<const Vec2> p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            s += distance(p[i], p[j]);
        }
    }
    return s;
}

double height_span(const KnotPolygon& k) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& p : k.vertices()) {
        lo = std::min(lo, p.z);
        hi = std::max(hi, p.z);
    }
    return hi - lo;
}

class Recorder {
  public:
    explicit Recorder(const KnotPolygon& k) : cur_(k), thickness_(thickness(k)) {}

    const KnotPolygon& current() const { return cur_; }
    double current_thickness() const { return thickness_; }

    void record(StageKind stage, const Move& m, KnotPolygon next) {
        TraceEntry e;
        e.stage = stage;
        e.move = m;
        e.thickness_before = thickness_;
        e.thickness_after = thickness(next);
        e.mu = mu(next);
        e.incidence = incidence(next);
        e.min_height_count = min_height_vertices(next).size();
        thickness_ = e.thickness_after;
        cur_ = std::move(next);
        entries_.push_back(std::move(e));
    }

    void append(StageResult&& r) {
        for (auto& e : r.entries) {
            entries_.push_back(std::move(e));
        }
        cur_ = std::move(r.polygon);
        thickness_ = entries_.empty() ? thickness(cur_) : entries_.back().thickness_after;
    }

    StageResult finish() && { return {std::move(cur_), std::move(entries_)}; }
    std::vector<TraceEntry>& entries() { return entries_; }

  private:
    KnotPolygon cur_;
    double thickness_;
    std::vector<TraceEntry> entries_;
};

// --- expose ------------------------------------------------------------------------------

struct SupportLine {
    Vec2 point;
    Vec2 normal;
};

std::vector<SupportLine> support_lines(const Hull2D& h) {
    std::vector<SupportLine> lines;
    const std::size_t m = h.size();
    if (m == 2) {
        lines.push_back({h.corners[0], unit(h.corners[0] - h.corners[1])});
        lines.push_back({h.corners[1], unit(h.corners[1] - h.corners[0])});
        return lines;
    }
    if (m < 3) {
        return lines;
    }
    for (std::size_t k = 0; k < m; ++k) {
        lines.push_back({h.corners[k], h.outward_normal(k)});
    }
    for (std::size_t k = 0; k < m; ++k) {
        const Vec2 bis = h.outward_normal((k + m - 1) % m) + h.outward_normal(k);
        lines.push_back({h.corners[k], unit(bis)});
    }
    return lines;
}

struct ExposeCandidate {
    std::size_t i = 0;
    std::size_t j = 0;
    ReflectionMove move;
    KnotPolygon result;
    std::size_t reversals = 0;
    double mu = 0.0;
};

// Reflects the forward arc i -> j across the vertical plane through v_i and v_j. The plane normal
// is horizontal, so heights are untouched bit for bit.
std::optional<ExposeCandidate> vertical_reflection(const KnotPolygon& k, std::size_t i, std::size_t j,
                                                   const Vec2& line_normal) {
    const Vec2 pi = project_xy(k[i]);
    const Vec2 pj = project_xy(k[j]);
    Vec2 n2 = line_normal;
    const Vec2 d = pj - pi;
    if (norm(d) > 0.0) {
        n2 = unit(Vec2{d.y, -d.x});
        if (dot(n2, line_normal) < 0.0) {
            n2 = -1.0 * n2;
        }
    }
    if (distance(k[i], k[j]) <= tol::axis) {
        return std::nullopt;
    }
    const Vec3 normal{n2.x, n2.y, 0.0};
    std::vector<Point3> pts(k.vertices().begin(), k.vertices().end());
    for (std::size_t idx : arc_interior(k.size(), i, j, ArcChoice::Forward)) {
        const double s = dot(pts[idx] - k[i], normal);
        pts[idx].x -= 2.0 * s * normal.x;
        pts[idx].y -= 2.0 * s * normal.y;
    }
    ExposeCandidate c;
    c.i = i;
    c.j = j;
    c.move = {i, j, theta_for_normal(k, i, j, normal), ArcChoice::Forward};
    c.result = KnotPolygon::from_trusted(std::move(pts));
    const auto proj = projection(c.result);
    c.reversals = reversal_count(proj);
    c.mu = mu_of(proj);
    return c;
}

std::vector<ExposeCandidate> expose_candidates(const KnotPolygon& k) {
    const auto p = projection(k);
    const Hull2D h = convex_hull_2d(p);
    std::vector<ExposeCandidate> out;
    for (const auto& line : support_lines(h)) {
        std::vector<std::size_t> on;
        for (std::size_t idx = 0; idx < p.size(); ++idx) {
            if (std::abs(dot(p[idx] - line.point, line.normal)) <= tol::geom) {
                on.push_back(idx);
            }
        }
        for (std::size_t a = 0; a < on.size(); ++a) {
            for (std::size_t b = a + 1; b < on.size(); ++b) {
                const std::size_t i = on[a];
                const std::size_t j = on[b];
                if (arc_interior(k.size(), i, j, ArcChoice::Forward).empty()) {
                    continue;
                }
                if (auto c = vertical_reflection(k, i, j, line.normal)) {
                    out.push_back(std::move(*c));
                }
            }
        }
    }
    return out;
}

// --- pushout -------------------------------------------------------------------------------

struct StripPoint {
    std::size_t index = 0;
    double s = 0.0;
    double z = 0.0;
};

// Vertices of `run` lying on the lower (sign = +1) or upper (sign = -1) hull boundary of the
// (s, z) point set, plus the chain of boundary segments.
struct BoundaryChain {
    std::vector<StripPoint> chain;
    std::vector<bool> on_boundary;
};

BoundaryChain strip_boundary(const std::vector<StripPoint>& run, double sign) {
    std::vector<StripPoint> pts = run;
    for (auto& q : pts) {
        q.z *= sign;
    }
    std::sort(pts.begin(), pts.end(), [](const StripPoint& a, const StripPoint& b) {
        if (a.s != b.s) return a.s < b.s;
        return a.z < b.z;
    });
    std::vector<StripPoint> chain;
    for (const auto& q : pts) {
        while (chain.size() >= 2) {
            const auto& a = chain[chain.size() - 2];
            const auto& b = chain.back();
            const double c = (b.s - a.s) * (q.z - a.z) - (b.z - a.z) * (q.s - a.s);
            if (c <= 0.0) {
                chain.pop_back();
            } else {
                break;
            }
        }
        chain.push_back(q);
    }
    BoundaryChain out;
    out.on_boundary.assign(run.size(), false);
    for (std::size_t r = 0; r < run.size(); ++r) {
        const Vec2 q{run[r].s, run[r].z * sign};
        for (std::size_t c = 0; c + 1 < chain.size(); ++c) {
            if (point_segment_distance(q, {chain[c].s, chain[c].z}, {chain[c + 1].s, chain[c + 1].z}) <= tol::geom) {
                out.on_boundary[r] = true;
                break;
            }
        }
        if (chain.size() == 1 && distance(q, Vec2{chain[0].s, chain[0].z}) <= tol::geom) {
            out.on_boundary[r] = true;
        }
    }
    for (auto& c : chain) {
        c.z *= sign;
    }
    out.chain = std::move(chain);
    return out;
}

bool on_common_segment(const BoundaryChain& bc, const StripPoint& a, const StripPoint& b) {
    for (std::size_t c = 0; c + 1 < bc.chain.size(); ++c) {
        const Vec2 p0{bc.chain[c].s, bc.chain[c].z};
        const Vec2 p1{bc.chain[c + 1].s, bc.chain[c + 1].z};
        if (point_segment_distance({a.s, a.z}, p0, p1) <= tol::geom &&
            point_segment_distance({b.s, b.z}, p0, p1) <= tol::geom) {
            return true;
        }
    }
    return false;
}

// Tilted reflection of the forward arc p -> q about the line through v_p, v_q, which lies in the
// vertical plane of a hull edge with outward normal `outward`. `lower` selects the lower hull side.
std::optional<ReflectionMove> tilted_pushout(const KnotPolygon& k, std::size_t p, std::size_t q, const Vec2& outward,
                                             bool lower, int incidence_before, double thickness_before) {
    if (distance(k[p], k[q]) <= tol::axis) {
        return std::nullopt;
    }
    const Vec3 u = normalized(k[q] - k[p]);
    Vec3 in{-outward.x, -outward.y, 0.0};
    in = normalized(in - u * dot(in, u));
    Vec3 d = cross(u, in);
    if ((lower && d.z > 0.0) || (!lower && d.z < 0.0)) {
        d = -d;
    }
    double theta_min = kPi;
    for (std::size_t w = 0; w < k.size(); ++w) {
        const Vec3 r = k[w] - k[p];
        const Vec3 perp = r - u * dot(r, u);
        if (norm(perp) <= tol::geom) {
            continue;
        }
        theta_min = std::min(theta_min, std::atan2(dot(perp, in), dot(perp, d)));
    }
    if (theta_min <= 1e-12) {
        return std::nullopt;
    }
    const auto before_min = min_height_vertices(k);
    double eps = theta_min / 2.0;
    for (int attempt = 0; attempt < 40; ++attempt, eps *= 0.5) {
        const Vec3 mirror = d * std::cos(eps) + in * std::sin(eps);
        const Vec3 normal = normalized(cross(u, mirror));
        const ReflectionMove m{p, q, theta_for_normal(k, p, q, normal), ArcChoice::Forward};
        const KnotPolygon next = apply_reflection(k, m);
        if (incidence(next) >= incidence_before) {
            continue;
        }
        if (min_height_vertices(next) != before_min) {
            continue;
        }
        if (thickness(next) < thickness_before - kThicknessSlack) {
            continue;
        }
        return m;
    }
    return std::nullopt;
}

std::optional<Move> full_dimensional_pushout(const KnotPolygon& k, const Hull2D& h) {
    const auto p = projection(k);
    const std::size_t n = k.size();
    const int inc = incidence(k);
    const double th = thickness(k);
    for (bool lower : {true, false}) {
        for (std::size_t e = 0; e < h.size(); ++e) {
            const Vec2 c0 = h.corners[e];
            const Vec2 c1 = h.corners[(e + 1) % h.size()];
            const Vec2 dir = unit(c1 - c0);
            std::vector<bool> on(n);
            std::size_t count = 0;
            for (std::size_t i = 0; i < n; ++i) {
                on[i] = point_segment_distance(p[i], c0, c1) <= tol::geom;
                count += on[i];
            }
            if (count < 3 || count == n) {
                continue;
            }
            // Start of the run: an on-segment vertex whose predecessor is off the segment.
            for (std::size_t start = 0; start < n; ++start) {
                if (!on[start] || on[(start + n - 1) % n]) {
                    continue;
                }
                std::vector<StripPoint> run;
                for (std::size_t i = start; on[i]; i = (i + 1) % n) {
                    run.push_back({i, dot(p[i] - c0, dir), k[i].z});
                    if (run.size() == n) break;
                }
                bool injective = true;
                const double sgn = run.back().s >= run.front().s ? 1.0 : -1.0;
                for (std::size_t r = 1; r < run.size(); ++r) {
                    if (sgn * (run[r].s - run[r - 1].s) <= tol::geom) {
                        injective = false;
                    }
                }
                if (injective) {
                    continue;
                }
                const BoundaryChain bc = strip_boundary(run, lower ? 1.0 : -1.0);
                std::size_t last = run.size();
                for (std::size_t r = 0; r < run.size(); ++r) {
                    if (!bc.on_boundary[r]) {
                        continue;
                    }
                    if (last != run.size() && r - last >= 2 && on_common_segment(bc, run[last], run[r])) {
                        const Vec2 outward = h.outward_normal(e);
                        if (auto m = tilted_pushout(k, run[last].index, run[r].index, outward, lower, inc, th)) {
                            return Move{*m};
                        }
                    }
                    last = r;
                }
            }
        }
    }
    return std::nullopt;
}

// --- regularize ------------------------------------------------------------------------------

double signed_interior(const KnotPolygon& k, std::size_t i, double orient) {
    const Vec3 a = k.vertex(static_cast<long long>(i)) - k.vertex(static_cast<long long>(i) - 1);
    const Vec3 b = k.vertex(static_cast<long long>(i) + 1) - k.vertex(static_cast<long long>(i));
    const double turn = std::atan2(orient * cross(a, b).z, dot(a, b));
    return kPi - turn;
}

double signed_area_xy(const KnotPolygon& k) {
    double a = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        const auto& p = k[i];
        const auto& q = k.vertex(static_cast<long long>(i) + 1);
        a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * a;
}

// Unit normal (z >= 0) of the plane through all vertices, if they are coplanar within tol::flat.
std::optional<Vec3> plane_normal(const KnotPolygon& k) {
    Vec3 c{0.0, 0.0, 0.0};
    for (const auto& p : k.vertices()) c = c + p;
    c = c / static_cast<double>(k.size());
    // Newell's method.
    Vec3 nrm{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < k.size(); ++i) {
        const Vec3 a = k[i] - c;
        const Vec3 b = k.vertex(static_cast<long long>(i) + 1) - c;
        nrm = nrm + cross(a, b);
    }
    if (norm(nrm) <= tol::geom) return std::nullopt;
    nrm = normalized(nrm);
    if (nrm.z < 0.0) nrm = -nrm;
    for (const auto& p : k.vertices()) {
        if (std::abs(dot(p - c, nrm)) > tol::flat) return std::nullopt;
    }
    return nrm;
}

int side_of(double value, double target) { return value > target ? 1 : (value < target ? -1 : 0); }

}  // namespace

const char* stage_name(StageKind s) {
    switch (s) {
        case StageKind::ExposeProjection: return "expose";
        case StageKind::Pushout: return "pushout";
        case StageKind::FlattenRotate: return "flatten-rotate";
        case StageKind::FlattenRigid: return "flatten-rigid";
        case StageKind::Regularize: return "regularize";
        case StageKind::RigidMotion: return "rigid";
    }
    return "unknown";
}

KnotPolygon apply_move(const KnotPolygon& k, const Move& m) {
    return std::visit(Overloaded{
                          [&](const ReflectionMove& r) { return apply_reflection(k, r); },
                          [&](const ArcRotation& r) { return apply_arc_rotation(k, r.i, r.j, r.phi); },
                          [&](const RigidRotation& r) { return rotate_polygon(k, r.origin, r.axis, r.angle); },
                          [&](const HextupleMove& h) { return apply_hextuple(k, h.quad, h.theta); },
                          [&](const RigidTransform& t) { return transform_polygon(k, t); },
                      },
                      m);
}

std::string describe(const Move& m) {
    char buf[512];
    std::visit(Overloaded{
                   [&](const ReflectionMove& r) {
                       std::snprintf(buf, sizeof buf, "reflect i=%zu j=%zu theta=%.17g arc=%s", r.i, r.j, r.theta,
                                     r.arc == ArcChoice::Forward ? "forward" : "complement");
                   },
                   [&](const ArcRotation& r) {
                       std::snprintf(buf, sizeof buf, "arc-rotate i=%zu j=%zu phi=%.17g", r.i, r.j, r.phi);
                   },
                   [&](const RigidRotation& r) {
                       std::snprintf(buf, sizeof buf, "rotate origin=%.17g,%.17g,%.17g axis=%.17g,%.17g,%.17g angle=%.17g",
                                     r.origin.x, r.origin.y, r.origin.z, r.axis.x, r.axis.y, r.axis.z, r.angle);
                   },
                   [&](const HextupleMove& h) {
                       std::snprintf(buf, sizeof buf, "hextuple v1=%zu w1=%zu v2=%zu w2=%zu theta=%.17g", h.quad.v1,
                                     h.quad.w1, h.quad.v2, h.quad.w2, h.theta);
                   },
                   [&](const RigidTransform& t) {
                       const auto& r = t.rotation;
                       std::snprintf(buf, sizeof buf,
                                     "rigid rotation=%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g "
                                     "translation=%.17g,%.17g,%.17g",
                                     r[0][0], r[0][1], r[0][2], r[1][0], r[1][1], r[1][2], r[2][0], r[2][1], r[2][2],
                                     t.translation.x, t.translation.y, t.translation.z);
                   },
               },
               m);
    return buf;
}

Move perturb(const Move& m, double delta) {
    return std::visit(Overloaded{
                          [&](ReflectionMove r) -> Move {
                              r.theta += delta;
                              return r;
                          },
                          [&](ArcRotation r) -> Move {
                              r.phi += delta;
                              return r;
                          },
                          [&](RigidRotation r) -> Move {
                              r.angle += delta;
                              return r;
                          },
                          [&](HextupleMove h) -> Move {
                              h.theta += delta;
                              return h;
                          },
                          [&](const RigidTransform& t) -> Move { return t; },
                      },
                      m);
}

double mu(const KnotPolygon& k) { return mu_of(projection(k)); }

int incidence(const KnotPolygon& k) {
    const auto p = projection(k);
    const std::size_t n = p.size();
    int count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec2& a0 = p[i];
            const Vec2& a1 = p[(i + 1) % n];
            const Vec2& b0 = p[j];
            const Vec2& b1 = p[(j + 1) % n];
            if ((i + 1) % n == j) {
                count += folds_back(a1, a0, b1);
            } else if ((j + 1) % n == i) {
                count += folds_back(a0, a1, b0);
            } else {
                count += segment_segment_distance(a0, a1, b0, b1) <= tol::geom;
            }
        }
    }
    return count;
}

std::vector<std::size_t> min_height_vertices(const KnotPolygon& k, double tol) {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& p : k.vertices()) {
        lo = std::min(lo, p.z);
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i].z <= lo + tol) {
            out.push_back(i);
        }
    }
    return out;
}

bool is_exposed(const KnotPolygon& k) {
    const auto p = projection(k);
    const Hull2D h = convex_hull_2d(p);
    const std::size_t n = p.size();
    if (h.size() <= 1) {
        return true;
    }
    const std::size_t segments = h.size() == 2 ? 1 : h.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = p[i];
        const Vec2& b = p[(i + 1) % n];
        bool on = false;
        for (std::size_t s = 0; s < segments && !on; ++s) {
            const Vec2& c0 = h.corners[s];
            const Vec2& c1 = h.corners[(s + 1) % h.size()];
            on = point_segment_distance(a, c0, c1) <= tol::geom && point_segment_distance(b, c0, c1) <= tol::geom;
        }
        if (!on) {
            return false;
        }
    }
    for (const auto& c : h.corners) {
        std::size_t starts = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool here = distance(p[i], c) <= tol::geom;
            const bool before = distance(p[(i + n - 1) % n], c) <= tol::geom;
            starts += here && !before;
        }
        if (starts > 1) {
            return false;
        }
    }
    return true;
}

bool has_convex_projection(const KnotPolygon& k) {
    const Hull2D h = convex_hull_2d(projection(k));
    return !h.subdimensional && is_exposed(k) && incidence(k) == 0;
}

std::size_t projected_reversals(const KnotPolygon& k) { return reversal_count(projection(k)); }

std::optional<ReflectionMove> find_edge_pair_move(const KnotPolygon& k) {
    if (is_exposed(k)) {
        return std::nullopt;
    }
    auto cands = expose_candidates(k);
    const auto p = projection(k);
    const std::size_t rev = reversal_count(p);
    const double base = mu_of(p);
    const ExposeCandidate* best = nullptr;
    auto better = [&](const ExposeCandidate& c) {
        if (best == nullptr) return true;
        const bool c_reduces = c.reversals < rev;
        const bool b_reduces = best->reversals < rev;
        if (c_reduces != b_reduces) return c_reduces;
        if (c.mu != best->mu) return c.mu > best->mu;
        return std::pair{c.i, c.j} < std::pair{best->i, best->j};
    };
    for (const auto& c : cands) {
        if (c.mu - base <= tol::progress) {
            continue;
        }
        if (better(c)) {
            best = &c;
        }
    }
    if (best == nullptr) {
        return std::nullopt;
    }
    return best->move;
}

StageResult expose_projection(const KnotPolygon& k, std::size_t cap) {
    const std::size_t n = k.size();
    if (cap == 0) {
        cap = 10 * n * n;
    }
    Recorder rec(k);
    for (std::size_t iter = 0; iter < cap; ++iter) {
        const KnotPolygon& cur = rec.current();
        if (is_exposed(cur)) {
            return std::move(rec).finish();
        }
        auto cands = expose_candidates(cur);
        const auto p = projection(cur);
        const std::size_t rev = reversal_count(p);
        const double base = mu_of(p);
        std::vector<const ExposeCandidate*> order;
        for (const auto& c : cands) {
            if (c.mu - base > tol::progress) {
                order.push_back(&c);
            }
        }
        std::sort(order.begin(), order.end(), [&](const ExposeCandidate* a, const ExposeCandidate* b) {
            const bool ar = a->reversals < rev;
            const bool br = b->reversals < rev;
            if (ar != br) return ar;
            if (a->mu != b->mu) return a->mu > b->mu;
            return std::pair{a->i, a->j} < std::pair{b->i, b->j};
        });
        bool moved = false;
        for (const auto* c : order) {
            if (thickness(c->result) < rec.current_thickness() - kThicknessSlack) {
                continue;
            }
            rec.record(StageKind::ExposeProjection, c->move, c->result);
            moved = true;
            break;
        }
        if (!moved) {
            throw PipelineStall("expose", "projection not exposed and no reflection makes progress");
        }
    }
    if (is_exposed(rec.current())) {
        return std::move(rec).finish();
    }
    throw PipelineStall("expose", "iteration cap reached before the projection became exposed");
}

Move pushout_move(const KnotPolygon& k) {
    const auto p = projection(k);
    const Hull2D h = convex_hull_2d(p);
    if (h.subdimensional) {
        if (h.size() < 2) {
            throw PipelineStall("pushout", "projection collapses to a point");
        }
        const Vec2 d = unit(h.corners[1] - h.corners[0]);
        return RigidRotation{k[0], Vec3{d.x, d.y, 0.0}, kPi / 2.0};
    }
    if (has_convex_projection(k)) {
        throw NotApplicable("projection is already convex");
    }
    if (auto m = full_dimensional_pushout(k, h)) {
        return *m;
    }
    throw PipelineStall("pushout", "no subarc reduces the incidence");
}

namespace {

// Rigid rotation after which two vertices share the minimum height. The new "up" direction u
// must be perpendicular to the chord between the two and have both extremal along -u. Each
// chord's circle of such directions is sampled, together with its point nearest the current up.
// Among these take the smallest tilt that does not shrink the projection, else the smallest tilt.
std::pair<Move, KnotPolygon> two_min_rotation(const KnotPolygon& cur) {
    const std::size_t n = cur.size();
    constexpr int kCircle = 360;
    const double base = mu_of(projection(cur));
    const double inf = std::numeric_limits<double>::infinity();
    double keeper_tilt = inf, fallback_tilt = inf;
    std::optional<std::pair<Move, KnotPolygon>> keeper, fallback;
    auto consider = [&](std::size_t v, std::size_t w, Vec3 u) {
        const double len = norm(u);
        if (!(len > 0.0)) return;
        u = u / len;
        const double hv = dot(cur[v], u);
        if (std::abs(dot(cur[w], u) - hv) > 1e-12) return;
        for (std::size_t k = 0; k < n; ++k) {
            if (dot(cur[k], u) < hv - 1e-12) return;
        }
        const double tilt = std::acos(std::clamp(u.z, -1.0, 1.0));
        if (!(tilt > 0.0) || tilt >= std::max(keeper_tilt, fallback_tilt)) return;
        const Vec3 axis = cross(u, kUp);
        if (!(norm(axis) > 0.0)) return;
        const Move m = RigidRotation{cur[v], normalized(axis), tilt};
        KnotPolygon next = apply_move(cur, m);
        if (min_height_vertices(next).size() < 2) return;
        if (tilt < keeper_tilt && mu_of(projection(next)) >= base) {
            keeper_tilt = tilt;
            keeper.emplace(m, next);
        }
        if (tilt < fallback_tilt) {
            fallback_tilt = tilt;
            fallback.emplace(m, std::move(next));
        }
    };
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t w = v + 1; w < n; ++w) {
            const Vec3 c = cur[w] - cur[v];
            if (norm(c) <= tol::axis) continue;
            const Vec3 d = normalized(c);
            consider(v, w, kUp - d * dot(kUp, d));
            Vec3 e1 = cross(d, kUp);
            if (norm(e1) <= 1e-12) e1 = cross(d, Vec3{1.0, 0.0, 0.0});
            e1 = normalized(e1);
            const Vec3 e2 = cross(d, e1);
            for (int s = 0; s < kCircle; ++s) {
                const double phi = 2.0 * kPi * s / kCircle;
                consider(v, w, std::cos(phi) * e1 + std::sin(phi) * e2);
            }
        }
    }
    if (keeper) return std::move(*keeper);
    if (fallback) return std::move(*fallback);
    throw PipelineStall("flatten", "no rigid rotation adds a minimum-height vertex");
}

}  // namespace

StageResult flatten(const KnotPolygon& k) {
    const std::size_t n = k.size();
    const std::size_t cap = 10 * n * n;
    Recorder rec(k);
    auto make_convex = [&] {
        for (std::size_t phase = 0; phase < cap; ++phase) {
            rec.append(expose_projection(rec.current()));
            if (has_convex_projection(rec.current())) {
                return;
            }
            const Move m = pushout_move(rec.current());
            rec.record(StageKind::Pushout, m, apply_move(rec.current(), m));
        }
        throw PipelineStall("pushout", "iteration cap reached before the projection became convex");
    };
    for (std::size_t round = 0; round <= n + 1; ++round) {
        make_convex();
        const KnotPolygon& cur = rec.current();
        if (height_span(cur) <= tol::flat) {
            return std::move(rec).finish();
        }
        // Already planar in a tilted plane: one rigid rotation lays it down.
        if (const auto nrm = plane_normal(cur)) {
            Vec3 axis = cross(*nrm, kUp);
            const double s = norm(axis);
            if (s > 0.0) {
                const Move m = RigidRotation{cur[0], axis / s, std::atan2(s, dot(*nrm, kUp))};
                KnotPolygon next = apply_move(cur, m);
                if (height_span(next) <= tol::flat) {
                    rec.record(StageKind::FlattenRigid, m, std::move(next));
                    continue;
                }
            }
        }
        const auto mins = min_height_vertices(cur);
        const double zmin = cur[mins.front()].z;
        if (mins.size() == 1) {
            auto [m, next] = two_min_rotation(cur);
            rec.record(StageKind::FlattenRigid, m, std::move(next));
            continue;
        }
        // Two consecutive minimum-height vertices with a gap between them.
        std::size_t a = n;
        std::size_t b = n;
        for (std::size_t t = 0; t < mins.size(); ++t) {
            const std::size_t s = mins[t];
            const std::size_t e = mins[(t + 1) % mins.size()];
            const std::size_t gap = (e + n - s) % n;
            if (gap >= 2 || (mins.size() == 1 && gap == 0)) {
                a = s;
                b = e;
                break;
            }
        }
        if (a == n) {
            throw PipelineStall("flatten", "no gap between minimum-height vertices");
        }
        const Vec3 u = normalized(cur[b] - cur[a]);
        const auto arc = arc_interior(n, a, b, ArcChoice::Forward);
        Vec3 o = cross(kUp, u);
        o = normalized(o - u * dot(o, u));
        double side = 0.0;
        for (std::size_t idx : arc) side += dot(cur[idx] - cur[a], o);
        if (side < 0.0) o = -o;
        Vec3 up = cross(o, u);
        if (up.z < 0.0) up = -up;
        double theta_j = kPi;
        for (std::size_t idx : arc) {
            const Vec3 r = cur[idx] - cur[a];
            theta_j = std::min(theta_j, std::atan2(dot(r, up), dot(r, o)));
        }
        // The rotation stays thickness-safe only while moved vertices sit in [theta_j, pi/2]
        // and fixed ones on the far side of the vertical plane.
        if (!(theta_j > 0.0) || theta_j > kPi / 2.0 + 1e-9) {
            throw PipelineStall("flatten", "arc rotation angle outside the safety window");
        }
        for (std::size_t idx = 0; idx < n; ++idx) {
            if (idx == a || idx == b || std::find(arc.begin(), arc.end(), idx) != arc.end()) continue;
            if (dot(cur[idx] - cur[a], o) > 1e-9) {
                throw PipelineStall("flatten", "complementary arc crosses the separating plane");
            }
        }
        const double handed = dot(cross(u, up), o);
        const Move m = ArcRotation{a, b, handed >= 0.0 ? theta_j : -theta_j};
        KnotPolygon next = apply_move(cur, m);
        if (min_height_vertices(next).size() <= mins.size()) {
            throw PipelineStall("flatten", "arc rotation did not add a minimum-height vertex");
        }
        for (const auto& pt : next.vertices()) {
            if (pt.z < zmin - 1e-9) {
                throw PipelineStall("flatten", "arc rotation pushed a vertex below the minimum height");
            }
        }
        rec.record(StageKind::FlattenRotate, m, std::move(next));
    }
    throw PipelineStall("flatten", "too many rounds");
}

VertexQuad choose_four_vertices(const KnotPolygon& k) {
    const std::size_t n = k.size();
    std::vector<AngleClass> cls(n);
    bool regular = true;
    for (std::size_t i = 0; i < n; ++i) {
        cls[i] = vertex_angles(k, static_cast<long long>(i)).kind;
        regular = regular && cls[i] == AngleClass::Regular;
    }
    if (regular) {
        throw AlreadyRegular();
    }
    for (std::size_t v1 = 0; v1 < n; ++v1) {
        if (cls[v1] != AngleClass::Small) continue;
        std::size_t w1 = (v1 + 1) % n;
        while (w1 != v1 && cls[w1] == AngleClass::Regular) w1 = (w1 + 1) % n;
        if (cls[w1] != AngleClass::Large) continue;
        std::size_t w2 = (v1 + n - 1) % n;
        while (w2 != w1 && cls[w2] != AngleClass::Large) w2 = (w2 + n - 1) % n;
        if (w2 == w1) continue;
        std::size_t v2 = (w1 + 1) % n;
        while (v2 != w2 && cls[v2] != AngleClass::Small) v2 = (v2 + 1) % n;
        if (v2 == w2) continue;
        return {v1, w1, v2, w2};
    }
    throw PipelineStall("regularize", "no alternating small/large quadruple");
}

StageResult regularize(const KnotPolygon& k) {
    const std::size_t n = k.size();
    const double reg = regular_interior_angle(n);
    Recorder rec(k);
    constexpr int kGrid = 64;
    for (std::size_t step = 0; step < 2 * n + 2; ++step) {
        const KnotPolygon cur = rec.current();
        VertexQuad q;
        try {
            q = choose_four_vertices(cur);
        } catch (const AlreadyRegular&) {
            return std::move(rec).finish();
        } catch (const PipelineStall&) {
            // Rounding can leave a lone vertex a hair outside the angle tolerance, with its
            // counterweight spread over vertices that classify as regular.
            double worst = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                worst = std::max(worst, std::abs(vertex_angles(cur, static_cast<long long>(i)).interior - reg));
            }
            if (worst <= kResidualAngle) {
                return std::move(rec).finish();
            }
            throw;
        }
        const double orient = signed_area_xy(cur) >= 0.0 ? 1.0 : -1.0;
        const std::array<std::size_t, 4> tracked{q.v1, q.w1, q.v2, q.w2};
        std::array<int, 4> side0{};
        for (std::size_t t = 0; t < 4; ++t) side0[t] = side_of(signed_interior(cur, tracked[t], orient), reg);
        auto at = [&](double th) { return apply_hextuple(cur, q, th); };

        // The family stays usable while the quadrilateral stays convex with the polygon's
        // orientation (its turning at v1 and v2 is what the diagonal function multiplies) and the
        // polygon stays convex. theta0 is the first parameter where that fails.
        auto valid = [&](double th) {
            KnotPolygon r;
            try {
                r = at(th);
            } catch (const KnotError&) {
                return false;
            }
            const double o_r = signed_area_xy(r) >= 0.0 ? 1.0 : -1.0;
            const std::array<Point3, 4> quad{r[q.v1], r[q.w1], r[q.v2], r[q.w2]};
            for (std::size_t t = 0; t < 4; ++t) {
                const Vec3 in = quad[t] - quad[(t + 3) % 4];
                const Vec3 out = quad[(t + 1) % 4] - quad[t];
                if (!(o_r * cross(in, out).z > 0.0)) return false;
            }
            for (std::size_t i = 0; i < n; ++i) {
                const double a_i = signed_interior(r, i, o_r);
                if (!(a_i > 0.0 && a_i < kPi)) return false;
            }
            return true;
        };
        double lo = 0.0;
        double hi = -1.0;
        for (int g = 1; g <= kGrid; ++g) {
            const double th = kPi / 2.0 * g / kGrid;
            if (!valid(th)) {
                hi = th;
                break;
            }
            lo = th;
        }
        const bool degenerates = hi > 0.0;
        if (!degenerates) {
            hi = kPi / 2.0;
        }
        while (degenerates) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi || hi - lo <= 1e-12) break;
            (valid(mid) ? lo : hi) = mid;
        }
        const double theta0 = degenerates ? lo : hi;

        // Earliest theta in (0, theta0] where a tracked angle reaches regular.
        auto crossed = [&](const KnotPolygon& r, std::size_t t) {
            return side_of(signed_interior(r, tracked[t], orient), reg) != side0[t];
        };
        double a = 0.0;
        double best = -1.0;
        for (int g = 1; g <= kGrid && best < 0.0; ++g) {
            const double b = theta0 * g / kGrid;
            const KnotPolygon rb = at(b);
            for (std::size_t t = 0; t < 4; ++t) {
                if (!crossed(rb, t)) continue;
                double l = a;
                double h = b;
                while (true) {
                    const double mid = 0.5 * (l + h);
                    if (mid <= l || mid >= h) break;
                    (crossed(at(mid), t) ? h : l) = mid;
                }
                const double rl = std::abs(signed_interior(at(l), tracked[t], orient) - reg);
                const double rh = std::abs(signed_interior(at(h), tracked[t], orient) - reg);
                const double th = (rh <= tol::angle || rh <= rl) ? h : l;
                if (best < 0.0 || th < best) best = th;
            }
            a = b;
        }
        if (best <= 0.0) {
            if (!degenerates) {
                throw NoSignChange("quadrilateral stays convex on (0, pi/2] and no angle turns regular");
            }
            throw PipelineStall("regularize", "no tracked angle reaches regular before the diagonal degenerates");
        }
        const HextupleMove m{q, best};
        KnotPolygon next = at(best);
        for (std::size_t i = 0; i < n; ++i) {
            const double a_i = signed_interior(next, i, orient);
            if (!(a_i > 0.0 && a_i < kPi)) {
                throw PipelineStall("regularize", "hextuple move broke convexity");
            }
        }
        std::size_t before = 0;
        std::size_t after = 0;
        for (std::size_t i = 0; i < n; ++i) {
            before += vertex_angles(cur, static_cast<long long>(i)).kind == AngleClass::Regular;
            after += vertex_angles(next, static_cast<long long>(i)).kind == AngleClass::Regular;
        }
        if (after <= before) {
            throw PipelineStall("regularize", "hextuple move did not add a regular vertex");
        }
        rec.record(StageKind::Regularize, m, std::move(next));
    }
    throw PipelineStall("regularize", "too many hextuple moves");
}

CanonicalizationTrace canonicalize(const KnotPolygon& k) {
    CanonicalizationTrace trace;
    trace.initial = k;
    Recorder rec(k);
    rec.append(flatten(k));
    rec.append(regularize(rec.current()));
    const KnotPolygon target = regular_polygon(k.size());
    const Alignment al = align_points(rec.current().vertices(), target.vertices());
    rec.record(StageKind::RigidMotion, al.transform, transform_polygon(rec.current(), al.transform));
    auto result = std::move(rec).finish();
    trace.entries = std::move(result.entries);
    trace.final_polygon = std::move(result.polygon);
    trace.final_rms = aligned_rms(trace.final_polygon, target);
    return trace;
}

}  // namespace thickknot
