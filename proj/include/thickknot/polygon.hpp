#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "thickknot/geometry.hpp"

namespace thickknot {

/// Closed equilateral polygon in 3-space. Vertex indices are cyclic.
class KnotPolygon {
  public:
    KnotPolygon() = default;

    /// Wraps coordinates without validation; callers guarantee unit edges.
    static KnotPolygon from_trusted(std::vector<Point3> vertices) {
        KnotPolygon k;
        k.vertices_ = std::move(vertices);
        return k;
    }

    std::size_t size() const { return vertices_.size(); }

    /// Cyclic vertex access; any integer index is reduced mod n.
    const Point3& vertex(long long i) const { return vertices_[wrap(i)]; }
    const Point3& operator[](std::size_t i) const { return vertices_[i]; }
    std::span<const Point3> vertices() const { return vertices_; }

    std::size_t wrap(long long i) const {
        const auto n = static_cast<long long>(vertices_.size());
        return static_cast<std::size_t>(((i % n) + n) % n);
    }

    /// Edge vector v_{i+1} - v_i.
    Vec3 edge(long long i) const { return vertex(i + 1) - vertex(i); }

    friend bool operator==(const KnotPolygon&, const KnotPolygon&) = default;

  private:
    std::vector<Point3> vertices_;
};

/// A point on the knot: edge index plus parameter t in [0,1); t = 0 is the vertex.
struct KnotPoint {
    std::size_t edge = 0;
    double t = 0.0;

    bool is_vertex() const { return t == 0.0; }
};

Point3 position(const KnotPolygon& k, const KnotPoint& p);

struct ValidatedPolygon {
    KnotPolygon polygon;
    bool embedded = true;
};

/// Checks vertex count and unit edges; embeddedness is reported, not required.
ValidatedPolygon validate_polygon(std::span<const Point3> vertices);

/// True when non-adjacent edges are disjoint and adjacent edges meet only at their common vertex.
bool is_embedded(const KnotPolygon& k);

/// Largest | |e_i| - 1 | over all edges.
double max_edge_deviation(const KnotPolygon& k);

/// Planar regular n-gon in the x-y plane, unit edges, centroid at the origin.
KnotPolygon regular_polygon(std::size_t n);

double regular_interior_angle(std::size_t n);

enum class AngleClass { Small, Regular, Large };

AngleClass classify_angle(double interior, std::size_t n);

struct VertexAngles {
    double interior = 0.0;
    double turning = 0.0;
    AngleClass kind = AngleClass::Regular;
};

VertexAngles vertex_angles(const KnotPolygon& k, long long i);

/// Sum of turning angles over the shorter (in curvature) of the two arcs joining a and b,
/// endpoints included when they are vertices. Zero when a == b.
double total_curvature(const KnotPolygon& k, const KnotPoint& a, const KnotPoint& b);

/// Same, from precomputed turning angles; points must already be normalized (t in [0,1)).
double total_curvature(std::span<const double> turning, const KnotPoint& a, const KnotPoint& b);

/// Turning angles of all vertices.
std::vector<double> turning_angles(const KnotPolygon& k);

}  // namespace thickknot
