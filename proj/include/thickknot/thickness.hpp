#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "thickknot/polygon.hpp"

namespace thickknot {

enum class PairKind { VertexVertex, VertexEdge, EdgeEdge };

/// Two points on the knot, each a local extremum of the distance to the other.
struct DoublyCriticalPair {
    PairKind kind = PairKind::VertexVertex;
    KnotPoint a;
    KnotPoint b;
    double distance = 0.0;
};

struct ThicknessReport {
    double minrad = 0.0;
    std::size_t minrad_vertex = 0;
    std::optional<double> dcsd;
    std::optional<DoublyCriticalPair> dcsd_pair;
    double injectivity_radius = 0.0;
    double thickness = 0.0;
    double arclength = 0.0;
};

struct MinRad {
    double value = 0.0;
    std::size_t vertex = 0;
};

/// Short-range radius: min over vertices of tan(interior / 2) / 2. Straight vertices are skipped.
MinRad minrad(const KnotPolygon& k);

/// Every vertex-vertex, vertex-edge and edge-edge doubly critical pair, nearest first.
/// Pairs at the same point or on edges sharing a vertex are not reported.
std::vector<DoublyCriticalPair> doubly_critical_pairs(const KnotPolygon& k);

/// Injectivity radius min(MinRad, dcsd / 2) and thickness R / arclength.
ThicknessReport injectivity_radius(const KnotPolygon& k);

/// Shorthand for injectivity_radius(k).thickness.
double thickness(const KnotPolygon& k);

/// Independent route to R: min(MinRad, half the smallest distance between points whose
/// connecting arcs both carry more than pi of turning). Distances are minimized numerically.
double radius_via_tc(const KnotPolygon& k);

/// Checks that vertex pairs separated by exactly pi of turning are at least 2 MinRad apart.
bool boundary_turning_check(const KnotPolygon& k);

}  // namespace thickknot
