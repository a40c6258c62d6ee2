#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "thickknot/alignment.hpp"
#include "thickknot/moves.hpp"
#include "thickknot/polygon.hpp"

namespace thickknot {

enum class StageKind { ExposeProjection, Pushout, FlattenRotate, FlattenRigid, Regularize, RigidMotion };

const char* stage_name(StageKind s);

/// Rigid rotation of the whole knot about the line through `origin` along unit `axis`.
struct RigidRotation {
    Point3 origin;
    Vec3 axis;
    double angle = 0.0;
};

/// Rotation of the forward arc i -> j by phi about the v_i v_j axis (a pair of reflections).
struct ArcRotation {
    std::size_t i = 0;
    std::size_t j = 0;
    double phi = 0.0;
};

struct HextupleMove {
    VertexQuad quad;
    double theta = 0.0;
};

using Move = std::variant<ReflectionMove, ArcRotation, RigidRotation, HextupleMove, RigidTransform>;

KnotPolygon apply_move(const KnotPolygon& k, const Move& m);
std::string describe(const Move& m);

/// Same move with its continuous parameter shifted by `delta` (rigid transforms are unchanged).
Move perturb(const Move& m, double delta);

struct TraceEntry {
    StageKind stage = StageKind::RigidMotion;
    Move move;
    double thickness_before = 0.0;
    double thickness_after = 0.0;
    double mu = 0.0;
    int incidence = 0;
    std::size_t min_height_count = 0;
};

struct CanonicalizationTrace {
    KnotPolygon initial;
    std::vector<TraceEntry> entries;
    KnotPolygon final_polygon;
    /// RMS distance of the final polygon to regular_polygon(n) after rigid alignment.
    double final_rms = 0.0;
};

/// Sum over vertex pairs of the distance between their x-y projections.
double mu(const KnotPolygon& k);

/// Number of edge pairs whose x-y projections meet beyond the shared vertex (adjacent edges)
/// or at all (non-adjacent edges).
int incidence(const KnotPolygon& k);

/// Vertices within `tol` of the lowest height.
std::vector<std::size_t> min_height_vertices(const KnotPolygon& k, double tol = 1e-9);

/// Projection lies on its hull boundary and every hull corner has a connected preimage.
bool is_exposed(const KnotPolygon& k);

/// Exposed, full dimensional and injective off shared vertices.
bool has_convex_projection(const KnotPolygon& k);

/// Number of vertices where the projected polygon doubles back (projected turning angle pi).
std::size_t projected_reversals(const KnotPolygon& k);

/// Reflection of an arc across a vertical boundary plane through two vertices. Empty when the
/// projection is already exposed or no candidate improves the projection.
std::optional<ReflectionMove> find_edge_pair_move(const KnotPolygon& k);

struct StageResult {
    KnotPolygon polygon;
    std::vector<TraceEntry> entries;
};

/// Repeats find_edge_pair_move until the projection is exposed. `cap` = 0 means 10 n^2.
StageResult expose_projection(const KnotPolygon& k, std::size_t cap = 0);

/// A move that strictly lowers the incidence of an exposed, non-convex projection while keeping
/// thickness and the set of minimum-height vertices. Throws NotApplicable for convex projections.
Move pushout_move(const KnotPolygon& k);

/// Makes the knot planar and convex, raising the number of minimum-height vertices step by step.
StageResult flatten(const KnotPolygon& k);

/// v1, w1, v2, w2 in forward cyclic order with v's smaller than regular and w's larger.
VertexQuad choose_four_vertices(const KnotPolygon& k);

/// Hextuple moves on a planar convex polygon until every angle is regular.
StageResult regularize(const KnotPolygon& k);

/// Full pipeline ending at the regular planar polygon placed onto regular_polygon(n).
CanonicalizationTrace canonicalize(const KnotPolygon& k);

}  // namespace thickknot
