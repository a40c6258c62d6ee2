#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support/oracles.hpp"
#include "support/random_polygons.hpp"
#include "thickknot/moves.hpp"
#include "thickknot/thickness.hpp"

using namespace thickknot;
constexpr double kPi = std::numbers::pi;

namespace {

KnotPolygon unit_square() {
    return validate_polygon(std::vector<Point3>{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}).polygon;
}

// Planar hairpin: two straight runs of length 2 joined by sharp tips, rows `gap` apart.
KnotPolygon hairpin(double gap) {
    const double c = std::sqrt(1.0 - gap * gap / 4.0);
    return validate_polygon(std::vector<Point3>{{0, 0, 0},
                                                {1, 0, 0},
                                                {2, 0, 0},
                                                {2 + c, gap / 2, 0},
                                                {2, gap, 0},
                                                {1, gap, 0},
                                                {0, gap, 0},
                                                {-c, gap / 2, 0}})
        .polygon;
}

bool has_pair_at(const std::vector<DoublyCriticalPair>& pairs, PairKind kind, double d) {
    for (const auto& p : pairs) {
        if (p.kind == kind && std::abs(p.distance - d) < 1e-12) return true;
    }
    return false;
}

}  // namespace

TEST(MinRad, ClosedForms) {
    EXPECT_NEAR(minrad(unit_square()).value, 0.5, 1e-15);
    EXPECT_NEAR(minrad(regular_polygon(10)).value, 0.5 * std::tan(2.0 * kPi / 5.0), 1e-13);
    EXPECT_NEAR(minrad(regular_polygon(10)).value, 1.53884, 1e-5);
    EXPECT_NEAR(minrad(regular_polygon(3)).value, 1.0 / (2.0 * std::sqrt(3.0)), 1e-15);
}

TEST(DoublyCriticalPairs, SquareHasMidpointAndDiagonalPairs) {
    const auto pairs = doubly_critical_pairs(unit_square());
    ASSERT_FALSE(pairs.empty());
    EXPECT_NEAR(pairs.front().distance, 1.0, 1e-12);
    EXPECT_TRUE(has_pair_at(pairs, PairKind::EdgeEdge, 1.0));
    EXPECT_TRUE(has_pair_at(pairs, PairKind::VertexVertex, std::sqrt(2.0)));
    for (std::size_t i = 1; i < pairs.size(); ++i) EXPECT_LE(pairs[i - 1].distance, pairs[i].distance);
    EXPECT_NEAR(oracle::grid_dcsd(unit_square(), 1000), 1.0, 1e-9);
}

TEST(DoublyCriticalPairs, HexagonOppositeEdges) {
    const auto pairs = doubly_critical_pairs(regular_polygon(6));
    EXPECT_TRUE(has_pair_at(pairs, PairKind::EdgeEdge, std::sqrt(3.0)));
    EXPECT_NEAR(pairs.front().distance, std::sqrt(3.0), 1e-12);
}

TEST(DoublyCriticalPairs, FlattenedOctagonIsNearSingular) {
    const auto k = hairpin(0.05);
    const auto pairs = doubly_critical_pairs(k);
    ASSERT_FALSE(pairs.empty());
    EXPECT_LT(pairs.front().distance, 0.1);
    EXPECT_NEAR(pairs.front().distance, oracle::grid_dcsd(k, 1000), 1e-9);
}

TEST(InjectivityRadius, Square) {
    const auto r = injectivity_radius(unit_square());
    EXPECT_NEAR(r.minrad, 0.5, 1e-15);
    ASSERT_TRUE(r.dcsd.has_value());
    EXPECT_NEAR(*r.dcsd, 1.0, 1e-12);
    EXPECT_NEAR(r.injectivity_radius, 0.5, 1e-15);
    EXPECT_NEAR(r.thickness, 0.125, 1e-15);
    EXPECT_EQ(r.arclength, 4.0);
}

TEST(InjectivityRadius, RegularDecagon) {
    EXPECT_NEAR(thickness(regular_polygon(10)), 0.1539, 2e-4);
    EXPECT_NEAR(thickness(regular_polygon(10)), 0.15388, 1e-5);
}

TEST(InjectivityRadius, CrossingPolygonHasZeroRadius) {
    // v1 reflected onto v3 across the 0-2 diagonal plane.
    const auto sq = unit_square();
    const auto frame = axis_frame(sq, 0, 2);
    const Vec3 inplane_normal = normalized(Vec3{1, -1, 0});
    const double theta = theta_for_normal(sq, 0, 2, inplane_normal);
    (void)frame;
    const auto bow = apply_reflection(sq, {0, 2, theta, ArcChoice::Forward});
    EXPECT_NEAR(injectivity_radius(bow).injectivity_radius, 0.0, 1e-9);
    EXPECT_NEAR(radius_via_tc(bow), 0.0, 1e-9);
}

TEST(RadiusViaTc, ConvexPlanarEqualsMinRad) {
    for (std::size_t n : {3u, 4u, 5u, 8u, 12u}) {
        const auto k = regular_polygon(n);
        EXPECT_EQ(radius_via_tc(k), minrad(k).value);
        EXPECT_EQ(injectivity_radius(k).injectivity_radius, minrad(k).value);
    }
    EXPECT_NEAR(radius_via_tc(unit_square()), 0.5, 1e-15);
}

TEST(RadiusViaTc, AgreesWithDoublyCriticalRouteOnRandomPolygons) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::size_t n = 5 + seed % 6;
        const auto k = testgen::random_polygon(n, 30, seed);
        EXPECT_NEAR(injectivity_radius(k).injectivity_radius, radius_via_tc(k), 1e-9) << "seed " << seed;
    }
}

TEST(BoundaryTurning, Examples) {
    EXPECT_TRUE(boundary_turning_check(regular_polygon(10)));
    EXPECT_TRUE(boundary_turning_check(unit_square()));
}

TEST(BoundaryTurning, RandomThickOctagons) {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto k = testgen::random_thick_polygon(8, 20, 0.01, seed);
        EXPECT_TRUE(boundary_turning_check(k)) << "seed " << seed;
    }
}

TEST(ThicknessProperties, GridOracleAgreesOnRandomPolygons) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto k = testgen::random_polygon(6 + seed % 3, 20, 1000 + seed);
        const auto r = injectivity_radius(k);
        const double grid = oracle::grid_dcsd(k, 1000);
        ASSERT_TRUE(r.dcsd.has_value()) << "seed " << seed;
        // The grid only sees pairs on its lattice, so agreement is at the lattice spacing.
        EXPECT_NEAR(*r.dcsd, grid, 2e-3) << "seed " << seed;
    }
}

TEST(ThicknessProperties, RigidMotionInvariance) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto k = testgen::random_polygon(9, 30, seed);
        const auto m = testgen::random_rigid_motion(k, seed + 99);
        const auto a = injectivity_radius(k);
        const auto b = injectivity_radius(m);
        EXPECT_NEAR(a.minrad, b.minrad, 1e-12);
        EXPECT_EQ(a.minrad_vertex, b.minrad_vertex);
        ASSERT_EQ(a.dcsd.has_value(), b.dcsd.has_value());
        if (a.dcsd) EXPECT_NEAR(*a.dcsd, *b.dcsd, 1e-12);
        EXPECT_NEAR(a.injectivity_radius, b.injectivity_radius, 1e-12);
        EXPECT_NEAR(a.thickness, b.thickness, 1e-12);
    }
}

TEST(ThicknessProperties, ContinuityUnderSmallPerturbation) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1e-6, 1e-6);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto k = testgen::random_thick_polygon(10, 30, 0.01, seed);
        // Perturb, then rebuild unit edges by walking the perturbed directions and closing.
        std::vector<Vec3> dirs;
        for (long long i = 0; i < 10; ++i) {
            Vec3 e = k.edge(i) + Vec3{u(rng), u(rng), u(rng)};
            dirs.push_back(normalized(e));
        }
        for (int it = 0; it < 50; ++it) {
            Vec3 sum{0, 0, 0};
            for (const auto& d : dirs) sum = sum + d;
            for (auto& d : dirs) d = normalized(d - sum * 0.1);
        }
        std::vector<Point3> pts{k[0]};
        for (std::size_t i = 0; i + 1 < 10; ++i) pts.push_back(pts.back() + dirs[i]);
        const auto p = KnotPolygon::from_trusted(pts);
        ASSERT_LT(max_edge_deviation(p), 1e-9);
        EXPECT_NEAR(injectivity_radius(p).injectivity_radius, injectivity_radius(k).injectivity_radius, 1e-4);
    }
}
