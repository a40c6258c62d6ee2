#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "support/known_knots.hpp"
#include "support/oracles.hpp"
#include "support/random_polygons.hpp"
#include "thickknot/canonicalize.hpp"
#include "thickknot/errors.hpp"
#include "thickknot/knot_io.hpp"
#include "thickknot/observables.hpp"
#include "thickknot/thickness.hpp"

using namespace thickknot;

namespace {

const std::vector<Vec3> kDirections = {
    {0.0, 0.0, 1.0},  {1.0, 0.0, 0.0},   {0.0, 1.0, 0.0},  {1.0, 1.0, 1.0},
    {1.0, -2.0, 3.0}, {-2.0, 1.0, 1.0}, {0.3, -0.7, 0.2}, {2.0, 3.0, -1.0},
};

KnotPolygon unit_square() {
    return KnotPolygon::from_trusted({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}});
}

std::string write_to_string(const std::vector<KnotRecord>& records) {
    std::ostringstream out;
    write_knots(out, records);
    return out.str();
}

ReadResult read_from_string(const std::string& text) {
    std::istringstream in(text);
    return read_knots(in);
}

}  // namespace

TEST(Gyration, UnitSquare) {
    EXPECT_NEAR(radius_of_gyration(unit_square()), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(radius_of_gyration_squared(unit_square()), 0.5, 1e-15);
}

TEST(Gyration, RegularPolygonIsCircumradius) {
    for (std::size_t n = 3; n <= 40; ++n) {
        EXPECT_NEAR(radius_of_gyration(regular_polygon(n)), 0.5 / std::sin(std::numbers::pi / n), 1e-12) << n;
    }
}

TEST(Gyration, IsometryInvariant) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto k = testgen::random_polygon(12, 40, seed);
        const auto m = testgen::random_rigid_motion(k, seed + 1000);
        EXPECT_NEAR(radius_of_gyration(k), radius_of_gyration(m), 1e-12);
    }
}

TEST(Alexander, RegularPolygonIsOne) {
    CrossingDiagramInfo info;
    EXPECT_EQ(alexander_determinant(regular_polygon(10), &info), 1);
    EXPECT_EQ(info.crossings, 0u);
}

TEST(Alexander, KnownKnotsAgreeOverEightDirections) {
    const std::pair<KnotPolygon, long> cases[] = {
        {testgen::random_rigid_motion(regular_polygon(9), 3), 1},
        {testgen::stick_trefoil(), 3},
        {testgen::stick_figure_eight(), 5},
    };
    for (const auto& [k, expected] : cases) {
        EXPECT_TRUE(validate_polygon(k.vertices()).embedded);
        EXPECT_EQ(alexander_determinant(k), expected);
        for (const auto& d : kDirections) {
            EXPECT_EQ(alexander_determinant_along(k, d), expected);
            EXPECT_EQ(oracle::alexander_determinant(k, d), expected);
        }
    }
}

TEST(Alexander, InvariantUnderRigidMotion) {
    const auto k = testgen::random_rigid_motion(testgen::stick_figure_eight(), 5);
    EXPECT_EQ(alexander_determinant(k), 5);
}

TEST(Alexander, MatchesOracleOnRandomPolygons) {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const auto k = testgen::random_polygon(10, 60, seed);
        CrossingDiagramInfo info;
        const long d = alexander_determinant(k, &info);
        EXPECT_EQ(d % 2, 1) << seed;
        EXPECT_EQ(oracle::alexander_determinant(k, info.direction), d) << seed;
    }
}

TEST(Alexander, EdgeOnProjectionIsNotGeneric) {
    // Looking along the plane of a planar polygon collapses it onto a segment.
    EXPECT_THROW(alexander_determinant_along(regular_polygon(8), {1.0, 0.0, 0.0}), NoGenericProjection);
    CrossingDiagramInfo info;
    EXPECT_EQ(alexander_determinant(regular_polygon(8), &info), 1);
    EXPECT_EQ(info.attempts, 1);
}

TEST(KnotFile, RoundTripIsBitIdentical) {
    std::vector<KnotRecord> records;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        KnotRecord r;
        r.polygon = testgen::random_polygon(5 + seed % 20, 30, seed);
        r.header["seed"] = std::to_string(seed);
        records.push_back(r);
    }
    const auto back = read_from_string(write_to_string(records));
    ASSERT_EQ(back.records.size(), records.size());
    EXPECT_TRUE(back.warnings.empty());
    for (std::size_t i = 0; i < records.size(); ++i) {
        EXPECT_EQ(back.records[i].polygon, records[i].polygon) << i;
        EXPECT_EQ(back.records[i].header.at("seed"), records[i].header.at("seed"));
        EXPECT_EQ(back.records[i].header.at("n"), std::to_string(records[i].polygon.size()));
    }
}

TEST(KnotFile, FormatHasHeadersAndBlankSeparators) {
    KnotRecord r{{{"step", "7"}}, unit_square()};
    EXPECT_EQ(write_to_string({r, r}),
              "# n=4\n# step=7\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n\n# n=4\n# step=7\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n");
}

TEST(KnotFile, TwoVertexRecordReportsRecordIndex) {
    const std::string text = "0 0 0\n1 0 0\n1 1 0\n0 1 0\n\n# n=2\n0 0 0\n1 0 0\n";
    try {
        read_from_string(text);
        FAIL() << "expected TooFewVertices";
    } catch (const TooFewVertices& e) {
        EXPECT_EQ(e.record, 1u);
        EXPECT_EQ(e.count, 2u);
    }
}

TEST(KnotFile, EdgeViolationReportsRecordIndex) {
    const std::string text = "0 0 0\n1 0 0\n1 1 0\n0 1 0\n\n\n0 0 0\n1 0 0\n1 1.5 0\n0 1 0\n";
    try {
        read_from_string(text);
        FAIL() << "expected EdgeLengthViolation";
    } catch (const EdgeLengthViolation& e) {
        EXPECT_EQ(e.record, 1u);
    }
}

TEST(KnotFile, ParseErrorCarriesLineNumber) {
    try {
        read_from_string("# n=4\n0 0 0\n1 0 zero\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line, 3u);
    }
    EXPECT_THROW(read_from_string("# n=5\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n"), ParseError);
    EXPECT_THROW(read_from_string("0 0 0 1\n"), ParseError);
    EXPECT_THROW(read_from_string("# nokey\n"), ParseError);
}

TEST(KnotFile, HeaderThicknessMismatchWarns) {
    const auto k = regular_polygon(10);
    const double t = thickness(k);
    char good[64], bad[64];
    std::snprintf(good, sizeof good, "%.17g", t + 5e-7);
    std::snprintf(bad, sizeof bad, "%.17g", t + 2e-6);
    const auto ok = read_from_string(write_to_string({{{{"thickness", good}}, k}}));
    EXPECT_TRUE(ok.warnings.empty());
    const auto warned = read_from_string(write_to_string({{{{"thickness", bad}}, k}}));
    ASSERT_EQ(warned.warnings.size(), 1u);
    EXPECT_EQ(warned.records.size(), 1u);
}

TEST(Stats, FormatParseRoundTrip) {
    const auto k = testgen::random_polygon(10, 30, 3);
    const auto r = make_stats_record(k, 1234, false, 4);
    EXPECT_EQ(r.thickness, thickness(k));
    EXPECT_EQ(r.rg2, radius_of_gyration_squared(k));
    const auto back = parse_stats(format_stats(r));
    EXPECT_EQ(back.step, 1234u);
    EXPECT_EQ(back.thickness, r.thickness);
    EXPECT_EQ(back.minrad, r.minrad);
    EXPECT_EQ(back.dcsd, r.dcsd);
    EXPECT_EQ(back.rg2, r.rg2);
    EXPECT_FALSE(back.accepted);
    EXPECT_EQ(back.m, 4u);
}

TEST(Obj, ClosedPolylinesWithOffsetIndices) {
    std::ostringstream out;
    write_obj(out, {{{}, unit_square()}, {{}, regular_polygon(3)}});
    const std::string s = out.str();
    EXPECT_NE(s.find("l 1 2 3 4 1\n"), std::string::npos);
    EXPECT_NE(s.find("l 5 6 7 5\n"), std::string::npos);
    std::size_t vertices = 0;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) vertices += line.rfind("v ", 0) == 0;
    EXPECT_EQ(vertices, 7u);
}

TEST(Trace, OneLinePerEntryPlusHeader) {
    const auto trace = canonicalize(testgen::random_thick_polygon(8, 20, 0.005, 11));
    std::ostringstream out;
    write_trace(out, trace);
    std::istringstream in(out.str());
    std::size_t lines = 0;
    for (std::string line; std::getline(in, line);) ++lines;
    EXPECT_EQ(lines, trace.entries.size() + 1);
    EXPECT_EQ(out.str().rfind("# n=8", 0), 0u);
}
