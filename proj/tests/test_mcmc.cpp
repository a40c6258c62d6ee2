#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support/random_polygons.hpp"
#include "thickknot/diagnostics.hpp"
#include "thickknot/errors.hpp"
#include "thickknot/mcmc.hpp"
#include "thickknot/observables.hpp"
#include "thickknot/rng.hpp"
#include "thickknot/thickness.hpp"

using namespace thickknot;

namespace {

NoiseDraw draw_with_fractions(const std::vector<double>& a) {
    NoiseDraw d(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        d[k].x = 3.0 + a[k];  // only the fractional part matters
        d[k].theta = 0.1 * (k + 1);
        d[k].i = k % 3;
        d[k].j = 5 + k % 2;
    }
    return d;
}

ChainConfig config(std::size_t n, double t, std::uint64_t steps, std::uint64_t seed) {
    ChainConfig cfg;
    cfg.n = n;
    cfg.t = t;
    cfg.steps = steps;
    cfg.seed = seed;
    return cfg;
}

std::vector<std::vector<Point3>> collect(const ChainConfig& cfg) {
    std::vector<std::vector<Point3>> out;
    run_chain(cfg, [&](const ChainSample& s) {
        out.emplace_back(s.polygon->vertices().begin(), s.polygon->vertices().end());
    });
    return out;
}

}  // namespace

TEST(Decode, NoStoppingIndexUsesWholeBatch) {
    const std::vector<double> p(6, 0.5);
    const auto dec = decode_noise(draw_with_fractions({0.1, 0.2, 0.3, 0.4, 0.45, 0.5}), p);
    EXPECT_EQ(dec.m, 6u);
    ASSERT_EQ(dec.batch.size(), 6u);
}

TEST(Decode, FirstRecordStopsGivesIdentity) {
    const std::vector<double> p(6, 0.5);
    const auto dec = decode_noise(draw_with_fractions({0.9, 0.1, 0.1, 0.1, 0.1, 0.1}), p);
    EXPECT_EQ(dec.m, 0u);
    EXPECT_TRUE(dec.batch.empty());
}

TEST(Decode, SecondRecordStopsGivesOneMove) {
    const std::vector<double> p(6, 0.5);
    const auto d = draw_with_fractions({0.3, 0.7, 0.1, 0.1, 0.1, 0.1});
    const auto dec = decode_noise(d, p);
    EXPECT_EQ(dec.m, 1u);
    ASSERT_EQ(dec.batch.size(), 1u);
    EXPECT_EQ(dec.batch[0].i, d[0].i);
    EXPECT_EQ(dec.batch[0].j, d[0].j);
    EXPECT_EQ(dec.batch[0].theta, d[0].theta);
    EXPECT_EQ(dec.batch[0].arc, ArcChoice::Forward);
}

TEST(Noise, RecordsAreInRangeAndReproducible) {
    for (std::uint64_t step = 1; step <= 2000; ++step) {
        const auto d = draw_noise(42, step, 7, 6);
        ASSERT_EQ(d.size(), 6u);
        for (const auto& r : d) {
            EXPECT_GT(r.x, 0.0);
            EXPECT_LT(r.x, 1.0);
            EXPECT_GT(r.theta, 0.0);
            EXPECT_LT(r.theta, 2.0 * std::numbers::pi);
            EXPECT_LT(r.i, r.j);
            EXPECT_LT(r.j, 7u);
        }
        const auto again = draw_noise(42, step, 7, 6);
        EXPECT_EQ(again[3].x, d[3].x);
        EXPECT_EQ(again[3].j, d[3].j);
    }
}

TEST(Noise, PairsAreUniform) {
    const std::size_t n = 6;
    std::vector<std::vector<int>> counts(n, std::vector<int>(n, 0));
    const int draws = 60000;
    for (int s = 1; s <= draws; ++s) {
        const auto d = draw_noise(9, s, n, 6);
        ++counts[d[0].i][d[0].j];
    }
    const double expected = draws / 15.0;
    double chi2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) chi2 += std::pow(counts[i][j] - expected, 2) / expected;
    }
    // 14 degrees of freedom; 36.1 is the 0.999 quantile.
    EXPECT_LT(chi2, 36.1);
}

TEST(Step, EmptyBatchIsAccepted) {
    const auto k = regular_polygon(10);
    auto cfg = config(10, 0.1, 1, 1);
    const auto o = chain_step(k, draw_with_fractions({0.9, 0.1, 0.1, 0.1, 0.1, 0.1}), cfg);
    EXPECT_TRUE(o.accepted);
    EXPECT_EQ(o.m, 0u);
    EXPECT_EQ(o.state, k);
}

TEST(Step, RejectionLeavesStateBitIdentical) {
    const auto k = testgen::random_thick_polygon(10, 20, 0.02, 5);
    auto cfg = config(10, thickness(k) - 1e-6, 1, 3);
    int rejections = 0;
    for (std::uint64_t step = 1; step <= 200 && rejections < 20; ++step) {
        const auto o = chain_step(k, draw_noise(3, step, 10, 6), cfg);
        if (o.accepted) {
            EXPECT_GE(o.thickness_after, cfg.t);
            continue;
        }
        ++rejections;
        EXPECT_LT(o.thickness_after, cfg.t);
        EXPECT_EQ(o.state, k);
    }
    EXPECT_EQ(rejections, 20);
}

TEST(Step, StraightArcAtDistanceTwoIsFixed) {
    // v1 is a straight vertex, so |v0 - v2| = 2 and the connecting arc lies on every plane
    // through the v0 v2 axis: reflecting it changes nothing.
    const double h = std::sqrt(3.0) / 2.0;
    const auto k = KnotPolygon::from_trusted({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {1.5, h, 0}, {0.5, h, 0}});
    auto cfg = config(5, 0.0, 1, 1);
    for (double theta : {0.3, 1.7, 4.0}) {
        NoiseDraw d = draw_with_fractions({0.2, 0.8, 0.1, 0.1, 0.1, 0.1});
        d[0].i = 0;
        d[0].j = 2;
        d[0].theta = theta;
        const auto o = chain_step(k, d, cfg);
        EXPECT_TRUE(o.accepted);
        EXPECT_EQ(o.m, 1u);
        for (std::size_t v = 0; v < 5; ++v) EXPECT_LT(distance(o.state[v], k[v]), 1e-15);
    }
}

TEST(Chain, SeededRunStaysAboveBound) {
    auto cfg = config(10, 0.01, 1000, 17);
    cfg.audit_interval = 100;
    std::size_t samples = 0;
    const auto summary = run_chain(cfg, [&](const ChainSample& s) {
        ++samples;
        EXPECT_GE(thickness(*s.polygon), cfg.t - 1e-12);
        EXPECT_LE(max_edge_deviation(*s.polygon), 1e-8);
    });
    EXPECT_EQ(samples, 1000u);
    EXPECT_EQ(summary.emitted, 1000u);
    EXPECT_GT(summary.audits, 0u);
    EXPECT_LE(summary.max_audit_drift, 1e-8);
    std::uint64_t total = 0;
    for (auto c : summary.m_histogram) total += c;
    EXPECT_EQ(total, summary.steps);
    EXPECT_EQ(summary.accepted + summary.rejected, summary.steps);
}

TEST(Chain, SameSeedIsBitIdentical) {
    auto cfg = config(10, 0.01, 2000, 99);
    cfg.burn_in = 100;
    cfg.stride = 10;
    const auto a = collect(cfg);
    const auto b = collect(cfg);
    EXPECT_EQ(a.size(), 190u);
    EXPECT_EQ(a, b);
    cfg.seed = 100;
    EXPECT_NE(collect(cfg), a);
}

TEST(Chain, ZeroThicknessAcceptsEverything) {
    const auto summary = run_chain(config(10, 0.0, 10000, 4), [](const ChainSample&) {});
    EXPECT_EQ(summary.accepted + summary.degenerate, summary.steps);
    EXPECT_GT(summary.acceptance_rate(), 0.999);
}

TEST(Chain, ZeroThicknessLongRunNeverErrors) {
    auto cfg = config(10, 0.0, 100000, 8);
    cfg.stride = 1000;
    ChainSummary summary;
    EXPECT_NO_THROW(summary = run_chain(cfg, [](const ChainSample&) {}));
    EXPECT_EQ(summary.emitted, 100u);
    EXPECT_GT(summary.audits, 0u);
}

TEST(Chain, TightBoundRejectsOften) {
    const double t = 0.9 * thickness(regular_polygon(10));
    auto cfg = config(10, t, 5000, 21);
    const auto summary = run_chain(cfg, [&](const ChainSample& s) { EXPECT_GE(thickness(*s.polygon), t - 1e-12); });
    EXPECT_LT(summary.acceptance_rate(), 0.8);
    // m = 0 steps are always accepted.
    EXPECT_GE(summary.accepted, summary.m_histogram[0]);
}

TEST(Chain, BatchLengthIsGeometric) {
    const auto summary = run_chain(config(8, 0.0, 40000, 2), [](const ChainSample&) {});
    for (std::size_t m = 0; m < 6; ++m) {
        const double expected = std::pow(0.5, m + 1);
        EXPECT_NEAR(static_cast<double>(summary.m_histogram[m]) / summary.steps, expected, 0.01) << m;
    }
    EXPECT_NEAR(static_cast<double>(summary.m_histogram[6]) / summary.steps, std::pow(0.5, 6), 0.01);
}

TEST(Chain, ConfigErrors) {
    EXPECT_THROW(validate_config(config(3, 0.0, 1, 1)), ConfigError);
    auto cfg = config(10, 0.0, 1, 1);
    cfg.N = 5;
    EXPECT_THROW(validate_config(cfg), ConfigError);
    cfg = config(10, 0.0, 1, 1);
    cfg.p = std::vector<double>(6, 0.0);
    EXPECT_THROW(validate_config(cfg), ConfigError);
    cfg.p = {0.5, 0.5};
    EXPECT_THROW(validate_config(cfg), ConfigError);
    cfg = config(10, -0.1, 1, 1);
    EXPECT_THROW(validate_config(cfg), ConfigError);
    cfg = config(10, 0.0, 1, 1);
    cfg.stride = 0;
    EXPECT_THROW(validate_config(cfg), ConfigError);
    cfg = config(10, 0.05, 1, 1);
    cfg.start = testgen::random_polygon(10, 40, 3);
    if (thickness(*cfg.start) < 0.05) {
        EXPECT_THROW(run_chain(cfg, [](const ChainSample&) {}), ConfigError);
    }
    EXPECT_FALSE(validate_config(config(10, 0.2, 1, 1)).empty());
    EXPECT_TRUE(validate_config(config(10, 0.1, 1, 1)).empty());
}

TEST(Renormalize, RemovesSmallDrift) {
    const auto k = testgen::random_polygon(12, 30, 6);
    std::mt19937_64 gen(1);
    std::normal_distribution<double> noise(0.0, 1e-10);
    std::vector<Point3> v(k.vertices().begin(), k.vertices().end());
    for (auto& p : v) p = p + Vec3{noise(gen), noise(gen), noise(gen)};
    const auto drifted = KnotPolygon::from_trusted(v);
    EXPECT_GT(max_edge_deviation(drifted), 1e-11);
    const auto [fixed, dev] = renormalize_edges(drifted);
    EXPECT_LT(dev, 1e-14);
    EXPECT_EQ(dev, max_edge_deviation(fixed));
    for (std::size_t i = 0; i < k.size(); ++i) EXPECT_LT(distance(fixed[i], k[i]), 1e-8);
}

TEST(Diagnostics, ConstantSeries) {
    const std::vector<double> c(500, 2.5);
    const auto d = diagnose(c);
    EXPECT_EQ(d.mean, 2.5);
    EXPECT_EQ(d.iat, 1.0);
    EXPECT_EQ(d.standard_error, 0.0);
    EXPECT_EQ(d.count, 500u);
}

TEST(Diagnostics, TooFewSamples) {
    EXPECT_THROW(diagnose(std::vector<double>(99, 1.0)), TooFewSamples);
    EXPECT_NO_THROW(diagnose(std::vector<double>(100, 1.0)));
}

TEST(Diagnostics, WhiteNoise) {
    std::mt19937_64 gen(123);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v(40000);
    for (auto& x : v) x = g(gen);
    const auto d = diagnose(v);
    EXPECT_NEAR(d.iat, 1.0, 0.2);
    EXPECT_NEAR(d.standard_error, 1.0 / std::sqrt(40000.0), 0.3 / std::sqrt(40000.0));
    EXPECT_NEAR(autocorrelation(v, 0), 1.0, 1e-12);
    EXPECT_NEAR(autocorrelation(v, 1), 0.0, 0.02);
}

TEST(Diagnostics, AutoregressiveSeries) {
    // AR(1) with coefficient phi has integrated autocorrelation time (1 + phi) / (1 - phi).
    const double phi = 0.8;
    std::mt19937_64 gen(5);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v(200000);
    double x = 0.0;
    for (auto& y : v) y = x = phi * x + g(gen);
    const auto d = diagnose(v);
    EXPECT_NEAR(d.iat, 9.0, 9.0 * 0.15);
    const double stationary_sd = 1.0 / std::sqrt(1.0 - phi * phi);
    EXPECT_NEAR(d.standard_error, stationary_sd * std::sqrt(9.0 / v.size()), 0.3 * stationary_sd * std::sqrt(9.0 / v.size()));
}

TEST(Diagnostics, GyrationOnRealChain) {
    auto cfg = config(10, 0.01, 20000, 31);
    cfg.burn_in = 1000;
    cfg.stride = 10;
    std::vector<double> rg2;
    run_chain(cfg, [&](const ChainSample& s) { rg2.push_back(radius_of_gyration_squared(*s.polygon)); });
    const auto d = diagnose(rg2);
    EXPECT_TRUE(std::isfinite(d.iat));
    EXPECT_GT(d.iat, 0.0);
    EXPECT_GT(d.standard_error, 0.0);
    EXPECT_GT(d.mean, 0.0);
    EXPECT_LT(d.mean, radius_of_gyration_squared(regular_polygon(10)));
}

TEST(Rng, DerivedSeedsDiffer) {
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
    const CounterRng r(7);
    EXPECT_EQ(r.bits(3, 4), CounterRng(7).bits(3, 4));
    EXPECT_NE(r.bits(3, 4), r.bits(4, 3));
}
