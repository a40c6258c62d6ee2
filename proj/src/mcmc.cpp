#include "thickknot/mcmc.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "thickknot/errors.hpp"
#include "thickknot/rng.hpp"
#include "thickknot/thickness.hpp"

namespace thickknot {

namespace {

// Maps r in [0, n(n-1)/2) to the r-th pair (i, j), i < j, in row-major order.
std::pair<std::size_t, std::size_t> pair_from_index(std::uint64_t r, std::size_t n) {
    std::size_t i = 0;
    std::uint64_t row = n - 1;
    while (r >= row) {
        r -= row;
        ++i;
        --row;
    }
    return {i, i + 1 + static_cast<std::size_t>(r)};
}

// Drift threshold below which an audit leaves the state untouched.
constexpr double kRenormalizeAbove = 1e-13;
constexpr double kIntegrityLimit = 1e-8;
constexpr double kThicknessSlack = 1e-12;

}  // namespace

std::vector<std::string> validate_config(const ChainConfig& cfg) {
    std::vector<std::string> warnings;
    if (cfg.n < 4) throw ConfigError("n must be at least 4");
    if (cfg.N < 6) throw ConfigError("batch cap N must be at least 6");
    if (!cfg.p.empty() && cfg.p.size() != cfg.N) throw ConfigError("need exactly N continuation probabilities");
    for (double pk : cfg.p) {
        if (!(pk > 0.0 && pk <= 1.0)) throw ConfigError("continuation probabilities must lie in (0, 1]");
    }
    if (!(cfg.t >= 0.0) || !std::isfinite(cfg.t)) throw ConfigError("thickness bound must be finite and >= 0");
    if (cfg.stride == 0) throw ConfigError("stride must be positive");
    if (cfg.audit_interval == 0) throw ConfigError("audit interval must be positive");
    if (cfg.start && cfg.start->size() != cfg.n) throw ConfigError("start polygon has the wrong vertex count");
    const double best = thickness(regular_polygon(cfg.n));
    if (cfg.t > best + 1e-12) {
        warnings.push_back("thickness bound exceeds that of the regular polygon; the state space may be empty");
    } else if (cfg.t > best - 1e-9 && cfg.t > 0.0) {
        warnings.push_back("thickness bound is at the regular polygon's value; the chain may not move");
    }
    return warnings;
}

std::vector<double> continuation_probabilities(const ChainConfig& cfg) {
    return cfg.p.empty() ? std::vector<double>(cfg.N, 0.5) : cfg.p;
}

NoiseDraw draw_noise(std::uint64_t seed, std::uint64_t step, std::size_t n, std::size_t N) {
    const CounterRng rng(seed);
    const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    NoiseDraw d(N);
    for (std::size_t k = 0; k < N; ++k) {
        const std::uint64_t slot = 3 * static_cast<std::uint64_t>(k);
        d[k].x = rng.uniform(step, slot);
        d[k].theta = 2.0 * std::numbers::pi * rng.uniform(step, slot + 1);
        std::tie(d[k].i, d[k].j) = pair_from_index(rng.below(step, slot + 2, pairs), n);
    }
    return d;
}

DecodedNoise decode_noise(const NoiseDraw& d, std::span<const double> p) {
    DecodedNoise out;
    out.m = d.size();
    for (std::size_t k = 0; k < d.size(); ++k) {
        const double a = d[k].x - std::floor(d[k].x);
        if (a > p[k]) {
            out.m = k;
            break;
        }
    }
    out.batch.reserve(out.m);
    for (std::size_t k = 0; k < out.m; ++k) {
        out.batch.push_back({d[k].i, d[k].j, d[k].theta, ArcChoice::Forward});
    }
    return out;
}

StepOutcome chain_step(const KnotPolygon& k, const NoiseDraw& d, const ChainConfig& cfg) {
    const auto p = continuation_probabilities(cfg);
    const DecodedNoise dec = decode_noise(d, p);
    StepOutcome out;
    out.m = dec.m;
    KnotPolygon next = k;
    try {
        for (const auto& mv : dec.batch) {
            next = apply_reflection(next, mv);
        }
    } catch (const DegenerateAxis&) {
        out.accepted = false;
        out.degenerate = true;
        out.thickness_after = std::numeric_limits<double>::quiet_NaN();
        out.state = k;
        return out;
    }
    if (cfg.t > 0.0) {
        out.thickness_after = thickness(next);
        out.accepted = out.thickness_after >= cfg.t;
    } else {
        out.thickness_after = std::numeric_limits<double>::quiet_NaN();
    }
    out.state = out.accepted ? std::move(next) : k;
    return out;
}

std::pair<KnotPolygon, double> renormalize_edges(const KnotPolygon& k, int max_iterations) {
    const std::size_t n = k.size();
    std::vector<Vec3> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = k.edge(static_cast<long long>(i));
    auto rebuild = [&] {
        std::vector<Point3> v(n);
        v[0] = k[0];
        for (std::size_t i = 0; i + 1 < n; ++i) v[i + 1] = v[i] + e[i];
        return KnotPolygon::from_trusted(std::move(v));
    };
    KnotPolygon cur = k;
    double dev = max_edge_deviation(cur);
    for (int it = 0; it < max_iterations && dev > 1e-15; ++it) {
        Vec3 defect{0.0, 0.0, 0.0};
        for (auto& ei : e) {
            ei = normalized(ei);
            defect = defect + ei;
        }
        for (auto& ei : e) ei = ei - defect / static_cast<double>(n);
        cur = rebuild();
        const double next_dev = max_edge_deviation(cur);
        if (next_dev >= dev) break;
        dev = next_dev;
        for (std::size_t i = 0; i < n; ++i) e[i] = cur.edge(static_cast<long long>(i));
    }
    return {cur, dev};
}

ChainSummary run_chain(const ChainConfig& cfg, const std::function<void(const ChainSample&)>& sink) {
    validate_config(cfg);
    KnotPolygon state = cfg.start ? *cfg.start : regular_polygon(cfg.n);
    if (cfg.t > 0.0 && thickness(state) < cfg.t - kThicknessSlack) {
        throw ConfigError("start polygon is thinner than the thickness bound");
    }
    ChainSummary s;
    s.m_histogram.assign(cfg.N + 1, 0);
    std::uint64_t since_audit = 0;
    for (std::uint64_t step = 1; step <= cfg.steps; ++step) {
        const NoiseDraw d = draw_noise(cfg.seed, step, cfg.n, cfg.N);
        StepOutcome o = chain_step(state, d, cfg);
        ++s.steps;
        ++s.m_histogram[o.m];
        if (o.accepted) {
            ++s.accepted;
            if (o.m > 0) state = std::move(o.state);
            since_audit += o.m > 0;
        } else {
            ++s.rejected;
            s.degenerate += o.degenerate;
        }
        if (since_audit >= cfg.audit_interval) {
            since_audit = 0;
            ++s.audits;
            const double drift = max_edge_deviation(state);
            s.max_audit_drift = std::max(s.max_audit_drift, drift);
            if (drift > kRenormalizeAbove) {
                auto [fixed, dev] = renormalize_edges(state);
                if (dev > kIntegrityLimit) {
                    throw IntegrityFailure("edge drift " + std::to_string(dev) + " after renormalization at step " +
                                           std::to_string(step));
                }
                if (cfg.t > 0.0 && thickness(fixed) < cfg.t - kThicknessSlack) {
                    throw IntegrityFailure("renormalized state falls below the thickness bound at step " +
                                           std::to_string(step));
                }
                state = std::move(fixed);
                ++s.renormalizations;
            }
        }
        if (step > cfg.burn_in && (step - cfg.burn_in) % cfg.stride == 0) {
            ++s.emitted;
            sink(ChainSample{step, &state, o.accepted, o.m});
        }
    }
    return s;
}

}  // namespace thickknot
