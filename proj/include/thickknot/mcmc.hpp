#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thickknot/moves.hpp"
#include "thickknot/polygon.hpp"

namespace thickknot {

struct ChainConfig {
    std::size_t n = 10;
    /// Lower bound on thickness (injectivity radius over arclength).
    double t = 0.0;
    /// Batch cap.
    std::size_t N = 6;
    /// Continuation probabilities p_1..p_N; empty means 0.5 for every k.
    std::vector<double> p;
    std::uint64_t seed = 0;
    std::uint64_t steps = 0;
    std::uint64_t burn_in = 0;
    std::uint64_t stride = 1;
    /// Start state; the regular n-gon when empty.
    std::optional<KnotPolygon> start;
    /// Accepted moves between integrity audits.
    std::uint64_t audit_interval = 10000;
};

/// Throws ConfigError for unusable settings; returns warnings for usable but suspicious ones.
std::vector<std::string> validate_config(const ChainConfig& cfg);

/// Continuation probabilities with the default filled in.
std::vector<double> continuation_probabilities(const ChainConfig& cfg);

struct NoiseRecord {
    /// Continuation variable; its fractional part is compared with p_k.
    double x = 0.0;
    double theta = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
};

using NoiseDraw = std::vector<NoiseRecord>;

/// The N records of one step, derived from (seed, step) alone.
NoiseDraw draw_noise(std::uint64_t seed, std::uint64_t step, std::size_t n, std::size_t N);

struct DecodedNoise {
    std::size_t m = 0;
    MoveBatch batch;
};

/// m is one less than the first k with frac(x_k) > p_k (N if there is none); the first m records
/// become forward-arc reflections.
DecodedNoise decode_noise(const NoiseDraw& d, std::span<const double> p);

struct StepOutcome {
    bool accepted = true;
    std::size_t m = 0;
    /// Thickness of the returned state; NaN when it was not computed (t <= 0 and accepted).
    double thickness_after = 0.0;
    /// A reflection axis collapsed while applying the batch (counted as a rejection).
    bool degenerate = false;
    KnotPolygon state;
};

/// One step of the chain: apply the whole batch, then test thickness once.
StepOutcome chain_step(const KnotPolygon& k, const NoiseDraw& d, const ChainConfig& cfg);

struct ChainSample {
    std::uint64_t step = 0;
    const KnotPolygon* polygon = nullptr;
    bool accepted = true;
    std::size_t m = 0;
};

struct ChainSummary {
    std::uint64_t steps = 0;
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;
    std::uint64_t degenerate = 0;
    std::uint64_t emitted = 0;
    std::uint64_t audits = 0;
    std::uint64_t renormalizations = 0;
    /// Largest edge-length deviation seen at an audit, before any renormalization.
    double max_audit_drift = 0.0;
    /// Histogram of m over all steps (size N + 1).
    std::vector<std::uint64_t> m_histogram;

    double acceptance_rate() const { return steps == 0 ? 0.0 : static_cast<double>(accepted) / steps; }
};

/// Runs cfg.steps steps and hands every stride-th state after burn-in to `sink`. The polygon
/// pointer is valid only during the callback.
ChainSummary run_chain(const ChainConfig& cfg, const std::function<void(const ChainSample&)>& sink);

/// Alternating projection onto unit edges and closure. Returns the polygon and its final
/// edge-length deviation.
std::pair<KnotPolygon, double> renormalize_edges(const KnotPolygon& k, int max_iterations = 50);

}  // namespace thickknot
