#pragma once

#include <cstddef>
#include <span>

namespace thickknot {

/// Heuristic summaries of a correlated series; none of them is a convergence proof.
struct SeriesDiagnostics {
    double mean = 0.0;
    /// Batch-means standard error with floor(sqrt(N)) batches.
    double standard_error = 0.0;
    /// Integrated autocorrelation time, Geyer's initial positive sequence estimator.
    double iat = 1.0;
    std::size_t count = 0;
};

/// Throws TooFewSamples below 100 values.
SeriesDiagnostics diagnose(std::span<const double> values);

/// Lag-k autocorrelation (biased estimator); 0 for a constant series.
double autocorrelation(std::span<const double> values, std::size_t lag);

}  // namespace thickknot
