#include "thickknot/diagnostics.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "thickknot/errors.hpp"

namespace thickknot {

namespace {

double mean_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

std::vector<double> autocovariances(std::span<const double> v, std::size_t max_lag) {
    const double m = mean_of(v);
    const std::size_t n = v.size();
    std::vector<double> g(max_lag + 1, 0.0);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i + k < n; ++i) s += (v[i] - m) * (v[i + k] - m);
        g[k] = s / n;
    }
    return g;
}

}  // namespace

double autocorrelation(std::span<const double> values, std::size_t lag) {
    if (lag >= values.size()) return 0.0;
    const auto g = autocovariances(values, lag);
    return g[0] > 0.0 ? g[lag] / g[0] : 0.0;
}

SeriesDiagnostics diagnose(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 100) {
        throw TooFewSamples("need at least 100 samples, got " + std::to_string(n));
    }
    SeriesDiagnostics d;
    d.count = n;
    d.mean = mean_of(values);

    // Batch means over b = floor(sqrt n) equal batches; a remainder is dropped from the front.
    const std::size_t b = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    const std::size_t len = n / b;
    const std::size_t offset = n - b * len;
    std::vector<double> means(b);
    for (std::size_t k = 0; k < b; ++k) {
        means[k] = mean_of(values.subspan(offset + k * len, len));
    }
    const double mm = mean_of(means);
    double ss = 0.0;
    for (double x : means) ss += (x - mm) * (x - mm);
    d.standard_error = std::sqrt(ss / (b - 1) / b);

    // Initial positive sequence: sum pairs Gamma_m = g(2m) + g(2m+1) while they stay positive.
    const std::size_t max_lag = n - 1;
    std::vector<double> g;
    std::size_t computed = 0;
    auto cov = [&](std::size_t k) {
        if (k >= computed) {
            computed = std::min(max_lag + 1, std::max<std::size_t>(2 * computed, k + 64));
            g = autocovariances(values, computed - 1);
        }
        return g[k];
    };
    const double g0 = cov(0);
    if (!(g0 > 0.0)) {
        d.iat = 1.0;
        d.standard_error = 0.0;
        return d;
    }
    double sum = 0.0;
    for (std::size_t m = 0; 2 * m + 1 <= max_lag; ++m) {
        const double pair = cov(2 * m) + cov(2 * m + 1);
        if (!(pair > 0.0)) break;
        sum += pair;
    }
    d.iat = (2.0 * sum - g0) / g0;
    return d;
}

}  // namespace thickknot
