#ifndef ROSEN_STATS_HPP
#define ROSEN_STATS_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rosen {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Two-sided Kolmogorov-Smirnov distance between the sample and the
// standard normal.
inline double ks_statistic(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("ks_statistic: no samples");
    std::sort(samples.begin(), samples.end());
    double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double f = normal_cdf(samples[i]);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

// Kolmogorov tail function Q(t) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 t^2).
// The alternating series stalls for small t; there the dual theta series
// for the distribution function converges in a few terms instead.
inline double kolmogorov_q(double t) {
    if (t <= 0.0) return 1.0;
    if (t < 0.755) {
        double s = 0.0;
        double f = M_PI * M_PI / (8.0 * t * t);
        for (int k = 1; k <= 20; k += 2) {
            double term = std::exp(-f * k * k);
            s += term;
            if (term < 1e-18) break;
        }
        double cdf = std::sqrt(2.0 * M_PI) / t * s;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * t * t);
        s += (k % 2 == 1) ? term : -term;
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

inline double ks_p_value(double d, std::size_t n) {
    return kolmogorov_q(std::sqrt(static_cast<double>(n)) * d);
}

} // namespace rosen

#endif
