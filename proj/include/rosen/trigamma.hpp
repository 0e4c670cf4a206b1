#ifndef ROSEN_TRIGAMMA_HPP
#define ROSEN_TRIGAMMA_HPP

#include <cmath>
#include <stdexcept>

namespace rosen {

// trigamma(z) = sum_{n>=0} 1/(z+n)^2 for z > 0.
// Recurrence below 10, then the Bernoulli asymptotic series; the z^-13 term
// caps the truncation error near 1e-15 at z = 10.
inline double trigamma(double z) {
    if (!(z > 0.0)) throw std::domain_error("trigamma: z must be positive");
    double acc = 0.0;
    while (z < 10.0) {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    double iz = 1.0 / z, iz2 = iz * iz;
    double series =
        iz + 0.5 * iz2 +
        iz * iz2 *
            (1.0 / 6.0 +
             iz2 * (-1.0 / 30.0 +
                    iz2 * (1.0 / 42.0 +
                           iz2 * (-1.0 / 30.0 +
                                  iz2 * (5.0 / 66.0 +
                                         iz2 * (-691.0 / 2730.0 + iz2 * (7.0 / 6.0)))))));
    return acc + series;
}

// sum_{a=a_lo}^{a_hi} 1/(t + a)^2, a_hi < 0 meaning +infinity.
inline double inverse_square_run(double t, long a_lo, long a_hi) {
    if (a_hi >= 0 && a_hi < a_lo) return 0.0;
    if (a_hi < 0) return trigamma(t + static_cast<double>(a_lo));
    if (a_hi - a_lo < 12) {  // short runs: direct summation is cheaper
        double s = 0.0;
        for (long a = a_lo; a <= a_hi; ++a) {
            double d = t + static_cast<double>(a);
            s += 1.0 / (d * d);
        }
        return s;
    }
    return trigamma(t + static_cast<double>(a_lo)) -
           trigamma(t + static_cast<double>(a_hi) + 1.0);
}

} // namespace rosen

#endif
