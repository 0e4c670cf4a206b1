#ifndef ROSEN_PARAMS_HPP
#define ROSEN_PARAMS_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include "rosen/errors.hpp"

namespace rosen {

// Orbit points this close to 0 are treated as 0 (the map fixes 0).
inline constexpr double kZeroGuard = 1e-13;

// Interval endpoints closer than this are merged / considered equal.
inline constexpr double kMergeTol = 1e-12;

// Parameters of the q-Rosen map on I_q = [-lambda/2, lambda/2].
// sigma doubles as the contraction base: |x| <= sigma < 1 for q >= 3.
struct RosenParams {
    int q = 3;
    double lambda = 1.0;  // 2 cos(pi/q)
    double sigma = 0.5;   // lambda / 2
    int a_min = 2;        // smallest admissible digit

    double half_width() const { return sigma; }
    double full_width() const { return lambda; }
};

namespace detail {

// |p(lambda)| for the minimal polynomial of 2 cos(pi/q), small q only.
inline double minimal_poly_abs(int q, double x) {
    switch (q) {
        case 3: return std::fabs(x - 1.0);
        case 4: return std::fabs(x * x - 2.0);
        case 5: return std::fabs(x * x - x - 1.0);
        case 6: return std::fabs(x * x - 3.0);
        default: return 0.0;
    }
}

} // namespace detail

inline RosenParams make_params(int q) {
    if (q < 3)
        throw std::invalid_argument("make_params: q must be an integer >= 3, got " + std::to_string(q));
    RosenParams p;
    p.q = q;
    p.lambda = 2.0 * std::cos(M_PI / static_cast<double>(q));
    p.sigma = 0.5 * p.lambda;
    // smallest a with 2/((2a+1) lambda) < sigma, i.e. a > 2/lambda^2 - 1/2
    p.a_min = static_cast<int>(std::floor(2.0 / (p.lambda * p.lambda) - 0.5)) + 1;
    if (p.a_min < 1) p.a_min = 1;
    if (q <= 6 && detail::minimal_poly_abs(q, p.lambda) > 1e-12)
        throw std::runtime_error("make_params: lambda fails its minimal-polynomial cross-check");
    return p;
}

} // namespace rosen

#endif
