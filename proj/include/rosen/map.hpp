#ifndef ROSEN_MAP_HPP
#define ROSEN_MAP_HPP

#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "rosen/errors.hpp"
#include "rosen/interval.hpp"
#include "rosen/params.hpp"

namespace rosen {

// One digit of the expansion: epsilon = sgn(x) in {-1,+1}, a >= a_min.
struct Digit {
    int sign = 1;
    long a = 0;

    bool operator==(const Digit&) const = default;
};

inline bool digit_admissible(const RosenParams& p, const Digit& d) {
    return (d.sign == 1 || d.sign == -1) && d.a >= p.a_min;
}

// T(x) = |1/x| - lambda * round(|1/(lambda x)|), with round half up.
// Returns the image and the digit read off; no digit at (numerical) zero.
struct StepResult {
    double x_next = 0.0;
    std::optional<Digit> digit;
};

inline StepResult rosen_step(const RosenParams& p, double x) {
    if (std::fabs(x) > p.sigma + 1e-12)
        throw std::domain_error("rosen_step: x outside [-lambda/2, lambda/2]");
    if (std::fabs(x) < kZeroGuard) return {0.0, std::nullopt};
    double inv = std::fabs(1.0 / x);
    long a = static_cast<long>(std::floor(inv / p.lambda + 0.5));
    double next = inv - p.lambda * static_cast<double>(a);
    Digit d{x > 0.0 ? 1 : -1, a};
    return {next, d};
}

// Digit of x (the cylinder containing x, edges closed away from 0).
inline Digit digit_of(const RosenParams& p, double x) {
    if (std::fabs(x) < kZeroGuard)
        throw std::domain_error("digit_of: x at the zero guard has no digit");
    double inv = std::fabs(1.0 / x);
    return {x > 0.0 ? 1 : -1, static_cast<long>(std::floor(inv / p.lambda + 0.5))};
}

// Expansion of x to at most n digits; stops early if the orbit reaches 0.
// orbit[k] is T^k(x), so orbit.front() == x and orbit.size() == digits.size() + 1.
struct Expansion {
    std::vector<Digit> digits;
    std::vector<double> orbit;
};

inline Expansion expand(const RosenParams& p, double x, int n) {
    if (n < 0) throw std::invalid_argument("expand: n must be >= 0");
    Expansion e;
    e.orbit.push_back(x);
    double cur = x;
    for (int k = 0; k < n; ++k) {
        StepResult s = rosen_step(p, cur);
        if (!s.digit) break;
        e.digits.push_back(*s.digit);
        e.orbit.push_back(s.x_next);
        cur = s.x_next;
    }
    return e;
}

// Finite continued fraction e1/(a1 L + e2/(a2 L + ...)), evaluated inner-out.
// Denominators stay >= a_min*lambda - sigma > 0, so the recursion is safe.
inline double evaluate_cf(const RosenParams& p, const std::vector<Digit>& digits) {
    double v = 0.0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        if (!digit_admissible(p, *it))
            throw empty_cylinder_error("evaluate_cf: inadmissible digit");
        v = static_cast<double>(it->sign) / (static_cast<double>(it->a) * p.lambda + v);
    }
    return v;
}

// Left edge of the positive cylinder with digit value a: 2/((2a+1) lambda).
// Consecutive cylinders share this value exactly (same fp expression).
inline double cyl_left(const RosenParams& p, long a) {
    return 2.0 / ((2.0 * static_cast<double>(a) + 1.0) * p.lambda);
}

inline double cyl_right(const RosenParams& p, long a) {
    if (a == p.a_min) return p.sigma;
    return cyl_left(p, a - 1);
}

// Cylinder of a digit. Positive sign: (l_a, r_a]; negative: [-r_a, -l_a).
// Returned as a closed interval; the half-open side is the one nearer 0.
inline Interval cylinder(const RosenParams& p, const Digit& d) {
    if (!digit_admissible(p, d))
        throw empty_cylinder_error("cylinder: no cylinder for digit (sign=" +
                                   std::to_string(d.sign) + ", a=" + std::to_string(d.a) + ")");
    double l = cyl_left(p, d.a), r = cyl_right(p, d.a);
    if (d.sign > 0) return {l, r};
    return {-r, -l};
}

// Inverse branch h(y) = sign / (y + a lambda); |h'(y)| = (y + a lambda)^{-2}.
struct InverseBranch {
    Digit digit;
    double a_lambda = 0.0;

    double operator()(double y) const {
        return static_cast<double>(digit.sign) / (y + a_lambda);
    }
    double deriv_abs(double y) const {
        double t = y + a_lambda;
        return 1.0 / (t * t);
    }
};

inline InverseBranch inverse_branch(const RosenParams& p, const Digit& d) {
    if (!digit_admissible(p, d))
        throw empty_cylinder_error("inverse_branch: inadmissible digit");
    return {d, static_cast<double>(d.a) * p.lambda};
}

// T(sigma): the non-full branch images are [T(sigma), sigma].
inline double boundary_image(const RosenParams& p) {
    return 2.0 / p.lambda - static_cast<double>(p.a_min) * p.lambda;
}

// Image of a branch: full interval except for the two clipped a_min branches.
inline Interval branch_image(const RosenParams& p, const Digit& d) {
    if (!digit_admissible(p, d))
        throw empty_cylinder_error("branch_image: inadmissible digit");
    if (d.a == p.a_min) return {boundary_image(p), p.sigma};
    return {-p.sigma, p.sigma};
}

// sup 1/|(T^n)'| <= gamma^{2n} and sup |(1/|(T^n)'|)'| <= 2g(1-g^{2n})/(1-g^2),
// with g = sigma < 1. The first bound is attained by products of orbit squares.
struct Lemma1Bounds {
    double sup_inv_deriv = 1.0;
    double sup_inv_deriv_slope = 0.0;
};

inline Lemma1Bounds lemma1_bounds(const RosenParams& p, int n) {
    if (n < 0) throw std::invalid_argument("lemma1_bounds: n must be >= 0");
    double g = p.sigma;
    double g2n = std::pow(g, 2.0 * n);
    Lemma1Bounds b;
    b.sup_inv_deriv = g2n;
    b.sup_inv_deriv_slope = 2.0 * g * (1.0 - g2n) / (1.0 - g * g);
    return b;
}

// 1/|(T^n)'(x)| along the orbit of x equals prod_{i<n} T^i(x)^2.
inline double inv_deriv_product(const RosenParams& p, double x, int n) {
    double prod = 1.0, cur = x;
    for (int i = 0; i < n; ++i) {
        prod *= cur * cur;
        cur = rosen_step(p, cur).x_next;  // 0 once the orbit terminates
    }
    return prod;
}

// Cylinder index a such that (y, y + eps) lies in cylinder a on the positive
// side, i.e. l_a <= y < r_a; y must sit in (0, sigma). fp-robust by probing.
inline long cylinder_index_above(const RosenParams& p, double y) {
    long a = static_cast<long>(std::ceil(1.0 / (p.lambda * y) - 0.5));
    if (a < p.a_min) a = p.a_min;
    while (a > p.a_min && cyl_left(p, a - 1) <= y) --a;
    while (cyl_left(p, a) > y) ++a;
    return a;
}

} // namespace rosen

#endif
