#ifndef ROSEN_BV_HPP
#define ROSEN_BV_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "rosen/map.hpp"
#include "rosen/piecewise.hpp"
#include "rosen/transfer.hpp"

namespace rosen {

// Variation over the open interval: interior jumps only, endpoint values
// do not contribute.
inline double total_variation(const PiecewiseFn& f) {
    check_piecewise(f);
    if (!f.is_constant())
        throw std::invalid_argument("total_variation: requires piecewise-constant f");
    double v = 0.0;
    for (std::size_t i = 0; i + 1 < f.values.size(); ++i)
        v += std::fabs(f.values[i + 1] - f.values[i]);
    return v;
}

// Variation of the piecewise-linear interpolant through grid samples.
// Never exceeds the variation of the sampled function.
inline double grid_variation(const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) s += std::fabs(v[i + 1] - v[i]);
    return s;
}

namespace detail {

// Images of the depth-n inverse branches, found by breadth-first search on
// intervals. Only three kinds of successor exist: the full interval (from
// any contained interior cylinder), the clipped image [T(sigma), sigma]
// (from a contained a_min cylinder), and the images of the at-most-two
// partial pieces at interior endpoints. Everything else repeats those.
struct ImageBfs {
    const RosenParams& p;
    double c;  // T(sigma)

    explicit ImageBfs(const RosenParams& pp) : p(pp), c(boundary_image(pp)) {}

    // branch value s/x - a*lambda in extended precision; endpoints close to
    // zero would otherwise cancel catastrophically
    double branch_value(double x) const {
        long double ax = std::fabs(static_cast<long double>(x));
        long double inv = 1.0L / ax;
        long double al = std::floor(inv / static_cast<long double>(p.lambda) + 0.5L) *
                         static_cast<long double>(p.lambda);
        double y = static_cast<double>(inv - al);
        return std::clamp(y, -p.sigma, p.sigma);
    }

    // image of the partial piece starting at interior point t and extending
    // toward the rest of the interval (away from t's side of its cylinder)
    Interval partial_image(double t) const {
        double y = branch_value(t);
        if (t > 0.0) return {-p.sigma, y};  // positive branches decrease
        return {y, p.sigma};
    }

    std::vector<Interval> successors(const Interval& J) const {
        std::vector<Interval> out;
        double a = J.lo, b = J.hi;
        // single-cylinder case: both endpoints interior and in one cylinder
        if (a > -p.sigma + 1e-14 && b < p.sigma - 1e-14 && a * b > 0.0 &&
            std::fabs(a) > kZeroGuard && std::fabs(b) > kZeroGuard) {
            double u = std::fabs(a) < std::fabs(b) ? std::fabs(a) : std::fabs(b);
            double v = std::fabs(a) < std::fabs(b) ? std::fabs(b) : std::fabs(a);
            if (digit_of(p, u).a == digit_of(p, v).a) {
                double y1 = branch_value(a), y2 = branch_value(b);
                out.push_back({std::min(y1, y2), std::max(y1, y2)});
                return out;
            }
        }
        bool full = false, clipped = false;
        auto scan_side = [&](double plo, double phi) {
            // positive coordinates [plo, phi], phi > plo >= 0
            if (phi <= plo || phi <= kZeroGuard) return;
            long a_start = phi >= p.sigma - 1e-14 ? p.a_min : digit_of(p, phi).a + 1;
            long a0 = std::max(a_start, static_cast<long>(p.a_min) + 1);
            if (cyl_left(p, a0) >= plo - 1e-15) full = true;
            if (a_start == p.a_min && plo <= cyl_left(p, p.a_min) + 1e-15) clipped = true;
        };
        scan_side(std::max(a, 0.0), b);
        scan_side(std::max(-b, 0.0), -a);
        if (full) out.push_back({-p.sigma, p.sigma});
        if (clipped) out.push_back({c, p.sigma});
        if (a > -p.sigma + 1e-14 && std::fabs(a) > kZeroGuard) out.push_back(partial_image(a));
        // the piece ending at b mirrors a leading piece at -b, and mirrored
        // sets share their image because T is even
        if (b < p.sigma - 1e-14 && std::fabs(b) > kZeroGuard) out.push_back(partial_image(-b));
        return out;
    }
};

} // namespace detail

// eps[n] = smallest Lebesgue measure of a depth-n branch image, n = 0..n_max.
inline std::vector<double> epsilon_sequence(const RosenParams& p, int n_max) {
    detail::ImageBfs bfs(p);
    auto key = [](const Interval& J) {
        return std::pair<long long, long long>(std::llround(J.lo * 1e12),
                                               std::llround(J.hi * 1e12));
    };
    std::map<std::pair<long long, long long>, std::vector<Interval>> memo;
    std::vector<Interval> cur = {{-p.sigma, p.sigma}};
    std::vector<double> eps;
    eps.push_back(p.full_width());
    for (int n = 1; n <= n_max; ++n) {
        std::map<std::pair<long long, long long>, Interval> next;
        for (const Interval& J : cur) {
            auto k = key(J);
            auto it = memo.find(k);
            if (it == memo.end()) it = memo.emplace(k, bfs.successors(J)).first;
            for (const Interval& S : it->second) next.emplace(key(S), S);
        }
        cur.clear();
        double m = p.full_width();
        for (auto& [kk, J] : next) {
            cur.push_back(J);
            m = std::min(m, J.length());
        }
        eps.push_back(m);
    }
    return eps;
}

// Constants of the variation inequality var(H^k f) <= rho var(f) + M0 |f|_1,
// with k the smallest power making rho = 2 sigma^{2k} contractive.
struct LYConstants {
    int k = 0;
    double rho = 0.0;
    double slope = 0.0;  // sup |d/dx 1/|(T^k)'|| bound
    double M0 = 0.0;
    double M = 0.0;   // single-step constant for the iterated inequality
    double C = 0.0;   // uniform bound M / (1 - rho)
    double D = 0.0;   // bound on var of the transferred indicator terms
    std::vector<double> eps;
};

inline LYConstants ly_constants(const RosenParams& p) {
    LYConstants c;
    double g2 = p.sigma * p.sigma;
    int k = 1;
    while (2.0 * std::pow(g2, k) >= 1.0) ++k;
    c.k = k;
    c.rho = 2.0 * std::pow(g2, k);
    c.slope = 2.0 * p.sigma * (1.0 - std::pow(g2, k)) / (1.0 - g2);
    c.eps = epsilon_sequence(p, k);
    c.M0 = c.slope + 1.0 / c.eps[static_cast<std::size_t>(k)];
    c.M = c.M0 + 1.0 - c.rho;
    c.C = c.M / (1.0 - c.rho);
    double inv_eps = 0.0;
    for (int j = 0; j < k; ++j)
        inv_eps = std::max(inv_eps, 1.0 / c.eps[static_cast<std::size_t>(j)]);
    c.D = 2.0 + 2.0 * p.sigma / (1.0 - g2) + inv_eps;
    return c;
}

struct LYReport {
    LYConstants consts;
    double var_f = 0.0;
    double l1_f = 0.0;
    double lhs_var = 0.0;  // grid variation of H^k f
    double rhs = 0.0;      // rho var(f) + M0 |f|_1
    double budget = 0.0;   // numerical slack granted to the left side
    bool holds = false;
};

inline LYReport ly_check(const RosenParams& p, const PiecewiseFn& f, long grid_n = 1 << 16,
                         long a_explicit = 128) {
    LYReport r;
    r.consts = ly_constants(p);
    r.var_f = total_variation(f);
    r.l1_f = l1_norm(f);
    GridRealization g = hk_grid_values(p, f, r.consts.k, grid_n, a_explicit);
    r.lhs_var = grid_variation(g.values);
    r.budget = g.budget;
    r.rhs = r.consts.rho * r.var_f + r.consts.M0 * r.l1_f;
    r.holds = r.lhs_var <= r.rhs + r.budget;
    return r;
}

} // namespace rosen

#endif
