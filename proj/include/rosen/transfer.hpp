#ifndef ROSEN_TRANSFER_HPP
#define ROSEN_TRANSFER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "rosen/map.hpp"
#include "rosen/piecewise.hpp"
#include "rosen/trigamma.hpp"

namespace rosen {

// (Hf)(x) = sum_{branches} |h'(x)| f(h(x)) over branches whose image
// contains x, truncated at digit a_max. Both signs of a digit share the
// weight (x + a lambda)^{-2} and, for a = a_min, the clipped image.
inline double apply_transfer(const RosenParams& p, const PiecewiseFn& f, double x,
                             long a_max) {
    if (std::fabs(x) > p.sigma + 1e-12)
        throw std::domain_error("apply_transfer: x outside the interval");
    if (a_max < p.a_min)
        throw std::invalid_argument("apply_transfer: a_max below a_min");
    double c = boundary_image(p);
    double sum = 0.0;
    for (long a = p.a_min; a <= a_max; ++a) {
        if (a == p.a_min && x < c) continue;
        double d = x + static_cast<double>(a) * p.lambda;
        sum += (f(1.0 / d) + f(-1.0 / d)) / (d * d);
    }
    return sum;
}

// Rigorous bound on the mass dropped by truncating at a_max:
// sum_{a>a_max} 2 sup|f| (a lambda - sigma)^{-2} <= 2 sup|f| / (lambda^2 (a_max - 1/2)).
inline double tail_bound(const RosenParams& p, long a_max, double sup_f) {
    return 2.0 * sup_f / (p.lambda * p.lambda * (static_cast<double>(a_max) - 0.5));
}

// Exact evaluator for piecewise-constant f. Branches are grouped into runs
// of cylinders free of breakpoints of f; each run sums analytically via
// trigamma differences, so the full series costs O(#breakpoints) per point.
class TransferPlan {
public:
    TransferPlan(const RosenParams& p, const PiecewiseFn& f) : p_(p), f_(f) {
        check_piecewise(f);
        if (!f.is_constant())
            throw std::invalid_argument("TransferPlan: requires piecewise-constant f");
        c_ = boundary_image(p);
        for (int side = 0; side < 2; ++side) build_side(side);
    }

    const RosenParams& params() const { return p_; }
    const PiecewiseFn& fn() const { return f_; }

    double operator()(double x) const {
        double inv_l2 = 1.0 / (p_.lambda * p_.lambda);
        double t = x / p_.lambda;
        double total = 0.0;
        for (int side = 0; side < 2; ++side) {
            double sgn = side == 0 ? 1.0 : -1.0;
            for (const Run& r : runs_[side])
                total += r.value * inverse_square_run(t, r.a_lo, r.a_hi) * inv_l2;
            for (long a : specials_[side]) {
                double d = x + static_cast<double>(a) * p_.lambda;
                total += f_(sgn / d) / (d * d);
            }
        }
        if (x < c_) {  // remove the clipped a_min branches outside their image
            double d = x + static_cast<double>(p_.a_min) * p_.lambda;
            total -= (f_(1.0 / d) + f_(-1.0 / d)) / (d * d);
        }
        return total;
    }

private:
    struct Run {
        long a_lo;
        long a_hi;  // inclusive; -1 means unbounded
        double value;
    };

    void build_side(int side) {
        double sgn = side == 0 ? 1.0 : -1.0;
        // interior breakpoints on this side, as distances from 0, outermost first
        std::vector<double> us;
        for (std::size_t i = 1; i + 1 < f_.edges.size(); ++i) {
            double e = f_.edges[i];
            if (sgn * e <= kZeroGuard) continue;
            if (std::fabs(e) >= p_.sigma) continue;
            us.push_back(std::fabs(e));
        }
        std::sort(us.rbegin(), us.rend());
        long cursor = p_.a_min;
        double prev_u = p_.sigma;
        for (double u : us) {
            long alpha = digit_of(p_, u).a;
            if (alpha > cursor)
                runs_[side].push_back({cursor, alpha - 1, f_(sgn * 0.5 * (u + prev_u))});
            if (specials_[side].empty() || specials_[side].back() != alpha)
                specials_[side].push_back(alpha);
            cursor = std::max(cursor, alpha + 1);
            prev_u = u;
        }
        runs_[side].push_back({cursor, -1, f_(sgn * 0.5 * prev_u)});
    }

    RosenParams p_;
    PiecewiseFn f_;
    double c_ = 0.0;
    std::vector<Run> runs_[2];
    std::vector<long> specials_[2];
};

// Chain of uniform-grid samplings of Hf, H^2 f, ..., H^k f with linear
// interpolation between nodes. Every level knows which cells straddle one
// of its (finitely many) jumps and falls back to honest evaluation there:
// level 1 to the exact plan, deeper levels to the branch-sum formula over
// the level below. Deep branches beyond a_explicit are closed with the
// previous level's limits at 0 and a trigamma tail weight; the budget
// tracks what that approximation can cost in sup norm.
class TransferChain {
public:
    TransferChain(const RosenParams& p, const PiecewiseFn& f, int k, long grid_n,
                  long a_explicit = 128)
        : p_(p), plan_(p, f), k_(k), n_(grid_n), a_expl_(a_explicit) {
        if (k < 1) throw std::invalid_argument("TransferChain: k must be positive");
        lo_ = -p.sigma;
        dx_ = p.lambda / static_cast<double>(grid_n - 1);
        levels_.resize(static_cast<std::size_t>(k));

        std::vector<double> jumps;
        jumps.push_back(boundary_image(p));
        for (std::size_t i = 1; i + 1 < f.edges.size(); ++i) {
            double b = f.edges[i];
            if (std::fabs(b) < kZeroGuard) continue;
            jumps.push_back(rosen_step(p, b).x_next);
        }
        fill_level(0, jumps);
        budget_ = 1e-9;
        double growth = sup_weight();
        for (int j = 1; j < k; ++j) {
            std::vector<double> next_jumps;
            next_jumps.push_back(boundary_image(p));
            for (double y : jumps)
                if (std::fabs(y) >= kZeroGuard)
                    next_jumps.push_back(rosen_step(p, y).x_next);
            jumps = next_jumps;
            fill_level(j, jumps);
            budget_ = growth * budget_ + own_budget(j);
        }
    }

    const std::vector<double>& values() const { return levels_.back().v; }
    double budget() const { return budget_; }

    double eval(int level, double y) const {
        const Level& L = levels_[static_cast<std::size_t>(level)];
        double s = (y - lo_) / dx_;
        long i = static_cast<long>(s);
        if (i < 0) i = 0;
        if (i > n_ - 2) i = n_ - 2;
        if (L.jumpy[static_cast<std::size_t>(i)])
            return level == 0 ? plan_(y) : formula(level, y);
        double w = s - static_cast<double>(i);
        return L.v[static_cast<std::size_t>(i)] * (1.0 - w) +
               L.v[static_cast<std::size_t>(i + 1)] * w;
    }

private:
    struct Level {
        std::vector<double> v;
        std::vector<std::uint8_t> jumpy;
        double lim_pos = 0.0, lim_neg = 0.0;
    };

    // H applied to level-1 values at a single point (levels >= 1)
    double formula(int level, double x) const {
        const Level& prev = levels_[static_cast<std::size_t>(level - 1)];
        double c = boundary_image(p_);
        double inv_l2 = 1.0 / (p_.lambda * p_.lambda);
        double sum = 0.0;
        for (long a = p_.a_min; a <= a_expl_; ++a) {
            if (a == p_.a_min && x < c) continue;
            double d = x + static_cast<double>(a) * p_.lambda;
            sum += (eval(level - 1, 1.0 / d) + eval(level - 1, -1.0 / d)) / (d * d);
        }
        sum += (prev.lim_pos + prev.lim_neg) *
               trigamma(x / p_.lambda + static_cast<double>(a_expl_) + 1.0) * inv_l2;
        return sum;
    }

    void fill_level(int j, const std::vector<double>& jumps) {
        Level& L = levels_[static_cast<std::size_t>(j)];
        L.jumpy.assign(static_cast<std::size_t>(n_ - 1), 0);
        for (double y : jumps) {
            long i = static_cast<long>((y - lo_) / dx_);
            for (long m = i - 1; m <= i + 1; ++m)
                if (m >= 0 && m < n_ - 1) L.jumpy[static_cast<std::size_t>(m)] = 1;
        }
        L.v.resize(static_cast<std::size_t>(n_));
        for (long i = 0; i < n_; ++i) {
            double x = (i == n_ - 1) ? p_.sigma : lo_ + static_cast<double>(i) * dx_;
            L.v[static_cast<std::size_t>(i)] = j == 0 ? plan_(x) : formula(j, x);
        }
        L.lim_pos = j == 0 ? plan_(1e-9) : formula(j, 1e-9);
        L.lim_neg = j == 0 ? plan_(-1e-9) : formula(j, -1e-9);
    }

    // sup over grid of the total branch weight; controls how previous-level
    // sup errors propagate through one application
    double sup_weight() const {
        double inv_l2 = 1.0 / (p_.lambda * p_.lambda);
        double c = boundary_image(p_);
        double best = 0.0;
        for (long i = 0; i < 64; ++i) {
            double x = lo_ + (static_cast<double>(i) + 0.5) * (p_.lambda / 64.0);
            double lead = x < c ? trigamma(x / p_.lambda + static_cast<double>(p_.a_min) + 1.0)
                                : trigamma(x / p_.lambda + static_cast<double>(p_.a_min));
            best = std::max(best, 2.0 * lead * inv_l2);
        }
        return best;
    }

    double own_budget(int j) const {
        const Level& prev = levels_[static_cast<std::size_t>(j - 1)];
        double edge = cyl_left(p_, a_expl_);
        double osc = 0.0;
        for (double fr : {0.9, 0.5, 0.1}) {
            osc = std::max(osc, std::fabs(eval(j - 1, edge * fr) - prev.lim_pos));
            osc = std::max(osc, std::fabs(eval(j - 1, -edge * fr) - prev.lim_neg));
        }
        double tail_mass =
            trigamma(static_cast<double>(a_expl_) + 1.0 - p_.sigma / p_.lambda) /
            (p_.lambda * p_.lambda);
        return 4.0 * osc * tail_mass + 1e-4 + 1e-7;
    }

    RosenParams p_;
    TransferPlan plan_;
    int k_;
    long n_;
    long a_expl_;
    double lo_ = 0.0, dx_ = 0.0;
    double budget_ = 0.0;
    std::vector<Level> levels_;
};

// H^k f sampled on a uniform grid, with the sup-norm error budget of the
// approximations made along the way.
struct GridRealization {
    std::vector<double> values;
    double budget = 0.0;
};

inline GridRealization hk_grid_values(const RosenParams& p, const PiecewiseFn& f, int k,
                                      long grid_n, long a_explicit = 128) {
    TransferChain chain(p, f, k, grid_n, a_explicit);
    return {chain.values(), chain.budget()};
}

// Two-route check of int f(Tx) g(x) dx = int f(y) (Hg)(y) dy for piecewise
// constants. The forward route never touches H: it integrates f(Tx)g(x)
// exactly over branch pieces down to a_cut, with an analytic remainder for
// the middle. The operator route integrates f * Hg by composite midpoint
// with nodes allocated per smooth segment of Hg.
struct DualityReport {
    double forward_integral = 0.0;
    double operator_integral = 0.0;
    double abs_diff = 0.0;
};

inline DualityReport duality_check(const RosenParams& p, const PiecewiseFn& f,
                                   const PiecewiseFn& g, long nodes = 1000000,
                                   long a_cut = 100000) {
    check_piecewise(f);
    check_piecewise(g);
    if (!f.is_constant() || !g.is_constant())
        throw std::invalid_argument("duality_check: requires piecewise-constant f, g");

    // ---- forward route ----
    // ensure g is constant on the analytic remainder region (-l_acut, l_acut)
    long a_eff = a_cut;
    for (std::size_t i = 1; i + 1 < g.edges.size(); ++i) {
        double e = std::fabs(g.edges[i]);
        if (e > kZeroGuard)
            a_eff = std::max(a_eff, digit_of(p, e).a + 1);
    }
    double lhs = 0.0;
    std::vector<double> cuts;
    for (int side = 0; side < 2; ++side) {
        double sgn = side == 0 ? 1.0 : -1.0;
        for (long a = p.a_min; a <= a_eff; ++a) {
            double xlo, xhi;
            if (side == 0) {
                xlo = cyl_left(p, a);
                xhi = cyl_right(p, a);
            } else {
                xlo = -cyl_right(p, a);
                xhi = -cyl_left(p, a);
            }
            cuts.clear();
            cuts.push_back(xlo);
            cuts.push_back(xhi);
            for (std::size_t i = 1; i + 1 < g.edges.size(); ++i) {
                double e = g.edges[i];
                if (e > xlo && e < xhi) cuts.push_back(e);
            }
            double al = static_cast<double>(a) * p.lambda;
            for (std::size_t i = 1; i + 1 < f.edges.size(); ++i) {
                double pre = sgn / (f.edges[i] + al);
                if (pre > xlo && pre < xhi) cuts.push_back(pre);
            }
            std::sort(cuts.begin(), cuts.end());
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
                double u = cuts[i], v = cuts[i + 1];
                if (v - u <= 0.0) continue;
                double mid = 0.5 * (u + v);
                double ty = sgn / mid - al;  // |1/x| - a lambda on this side
                lhs += (v - u) * f(ty) * g(mid);
            }
        }
    }
    // remainder: g is g(0+-) there; the pushed-forward weight of the deep
    // branches is trigamma((y/lambda) + a_eff + 1) / lambda^2 per sign
    double gz_pos = g(0.5 * cyl_left(p, a_eff));
    double gz_neg = g(-0.5 * cyl_left(p, a_eff));
    double inv_l2 = 1.0 / (p.lambda * p.lambda);
    double rem = 0.0;
    for (std::size_t i = 0; i < f.pieces(); ++i) {
        double a0 = f.edges[i], b0 = f.edges[i + 1];
        const int kq = 32;
        double h = (b0 - a0) / kq, acc = 0.0;
        for (int j = 0; j < kq; ++j) {
            double y = a0 + (j + 0.5) * h;
            acc += trigamma(y / p.lambda + static_cast<double>(a_eff) + 1.0);
        }
        rem += f.values[i] * acc * h * inv_l2;
    }
    lhs += (gz_pos + gz_neg) * rem;

    // ---- operator route ----
    TransferPlan gplan(p, g);
    std::vector<double> seg;
    seg.push_back(-p.sigma);
    seg.push_back(p.sigma);
    seg.push_back(boundary_image(p));
    for (std::size_t i = 1; i + 1 < f.edges.size(); ++i) seg.push_back(f.edges[i]);
    for (std::size_t i = 1; i + 1 < g.edges.size(); ++i) {
        double b = g.edges[i];
        if (std::fabs(b) < kZeroGuard) continue;
        double tb = rosen_step(p, b).x_next;
        if (std::fabs(tb) < p.sigma) seg.push_back(tb);
    }
    std::sort(seg.begin(), seg.end());
    seg.erase(std::unique(seg.begin(), seg.end(),
                          [](double a, double b) { return std::fabs(a - b) < kMergeTol; }),
              seg.end());
    double rhs = 0.0;
    for (std::size_t i = 0; i + 1 < seg.size(); ++i) {
        double u = seg[i], v = seg[i + 1];
        double len = v - u;
        if (len <= 0.0) continue;
        long nk = std::max<long>(32, static_cast<long>(static_cast<double>(nodes) * len / p.lambda));
        double h = len / static_cast<double>(nk), acc = 0.0;
        for (long j = 0; j < nk; ++j) {
            double x = u + (static_cast<double>(j) + 0.5) * h;
            acc += f(x) * gplan(x);
        }
        rhs += acc * h;
    }

    return {lhs, rhs, std::fabs(lhs - rhs)};
}

} // namespace rosen

#endif
