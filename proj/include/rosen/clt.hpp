#ifndef ROSEN_CLT_HPP
#define ROSEN_CLT_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "rosen/errors.hpp"
#include "rosen/map.hpp"
#include "rosen/parallel.hpp"
#include "rosen/rng.hpp"
#include "rosen/stats.hpp"
#include "rosen/ulam.hpp"

namespace rosen {

// Observables for Birkhoff sums. digit_capped is min(a(x), cap); the
// coboundary kind is u - u o T with u(x) = x, whose sums telescope and
// whose asymptotic variance is exactly zero.
enum class CostKind { digit_capped, constant, indicator, coboundary, const_except_leftmost };

struct Cost {
    CostKind kind = CostKind::digit_capped;
    double cap = 5.0;       // digit_capped
    double value = 1.0;     // constant / extra value on the leftmost branch
    Interval box{0.1, 0.3}; // indicator support
    double scale = 1.0;     // multiplies every kind

    double eval(const RosenParams& p, double x) const {
        return scale * base_eval(p, x);
    }

    double base_eval(const RosenParams& p, double x) const {
        switch (kind) {
            case CostKind::digit_capped: {
                if (std::fabs(x) < kZeroGuard) return cap;
                double a = static_cast<double>(digit_of(p, x).a);
                return std::min(a, cap);
            }
            case CostKind::constant:
                return value;
            case CostKind::indicator:
                return (x >= box.lo && x <= box.hi) ? 1.0 : 0.0;
            case CostKind::coboundary:
                return x - rosen_step(p, x).x_next;
            case CostKind::const_except_leftmost:
                // leftmost branch domain: the negative a_min cylinder
                return x < -cyl_left(p, p.a_min) ? value + 1.0 : value;
        }
        return 0.0;
    }

    // Discontinuities of the observable in (-sigma, sigma); fixed-point
    // witnesses must keep clear of them.
    std::vector<double> breakpoints(const RosenParams& p) const {
        std::vector<double> b;
        switch (kind) {
            case CostKind::digit_capped: {
                long cap_a = static_cast<long>(cap);
                for (long a = p.a_min; a <= cap_a; ++a) {
                    b.push_back(cyl_left(p, a));
                    b.push_back(-cyl_left(p, a));
                }
                break;
            }
            case CostKind::indicator:
                b.push_back(box.lo);
                b.push_back(box.hi);
                break;
            case CostKind::const_except_leftmost:
                b.push_back(-cyl_left(p, p.a_min));
                break;
            default:
                break;
        }
        return b;
    }

    std::string name() const {
        switch (kind) {
            case CostKind::digit_capped: return "digit-capped";
            case CostKind::constant: return "constant";
            case CostKind::indicator: return "indicator";
            case CostKind::coboundary: return "coboundary";
            case CostKind::const_except_leftmost: return "const-except-leftmost";
        }
        return "?";
    }
};

// Inverse-CDF sampler for a binned density.
class InvariantSampler {
public:
    InvariantSampler(const UlamOperator& U, const DensityResult& dens)
        : lo_(U.lo), w_(U.w) {
        cum_.resize(dens.density.size() + 1, 0.0);
        for (std::size_t i = 0; i < dens.density.size(); ++i)
            cum_[i + 1] = cum_[i] + dens.density[i] * U.w;
        double total = cum_.back();
        for (double& c : cum_) c /= total;
    }

    double sample(Stream& rng) const {
        double u = rng.uniform();
        auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
        std::size_t i = std::min(static_cast<std::size_t>(it - cum_.begin() - 1),
                                 cum_.size() - 2);
        double span = cum_[i + 1] - cum_[i];
        double frac = span > 0.0 ? (u - cum_[i]) / span : 0.5;
        return lo_ + (static_cast<double>(i) + frac) * w_;
    }

private:
    std::vector<double> cum_;
    double lo_, w_;
};

struct BirkhoffResult {
    double sum = 0.0;
    double sum_sq = 0.0;  // of per-step values
    bool hit_zero = false;
};

inline BirkhoffResult birkhoff_sum(const RosenParams& p, const Cost& cost, double x0,
                                   long n_steps) {
    BirkhoffResult r;
    double x = x0;
    for (long k = 0; k < n_steps; ++k) {
        if (std::fabs(x) < kZeroGuard && cost.kind != CostKind::constant) {
            r.hit_zero = true;
            return r;
        }
        double v = cost.eval(p, x);
        r.sum += v;
        r.sum_sq += v * v;
        x = rosen_step(p, x).x_next;
    }
    return r;
}

// sigma^2 estimate from the lag-windowed autocovariance of one long orbit.
inline double integrated_autocovariance(const RosenParams& p, const Cost& cost, double x0,
                                        long length, long lag_cut = 50) {
    std::vector<double> series;
    series.reserve(static_cast<std::size_t>(length));
    double x = x0;
    for (long k = 0; k < length; ++k) {
        if (std::fabs(x) < kZeroGuard) break;
        series.push_back(cost.eval(p, x));
        x = rosen_step(p, x).x_next;
    }
    if (series.size() < static_cast<std::size_t>(2 * lag_cut + 2))
        throw std::invalid_argument("integrated_autocovariance: orbit too short");
    double n = static_cast<double>(series.size());
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= n;
    double s2 = 0.0;
    for (long l = 0; l <= lag_cut; ++l) {
        double g = 0.0;
        for (std::size_t k = 0; k + static_cast<std::size_t>(l) < series.size(); ++k)
            g += (series[k] - mean) * (series[k + static_cast<std::size_t>(l)] - mean);
        g /= n;
        s2 += (l == 0) ? g : 2.0 * g;
    }
    return s2;
}

struct CltReport {
    long n_steps = 0;
    long trials = 0;
    double mean_hat = 0.0;        // pooled per-step mean
    double step_var_hat = 0.0;    // pooled per-step variance
    double sigma2_batch = 0.0;    // Var(S_N)/N across trials
    double sigma2_acv = 0.0;      // autocovariance route
    double degenerate_threshold = 0.0;
    double ks_d = 0.0;
    double ks_p = 0.0;
    long discarded = 0;
    std::vector<double> standardized;
};

// Birkhoff-sum CLT experiment: independent starts from the invariant
// density, standardized sums against the normal. Throws
// degenerate_variance_error when the variance estimate sits at the noise
// floor of a coboundary or constant observable.
inline CltReport clt_experiment(const RosenParams& p, const Cost& cost,
                                const UlamOperator& U, const DensityResult& dens,
                                long n_steps, long trials, std::uint64_t seed,
                                int workers = 1) {
    if (n_steps < 2 || trials < 8)
        throw std::invalid_argument("clt_experiment: need n_steps >= 2, trials >= 8");
    InvariantSampler sampler(U, dens);
    CltReport rep;
    rep.n_steps = n_steps;
    rep.trials = trials;
    std::vector<double> sums(static_cast<std::size_t>(trials), 0.0);
    std::vector<double> sums_sq(static_cast<std::size_t>(trials), 0.0);
    std::atomic<long> discarded{0};
    std::atomic<bool> starved{false};
    parallel_for(trials, workers, [&](long t) {
        Stream rng(seed, static_cast<std::uint64_t>(t));
        BirkhoffResult r;
        int tries = 0;
        do {
            r = birkhoff_sum(p, cost, sampler.sample(rng), n_steps);
            if (r.hit_zero) discarded.fetch_add(1);
        } while (r.hit_zero && ++tries < 100);
        if (r.hit_zero) {
            starved.store(true);
            return;
        }
        sums[static_cast<std::size_t>(t)] = r.sum;
        sums_sq[static_cast<std::size_t>(t)] = r.sum_sq;
    });
    rep.discarded = discarded.load();
    if (starved.load())
        throw convergence_error("clt_experiment: orbit generation starved", 0.0, trials);
    double pooled = 0.0, pooled_sq = 0.0;
    for (long t = 0; t < trials; ++t) {
        pooled += sums[static_cast<std::size_t>(t)];
        pooled_sq += sums_sq[static_cast<std::size_t>(t)];
    }
    double total_steps = static_cast<double>(n_steps) * static_cast<double>(trials);
    rep.mean_hat = pooled / total_steps;
    rep.step_var_hat = std::max(0.0, pooled_sq / total_steps - rep.mean_hat * rep.mean_hat);
    double nm = static_cast<double>(n_steps) * rep.mean_hat;
    double acc = 0.0;
    for (double s : sums) acc += (s - nm) * (s - nm);
    rep.sigma2_batch = acc / (static_cast<double>(trials - 1) * static_cast<double>(n_steps));
    rep.degenerate_threshold =
        std::max(1e-12, 10.0 * rep.step_var_hat / static_cast<double>(n_steps));
    if (rep.sigma2_batch < rep.degenerate_threshold)
        throw degenerate_variance_error("clt_experiment: asymptotic variance degenerate",
                                        rep.sigma2_batch, rep.degenerate_threshold);
    Stream acrng(seed, 0xACF0);
    rep.sigma2_acv = integrated_autocovariance(
        p, cost, sampler.sample(acrng), std::max<long>(200000, n_steps), 50);
    double sd = std::sqrt(rep.sigma2_batch * static_cast<double>(n_steps));
    rep.standardized.reserve(sums.size());
    for (double s : sums) rep.standardized.push_back((s - nm) / sd);
    rep.ks_d = ks_statistic(rep.standardized);
    rep.ks_p = ks_p_value(rep.ks_d, rep.standardized.size());
    return rep;
}

// ---- fixed points and the coboundary obstruction ----

struct FixedPointWitness {
    Digit digit;
    double x = 0.0;
    double f_value = 0.0;
    double diff = 0.0;       // f(x) - mean
    double clearance = 0.0;  // distance to the nearest guarded point
    bool clear = false;
};

// Period-1 fixed points of the branches: s/(x + a lambda) = x. The
// positive root always lands in its cylinder; the negative root needs
// a^2 lambda^2 > 4 and a cylinder check (the leftmost branch has none for
// q >= 4).
inline std::vector<FixedPointWitness> period_one_fixed_points(const RosenParams& p,
                                                              long a_scan = 50) {
    std::vector<FixedPointWitness> out;
    for (long a = p.a_min; a <= a_scan; ++a) {
        double al = static_cast<double>(a) * p.lambda;
        {
            double x = 0.5 * (-al + std::sqrt(al * al + 4.0));
            if (x > kZeroGuard && x <= p.sigma && digit_of(p, x) == Digit{1, a}) {
                FixedPointWitness w;
                w.digit = {1, a};
                w.x = x;
                out.push_back(w);
            }
        }
        double disc = al * al - 4.0;
        if (disc > 0.0) {
            double x = 0.5 * (-al + std::sqrt(disc));
            if (x < -kZeroGuard && x >= -p.sigma && digit_of(p, x) == Digit{-1, a}) {
                FixedPointWitness w;
                w.digit = {-1, a};
                w.x = x;
                out.push_back(w);
            }
        }
    }
    return out;
}

struct ConditionHReport {
    std::string label;  // evidence-against | evidence-degenerate | inconclusive
    double mean_hat = 0.0;
    double sigma2_batch = 0.0;
    double threshold = 0.0;
    std::vector<FixedPointWitness> witnesses;
};

// A coboundary f - m = u - u o T vanishes at every fixed point of T, so a
// fixed point with f(x*) - m clearly nonzero is evidence against the
// degenerate case. Witnesses too close to a discontinuity of f or to the
// forward orbit of a cylinder endpoint are not trusted.
inline ConditionHReport condition_h_check(const RosenParams& p, const Cost& cost,
                                          const UlamOperator& U, const DensityResult& dens,
                                          long n_steps = 2000, long trials = 2000,
                                          std::uint64_t seed = 42, long a_scan = 50) {
    ConditionHReport rep;
    InvariantSampler sampler(U, dens);
    double pooled = 0.0, pooled_sq = 0.0;
    std::vector<double> sums;
    for (long t = 0; t < trials; ++t) {
        Stream rng(seed, static_cast<std::uint64_t>(t) + 0x51D);
        BirkhoffResult r = birkhoff_sum(p, cost, sampler.sample(rng), n_steps);
        if (r.hit_zero) continue;
        sums.push_back(r.sum);
        pooled += r.sum;
        pooled_sq += r.sum_sq;
    }
    double total = static_cast<double>(n_steps) * static_cast<double>(sums.size());
    rep.mean_hat = pooled / total;
    double step_var = std::max(0.0, pooled_sq / total - rep.mean_hat * rep.mean_hat);
    double nm = static_cast<double>(n_steps) * rep.mean_hat;
    double acc = 0.0;
    for (double s : sums) acc += (s - nm) * (s - nm);
    rep.sigma2_batch =
        acc / (static_cast<double>(sums.size() - 1) * static_cast<double>(n_steps));
    rep.threshold = std::max(1e-12, 10.0 * step_var / static_cast<double>(n_steps));

    // guarded points: discontinuities of f, cylinder endpoints and their
    // forward orbits for a while
    std::vector<double> guarded = cost.breakpoints(p);
    for (long a = p.a_min; a <= a_scan; ++a) {
        for (double e0 : {cyl_left(p, a), -cyl_left(p, a)}) {
            double e = e0;
            for (int k = 0; k < 50; ++k) {
                guarded.push_back(e);
                if (std::fabs(e) < kZeroGuard) break;
                e = rosen_step(p, e).x_next;
            }
        }
    }
    rep.witnesses = period_one_fixed_points(p, a_scan);
    double best = 0.0;
    for (FixedPointWitness& w : rep.witnesses) {
        w.f_value = cost.eval(p, w.x);
        w.diff = w.f_value - rep.mean_hat;
        w.clearance = p.full_width();
        for (double gpt : guarded)
            w.clearance = std::min(w.clearance, std::fabs(w.x - gpt));
        w.clear = w.clearance > 1e-9;
        if (w.clear) best = std::max(best, std::fabs(w.diff));
    }
    if (best > 1e-3)
        rep.label = "evidence-against";
    else if (rep.sigma2_batch < rep.threshold)
        rep.label = "evidence-degenerate";
    else
        rep.label = "inconclusive";
    return rep;
}

} // namespace rosen

#endif
