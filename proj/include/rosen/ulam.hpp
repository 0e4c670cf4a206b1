#ifndef ROSEN_ULAM_HPP
#define ROSEN_ULAM_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rosen/errors.hpp"
#include "rosen/map.hpp"
#include "rosen/rng.hpp"

namespace rosen {

// Ulam matrix on n equal bins over [-sigma, sigma]. Column-stochastic:
// entry(i,j) = m(B_j cap T^{-1} B_i) / m(B_j). Stored column-major so
// assembly and the axpy matvec both stream contiguously.
struct UlamOperator {
    RosenParams p;
    long n = 0;
    long a_max = 0;
    double lo = 0.0;
    double w = 0.0;
    std::vector<double> mat;

    double entry(long i, long j) const { return mat[static_cast<std::size_t>(j) * n + i]; }

    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        y.assign(static_cast<std::size_t>(n), 0.0);
        for (long j = 0; j < n; ++j) {
            double xj = x[static_cast<std::size_t>(j)];
            if (xj == 0.0) continue;
            const double* col = mat.data() + static_cast<std::size_t>(j) * n;
            for (long i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] += col[i] * xj;
        }
    }

    double bin_center(long i) const { return lo + (static_cast<double>(i) + 0.5) * w; }
};

namespace detail {

// Measure sent by the branch piece [pu, pv] (positive coordinates, digit a)
// into the target bins. Per-bin preimage lengths telescope, so each column
// sums to its assigned length exactly.
inline void scatter_piece(UlamOperator& U, long col, long a, double pu, double pv) {
    double al = static_cast<double>(a) * U.p.lambda;
    double y1 = 1.0 / pv - al;
    double y2 = 1.0 / pu - al;
    y1 = std::max(y1, -U.p.sigma);
    y2 = std::min(y2, U.p.sigma);
    if (y2 <= y1) return;
    long i1 = std::clamp(static_cast<long>((y1 - U.lo) / U.w), 0L, U.n - 1);
    long i2 = std::clamp(static_cast<long>((y2 - U.lo) / U.w), 0L, U.n - 1);
    double* colp = U.mat.data() + static_cast<std::size_t>(col) * U.n;
    double inv_w = 1.0 / U.w;
    for (long i = i1; i <= i2; ++i) {
        double z1 = std::max(y1, U.lo + static_cast<double>(i) * U.w);
        double z2 = std::min(y2, U.lo + static_cast<double>(i + 1) * U.w);
        if (z2 <= z1) continue;
        colp[i] += (1.0 / (z1 + al) - 1.0 / (z2 + al)) * inv_w;
    }
}

// Walk the cylinders covering the positive interval [alo, ahi].
inline void scatter_interval(UlamOperator& U, long col, double alo, double ahi) {
    if (ahi <= alo) return;
    long a = cylinder_index_above(U.p, std::min(ahi, U.p.sigma));
    for (; a <= U.a_max; ++a) {
        double la = cyl_left(U.p, a);
        double ra = cyl_right(U.p, a);
        if (ra <= alo) break;
        double pu = std::max(alo, la);
        double pv = std::min(ahi, ra);
        if (pv > pu) scatter_piece(U, col, a, pu, pv);
    }
}

} // namespace detail

// a_max truncates the cylinder walk; the untracked sliver of each central
// column (the part inside (-l_{a_max}, l_{a_max})) is spread uniformly over
// the rows, keeping columns stochastic to machine precision.
inline UlamOperator build_ulam(const RosenParams& p, long n, long a_max) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("build_ulam: bin count must be even and >= 2");
    if (a_max < p.a_min)
        throw std::invalid_argument("build_ulam: a_max below a_min");
    UlamOperator U;
    U.p = p;
    U.n = n;
    U.a_max = a_max;
    U.lo = -p.sigma;
    U.w = p.lambda / static_cast<double>(n);
    U.mat.assign(static_cast<std::size_t>(n) * n, 0.0);
    double l_deep = cyl_left(p, a_max);
    for (long j = 0; j < n; ++j) {
        double u = U.lo + static_cast<double>(j) * U.w;
        double v = (j == n - 1) ? p.sigma : U.lo + static_cast<double>(j + 1) * U.w;
        if (v > 0.0) detail::scatter_interval(U, j, std::max(u, 0.0), v);
        if (u < 0.0) detail::scatter_interval(U, j, std::max(-v, 0.0), -u);
        double miss_lo = std::max(u, -l_deep);
        double miss_hi = std::min(v, l_deep);
        if (miss_hi > miss_lo) {
            double share = (miss_hi - miss_lo) / U.w / static_cast<double>(n);
            double* colp = U.mat.data() + static_cast<std::size_t>(j) * n;
            for (long i = 0; i < n; ++i) colp[i] += share;
        }
    }
    return U;
}

// Invariant density by power iteration on the probability simplex.
// density[] integrates to 1 over [-sigma, sigma]; residual is the L1
// distance between consecutive probability vectors.
struct DensityResult {
    std::vector<double> density;
    double residual = 0.0;
    long iterations = 0;
};

inline DensityResult invariant_density(const UlamOperator& U, double tol = 1e-10,
                                       long max_iter = 20000) {
    std::size_t n = static_cast<std::size_t>(U.n);
    std::vector<double> prob(n, 1.0 / static_cast<double>(U.n)), next;
    double residual = 0.0;
    long it = 0;
    for (; it < max_iter; ++it) {
        U.apply(prob, next);
        double s = 0.0;
        for (double x : next) s += x;
        for (double& x : next) x /= s;
        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) residual += std::fabs(next[i] - prob[i]);
        prob.swap(next);
        if (residual < tol) break;
    }
    if (residual >= tol)
        throw convergence_error("invariant_density: power iteration stalled", residual, it);
    DensityResult r;
    r.density.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.density[i] = prob[i] / U.w;
    r.residual = residual;
    r.iterations = it + 1;
    return r;
}

struct SpectralReport {
    double lambda2_abs = 0.0;
    double gap = 0.0;
    long iterations = 0;
    std::string method;
};

namespace detail {

struct TwoStepFit {
    double est = 0.0;
    bool ok = false;
};

// Fit g_{m+2} = alpha g_{m+1} + beta g_m over the window and take the
// dominant root of z^2 - alpha z - beta. A complex pair lands on
// sqrt(-beta); a single real eigenvalue makes the fit degenerate and the
// caller falls back to the ratio estimate.
inline TwoStepFit fit_two_step(const std::vector<std::vector<double>>& u,
                               const std::vector<double>& r) {
    std::size_t m = u.size();
    if (m < 4) return {};
    std::size_t n = u[0].size();
    std::vector<double> scale(m, 1.0);
    for (std::size_t k = 1; k < m; ++k) scale[k] = scale[k - 1] * r[k - 1];
    double s11 = 0, s10 = 0, s00 = 0, b1 = 0, b0 = 0;
    for (std::size_t k = 0; k + 2 < m; ++k) {
        double c0 = scale[k], c1 = scale[k + 1], c2 = scale[k + 2];
        double d11 = 0, d10 = 0, d00 = 0, e1 = 0, e0 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double v0 = u[k][i] * c0, v1 = u[k + 1][i] * c1, v2 = u[k + 2][i] * c2;
            d11 += v1 * v1;
            d10 += v1 * v0;
            d00 += v0 * v0;
            e1 += v2 * v1;
            e0 += v2 * v0;
        }
        s11 += d11;
        s10 += d10;
        s00 += d00;
        b1 += e1;
        b0 += e0;
    }
    double det = s11 * s00 - s10 * s10;
    if (det <= 1e-12 * s11 * s00) return {};
    double alpha = (b1 * s00 - b0 * s10) / det;
    double beta = (b0 * s11 - b1 * s10) / det;
    double disc = alpha * alpha + 4.0 * beta;
    TwoStepFit f;
    f.ok = true;
    if (disc >= 0.0) {
        double rt = std::sqrt(disc);
        f.est = std::max(std::fabs(0.5 * (alpha + rt)), std::fabs(0.5 * (alpha - rt)));
    } else {
        f.est = std::sqrt(-beta);
    }
    return f;
}

} // namespace detail

// |lambda_2| of a column-stochastic operator given its fixed probability
// vector p1. Deflated power iteration: v -> Av - p1 (1^T v) keeps iterates
// in the complement of the top eigenspace.
template <class ApplyFn>
SpectralReport estimate_second_eigenvalue(long n, ApplyFn&& apply_op,
                                          const std::vector<double>& p1,
                                          std::uint64_t seed = 42, long max_iter = 3000,
                                          double tol = 1e-6) {
    const std::size_t window = 10;
    std::size_t sn = static_cast<std::size_t>(n);
    Stream rng(seed, 9001);
    std::vector<double> g(sn), next(sn);
    for (double& x : g) x = rng.uniform(-1.0, 1.0);
    auto project = [&](std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        for (std::size_t i = 0; i < sn; ++i) v[i] -= p1[i] * s;
    };
    auto norm2 = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(s);
    };
    project(g);
    double ng = norm2(g);
    if (ng == 0.0) return {0.0, 1.0, 0, "degenerate"};
    for (double& x : g) x /= ng;

    std::vector<std::vector<double>> hist;
    std::vector<double> ratios;
    hist.push_back(g);
    double est = 0.0, prev_est = -1.0;
    long it = 0;
    int stable = 0;
    std::string method = "recurrence";
    for (; it < max_iter; ++it) {
        apply_op(g, next);
        project(next);
        double r = norm2(next);
        if (r < 1e-200) return {0.0, 1.0, it, "collapsed"};
        for (std::size_t i = 0; i < sn; ++i) next[i] /= r;
        g = next;
        ratios.push_back(r);
        hist.push_back(g);
        if (hist.size() > window + 2) {
            hist.erase(hist.begin());
            ratios.erase(ratios.begin());
        }
        if (hist.size() < window + 2 || it % 5 != 0) continue;
        detail::TwoStepFit fit = detail::fit_two_step(hist, ratios);
        if (fit.ok) {
            est = fit.est;
            method = "recurrence";
        } else {
            double lg = 0.0;
            for (double rr : ratios) lg += std::log(std::max(rr, 1e-300));
            est = std::exp(lg / static_cast<double>(ratios.size()));
            method = "ratio";
        }
        if (prev_est >= 0.0 && std::fabs(est - prev_est) < tol) {
            if (++stable >= 2) break;
        } else {
            stable = 0;
        }
        prev_est = est;
    }
    if (stable < 2 && it >= max_iter)
        throw convergence_error("estimate_second_eigenvalue: estimate did not settle",
                                std::fabs(est - prev_est), it);
    SpectralReport rep;
    rep.lambda2_abs = est;
    rep.gap = 1.0 - est;
    rep.iterations = it + 1;
    rep.method = method;
    return rep;
}

inline SpectralReport spectral_gap(const UlamOperator& U, const DensityResult& dens,
                                   std::uint64_t seed = 42, long max_iter = 3000,
                                   double tol = 1e-6) {
    std::vector<double> p1(dens.density.size());
    for (std::size_t i = 0; i < p1.size(); ++i) p1[i] = dens.density[i] * U.w;
    return estimate_second_eigenvalue(
        U.n, [&U](const std::vector<double>& x, std::vector<double>& y) { U.apply(x, y); },
        p1, seed, max_iter, tol);
}

} // namespace rosen

#endif
