#ifndef ROSEN_MIXING_HPP
#define ROSEN_MIXING_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rosen/errors.hpp"
#include "rosen/interval.hpp"
#include "rosen/map.hpp"

namespace rosen {

// How a single interval meets the cylinder partition; decides the shape of
// its image.
enum class StepKind {
    spans_zero,    // 0 interior: deep cylinders on both sides, image is everything
    full_next,     // contains a whole interior cylinder
    single_pos,    // one positive cylinder, image one interval
    single_neg,
    adjacent_pos,  // two adjacent positive cylinders, image two side-anchored intervals
    adjacent_neg,
};

inline const char* step_kind_name(StepKind k) {
    switch (k) {
        case StepKind::spans_zero: return "spans_zero";
        case StepKind::full_next: return "full_next";
        case StepKind::single_pos: return "single_pos";
        case StepKind::single_neg: return "single_neg";
        case StepKind::adjacent_pos: return "adjacent_pos";
        case StepKind::adjacent_neg: return "adjacent_neg";
    }
    return "?";
}

struct StepImage {
    StepKind kind = StepKind::full_next;
    bool full = false;
    IntervalSet set;
};

namespace detail {

inline double mix_branch_value(const RosenParams& p, double x) {
    double ax = std::fabs(x);
    double inv = 1.0 / ax;
    double a = std::floor(inv / p.lambda + 0.5);
    return std::clamp(inv - a * p.lambda, -p.sigma, p.sigma);
}

} // namespace detail

// Exact image T(J) of a subinterval, by digit span. Both endpoints in one
// cylinder: one interval. Adjacent cylinders: two pieces, the inner one
// anchored at -sigma, the outer at sigma. Any wider span contains a whole
// interior cylinder and covers everything next step.
inline StepImage image_of_interval(const RosenParams& p, const Interval& J) {
    if (J.lo < -p.sigma - 1e-12 || J.hi > p.sigma + 1e-12)
        throw std::domain_error("image_of_interval: interval leaves the domain");
    if (J.hi <= J.lo) throw std::invalid_argument("image_of_interval: empty interval");
    StepImage out;
    if (J.lo <= kZeroGuard && J.hi >= -kZeroGuard) {
        out.kind = StepKind::spans_zero;
        out.full = true;
        out.set.add({-p.sigma, p.sigma});
        return out;
    }
    // reduce to positive coordinates; mirrored intervals share their image
    bool neg = J.hi < 0.0;
    double u = neg ? -J.hi : J.lo;
    double v = neg ? -J.lo : J.hi;
    v = std::min(v, p.sigma);
    long au = digit_of(p, u).a;
    long av = digit_of(p, v).a;
    if (au == av) {
        out.kind = neg ? StepKind::single_neg : StepKind::single_pos;
        double y1 = detail::mix_branch_value(p, v);
        double y2 = detail::mix_branch_value(p, u);
        out.set.add({std::min(y1, y2), std::max(y1, y2)});
        return out;
    }
    if (au - av >= 2) {
        out.kind = StepKind::full_next;
        out.full = true;
        out.set.add({-p.sigma, p.sigma});
        return out;
    }
    out.kind = neg ? StepKind::adjacent_neg : StepKind::adjacent_pos;
    out.set.add({-p.sigma, detail::mix_branch_value(p, u)});
    out.set.add({detail::mix_branch_value(p, v), p.sigma});
    if (out.set.covers(-p.sigma, p.sigma, 1e-9)) out.full = true;
    return out;
}

// Reflect every component pinned at -sigma onto the right; T is even, so
// the folded set has the same forward images. Starting from one interval
// the folded state is always one interval again.
inline IntervalSet fold_left_components(const RosenParams& p, const IntervalSet& s) {
    IntervalSet out;
    for (const Interval& c : s.parts()) {
        if (c.lo <= -p.sigma + 1e-12)
            out.add({-c.hi, p.sigma});
        else
            out.add(c);
    }
    return out;
}

// Largest eps = 2^-j such that 1/sqrt(2) - eps still carries digit 1 and
// maps to a negative point. Exists for q >= 5; returns 0 when no dyadic
// eps works (q = 3, 4), and callers treat the threshold test as vacuous.
inline double epsilon_star(const RosenParams& p) {
    double target = 1.0 / std::sqrt(2.0);
    for (int j = 1; j <= 48; ++j) {
        double eps = std::ldexp(1.0, -j);
        double x = target - eps;
        if (x <= 0.0 || x > p.sigma) continue;
        if (digit_of(p, x).a != 1) continue;
        if (rosen_step(p, x).x_next < 0.0) return eps;
    }
    return 0.0;
}

enum class BadType { none, type_c, type_d };

// The troublesome two-cylinder intervals: both endpoints positive (type c)
// or both negative (type d) and inside (0, 1/sqrt(2) - eps*), where the
// folded image can lose up to half its length to overlap.
inline BadType classify_bad_type(const RosenParams& p, const Interval& J) {
    if (J.lo < 0.0 && J.hi > 0.0)
        throw std::invalid_argument("classify_bad_type: interval straddles 0");
    double u = J.hi < 0.0 ? -J.hi : J.lo;
    double v = J.hi < 0.0 ? -J.lo : J.hi;
    if (u <= 0.0) return BadType::none;
    double cap = 1.0 / std::sqrt(2.0) - epsilon_star(p);
    if (v >= cap) return BadType::none;
    if (digit_of(p, u).a != digit_of(p, v).a + 1) return BadType::none;
    return J.hi < 0.0 ? BadType::type_d : BadType::type_c;
}

struct MixingStep {
    Interval state;        // pre-image interval (already folded)
    StepKind kind = StepKind::full_next;
    BadType bad = BadType::none;
    double ratio_raw = 0.0;     // m(T(state)) / m(state), before folding
    double ratio_folded = 0.0;  // after folding the image
};

struct MixingTrace {
    std::vector<MixingStep> steps;
    long steps_to_full = 0;
    bool reached_full = false;
};

// Iterate T on a subinterval until the image covers the whole interval.
// Throws convergence_error when the cap is hit first.
inline MixingTrace iterate_until_full(const RosenParams& p, Interval J, long n_cap = 1000) {
    MixingTrace tr;
    for (long n = 1; n <= n_cap; ++n) {
        MixingStep st;
        st.state = J;
        if (J.lo > 0.0 || J.hi < 0.0) st.bad = classify_bad_type(p, J);
        StepImage im = image_of_interval(p, J);
        st.kind = im.kind;
        st.ratio_raw = im.set.measure() / J.length();
        IntervalSet folded = fold_left_components(p, im.set);
        st.ratio_folded = folded.measure() / J.length();
        tr.steps.push_back(st);
        if (im.full || folded.covers(-p.sigma, p.sigma, 1e-9)) {
            tr.steps_to_full = n;
            tr.reached_full = true;
            return tr;
        }
        if (folded.size() != 1)
            throw std::logic_error("iterate_until_full: folded state not an interval");
        J = folded.parts().front();
    }
    throw convergence_error("iterate_until_full: cap reached before covering", J.length(),
                            n_cap);
}

struct GrowthReport {
    double min_ratio = 0.0;           // folded, over all steps
    double min_single_ratio = 0.0;    // raw, single-cylinder steps
    double min_bad_folded = 0.0;      // folded, steps classified bad
    double single_bound = 0.0;        // 1 / sigma^2
    double bad_bound = 0.0;           // 1 / (2 (1/sqrt(2) - eps*)^2)
    bool ok = false;
};

// Check the per-step expansion claims along a trace. Any folded ratio at
// or below 1 contradicts the growth lemma and throws.
inline GrowthReport growth_factor_check(const RosenParams& p, const MixingTrace& tr) {
    GrowthReport r;
    double inf = std::numeric_limits<double>::infinity();
    r.min_ratio = inf;
    r.min_single_ratio = inf;
    r.min_bad_folded = inf;
    r.single_bound = 1.0 / (p.sigma * p.sigma);
    double cap = 1.0 / std::sqrt(2.0) - epsilon_star(p);
    r.bad_bound = 0.5 / (cap * cap);
    for (const MixingStep& st : tr.steps) {
        r.min_ratio = std::min(r.min_ratio, st.ratio_folded);
        if (st.kind == StepKind::single_pos || st.kind == StepKind::single_neg)
            r.min_single_ratio = std::min(r.min_single_ratio, st.ratio_raw);
        if (st.bad != BadType::none)
            r.min_bad_folded = std::min(r.min_bad_folded, st.ratio_folded);
    }
    if (r.min_ratio <= 1.0)
        throw theorem_violation_error("growth_factor_check: a step failed to expand");
    r.ok = (r.min_single_ratio >= r.single_bound - 1e-9) &&
           (r.min_bad_folded >= r.bad_bound - 1e-9);
    return r;
}

} // namespace rosen

#endif
