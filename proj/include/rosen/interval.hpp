#ifndef ROSEN_INTERVAL_HPP
#define ROSEN_INTERVAL_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "rosen/params.hpp"

namespace rosen {

// Closed interval [lo, hi]; endpoint conventions (open/closed at a cylinder
// edge) are measure-zero and tracked by the callers that care.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool empty(double tol = 0.0) const { return hi - lo <= tol; }
    bool contains(double x) const { return lo <= x && x <= hi; }
};

inline Interval intersect(const Interval& a, const Interval& b) {
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

// Disjoint union of intervals, kept sorted; adjacent components closer than
// the merge tolerance are coalesced.
class IntervalSet {
public:
    IntervalSet() = default;
    explicit IntervalSet(Interval iv) { add(iv); }

    void add(Interval iv) {
        if (iv.hi <= iv.lo) return;
        parts_.push_back(iv);
        normalize();
    }

    void clear() { parts_.clear(); }

    const std::vector<Interval>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    std::size_t size() const { return parts_.size(); }

    double measure() const {
        double m = 0.0;
        for (const auto& iv : parts_) m += iv.length();
        return m;
    }

    // Covers [lo, hi] as a single component up to tol at each end.
    bool covers(double lo, double hi, double tol = kMergeTol) const {
        if (parts_.size() != 1) return false;
        return parts_[0].lo <= lo + tol && parts_[0].hi >= hi - tol;
    }

private:
    void normalize() {
        std::sort(parts_.begin(), parts_.end(),
                  [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        std::vector<Interval> merged;
        for (const auto& iv : parts_) {
            if (!merged.empty() && iv.lo <= merged.back().hi + kMergeTol)
                merged.back().hi = std::max(merged.back().hi, iv.hi);
            else
                merged.push_back(iv);
        }
        parts_ = std::move(merged);
    }

    std::vector<Interval> parts_;
};

} // namespace rosen

#endif
