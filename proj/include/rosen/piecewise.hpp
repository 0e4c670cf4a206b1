#ifndef ROSEN_PIECEWISE_HPP
#define ROSEN_PIECEWISE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "rosen/params.hpp"
#include "rosen/rng.hpp"

namespace rosen {

// Piecewise function on [edges.front(), edges.back()], left-continuous:
// piece i holds on (edges[i], edges[i+1]]. Pieces are constant unless a
// smooth callable (with derivative) is attached per piece.
struct PiecewiseFn {
    struct SmoothPiece {
        std::function<double(double)> f;
        std::function<double(double)> df;
    };

    std::vector<double> edges;   // size m+1, strictly increasing
    std::vector<double> values;  // size m (piece constants; ignored when smooth)
    std::vector<SmoothPiece> smooth;  // empty, or size m with maybe-null entries

    std::size_t pieces() const { return values.size(); }
    bool is_constant() const { return smooth.empty(); }

    std::size_t piece_index(double x) const {
        auto it = std::lower_bound(edges.begin() + 1, edges.end(), x);
        if (it == edges.end()) --it;
        std::size_t i = static_cast<std::size_t>(it - edges.begin()) - 1;
        return std::min(i, values.size() - 1);
    }

    double operator()(double x) const {
        std::size_t i = piece_index(x);
        if (!smooth.empty() && smooth[i].f) return smooth[i].f(x);
        return values[i];
    }

    double value_left(double e) const {  // limit from below at e
        return (*this)(e);
    }
    double value_right(double e) const {  // limit from above at e
        std::size_t i = piece_index(std::nextafter(e, edges.back()));
        if (!smooth.empty() && smooth[i].f) return smooth[i].f(e);
        return values[i];
    }
};

inline void check_piecewise(const PiecewiseFn& f) {
    if (f.edges.size() < 2 || f.values.size() + 1 != f.edges.size())
        throw std::invalid_argument("piecewise: edges/values size mismatch");
    for (std::size_t i = 1; i < f.edges.size(); ++i)
        if (!(f.edges[i] > f.edges[i - 1]))
            throw std::invalid_argument("piecewise: edges must be strictly increasing");
    if (!f.smooth.empty() && f.smooth.size() != f.values.size())
        throw std::invalid_argument("piecewise: smooth pieces size mismatch");
}

inline PiecewiseFn constant_fn(const RosenParams& p, double v) {
    PiecewiseFn f;
    f.edges = {-p.sigma, p.sigma};
    f.values = {v};
    return f;
}

inline double l1_norm(const PiecewiseFn& f, int quad_nodes_per_piece = 256) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.pieces(); ++i) {
        double a = f.edges[i], b = f.edges[i + 1];
        if (f.is_constant() || !f.smooth[i].f) {
            s += std::fabs(f.values[i]) * (b - a);
        } else {
            double h = (b - a) / quad_nodes_per_piece, acc = 0.0;
            for (int k = 0; k < quad_nodes_per_piece; ++k)
                acc += std::fabs(f.smooth[i].f(a + (k + 0.5) * h));
            s += acc * h;
        }
    }
    return s;
}

inline double sup_norm(const PiecewiseFn& f, int probe_nodes_per_piece = 256) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.pieces(); ++i) {
        if (f.is_constant() || !f.smooth[i].f) {
            s = std::max(s, std::fabs(f.values[i]));
        } else {
            double a = f.edges[i], b = f.edges[i + 1];
            double h = (b - a) / probe_nodes_per_piece;
            for (int k = 0; k <= probe_nodes_per_piece; ++k)
                s = std::max(s, std::fabs(f.smooth[i].f(std::min(a + k * h, b))));
        }
    }
    return s;
}

// Random staircase: `pieces` pieces with uniform breakpoints and values.
// Breakpoints are kept clear of 0 by the zero guard so digit runs are finite.
inline PiecewiseFn random_staircase(const RosenParams& p, Stream& rng, int pieces,
                                    double vmin = -1.0, double vmax = 1.0) {
    if (pieces < 1) throw std::invalid_argument("random_staircase: pieces must be >= 1");
    PiecewiseFn f;
    std::vector<double> cuts;
    while (static_cast<int>(cuts.size()) < pieces - 1) {
        double c = rng.uniform(-p.sigma, p.sigma);
        if (std::fabs(c) < 1e-6) continue;
        cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    f.edges.push_back(-p.sigma);
    for (double c : cuts)
        if (c - f.edges.back() > 1e-9) f.edges.push_back(c);
    f.edges.push_back(p.sigma);
    for (std::size_t i = 0; i + 1 < f.edges.size(); ++i)
        f.values.push_back(rng.uniform(vmin, vmax));
    return f;
}

} // namespace rosen

#endif
