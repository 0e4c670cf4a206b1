#ifndef ROSEN_ERRORS_HPP
#define ROSEN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rosen {

// Raised when an iterative solver stops before reaching its target residual.
struct convergence_error : std::runtime_error {
    double residual;
    long iterations;
    convergence_error(const std::string& what, double res, long iters)
        : std::runtime_error(what), residual(res), iterations(iters) {}
};

// Raised when a requested cylinder does not exist (a < a_min or a < 1).
struct empty_cylinder_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when an estimated asymptotic variance is consistent with zero.
struct degenerate_variance_error : std::runtime_error {
    double sigma2;
    double threshold;
    degenerate_variance_error(const std::string& what, double s2, double thr)
        : std::runtime_error(what), sigma2(s2), threshold(thr) {}
};

// Raised when a quantity the theory guarantees is observed to fail.
struct theorem_violation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace rosen

#endif
