#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rosen/trigamma.hpp"

using rosen::inverse_square_run;
using rosen::trigamma;

TEST_CASE("trigamma at classical points") {
    double pi2 = M_PI * M_PI;
    CHECK(trigamma(1.0) == Catch::Approx(pi2 / 6.0).epsilon(1e-13));
    CHECK(trigamma(0.5) == Catch::Approx(pi2 / 2.0).epsilon(1e-13));
    CHECK(trigamma(2.0) == Catch::Approx(pi2 / 6.0 - 1.0).epsilon(1e-13));
    // recurrence: psi1(z) - psi1(z+1) = 1/z^2
    for (double z : {0.3, 1.7, 4.2, 11.0}) {
        CHECK(trigamma(z) - trigamma(z + 1.0) == Catch::Approx(1.0 / (z * z)).epsilon(1e-12));
    }
}

TEST_CASE("trigamma difference matches direct sums") {
    // sum_{k=0}^{n-1} 1/(z+k)^2 = psi1(z) - psi1(z+n)
    for (double z : {0.7, 1.0, 2.6}) {
        for (int n : {1, 5, 40}) {
            double direct = 0.0;
            for (int k = 0; k < n; ++k) direct += 1.0 / ((z + k) * (z + k));
            CHECK(trigamma(z) - trigamma(z + n) == Catch::Approx(direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("inverse square runs, finite and tail") {
    // sum over a in [a_lo, a_hi] of 1/(t+a)^2, lambda-scaled caller divides
    double direct = 0.0;
    for (long a = 3; a <= 30; ++a) direct += 1.0 / ((0.4 + a) * (0.4 + a));
    CHECK(inverse_square_run(0.4, 3, 30) == Catch::Approx(direct).epsilon(1e-13));

    // infinite tail: a_hi < 0 means sum to infinity
    double tail = inverse_square_run(0.4, 3, -1);
    double brute = 0.0;
    for (long a = 3; a <= 2000000; ++a) brute += 1.0 / ((0.4 + a) * (0.4 + a));
    CHECK(tail == Catch::Approx(brute).margin(1e-6));
    CHECK(tail > brute);  // brute truncates low

    // single term
    CHECK(inverse_square_run(0.0, 5, 5) == Catch::Approx(0.04).epsilon(1e-14));
}
