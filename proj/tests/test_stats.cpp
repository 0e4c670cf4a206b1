#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "rosen/rng.hpp"
#include "rosen/stats.hpp"

using namespace rosen;

TEST_CASE("normal cdf reference points") {
    CHECK(normal_cdf(0.0) == Catch::Approx(0.5).epsilon(1e-15));
    CHECK(normal_cdf(1.96) == Catch::Approx(0.9750021048517796).epsilon(1e-14));
    CHECK(normal_cdf(-1.96) == Catch::Approx(1.0 - 0.9750021048517796).epsilon(1e-12));
    CHECK(normal_cdf(8.0) > 1.0 - 1e-14);
}

TEST_CASE("kolmogorov tail function") {
    CHECK(kolmogorov_q(0.5) == Catch::Approx(0.9639452436648751).epsilon(1e-12));
    CHECK(kolmogorov_q(1.36) == Catch::Approx(0.04948587675537791).epsilon(1e-12));
    CHECK(kolmogorov_q(6.0) < 1e-30);
    CHECK(kolmogorov_q(0.01) == Catch::Approx(1.0));
    // monotone decreasing
    double prev = 2.0;
    for (double t : {0.2, 0.5, 0.9, 1.4, 2.5}) {
        double v = kolmogorov_q(t);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("ks statistic of a tiny hand sample") {
    double d = ks_statistic({1.0, -1.0, 0.0});  // order must not matter
    CHECK(d == Catch::Approx(0.1746780794018763).epsilon(1e-12));
    CHECK(ks_p_value(d, 3) == Catch::Approx(kolmogorov_q(std::sqrt(3.0) * d)));
}

TEST_CASE("ks accepts genuine normals and rejects a shifted mean") {
    int good = 0;
    for (std::uint64_t s : {1u, 2u, 3u, 4u, 5u}) {
        Stream rng(s, 0);
        std::vector<double> xs(2000);
        for (double& x : xs) x = rng.normal();
        double p = ks_p_value(ks_statistic(xs), xs.size());
        CHECK(p > 1e-4);
        if (p > 0.05) ++good;
    }
    CHECK(good >= 3);

    Stream rng(7, 0);
    std::vector<double> xs(2000);
    for (double& x : xs) x = rng.normal() + 0.2;
    CHECK(ks_p_value(ks_statistic(xs), xs.size()) < 1e-6);
}
