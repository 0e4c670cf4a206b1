#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "rosen/params.hpp"

using rosen::make_params;

TEST_CASE("lambda matches closed forms for small q") {
    // q = 3, 4, 5, 6 have algebraic lambda: 1, sqrt 2, golden ratio, sqrt 3.
    CHECK(make_params(3).lambda == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(make_params(4).lambda == Catch::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(make_params(5).lambda == Catch::Approx(0.5 * (1.0 + std::sqrt(5.0))).epsilon(1e-15));
    CHECK(make_params(6).lambda == Catch::Approx(std::sqrt(3.0)).epsilon(1e-15));
    // digits frozen from 2 cos(pi/10)
    CHECK(make_params(10).lambda == Catch::Approx(1.9021130325903071).epsilon(1e-15));
}

TEST_CASE("sigma is half of lambda") {
    for (int q : {3, 4, 5, 6, 7, 12, 40}) {
        auto p = make_params(q);
        CHECK(p.sigma == 0.5 * p.lambda);
        CHECK(p.half_width() == p.sigma);
        CHECK(p.full_width() == p.lambda);
        CHECK(p.sigma < 1.0);
        CHECK(p.sigma >= 0.5);
    }
}

TEST_CASE("smallest admissible digit") {
    // Only q = 3 loses digit 1; all larger q admit it.
    CHECK(make_params(3).a_min == 2);
    for (int q : {4, 5, 6, 7, 8, 20, 100})
        CHECK(make_params(q).a_min == 1);
}

TEST_CASE("q below 3 is rejected") {
    CHECK_THROWS_AS(make_params(2), std::invalid_argument);
    CHECK_THROWS_AS(make_params(0), std::invalid_argument);
    CHECK_THROWS_AS(make_params(-5), std::invalid_argument);
}
