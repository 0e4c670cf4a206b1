#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rosen/map.hpp"
#include "rosen/rng.hpp"

using namespace rosen;

TEST_CASE("one step of the q=3 map, worked by hand") {
    auto p = make_params(3);
    // 1/0.45 = 2.2222..., nearest multiple of lambda = 2, remainder 0.2222...
    auto s = rosen_step(p, 0.45);
    REQUIRE(s.digit.has_value());
    CHECK(*s.digit == Digit{1, 2});
    CHECK(s.x_next == Catch::Approx(2.0 / 0.9 - 2.0).epsilon(1e-14));

    // The map is even: the sign moves to the digit, the orbit point repeats.
    auto sm = rosen_step(p, -0.45);
    REQUIRE(sm.digit.has_value());
    CHECK(*sm.digit == Digit{-1, 2});
    CHECK(sm.x_next == s.x_next);
}

TEST_CASE("one step of the q=5 map, worked by hand") {
    auto p = make_params(5);
    double x = 1.0 / std::sqrt(2.0);
    auto s = rosen_step(p, x);
    REQUIRE(s.digit.has_value());
    CHECK(*s.digit == Digit{1, 1});
    CHECK(s.x_next == Catch::Approx(std::sqrt(2.0) - p.lambda).epsilon(1e-14));
    CHECK(s.x_next < 0.0);
}

TEST_CASE("zero is fixed and produces no digit") {
    auto p = make_params(5);
    auto s = rosen_step(p, 0.0);
    CHECK(s.x_next == 0.0);
    CHECK_FALSE(s.digit.has_value());
    CHECK_THROWS_AS(digit_of(p, 0.0), std::domain_error);
    CHECK_THROWS_AS(rosen_step(p, p.sigma + 1e-6), std::domain_error);
}

TEST_CASE("digit switches exactly at the cylinder edge") {
    auto p = make_params(3);
    // Edge between digits 2 and 3 sits at 2/(5 lambda) = 0.4.
    CHECK(digit_of(p, 0.4 + 1e-9) == Digit{1, 2});
    CHECK(digit_of(p, 0.4 - 1e-9) == Digit{1, 3});
    // The representable point nearest the edge lands on one side or the
    // other by rounding; evenness must hold there regardless.
    CHECK(digit_of(p, 0.4).a == digit_of(p, -0.4).a);
    CHECK(digit_of(p, -0.4).sign == -1);
    // The endpoint sigma carries the smallest digit.
    CHECK(digit_of(p, p.sigma) == Digit{1, p.a_min});
    auto p5 = make_params(5);
    CHECK(digit_of(p5, p5.sigma) == Digit{1, p5.a_min});
}

TEST_CASE("expansion digits reconstruct the point") {
    auto p = make_params(5);
    // lambda is the golden ratio, so 1/(lambda - 1/lambda) = 1 exactly.
    double v = evaluate_cf(p, {Digit{1, 1}, Digit{-1, 1}});
    CHECK(v == Catch::Approx(1.0).epsilon(1e-14));

    Stream rng(7, 0);
    for (int q : {3, 4, 5, 7}) {
        auto pq = make_params(q);
        for (int i = 0; i < 200; ++i) {
            double x = rng.uniform(-pq.sigma, pq.sigma);
            auto e = expand(pq, x, 25);
            auto m = static_cast<int>(e.digits.size());
            double back = e.digits.empty() ? 0.0 : evaluate_cf(pq, e.digits);
            double bound = pq.lambda * std::pow(pq.sigma, 2.0 * m);
            CHECK(std::fabs(x - back) <= bound + 1e-14);
        }
    }
}

TEST_CASE("orbit stays inside the interval") {
    Stream rng(11, 0);
    for (int q : {3, 6, 12}) {
        auto p = make_params(q);
        for (int i = 0; i < 50; ++i) {
            double x = rng.uniform(-p.sigma, p.sigma);
            auto e = expand(p, x, 60);
            for (double y : e.orbit) CHECK(std::fabs(y) <= p.sigma + 1e-12);
        }
    }
}

TEST_CASE("cylinders tile the positive half") {
    auto p = make_params(5);
    auto c1 = cylinder(p, Digit{1, 1});
    CHECK(c1.lo == Catch::Approx(2.0 / (3.0 * p.lambda)).epsilon(1e-15));
    CHECK(c1.hi == p.sigma);

    // Consecutive cylinders share their edge to the last bit.
    for (int q : {3, 4, 5, 9}) {
        auto pq = make_params(q);
        for (long a = pq.a_min; a < pq.a_min + 40; ++a)
            CHECK(cyl_right(pq, a + 1) == cyl_left(pq, a));
    }

    // Negative digits mirror.
    auto cm = cylinder(p, Digit{-1, 3});
    CHECK(cm.lo == -cylinder(p, Digit{1, 3}).hi);
    CHECK(cm.hi == -cylinder(p, Digit{1, 3}).lo);
}

TEST_CASE("digits below the minimum have no cylinder") {
    auto p = make_params(3);
    CHECK_THROWS_AS(cylinder(p, Digit{1, 1}), empty_cylinder_error);
    CHECK_THROWS_AS(inverse_branch(p, Digit{-1, 0}), empty_cylinder_error);
    CHECK_THROWS_AS(evaluate_cf(p, {Digit{1, 1}}), empty_cylinder_error);
}

TEST_CASE("inverse branches really invert the map") {
    Stream rng(23, 0);
    for (int q : {3, 5, 8}) {
        auto p = make_params(q);
        for (long a = p.a_min; a < p.a_min + 6; ++a) {
            for (int s : {1, -1}) {
                auto h = inverse_branch(p, Digit{s, a});
                for (int i = 0; i < 20; ++i) {
                    double y = rng.uniform(-p.sigma, p.sigma);
                    if (a == p.a_min && y < boundary_image(p)) continue;
                    double x = h(y);
                    auto st = rosen_step(p, x);
                    REQUIRE(st.digit.has_value());
                    CHECK(*st.digit == Digit{s, a});
                    CHECK(st.x_next == Catch::Approx(y).margin(1e-10));
                }
            }
        }
    }
}

TEST_CASE("branch images: full except for the two clipped branches") {
    auto p3 = make_params(3);
    CHECK(boundary_image(p3) == Catch::Approx(0.0).margin(1e-15));
    CHECK(boundary_image(make_params(4)) == Catch::Approx(0.0).margin(1e-15));
    CHECK(boundary_image(make_params(5)) == Catch::Approx(-0.3819660112501051).epsilon(1e-12));
    CHECK(boundary_image(make_params(6)) == Catch::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-12));

    auto p5 = make_params(5);
    auto clipped = branch_image(p5, Digit{-1, 1});
    CHECK(clipped.lo == Catch::Approx(boundary_image(p5)));
    CHECK(clipped.hi == p5.sigma);
    auto full = branch_image(p5, Digit{1, 2});
    CHECK(full.lo == -p5.sigma);
    CHECK(full.hi == p5.sigma);
}

TEST_CASE("contraction bounds hold along orbits") {
    // Closed-form spot checks first.
    auto b32 = lemma1_bounds(make_params(3), 2);
    CHECK(b32.sup_inv_deriv == Catch::Approx(0.0625).epsilon(1e-14));
    CHECK(b32.sup_inv_deriv_slope == Catch::Approx(1.25).epsilon(1e-14));
    auto b51 = lemma1_bounds(make_params(5), 1);
    CHECK(b51.sup_inv_deriv == Catch::Approx(0.6545084971874737).epsilon(1e-12));
    CHECK(b51.sup_inv_deriv_slope == Catch::Approx(1.6180339887498949).epsilon(1e-12));

    Stream rng(5, 0);
    for (int q : {3, 5, 7}) {
        auto p = make_params(q);
        for (int n : {1, 2, 5, 9}) {
            double cap = std::pow(p.sigma, 2.0 * n);
            for (int i = 0; i < 300; ++i) {
                double x = rng.uniform(-p.sigma, p.sigma);
                CHECK(inv_deriv_product(p, x, n) <= cap + 1e-12);
            }
        }
    }
}

TEST_CASE("cylinder lookup by position") {
    auto p = make_params(3);
    CHECK(cylinder_index_above(p, 0.45) == 2);
    CHECK(cylinder_index_above(p, 0.4) == 2);     // right edge of cylinder 3
    CHECK(cylinder_index_above(p, 0.39) == 3);
    CHECK(cylinder_index_above(p, p.sigma) == 2);
    auto p5 = make_params(5);
    CHECK(cylinder_index_above(p5, p5.sigma) == 1);
    CHECK(cylinder_index_above(p5, 0.41) == 2);
}
