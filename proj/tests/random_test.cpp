#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "dispatchopt/random.hpp"

using namespace dispatchopt;

TEST_CASE("exponential and uniform draws have the right means") {
    constexpr int kDraws = 1'000'000;
    RandomStream rng(11, 3);

    double sum = 0.0;
    for (int i = 0; i < kDraws; ++i) sum += rng.draw(Exponential{1.0 / 3.0});
    CHECK(std::abs(sum / kDraws - 3.0) < 0.01);

    sum = 0.0;
    bool inside = true;
    for (int i = 0; i < kDraws; ++i) {
        const double x = rng.draw(Uniform{2.0, 4.0});
        inside = inside && x >= 2.0 && x <= 4.0;
        sum += x;
    }
    CHECK(inside);
    CHECK(std::abs(sum / kDraws - 3.0) < 0.01);
}

TEST_CASE("degenerate uniform range is exact") {
    RandomStream rng(5);
    for (int i = 0; i < 100; ++i) CHECK(rng.draw(Uniform{3.0, 3.0}) == 3.0);
}

TEST_CASE("invalid distribution parameters are rejected") {
    RandomStream rng(5);
    CHECK_THROWS_AS(rng.draw(Exponential{0.0}), std::invalid_argument);
    CHECK_THROWS_AS(rng.draw(Uniform{4.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(rng.uniform_int(3, 2), std::invalid_argument);
}

TEST_CASE("streams are reproducible and substreams differ") {
    RandomStream a(42, 1), b(42, 1), c(42, 2);
    bool differs = false;
    for (int i = 0; i < 50; ++i) {
        const double x = a.uniform01();
        CHECK(x == b.uniform01());
        differs = differs || x != c.uniform01();
    }
    CHECK(differs);
}

TEST_CASE("uniform_int covers the inclusive range evenly") {
    RandomStream rng(9);
    int counts[6] = {};
    for (int i = 0; i < 60'000; ++i) ++counts[rng.uniform_int(1, 6) - 1];
    for (int c : counts) CHECK(std::abs(c - 10'000) < 400);
}

TEST_CASE("normal draws have mean 0 and sd sigma") {
    RandomStream rng(17);
    double sum = 0.0, sq = 0.0;
    constexpr int n = 200'000;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal(0.0, 10.0);
        sum += x;
        sq += x * x;
    }
    CHECK(std::abs(sum / n) < 0.1);
    CHECK(std::abs(std::sqrt(sq / n) - 10.0) < 0.1);
}
