/*
 * Copyright (c) 2026 The bkcorners contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "error.hpp"
#include "numerics.hpp"

using namespace bk::num;

TEST_CASE("log_gamma reference values")
{
    CHECK(std::fabs(log_gamma(1.0)) < 1e-14);
    CHECK(std::fabs(log_gamma(5.0) - std::log(24.0)) < 1e-13);
    CHECK(std::fabs(log_gamma(0.5) - 0.5 * std::log(std::numbers::pi)) < 1e-13);
    CHECK_THROWS_AS(log_gamma(0.0), bk::Error);
    CHECK_THROWS_AS(log_gamma(-1.5), bk::Error);
}

TEST_CASE("log_gamma against the C library")
{
    // absolute accuracy where |ln Gamma| is moderate, relative beyond (ulp limited)
    double worst_abs = 0.0, worst_rel = 0.0;
    for (double x = 0.05; x < 40.0; x += 0.0173) worst_abs = std::max(worst_abs, std::fabs(log_gamma(x) - std::lgamma(x)));
    for (double x = 40.0; x < 1e6; x *= 1.37) {
        const double ref = std::lgamma(x);
        worst_rel = std::max(worst_rel, std::fabs(log_gamma(x) - ref) / std::fabs(ref));
    }
    CHECK(worst_abs < 1e-13);
    CHECK(worst_rel < 1e-14);
}

TEST_CASE("log_gamma recursion")
{
    for (double x = 0.5; x <= 100.0; x += 0.5)
        CHECK(std::fabs(log_gamma(x + 1.0) - log_gamma(x) - std::log(x)) < 1e-12);
}

TEST_CASE("log_pochhammer")
{
    auto p = log_pochhammer(3.0, 2);
    CHECK(p.sign == 1);
    CHECK(std::fabs(p.log_abs - std::log(12.0)) < 1e-15);
    p = log_pochhammer(0.37, 0);
    CHECK(p.sign == 1);
    CHECK(p.log_abs == 0.0);
    p = log_pochhammer(-0.5, 2);
    CHECK(p.sign == -1);
    CHECK(std::fabs(p.log_abs - std::log(0.25)) < 1e-15);
    CHECK_THROWS_AS(log_pochhammer(-2.0, 3), bk::Error);
    // long products take the Gamma route
    p = log_pochhammer(1.5, 40);
    CHECK(std::fabs(p.log_abs - (std::lgamma(41.5) - std::lgamma(1.5))) < 1e-11);
}

TEST_CASE("branch_sqrt values and invariants")
{
    CHECK(std::abs(branch_sqrt(2.0, 0.0, 1.0) - std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(branch_sqrt(-1.0, 0.0, 1.0) + std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(branch_sqrt(cplx(0, 1), -1.0, 1.0) - cplx(0, std::sqrt(2.0))) < 1e-15);
    // on the cut: upper-side limit
    CHECK(std::abs(branch_sqrt(0.5, 0.0, 1.0) - cplx(0, 0.5)) < 1e-15);
    CHECK(std::abs(branch_sqrt(cplx(0.5, 1e-12), 0.0, 1.0) - cplx(0, 0.5)) < 1e-11);
    const double a = -0.7, b = 1.3;
    for (double re = -3.0; re <= 3.0; re += 0.37) {
        for (double im = -2.0; im <= 2.0; im += 0.29) {
            const cplx z(re, im);
            const cplx f = branch_sqrt(z, a, b);
            CHECK(std::abs(f * f - (z - a) * (z - b)) < 1e-12);
            if (im != 0.0 || re < a || re > b) CHECK(std::abs(branch_sqrt(std::conj(z), a, b) - std::conj(f)) < 1e-14);
        }
    }
    // holomorphic across the real axis outside [a,b]
    for (double re : {-2.0, -0.9, 1.5, 4.0})
        CHECK(std::abs(branch_sqrt(cplx(re, 1e-9), a, b) - branch_sqrt(cplx(re, -1e-9), a, b)) < 1e-8);
}

TEST_CASE("circle_integral")
{
    const Contour unit{0.0, 1.0, 2048};
    const cplx twopii(0, 2 * std::numbers::pi);
    CHECK(std::abs(circle_integral([](cplx z) { return 1.0 / z; }, unit) - twopii) < 1e-13);
    CHECK(std::abs(circle_integral([](cplx z) { return z; }, unit)) < 1e-13);
    CHECK(std::abs(circle_integral([](cplx z) { return 1.0 / ((z - 0.3) * (z - 0.3)); }, unit)) < 1e-12);
    const Contour off{cplx(0.4, -0.2), 2.5, 256};
    CHECK(std::abs(circle_integral([](cplx z) { return 3.0 * z * z * z - z + 2.0; }, off)) < 1e-10);
    CHECK(std::abs(circle_integral([](cplx z) { return 1.0 / (z - cplx(1.0, 0.5)); }, off) - twopii) < 1e-12);
    CHECK_THROWS_AS(circle_integral([](cplx z) { return z; }, Contour{0.0, 1.0, 8}), bk::Error);
    CHECK_THROWS_AS(circle_integral([](cplx z) { return z; }, Contour{0.0, -1.0, 64}), bk::Error);
}

TEST_CASE("adaptive_integral_1d")
{
    CHECK(std::fabs(adaptive_integral_1d([](double x) { return x; }, 0.0, 1.0, 1e-12) - 0.5) < 1e-12);
    const double arcsine = adaptive_integral_1d(
        [](double x) { return 1.0 / (std::numbers::pi * std::sqrt(1.0 - x * x)); }, -1.0, 1.0, 1e-10);
    CHECK(std::fabs(arcsine - 1.0) < 1e-7);
    CHECK(std::fabs(adaptive_integral_1d([](double x) { return std::log(x); }, 0.0, 1.0, 1e-12) + 1.0) < 1e-9);
    AdaptiveOptions tight;
    tight.max_subdivisions = 3;
    CHECK_THROWS_AS(adaptive_integral_1d([](double x) { return std::sin(40 * x); }, 0.0, 10.0, 1e-12, tight), bk::Error);
}

TEST_CASE("Gauss-Legendre rules")
{
    for (int n : {1, 2, 5, 20, 101}) {
        const GaussRule& g = gauss_legendre(n);
        double w = 0.0;
        for (double v : g.w) w += v;
        CHECK(std::fabs(w - 2.0) < 1e-13);
    }
    // exact for degree 2n-1
    CHECK(std::fabs(gauss_integral([](double x) { return std::pow(x, 9); }, 0.0, 2.0, 5) - 102.4) < 1e-12);
}

TEST_CASE("tensor_integral_2d")
{
    const Rect unit{0, 1, 0, 1};
    CHECK(std::fabs(tensor_integral_2d([](double, double) { return 1.0; }, unit, 20) - 1.0) < 1e-14);
    CHECK(std::fabs(tensor_integral_2d([](double x, double y) { return x * y; }, unit, 20) - 0.25) < 1e-14);
    const double lg = tensor_integral_2d([](double x, double y) { return std::log(std::fabs(x - y)); }, unit, 400);
    CHECK(std::fabs(lg + 1.5) < 1e-3);
}

TEST_CASE("degree_at_most")
{
    std::vector<cplx> lin, sq, cst;
    const double h = 0.5;
    for (int k = 0; k < 4; ++k) {
        const double z = 1.0 + k * h;
        lin.push_back(3 * z + 1);
        sq.push_back(z * z);
        cst.push_back(cplx(2.0, -1.0));
    }
    CHECK(degree_at_most(lin, 1).residual < 1e-14);
    CHECK(degree_at_most(lin, 1).ok);
    CHECK(std::fabs(degree_at_most(sq, 1).residual - 2 * h * h) < 1e-14);
    CHECK_FALSE(degree_at_most(sq, 1).ok);
    CHECK(degree_at_most(sq, 2).residual < 1e-14);
    CHECK(degree_at_most(cst, 0).residual == 0.0);
    CHECK_THROWS_AS(degree_at_most({1.0, 2.0}, 1), bk::Error);
}
