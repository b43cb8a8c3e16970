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
#include <random>
#include <sstream>

#include "error.hpp"
#include "fieldstats.hpp"
#include "rng.hpp"

using namespace bk;
using namespace bk::stats;

namespace {

std::vector<cplx> random_table(int n, std::uint64_t seed)
{
    Philox4x32 rng(seed, 0);
    std::vector<cplx> t(std::size_t{1} << n);
    t[0] = 1.0;
    for (std::size_t m = 1; m < t.size(); ++m) t[m] = {2 * rng.uniform() - 1, 2 * rng.uniform() - 1};
    return t;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    double d = 0.0;
    for (std::size_t k = 1; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

// Box-Muller normals from the counter-based generator.
struct Normal {
    Philox4x32 rng;
    double next()
    {
        const double u = 1.0 - rng.uniform(), v = rng.uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
    }
};

}  // namespace

TEST_CASE("cumulants from moments: small cases")
{
    // one variable
    CHECK(cumulant_from_moments({1.0, {0.3, -0.2}}, 1) == cplx(0.3, -0.2));
    // two variables: E[XY] - E[X]E[Y]
    std::vector<cplx> m2{1.0, 2.0, 3.0, 7.5};
    CHECK(std::abs(cumulant_from_moments(m2, 2) - 1.5) < 1e-15);
    // independent variables with nonzero means: factorised moments give vanishing joint cumulants
    const std::vector<double> means{0.5, -1.0, 2.0};
    std::vector<cplx> ind(8);
    for (unsigned m = 0; m < 8; ++m) {
        ind[m] = 1.0;
        for (int k = 0; k < 3; ++k)
            if (m >> k & 1) ind[m] *= means[k];
    }
    CHECK(std::abs(cumulant_from_moments(ind, 3)) < 1e-15);
    // a standard exponential variable has E[X^k] = k! and cumulants (k-1)!
    for (int n = 2; n <= 5; ++n) {
        std::vector<cplx> ex(std::size_t{1} << n);
        for (unsigned m = 0; m < ex.size(); ++m) ex[m] = std::tgamma(std::popcount(m) + 1.0);
        CHECK(std::abs(cumulant_from_moments(ex, n) - std::tgamma(n)) < 1e-12);
    }
}

TEST_CASE("round trips")
{
    for (int n = 1; n <= 5; ++n)
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const auto mom = random_table(n, seed * 10 + n);
            CHECK(max_diff(moments_from_cumulants(cumulants_from_moments(mom, n), n), mom) < 1e-12);
            const auto cum = random_table(n, seed * 100 + n);
            CHECK(max_diff(cumulants_from_moments(moments_from_cumulants(cum, n), n), cum) < 1e-12);
        }
}

TEST_CASE("cumulant of a product")
{
    for (int n = 2; n <= 5; ++n) {
        const auto mom = random_table(n, 77 + n);
        const auto cum = cumulants_from_moments(mom, n);
        // moment table of (XY, X_1, ..., X_{n-2}): the first new variable carries both bits 0 and 1
        const int n2 = n - 1;
        std::vector<cplx> m2(std::size_t{1} << n2);
        for (unsigned m = 0; m < m2.size(); ++m) {
            unsigned orig = (m >> 1) << 2;
            if (m & 1) orig |= 3u;
            m2[m] = mom[orig];
        }
        CHECK(std::abs(cumulant_from_moments(m2, n2) - product_cumulant_expand(cum, n)) < 1e-12);
    }
    // Y = 1: the expansion reduces to M(X, X_1, ...)
    auto mom = random_table(4, 5);
    for (unsigned m = 0; m < mom.size(); ++m)
        if (m & 2) mom[m] = mom[m & ~2u];
    const auto cum = cumulants_from_moments(mom, 4);
    CHECK(std::abs(product_cumulant_expand(cum, 4) - cum[1u | 4u | 8u]) < 1e-12);
}

TEST_CASE("table validation")
{
    CHECK_THROWS_AS(cumulant_from_moments({1.0, 2.0, 3.0}, 2), Error);
    CHECK_THROWS_AS(cumulant_from_moments({1.0, 2.0, NAN, 4.0}, 2), Error);
    CHECK_THROWS_AS(cumulant_from_moments(std::vector<cplx>(128, 1.0), 7), Error);
    try {
        cumulant_from_moments({1.0, 2.0, NAN, 4.0}, 2);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::incomplete_table);
    }
}

TEST_CASE("estimator calibration on synthetic Gaussian chains")
{
    // X = A, Y = 0.6 A + 0.8 B with A, B independent standard normals: Var 1, Cov 0.6
    Normal g{Philox4x32(2024, 0)};
    std::vector<std::vector<cplx>> xy(2);
    std::vector<int> batch;
    for (int c = 0; c < 8; ++c)
        for (int t = 0; t < 500; ++t) {
            const double a = g.next(), b = g.next();
            xy[0].push_back(a);
            xy[1].push_back(0.6 * a + 0.8 * b);
            batch.push_back(c);
        }
    const auto cov = estimate_cumulant(xy, batch);
    CHECK(cov.n_batches == 8);
    CHECK(cov.order == 2);
    CHECK(std::fabs(cov.value.real() - 0.6) < 3 * cov.stderr);
    CHECK(cov.stderr > 0.005);
    CHECK(cov.stderr < 0.05);
    const auto var = estimate_cumulant({xy[0], xy[0]}, batch);
    CHECK(std::fabs(var.value.real() - 1.0) < 3 * var.stderr);
    const auto k3 = estimate_cumulant({xy[0], xy[1], xy[1]}, batch);
    CHECK(std::abs(k3.value) < 3 * k3.stderr);
    const auto k4 = estimate_cumulant({xy[0], xy[0], xy[1], xy[1]}, batch);
    CHECK(std::abs(k4.value) < 3 * k4.stderr);
    CHECK(std::abs(estimate_cumulant({xy[0]}, batch).value) == 0.0);

    // adding a constant does not move order >= 2
    auto shifted = xy;
    for (auto& v : shifted[1]) v += cplx(5.0, -2.0);
    CHECK(std::abs(estimate_cumulant(shifted, batch).value - cov.value) < 1e-12);
    // a constant observable has vanishing cumulants
    std::vector<cplx> cst(batch.size(), cplx(3.0, 1.0));
    CHECK(std::abs(estimate_cumulant({cst, xy[0]}, batch).value) < 1e-14);

    std::vector<int> seven(batch.size());
    for (std::size_t t = 0; t < seven.size(); ++t) seven[t] = batch[t] % 7;
    CHECK_THROWS_AS(estimate_cumulant(xy, seven), Error);
}

TEST_CASE("pairings against direct integration of the height function")
{
    mc::SampleBatch b;
    b.params = {0.5, 6, 8};
    b.n_chains = 1;
    mc::Snapshot s1, s2;
    s1.levels[8] = {6, 5, 5, 3, 2, 2, 1, 0};
    s2.levels[8] = {6, 6, 4, 3, 3, 1, 0, 0};
    s1.levels[6] = {6, 5, 4, 3, 2, 0};
    s2.levels[6] = {5, 5, 4, 2, 1, 1};
    b.snapshots = {s1, s2};
    auto f = [](double x) { return 1.0 + x - 2.0 * x * x * x; };
    for (auto v : {GffVariant::omega, GffVariant::omega_hat}) {
        const double s = v == GffVariant::omega ? 0.5 : 1.0;  // level 8 in both cases
        const auto p = pairing_rv(b, f, s, v);
        // Riemann sum of (H1 - H2) f on a fine grid; the exact pairing is sqrt(theta pi)/2 times this
        double direct = 0.0;
        const int n = 400000;
        const double lo = -3.0, hi = 3.0, h = (hi - lo) / n;
        for (int k = 0; k < n; ++k) {
            const double x = lo + (k + 0.5) * h;
            const int H1 = v == GffVariant::omega ? mc::height_H(s1, x, s, 6, 0.5) : mc::height_hat(s1, x, s, 6, 0.5);
            const int H2 = v == GffVariant::omega ? mc::height_H(s2, x, s, 6, 0.5) : mc::height_hat(s2, x, s, 6, 0.5);
            direct += (H1 - H2) * f(x) * h;
        }
        const double scale = std::sqrt(0.5 * std::numbers::pi);
        CHECK(std::fabs(p[0] - scale * direct / 2) < 1e-4);
        CHECK(std::fabs(p[0] + p[1]) < 1e-14);
    }
    CHECK(pairing_rv(b, [](double) { return 0.0; }, 1.0, GffVariant::omega_hat) == std::vector<double>{0.0, 0.0});
    mc::SampleBatch frozen;
    frozen.params = {1.0, 0, 2};
    mc::Snapshot z;
    z.levels[2] = {0, 0};
    frozen.snapshots = {z, z};
    CHECK(pairing_rv(frozen, [](double x) { return x; }, 1.0, GffVariant::omega) == std::vector<double>{0.0, 0.0});
    CHECK_THROWS_AS(pairing_rv(b, f, 0.2, GffVariant::omega_hat), Error);
}

TEST_CASE("law of large numbers report")
{
    auto run = [](int K) {
        mc::ChainConfig cfg;
        cfg.seed = 5;
        cfg.n_samples = 5;
        cfg.record_levels = {K};
        return lln_report(mc::sample_corners({1.0, K, K}, cfg), default_lln_grid({1.0}, 1.0));
    };
    const auto small = run(12), large = run(48);
    CHECK(small.sup_gap.size() == 5);
    CHECK(large.mean_gap < small.mean_gap);
    CHECK(large.mean_gap < 0.1);
    CHECK(large.max_gap >= large.mean_gap);
}

TEST_CASE("clt report plumbing and csv")
{
    mc::ChainConfig cfg;
    cfg.seed = 9;
    cfg.n_samples = 20;
    cfg.burnin_sweeps = 50;
    cfg.thin_sweeps = 5;
    cfg.record_levels = {8, 10};
    const auto b = mc::sample_chains({1.0, 10, 10}, cfg, 8);
    std::vector<PairingSpec> specs{{"s=0.8,f=1", 0.8, [](double) { return 1.0; }},
                                   {"s=1,f=x", 1.0, [](double x) { return x; }}};
    const auto rep = clt_report(b, specs, GffVariant::omega, 100);
    CHECK(rep.rows.size() == 3 + 4 + 2);
    CHECK(rep.rows[0].quantity == "cov[s=0.8,f=1;s=0.8,f=1]");
    CHECK(rep.rows[0].target > 0);
    CHECK(rep.rows[0].stderr > 0);
    const auto sc = stieltjes_covariance_check(b, {2, 1}, 1.0, {2, -1}, 1.0);
    CHECK(sc.estimate.n_batches == 8);
    CHECK(std::isfinite(sc.zscore));
    std::ostringstream os;
    write_report_csv(os, {{"a", 2, 0.1, 0.2, 0.3, 0.4, true}});
    CHECK(os.str() == "quantity,estimate,stderr,target,zscore\na,0.10000000000000001,0.20000000000000001,0.29999999999999999,0.40000000000000002\n");
}
