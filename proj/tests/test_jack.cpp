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
#include <functional>

#include "jack.hpp"

using namespace bk::jack;

namespace {

// All partitions of weight exactly w.
std::vector<Partition> partitions_of(int w)
{
    std::vector<Partition> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int rem, int maxp) {
        if (rem == 0) {
            out.emplace_back(cur);
            return;
        }
        for (int p = std::min(rem, maxp); p >= 1; --p) {
            cur.push_back(p);
            rec(rem - p, p);
            cur.pop_back();
        }
    };
    rec(w, w);
    return out;
}

// Number of semistandard tableaux of shape lambda with entries <= N, counted by
// enumerating Gelfand-Tsetlin patterns with top row lambda.
long count_ssyt(const Partition& lambda, int N)
{
    if (lambda.length() > N) return 0;
    std::vector<int> top(N, 0);
    for (int i = 0; i < N; ++i) top[i] = lambda[i + 1];
    std::function<long(const std::vector<int>&)> below = [&](const std::vector<int>& row) -> long {
        if (row.size() == 1) return 1;
        std::vector<int> nxt(row.size() - 1);
        long total = 0;
        std::function<void(std::size_t)> fill = [&](std::size_t i) {
            if (i == nxt.size()) {
                total += below(nxt);
                return;
            }
            for (int v = row[i + 1]; v <= row[i]; ++v) {
                nxt[i] = v;
                fill(i + 1);
            }
        };
        fill(0);
        return total;
    };
    return below(top);
}

std::vector<std::vector<Partition>> interlacing_sequences(int N, int K)
{
    std::vector<std::vector<Partition>> out;
    std::vector<Partition> cur;
    std::function<void(int)> rec = [&](int j) {
        if (j > N) {
            out.push_back(cur);
            return;
        }
        const Partition prev = cur.empty() ? Partition() : cur.back();
        std::vector<int> lam(j, 0);
        std::function<void(int)> fill = [&](int i) {
            if (i > j) {
                cur.emplace_back(lam);
                rec(j + 1);
                cur.pop_back();
                return;
            }
            const int hi = (i == 1) ? K : prev[i - 1];
            for (int v = prev[i]; v <= hi; ++v) {
                lam[i - 1] = v;
                fill(i + 1);
            }
        };
        fill(1);
    };
    rec(1);
    return out;
}

}  // namespace

TEST_CASE("Partition normalization")
{
    Partition p({3, 1, 0, 0});
    CHECK(p.length() == 2);
    CHECK(p.weight() == 4);
    CHECK_THROWS(Partition({1, 2}));
}

TEST_CASE("conjugate")
{
    CHECK(conjugate(Partition()) == Partition());
    CHECK(conjugate(Partition{3, 1}) == Partition{2, 1, 1});
    CHECK(conjugate(Partition{2, 2}) == Partition{2, 2});
    for (int w = 0; w <= 6; ++w)
        for (const Partition& p : partitions_of(w)) CHECK(conjugate(conjugate(p)) == p);
}

TEST_CASE("jack_pure_alpha examples")
{
    CHECK(jack_pure_alpha(Partition(), 3, 0.4) == doctest::Approx(1.0));
    CHECK(jack_pure_alpha(Partition{1}, 4, 0.7) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(jack_pure_alpha(Partition{1, 1, 1}, 2, 1.3) == 0.0);
}

TEST_CASE("jack_pure_alpha at theta=1 counts tableaux")
{
    for (int w = 0; w <= 4; ++w)
        for (const Partition& p : partitions_of(w))
            for (int N = 1; N <= 4; ++N) {
                const double want = static_cast<double>(count_ssyt(p, N));
                CHECK(std::fabs(jack_pure_alpha(p, N, 1.0) - want) <= 1e-12 * std::max(1.0, want));
            }
}

TEST_CASE("jack_dual_pure_beta examples and duality")
{
    CHECK(jack_dual_pure_beta(Partition(), 3, 0.5) == doctest::Approx(1.0));
    CHECK(jack_dual_pure_beta(Partition{1}, 1, 1.0) == doctest::Approx(1.0));
    CHECK(jack_dual_pure_beta(Partition{2}, 1, 0.8) == 0.0);
    for (double theta : {0.5, 1.0, 2.0})
        for (int w = 0; w <= 5; ++w)
            for (const Partition& p : partitions_of(w))
                for (int K = 0; K <= 4; ++K) {
                    const double a = jack_dual_pure_beta(p, K, theta);
                    const double b = jack_pure_alpha(conjugate(p), K, 1.0 / theta);
                    CHECK(std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b)));
                }
}

TEST_CASE("jack_skew_one examples")
{
    for (double theta : {0.5, 1.0, 2.0, 3.7}) {
        CHECK(jack_skew_one(Partition{3, 1}, Partition{3, 1}, theta) == doctest::Approx(1.0));
        CHECK(jack_skew_one(Partition{1}, Partition(), theta) == doctest::Approx(1.0));
        CHECK(jack_skew_one(Partition{1}, Partition{2}, theta) == 0.0);
        CHECK(jack_skew_one(Partition{2, 2}, Partition{1}, theta) == 0.0);  // not a horizontal strip
    }
}

TEST_CASE("jack_skew_one does not depend on k")
{
    for (double theta : {0.5, 1.0, 2.0, 0.3})
        for (const auto& seq : interlacing_sequences(3, 3))
            for (std::size_t j = 1; j < seq.size(); ++j) {
                const Partition& lam = seq[j];
                const Partition& mu = seq[j - 1];
                const double base = jack_skew_one(lam, mu, theta);
                for (int extra : {2, 3, 5}) {
                    const double other = jack_skew_one(lam, mu, theta, lam.length() + extra);
                    CHECK(std::fabs(other - base) <= 1e-13 * base);
                }
            }
}

TEST_CASE("jack_skew_one matches two-variable branching")
{
    // J_(2)(1,1) = J_(2)(1) + J_(2)/(1)(1) J_(1)(1) + J_(2)/(2)(1) J_(2)(1) gives 2 theta/(1+theta)
    for (double theta : {0.5, 1.0, 2.0}) {
        CHECK(jack_skew_one(Partition{2}, Partition{1}, theta) == doctest::Approx(2 * theta / (1 + theta)));
        // with k = length(lambda) the product would be empty and return 1
        CHECK_THROWS(jack_skew_one(Partition{2}, Partition{1}, theta, 1));
    }
    // general branching rule in two variables for small partitions
    for (double theta : {0.5, 2.0})
        for (int w = 0; w <= 5; ++w)
            for (const Partition& lam : partitions_of(w)) {
                if (lam.length() > 2) continue;
                double sum = 0.0;
                for (int v = 0; v <= w; ++v)
                    for (const Partition& mu : partitions_of(v))
                        if (mu.length() <= 1) sum += jack_skew_one(lam, mu, theta) * jack_pure_alpha(mu, 1, theta);
                CHECK(sum == doctest::Approx(jack_pure_alpha(lam, 2, theta)).epsilon(1e-12));
            }
}

TEST_CASE("jack_skew_one at theta=1 is the indicator")
{
    for (const auto& seq : interlacing_sequences(3, 3))
        for (std::size_t j = 1; j < seq.size(); ++j) CHECK(jack_skew_one(seq[j], seq[j - 1], 1.0) == doctest::Approx(1.0));
}

TEST_CASE("ascending_weight examples")
{
    CHECK(ascending_weight({Partition{1}}, 1, 1.0) == doctest::Approx(0.5));
    CHECK(ascending_weight({Partition()}, 0, 0.9) == doctest::Approx(1.0));
    CHECK(ascending_weight({Partition{2}, Partition{1, 1}}, 2, 0.5) == 0.0);
}

TEST_CASE("ascending process is a probability measure")
{
    for (double theta : {0.5, 1.0, 2.0})
        for (int N = 1; N <= 3; ++N)
            for (int K = 0; K <= 3; ++K) {
                double mass = 0.0;
                for (const auto& seq : interlacing_sequences(N, K)) mass += ascending_weight(seq, K, theta);
                CHECK(std::fabs(mass - 1.0) < 1e-10);
            }
}

TEST_CASE("branching_sum_check")
{
    auto r = branching_sum_check(Partition(), 1, 1.0);
    CHECK(r.lhs == doctest::Approx(2.0));
    CHECK(r.ratio == doctest::Approx(2.0));
    CHECK(branching_sum_check(Partition(), 2, 1.0).ratio == doctest::Approx(4.0));
    CHECK(branching_sum_check(Partition{1}, 1, 1.0).ratio == doctest::Approx(2.0));
    // the measured ratio is 2^K for every nu and theta
    for (double theta : {0.5, 2.0, 3.0})
        for (int K = 1; K <= 3; ++K)
            for (int w = 0; w <= 4; ++w)
                for (const Partition& nu : partitions_of(w)) {
                    if (nu[1] > K) continue;
                    CHECK(branching_sum_check(nu, K, theta).ratio == doctest::Approx(std::pow(2.0, K)).epsilon(1e-12));
                }
}
