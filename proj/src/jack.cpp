/*
 * Copyright (c) 2026 The bkcorners contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 */
#include "jack.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>

#include "error.hpp"
#include "numerics.hpp"

namespace bk::jack {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts))
{
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] < 0) fail(Errc::invalid_argument, "Partition: negative part");
        if (i > 0 && parts_[i] > parts_[i - 1]) fail(Errc::invalid_argument, "Partition: parts must be weakly decreasing");
    }
    while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
}

int Partition::weight() const
{
    int s = 0;
    for (int p : parts_) s += p;
    return s;
}

Partition conjugate(const Partition& lambda)
{
    std::vector<int> c(lambda[1], 0);
    for (int j = 1; j <= lambda[1]; ++j) {
        int cnt = 0;
        for (int p : lambda.parts())
            if (p >= j) ++cnt;
        c[j - 1] = cnt;
    }
    return Partition(c);
}

bool interlaces(const Partition& lambda, const Partition& mu)
{
    const int n = std::max(lambda.length(), mu.length()) + 1;
    for (int i = 1; i <= n; ++i)
        if (!(lambda[i] >= mu[i] && mu[i] >= lambda[i + 1])) return false;
    return true;
}

double jack_pure_alpha(const Partition& lambda, int N, double theta)
{
    if (lambda.length() > N) return 0.0;
    const Partition conj = conjugate(lambda);
    double lg = 0.0;
    int sign = 1;
    for (int i = 1; i <= lambda.length(); ++i) {
        for (int j = 1; j <= lambda[i]; ++j) {
            const double num = N * theta + (j - 1) - (i - 1) * theta;
            const double den = lambda[i] - j + theta * (conj[j] - i) + theta;
            if (num == 0.0) return 0.0;
            if (num < 0.0) sign = -sign;
            lg += std::log(std::fabs(num)) - std::log(den);
        }
    }
    return sign * std::exp(lg);
}

double jack_dual_pure_beta(const Partition& lambda, int K, double theta)
{
    if (lambda[1] > K) return 0.0;
    const Partition conj = conjugate(lambda);
    double lg = 0.0;
    int sign = 1;
    for (int i = 1; i <= lambda.length(); ++i) {
        for (int j = 1; j <= lambda[i]; ++j) {
            const double num = K + theta * (i - 1) - (j - 1);
            const double den = lambda[i] - j + theta * (conj[j] - i) + 1.0;
            if (num == 0.0) return 0.0;
            if (num < 0.0) sign = -sign;
            lg += std::log(std::fabs(num)) - std::log(den);
        }
    }
    return sign * std::exp(lg);
}

double jack_skew_one(const Partition& lambda, const Partition& mu, double theta, int k)
{
    if (!interlaces(lambda, mu)) return 0.0;
    // terms with j > length(mu) are empty products, so any k > length(mu) gives the same value
    if (k < 0) k = lambda.length() + 1;
    if (k <= mu.length()) fail(Errc::invalid_argument, "jack_skew_one: k must exceed the length of mu");
    double lg = 0.0;
    int sign = 1;
    auto acc = [&](double b, int n, int dir) {
        const num::SignedLog p = num::log_pochhammer(b, n);
        sign *= p.sign;
        lg += dir * p.log_abs;
    };
    for (int i = 1; i <= k - 1; ++i) {
        for (int j = i; j <= k - 1; ++j) {
            const int n = mu[j] - lambda[j + 1];
            if (n == 0) continue;
            const double a = mu[i] - mu[j] + theta * (j - i);
            const double b = lambda[i] - mu[j] + theta * (j - i);
            acc(a + theta, n, +1);
            acc(a + 1.0, n, -1);
            acc(b + 1.0, n, +1);
            acc(b + theta, n, -1);
        }
    }
    assert(sign == 1);
    return sign * std::exp(lg);
}

double ascending_weight(const std::vector<Partition>& seq, int K, double theta)
{
    const int N = static_cast<int>(seq.size());
    if (N == 0) return 1.0;
    double w = std::exp(-static_cast<double>(N) * K * std::log(2.0));
    Partition prev;
    for (const Partition& lam : seq) {
        w *= jack_skew_one(lam, prev, theta);
        if (w == 0.0) return 0.0;
        prev = lam;
    }
    return w * jack_dual_pure_beta(seq.back(), K, theta);
}

BranchingSum branching_sum_check(const Partition& nu, int K, double theta)
{
    if (nu[1] > K) fail(Errc::precondition, "branching_sum_check: nu_1 exceeds K");
    const int len = nu.length() + 1;
    std::vector<int> kappa(len, 0);
    BranchingSum out;
    std::function<void(int)> rec = [&](int i) {
        if (i > len) {
            const Partition kp(kappa);
            out.lhs += jack_skew_one(kp, nu, theta) * jack_dual_pure_beta(kp, K, theta);
            return;
        }
        const int hi = (i == 1) ? K : nu[i - 1];
        for (int v = nu[i]; v <= hi; ++v) {
            kappa[i - 1] = v;
            rec(i + 1);
        }
    };
    rec(1);
    out.ratio = out.lhs / jack_dual_pure_beta(nu, K, theta);
    return out;
}

}  // namespace bk::jack
