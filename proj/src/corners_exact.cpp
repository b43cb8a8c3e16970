/*
 * Copyright (c) 2026 The bkcorners contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 */
#include "corners_exact.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "error.hpp"
#include "jack.hpp"
#include "numerics.hpp"

namespace bk::exact {

namespace {

// Every Gamma argument on the state space is positive; a violation means a caller bug.
double lg(double x)
{
    if (!(x > 0.0)) fail(Errc::precondition, "Gamma argument " + std::to_string(x) + " is not positive");
    return num::log_gamma(x);
}

double log_sum_exp(const std::vector<double>& v)
{
    double m = -INFINITY;
    for (double x : v) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

std::vector<double> positions(const LevelConfig& l, double theta)
{
    std::vector<double> p(l.lambda.size());
    for (int i = 1; i <= l.n(); ++i) p[i - 1] = l.position(i, theta);
    return p;
}

}  // namespace

void validate(const ModelParams& p)
{
    if (!(p.theta > 0.0) || !std::isfinite(p.theta)) fail(Errc::invalid_argument, "theta must be positive");
    if (p.K < 0) fail(Errc::invalid_argument, "K must be nonnegative");
    if (p.N < 1) fail(Errc::invalid_argument, "N must be at least 1");
}

bool interlaces(const LevelConfig& upper, const LevelConfig& lower)
{
    if (upper.n() != lower.n() + 1) return false;
    for (int i = 0; i < lower.n(); ++i)
        if (!(upper.lambda[i] >= lower.lambda[i] && lower.lambda[i] >= upper.lambda[i + 1])) return false;
    return true;
}

bool in_state_space(const CornersConfig& c, int K)
{
    for (int j = 1; j <= c.N(); ++j) {
        const LevelConfig& l = c.level(j);
        if (l.n() != j) return false;
        for (int i = 0; i < j; ++i) {
            if (l.lambda[i] < 0 || l.lambda[i] > K) return false;
            if (i > 0 && l.lambda[i] > l.lambda[i - 1]) return false;
        }
        if (j > 1 && !interlaces(l, c.level(j - 1))) return false;
    }
    return true;
}

std::vector<LevelConfig> enumerate_levels(int K, int n, std::int64_t guard)
{
    if (K < 0 || n < 1) fail(Errc::invalid_argument, "enumerate_levels: need K >= 0 and n >= 1");
    // |Lambda^K_n| = C(K+n, n)
    double count = 1.0;
    for (int i = 1; i <= n; ++i) count = count * (K + i) / i;
    if (count > static_cast<double>(guard)) fail(Errc::budget, "enumerate_levels: state space exceeds the guard");
    std::vector<LevelConfig> out;
    out.reserve(static_cast<std::size_t>(count + 0.5));
    LevelConfig cur;
    cur.lambda.assign(n, 0);
    // lexicographic order on (lambda_1, ..., lambda_n)
    auto rec = [&](auto&& self, int i, int hi) -> void {
        if (i == n) {
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= hi; ++v) {
            cur.lambda[i] = v;
            self(self, i + 1, v);
        }
    };
    rec(rec, 0, K);
    return out;
}

std::vector<CornersConfig> enumerate_corners(int K, int N, std::int64_t guard)
{
    if (K < 0 || N < 1) fail(Errc::invalid_argument, "enumerate_corners: need K >= 0 and N >= 1");
    std::vector<CornersConfig> out;
    CornersConfig cur;
    cur.levels.resize(N);
    for (int j = 1; j <= N; ++j) cur.level(j).lambda.assign(j, 0);

    // fill level j entry i given level j+1, then descend
    auto rec = [&](auto&& self, int j, int i) -> void {
        if (j == 0) {
            if (static_cast<std::int64_t>(out.size()) >= guard)
                fail(Errc::budget, "enumerate_corners: state space exceeds the guard");
            out.push_back(cur);
            return;
        }
        if (i == j) {
            self(self, j - 1, 0);
            return;
        }
        const auto& up = cur.level(j + 1).lambda;
        for (int v = up[i + 1]; v <= up[i]; ++v) {
            cur.level(j).lambda[i] = v;
            self(self, j, i + 1);
        }
    };
    for (const LevelConfig& top : enumerate_levels(K, N, guard)) {
        cur.level(N) = top;
        rec(rec, N - 1, 0);
    }
    return out;
}

double log_weight_I(const LevelConfig& upper, const LevelConfig& lower, double theta)
{
    if (!interlaces(upper, lower)) fail(Errc::precondition, "log_weight_I: levels do not interlace");
    const std::vector<double> L = positions(upper, theta);
    const std::vector<double> M = positions(lower, theta);
    const int j = lower.n();
    double s = 0.0;
    for (int p = 0; p <= j; ++p)
        for (int q = p + 1; q <= j; ++q) s += lg(L[p] - L[q] + 1.0 - theta) - lg(L[p] - L[q]);
    for (int p = 0; p < j; ++p)
        for (int q = p + 1; q < j; ++q) s += lg(M[p] - M[q] + 1.0) - lg(M[p] - M[q] + theta);
    for (int p = 0; p < j; ++p)
        for (int q = p + 1; q <= j; ++q) s += lg(M[p] - L[q]) - lg(M[p] - L[q] + 1.0 - theta);
    for (int p = 0; p < j; ++p)
        for (int q = p; q < j; ++q) s += lg(L[p] - M[q] + theta) - lg(L[p] - M[q] + 1.0);
    return s;
}

double log_weight_Ht(const LevelConfig& top, double theta, int K)
{
    const std::vector<double> L = positions(top, theta);
    const int N = top.n();
    double s = 0.0;
    for (int p = 0; p < N; ++p) {
        for (int q = p + 1; q < N; ++q) s += lg(L[p] - L[q] + 1.0) - lg(L[p] - L[q] + 1.0 - theta);
        s -= lg(L[p] + N * theta + 1.0) + lg(K - L[p] + 1.0 - theta);
    }
    return s;
}

double log_weight_Hb(const LevelConfig& level, double theta)
{
    const std::vector<double> L = positions(level, theta);
    double s = 0.0;
    for (int p = 0; p < level.n(); ++p)
        for (int q = p + 1; q < level.n(); ++q) s += lg(L[p] - L[q] + theta) - lg(L[p] - L[q]);
    return s;
}

double log_weight_corners(const CornersConfig& c, double theta, int K)
{
    double s = log_weight_Ht(c.level(c.N()), theta, K);
    for (int j = 1; j < c.N(); ++j) s += log_weight_I(c.level(j + 1), c.level(j), theta);
    return s;
}

double printed_partition_function(double theta, int K, int N)
{
    double s = static_cast<double>(N) * K * std::log(1.0 + theta);
    for (int i = 1; i <= N; ++i)
        s += lg(i * theta) - lg(theta) - lg(K + theta * (i - 1) + 1.0);
    return std::exp(s);
}

double partition_function(double theta, int K, int N, ZMode mode, std::int64_t guard)
{
    validate({theta, K, N});
    if (mode == ZMode::closed) {
        // 2^{NK} Gamma(theta)^{N(N-1)/2} / prod_i Gamma(K + theta(i-1) + 1)
        double s = static_cast<double>(N) * K * std::log(2.0) + 0.5 * N * (N - 1) * lg(theta);
        for (int i = 1; i <= N; ++i) s -= lg(K + theta * (i - 1) + 1.0);
        return std::exp(s);
    }
    std::vector<double> lw;
    for (const CornersConfig& c : enumerate_corners(K, N, guard)) lw.push_back(log_weight_corners(c, theta, K));
    return std::exp(log_sum_exp(lw));
}

double single_level_normalization(double theta, int K, int n)
{
    double s = static_cast<double>(n) * K * std::log(2.0);
    for (int i = 1; i <= n; ++i) s += lg(i * theta) - lg(theta) - lg(K + theta * (i - 1) + 1.0);
    return std::exp(s);
}

double log_single_level_weight(const LevelConfig& level, double theta, int K)
{
    const std::vector<double> L = positions(level, theta);
    const int n = level.n();
    double s = 0.0;
    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) {
            const double d = L[p] - L[q];
            s += lg(d + 1.0) + lg(d + theta) - lg(d + 1.0 - theta) - lg(d);
        }
        s -= lg(L[p] + n * theta + 1.0) + lg(K - L[p] + 1.0 - theta);
    }
    return s;
}

Enumeration enumerate_measure(const ModelParams& p, std::int64_t guard)
{
    validate(p);
    Enumeration e;
    e.params = p;
    e.configs = enumerate_corners(p.K, p.N, guard);
    e.log_weight.reserve(e.configs.size());
    for (const CornersConfig& c : e.configs) e.log_weight.push_back(log_weight_corners(c, p.theta, p.K));
    const double lz = log_sum_exp(e.log_weight);
    e.Z = std::exp(lz);
    e.probability.reserve(e.configs.size());
    for (double lw : e.log_weight) e.probability.push_back(std::exp(lw - lz));
    return e;
}

MarginalTable marginal_level(double theta, int K, int N, int n, std::int64_t guard)
{
    if (n < 1 || n > N) fail(Errc::level_range, "marginal_level: n must lie in [1, N]");
    const Enumeration e = enumerate_measure({theta, K, N}, guard);
    MarginalTable t;
    t.levels = enumerate_levels(K, n, guard);
    std::map<std::vector<int>, std::size_t> index;
    for (std::size_t k = 0; k < t.levels.size(); ++k) index[t.levels[k].lambda] = k;
    t.by_sum.assign(t.levels.size(), 0.0);
    for (std::size_t c = 0; c < e.configs.size(); ++c) t.by_sum[index.at(e.configs[c].level(n).lambda)] += e.probability[c];
    const double Zn = single_level_normalization(theta, K, n);
    t.by_formula.resize(t.levels.size());
    for (std::size_t k = 0; k < t.levels.size(); ++k) {
        t.by_formula[k] = std::exp(log_single_level_weight(t.levels[k], theta, K)) / Zn;
        t.max_abs_diff = std::max(t.max_abs_diff, std::fabs(t.by_formula[k] - t.by_sum[k]));
    }
    return t;
}

double projection_discrepancy(double theta, int K, int N, int n, std::int64_t guard)
{
    if (n < 1 || n > N) fail(Errc::level_range, "projection_discrepancy: n must lie in [1, N]");
    const Enumeration big = enumerate_measure({theta, K, N}, guard);
    const Enumeration small = enumerate_measure({theta, K, n}, guard);
    std::map<std::vector<int>, double> proj;
    auto key = [n](const CornersConfig& c) {
        std::vector<int> k;
        for (int j = 1; j <= n; ++j) k.insert(k.end(), c.level(j).lambda.begin(), c.level(j).lambda.end());
        return k;
    };
    for (std::size_t c = 0; c < big.configs.size(); ++c) proj[key(big.configs[c])] += big.probability[c];
    double worst = 0.0;
    if (proj.size() != small.configs.size()) return INFINITY;
    for (std::size_t c = 0; c < small.configs.size(); ++c) {
        auto it = proj.find(key(small.configs[c]));
        if (it == proj.end()) return INFINITY;
        worst = std::max(worst, std::fabs(it->second - small.probability[c]));
    }
    return worst;
}

std::complex<double> exact_expectation(const std::function<std::complex<double>(const CornersConfig&)>& g,
                                       double theta, int K, int N, std::int64_t guard)
{
    const Enumeration e = enumerate_measure({theta, K, N}, guard);
    std::complex<double> s = 0.0;
    for (std::size_t c = 0; c < e.configs.size(); ++c) s += g(e.configs[c]) * e.probability[c];
    return s;
}

NekrasovResult nekrasov_check(double theta, int K, int n, const std::array<double, 4>& z, std::int64_t guard)
{
    const MarginalTable m = marginal_level(theta, K, n, n, guard);
    NekrasovResult r;
    std::vector<std::complex<double>> vals;
    for (int k = 0; k < 4; ++k) {
        const double zn = z[k] * n;
        std::complex<double> e1 = 0.0, e2 = 0.0;
        for (std::size_t c = 0; c < m.levels.size(); ++c) {
            double p1 = 1.0, p2 = 1.0;
            for (int i = 1; i <= n; ++i) {
                const double l = m.levels[c].position(i, theta);
                if (zn - l == 0.0 || zn - l - 1.0 == 0.0) fail(Errc::pole, "nekrasov_check: evaluation point hits a particle");
                p1 *= (zn - l - theta) / (zn - l);
                p2 *= (zn - l + theta - 1.0) / (zn - l - 1.0);
            }
            e1 += m.by_sum[c] * p1;
            e2 += m.by_sum[c] * p2;
        }
        const double phi_minus = zn + n * theta;
        const double phi_plus = K + 1.0 - theta - zn;
        r.R[k] = phi_minus * e1 + phi_plus * e2;
        vals.push_back(r.R[k]);
    }
    r.residual = num::degree_at_most(vals, 1).residual;
    return r;
}

double jack_crosscheck(double theta, int K, int N, std::int64_t guard)
{
    const auto configs = enumerate_corners(K, N, guard);
    const double Z = partition_function(theta, K, N, ZMode::closed);
    double worst = 0.0;
    for (const CornersConfig& c : configs) {
        std::vector<jack::Partition> seq;
        for (int j = 1; j <= N; ++j) seq.emplace_back(c.level(j).lambda);
        const double a = jack::ascending_weight(seq, K, theta);
        const double b = std::exp(log_weight_corners(c, theta, K)) / Z;
        const double scale = std::max(std::fabs(a), std::fabs(b));
        if (scale > 0.0) worst = std::max(worst, std::fabs(a - b) / scale);
    }
    return worst;
}

}  // namespace bk::exact
