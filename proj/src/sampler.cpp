/*
 * Copyright (c) 2026 The bkcorners contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 */
#include "sampler.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "asymptotics.hpp"
#include "error.hpp"

namespace bk::mc {

int default_burnin(const ModelParams& p) { return 20 * std::max(p.K, 1); }
int default_thin(const ModelParams& p) { return std::max(p.K, 1); }

Interval site_support(const CornersConfig& c, int K, int j, int i)
{
    const int N = c.N();
    if (j < 1 || j > N || i < 1 || i > j) fail(Errc::invalid_argument, "site_support: site out of range");
    const auto& cur = c.level(j).lambda;
    Interval r{0, K};
    if (i > 1) r.hi = std::min(r.hi, cur[i - 2]);
    if (i < j) r.lo = std::max(r.lo, cur[i]);
    if (j < N) {
        const auto& up = c.level(j + 1).lambda;
        r.hi = std::min(r.hi, up[i - 1]);
        r.lo = std::max(r.lo, up[i]);
    }
    if (j > 1) {
        const auto& dn = c.level(j - 1).lambda;
        if (i <= j - 1) r.lo = std::max(r.lo, dn[i - 1]);
        if (i >= 2) r.hi = std::min(r.hi, dn[i - 2]);
    }
    return r;
}

namespace {

// Ratio w(x+1)/w(x) of the conditional weight of particle (j,i) when its position moves
// from x to x+1. Each Gamma ratio with unit shift collapses to a rational factor. The factors
// are multiplied in one at a time: separate numerator and denominator products overflow
// once a level holds a few dozen particles.
double step_ratio(const CornersConfig& c, double theta, int K, int j, int i, double x)
{
    const int N = c.N();
    const auto& cur = c.level(j).lambda;
    double r = 1.0;
    if (j < N) {
        const auto& up = c.level(j + 1).lambda;
        for (int q = 1; q <= j; ++q) {
            if (q == i) continue;
            const double pq = cur[q - 1] - q * theta;
            if (q > i) {
                const double d = x - pq;
                r *= (d + 1.0) / (d + theta);
            } else {
                const double d = pq - x;
                r *= (d - 1.0 + theta) / d;
            }
        }
        for (int q = i + 1; q <= j + 1; ++q) {
            const double e = x - (up[q - 1] - q * theta);
            r *= e / (e + 1.0 - theta);
        }
        for (int p = 1; p <= i; ++p) {
            const double e = (up[p - 1] - p * theta) - x;
            r *= e / (e - 1.0 + theta);
        }
    }
    // every factor of this block is identically 1 at theta = 1
    if (j > 1 && theta != 1.0) {
        const auto& dn = c.level(j - 1).lambda;
        for (int q = 1; q <= j; ++q) {
            if (q == i) continue;
            const double pq = cur[q - 1] - q * theta;
            if (q > i) {
                const double d = x - pq;
                r *= (d + 1.0 - theta) / d;
            } else {
                const double d = pq - x;
                r *= (d - 1.0) / (d - theta);
            }
        }
        for (int p = 1; p <= i - 1; ++p) {
            const double e = (dn[p - 1] - p * theta) - x;
            r *= (e - theta) / (e - 1.0);
        }
        for (int q = i; q <= j - 1; ++q) {
            const double e = x - (dn[q - 1] - q * theta);
            r *= (e + theta) / (e + 1.0);
        }
    }
    if (j == N) {
        for (int q = 1; q <= j; ++q) {
            if (q == i) continue;
            const double pq = cur[q - 1] - q * theta;
            if (q > i) {
                const double d = x - pq;
                r *= (d + 1.0) / (d + 1.0 - theta);
            } else {
                const double d = pq - x;
                r *= (d - theta) / d;
            }
        }
        r *= (K - x - theta) / (x + N * theta + 1.0);
    }
    return r;
}

// Uniform integer in [0, width) from one 32-bit word.
int uniform_below(Philox4x32& rng, int width)
{
    return static_cast<int>((static_cast<std::uint64_t>(rng.next32()) * static_cast<std::uint64_t>(width)) >> 32);
}

// theta = 1 below the top level: given levels j-1 and j+1 the particles of level j are
// independent and uniform on their interlacing windows (the window of level j+1 already
// enforces the ordering within level j and the box [0, K]).
void uniform_level(CornersConfig& c, int j, Philox4x32& rng)
{
    int* cur = c.level(j).lambda.data();
    const int* up = c.level(j + 1).lambda.data();
    const int* dn = j > 1 ? c.level(j - 1).lambda.data() : nullptr;
    for (int i = 0; i < j; ++i) {
        int lo = up[i + 1], hi = up[i];
        if (dn) {
            if (i < j - 1) lo = std::max(lo, dn[i]);
            if (i > 0) hi = std::min(hi, dn[i - 1]);
        }
        cur[i] = lo + uniform_below(rng, hi - lo + 1);
    }
}

}  // namespace

std::vector<double> conditional_log_weights(const CornersConfig& c, double theta, int K, int j, int i)
{
    const Interval r = site_support(c, K, j, i);
    std::vector<double> lw(r.hi - r.lo + 1, 0.0);
    for (int v = r.lo; v < r.hi; ++v) {
        const double ratio = step_ratio(c, theta, K, j, i, v - i * theta);
        if (!(ratio > 0.0) || !std::isfinite(ratio)) fail(Errc::precondition, "heat bath: non-positive weight ratio");
        lw[v - r.lo + 1] = lw[v - r.lo] + std::log(ratio);
    }
    return lw;
}

void heat_bath_update(CornersConfig& c, double theta, int K, int j, int i, Philox4x32& rng)
{
    const Interval r = site_support(c, K, j, i);
    if (r.lo == r.hi) {
        c.level(j).lambda[i - 1] = r.lo;
        return;
    }
    const int width = r.hi - r.lo + 1;
    if (theta == 1.0 && j < c.N()) {
        // below the top level the theta=1 conditional is uniform
        c.level(j).lambda[i - 1] = r.lo + uniform_below(rng, width);
        return;
    }
    thread_local std::vector<double> w;
    w.resize(width);
    const std::vector<double> lw = conditional_log_weights(c, theta, K, j, i);
    const double mx = *std::max_element(lw.begin(), lw.end());
    double total = 0.0;
    for (int k = 0; k < width; ++k) {
        w[k] = std::exp(lw[k] - mx);
        total += w[k];
    }
    double u = rng.uniform() * total;
    int pick = width - 1;
    for (int k = 0; k < width; ++k) {
        u -= w[k];
        if (u < 0.0) {
            pick = k;
            break;
        }
    }
    c.level(j).lambda[i - 1] = r.lo + pick;
}

void sweep(CornersConfig& c, double theta, int K, Philox4x32& rng)
{
    for (int j = 1; j <= c.N(); ++j) {
        if (theta == 1.0 && j < c.N()) {
            uniform_level(c, j, rng);
            continue;
        }
        for (int i = 1; i <= j; ++i) heat_bath_update(c, theta, K, j, i, rng);
    }
}

CornersConfig initial_config(const ModelParams& p, InitKind kind)
{
    exact::validate(p);
    CornersConfig c;
    c.levels.resize(p.N);
    for (int j = 1; j <= p.N; ++j) c.level(j).lambda.assign(j, 0);
    if (kind == InitKind::zero || p.K == 0) return c;

    for (int n = 1; n <= p.N; ++n) {
        // positions l/n follow mu(., n/K); place particle i at tail quantile (i - 1/2)/n
        const double s = static_cast<double>(n) / p.K;
        const double lo = -p.theta, hi = 1.0 / s;
        const int G = 4000;
        std::vector<double> tail(G + 1, 0.0);
        const double h = (hi - lo) / G;
        for (int g = G - 1; g >= 0; --g) {
            const double a = lo + g * h;
            tail[g] = tail[g + 1] + 0.5 * h * (asy::mu_density(a, s, p.theta) + asy::mu_density(a + h, s, p.theta));
        }
        auto& lam = c.level(n).lambda;
        int g = G;
        for (int i = 1; i <= n; ++i) {
            const double target = (i - 0.5) / n * tail[0];
            while (g > 0 && tail[g] < target) --g;
            double y = lo + g * h;
            if (g < G && tail[g] != tail[g + 1]) y += h * (tail[g] - target) / (tail[g] - tail[g + 1]);
            const double ell = n * y;
            lam[i - 1] = std::clamp(static_cast<int>(std::lround(ell + i * p.theta)), 0, p.K);
            if (i > 1) lam[i - 1] = std::min(lam[i - 1], lam[i - 2]);
        }
    }
    for (int j = p.N - 1; j >= 1; --j) {
        const auto& up = c.level(j + 1).lambda;
        auto& lam = c.level(j).lambda;
        for (int i = 0; i < j; ++i) lam[i] = std::clamp(lam[i], up[i + 1], up[i]);
    }
    return c;
}

SampleBatch sample_corners(const ModelParams& p, const ChainConfig& cfg, int chain_index)
{
    exact::validate(p);
    SampleBatch b;
    b.params = p;
    b.chain = cfg;
    if (b.chain.burnin_sweeps < 0) b.chain.burnin_sweeps = default_burnin(p);
    if (b.chain.thin_sweeps < 0) b.chain.thin_sweeps = default_thin(p);
    if (b.chain.thin_sweeps < 1) fail(Errc::invalid_argument, "thin must be at least 1");
    if (b.chain.n_samples < 0) fail(Errc::invalid_argument, "n_samples must be nonnegative");
    for (int lv : cfg.record_levels)
        if (lv < 1 || lv > p.N) fail(Errc::level_range, "record level outside [1, N]");
    if (b.chain.n_samples == 0) return b;

    Philox4x32 rng(cfg.seed, static_cast<std::uint64_t>(chain_index));
    CornersConfig c = initial_config(p, cfg.init);
    std::int64_t done = 0;
    for (int s = 0; s < b.chain.burnin_sweeps; ++s, ++done) sweep(c, p.theta, p.K, rng);
    b.snapshots.reserve(b.chain.n_samples);
    for (int k = 0; k < b.chain.n_samples; ++k) {
        for (int s = 0; s < b.chain.thin_sweeps; ++s, ++done) sweep(c, p.theta, p.K, rng);
        Snapshot snap;
        snap.chain = chain_index;
        snap.sweep = done;
        if (cfg.record_levels.empty()) {
            for (int j = 1; j <= p.N; ++j) snap.levels[j] = c.level(j).lambda;
        } else {
            for (int lv : cfg.record_levels) snap.levels[lv] = c.level(lv).lambda;
        }
        b.snapshots.push_back(std::move(snap));
    }
    return b;
}

SampleBatch sample_chains(const ModelParams& p, const ChainConfig& cfg, int n_chains)
{
    if (n_chains < 1) fail(Errc::invalid_argument, "need at least one chain");
    std::vector<SampleBatch> parts(n_chains);
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    if (workers <= 1 || n_chains == 1) {
        for (int k = 0; k < n_chains; ++k) parts[k] = sample_corners(p, cfg, k);
    } else {
        // chains are independent streams; results land in fixed slots so order is deterministic
        for (int start = 0; start < n_chains; start += static_cast<int>(workers)) {
            std::vector<std::future<SampleBatch>> fut;
            const int stop = std::min(n_chains, start + static_cast<int>(workers));
            for (int k = start; k < stop; ++k) fut.push_back(std::async(std::launch::async, sample_corners, p, cfg, k));
            for (int k = start; k < stop; ++k) parts[k] = fut[k - start].get();
        }
    }
    SampleBatch out = parts[0];
    out.n_chains = n_chains;
    for (int k = 1; k < n_chains; ++k)
        out.snapshots.insert(out.snapshots.end(), parts[k].snapshots.begin(), parts[k].snapshots.end());
    return out;
}

int level_for_H(double s, int K, double theta) { return static_cast<int>(std::ceil(s * K / theta - 1e-9)); }
int level_for_hat(double s, int K) { return static_cast<int>(std::ceil(s * K - 1e-9)); }

int height_H(const std::vector<int>& level, double x, double s, int K, double theta)
{
    (void)s;
    const int n = static_cast<int>(level.size());
    int cnt = 0;
    for (int i = 1; i <= n; ++i) {
        const double shifted = level[i - 1] - i * theta - K / 2.0 + theta * (n + 1) / 2.0;
        if (shifted / K >= x) ++cnt;
    }
    return cnt;
}

int height_hat(const std::vector<int>& level, double x, double s, int K, double theta)
{
    (void)s;
    int cnt = 0;
    for (int i = 1; i <= static_cast<int>(level.size()); ++i)
        if (level[i - 1] - i * theta >= x * K) ++cnt;
    return cnt;
}

std::complex<double> stieltjes_field(const std::vector<int>& level, std::complex<double> z, int K, double theta,
                                     bool* near_pole)
{
    std::complex<double> s = 0.0;
    double closest = INFINITY;
    for (int i = 1; i <= static_cast<int>(level.size()); ++i) {
        const double p = (level[i - 1] - i * theta) / K;
        closest = std::min(closest, std::abs(z - p));
        s += 1.0 / (z - p);
    }
    if (near_pole) *near_pole = closest < 1e-8;
    return s;
}

namespace {

const std::vector<int>& find_level(const Snapshot& s, int n)
{
    auto it = s.levels.find(n);
    if (it == s.levels.end()) fail(Errc::level_range, "level " + std::to_string(n) + " not recorded");
    return it->second;
}

const std::vector<int>& find_level(const CornersConfig& c, int n)
{
    if (n < 1 || n > c.N()) fail(Errc::level_range, "level " + std::to_string(n) + " outside the array");
    return c.level(n).lambda;
}

}  // namespace

int height_H(const Snapshot& s, double x, double sv, int K, double theta)
{
    return height_H(find_level(s, level_for_H(sv, K, theta)), x, sv, K, theta);
}
int height_hat(const Snapshot& s, double x, double sv, int K, double theta)
{
    return height_hat(find_level(s, level_for_hat(sv, K)), x, sv, K, theta);
}
std::complex<double> stieltjes_field(const Snapshot& s, std::complex<double> z, double sv, int K, double theta,
                                     bool* near_pole)
{
    return stieltjes_field(find_level(s, level_for_hat(sv, K)), z, K, theta, near_pole);
}
int height_H(const CornersConfig& c, double x, double s, int K, double theta)
{
    return height_H(find_level(c, level_for_H(s, K, theta)), x, s, K, theta);
}
int height_hat(const CornersConfig& c, double x, double s, int K, double theta)
{
    return height_hat(find_level(c, level_for_hat(s, K)), x, s, K, theta);
}
std::complex<double> stieltjes_field(const CornersConfig& c, std::complex<double> z, double s, int K, double theta,
                                     bool* near_pole)
{
    return stieltjes_field(find_level(c, level_for_hat(s, K)), z, K, theta, near_pole);
}

}  // namespace bk::mc
