/*
 * Copyright (c) 2026 The bkcorners contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 */
#include "numerics.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "error.hpp"

namespace bk::num {

namespace {

constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

double lanczos_log_gamma(double x)
{
    // valid for x >= 0.5
    x -= 1.0;
    double a = kLanczos[0];
    const double t = x + kLanczosG + 0.5;
    for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
    return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(a);
}

}  // namespace

double SignedLog::value() const { return sign * std::exp(log_abs); }

double log_gamma(double x)
{
    if (!(x > 0.0) || !std::isfinite(x)) fail(Errc::domain, "log_gamma: argument must be positive and finite");
    double shift = 0.0;
    while (x < 0.5) {
        shift -= std::log(x);
        x += 1.0;
    }
    return lanczos_log_gamma(x) + shift;
}

SignedLog log_pochhammer(double b, int n)
{
    if (n < 0) fail(Errc::invalid_argument, "log_pochhammer: negative length");
    SignedLog r;
    if (n == 0) return r;
    if (b > 0.0 && n > 16) {
        r.log_abs = log_gamma(b + n) - log_gamma(b);
        return r;
    }
    for (int k = 0; k < n; ++k) {
        const double f = b + k;
        if (f == 0.0) fail(Errc::pole, "log_pochhammer: zero factor");
        if (f < 0.0) r.sign = -r.sign;
        r.log_abs += std::log(std::fabs(f));
    }
    return r;
}

cplx branch_sqrt(cplx z, double a, double b)
{
    if (z.imag() == 0.0) {
        const double x = z.real();
        if (x < a) return {-std::sqrt(a - x) * std::sqrt(b - x), 0.0};
        if (x <= b) return {0.0, std::sqrt(x - a) * std::sqrt(b - x)};
        return {std::sqrt(x - a) * std::sqrt(x - b), 0.0};
    }
    return std::sqrt(z - a) * std::sqrt(z - b);
}

cplx circle_integral(const std::function<cplx(cplx)>& f, const Contour& c)
{
    if (!(c.radius > 0.0)) fail(Errc::contour, "circle_integral: radius must be positive");
    if (c.nodes < 16) fail(Errc::contour, "circle_integral: at least 16 nodes required");
    cplx sum = 0.0;
    const double h = 2.0 * std::numbers::pi / c.nodes;
    for (int k = 0; k < c.nodes; ++k) {
        const cplx e = std::polar(1.0, h * k);
        const cplx z = c.center + c.radius * e;
        sum += f(z) * (cplx(0.0, 1.0) * c.radius * e);
    }
    return sum * h;
}

namespace {

struct SimpsonState {
    const std::function<double(double)>* f;
    int budget;
    int max_depth;
};

double safe_eval(const std::function<double(double)>& f, double x)
{
    const double v = f(x);
    return std::isfinite(v) ? v : 0.0;
}

double simpson_step(SimpsonState& st, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = safe_eval(*st.f, lm);
    const double frm = safe_eval(*st.f, rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth >= st.max_depth || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (--st.budget < 0) fail(Errc::budget, "adaptive_integral_1d: subdivision budget exceeded");
    return simpson_step(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson_step(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double adaptive_integral_1d(const std::function<double(double)>& f, double a, double b, double tol,
                            const AdaptiveOptions& opt)
{
    if (a == b) return 0.0;
    if (!(tol > 0.0)) fail(Errc::invalid_argument, "adaptive_integral_1d: tol must be positive");
    SimpsonState st{&f, opt.max_subdivisions, opt.max_depth};
    const double fa = safe_eval(f, a);
    const double fb = safe_eval(f, b);
    const double fm = safe_eval(f, 0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(st, a, b, fa, fm, fb, whole, tol, 0);
}

namespace {

GaussRule compute_gauss_rule(int n)
{
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        // recompute the derivative at the converged root
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.x[n / 2] = 0.0;
    return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n)
{
    if (n < 1) fail(Errc::invalid_argument, "gauss_legendre: need at least one node");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) {
        if (n == 1)
            slot = std::make_unique<GaussRule>(GaussRule{{0.0}, {2.0}});
        else
            slot = std::make_unique<GaussRule>(compute_gauss_rule(n));
    }
    return *slot;
}

double gauss_integral(const std::function<double(double)>& f, double a, double b, int n)
{
    const GaussRule& g = gauss_legendre(n);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += g.w[i] * f(c + h * g.x[i]);
    return s * h;
}

namespace {

double tensor_once(const std::function<double(double, double)>& f, const Rect& r, int n1, int n2)
{
    const GaussRule& g1 = gauss_legendre(n1);
    const GaussRule& g2 = gauss_legendre(n2);
    const double c1 = 0.5 * (r.a1 + r.b1), h1 = 0.5 * (r.b1 - r.a1);
    const double c2 = 0.5 * (r.a2 + r.b2), h2 = 0.5 * (r.b2 - r.a2);
    double s = 0.0;
    for (int i = 0; i < n1; ++i) {
        const double x = c1 + h1 * g1.x[i];
        double inner = 0.0;
        for (int j = 0; j < n2; ++j) inner += g2.w[j] * f(x, c2 + h2 * g2.x[j]);
        s += g1.w[i] * inner;
    }
    return s * h1 * h2;
}

}  // namespace

double tensor_integral_2d(const std::function<double(double, double)>& f, const Rect& r, int nodes)
{
    if (nodes < 2) fail(Errc::invalid_argument, "tensor_integral_2d: need at least two nodes");
    // Offset node counts keep a diagonal singularity off the grid; the Richardson step
    // removes the leading O(1/n) error such a singularity leaves behind.
    const double fine = tensor_once(f, r, nodes, nodes + 1);
    const int half = nodes / 2;
    const double coarse = tensor_once(f, r, half, half + 1);
    const double ratio = static_cast<double>(nodes) / half;
    return (ratio * fine - coarse) / (ratio - 1.0);
}

DegreeCheck degree_at_most(const std::vector<cplx>& values, int d, double tol)
{
    if (d < 0) fail(Errc::invalid_argument, "degree_at_most: negative degree");
    if (static_cast<int>(values.size()) < d + 2) fail(Errc::too_few_points, "degree_at_most: need at least d+2 values");
    std::vector<cplx> diff = values;
    for (int k = 0; k <= d; ++k) {
        for (std::size_t i = 0; i + 1 < diff.size(); ++i) diff[i] = diff[i + 1] - diff[i];
        diff.pop_back();
    }
    DegreeCheck out;
    for (const cplx& v : diff) out.residual = std::max(out.residual, std::abs(v));
    out.ok = out.residual < tol;
    return out;
}

}  // namespace bk::num
