/*
 * Copyright (c) 2026 The bkcorners contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 */
#include "asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "error.hpp"
#include "numerics.hpp"

namespace bk::asy {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

void check_positive(double s, double theta)
{
    if (!(s > 0.0) || !(theta > 0.0)) fail(Errc::domain, "level s and theta must be positive");
}

// exp(theta G(z/s, s)) on the l/K scale, where the cut is [a(s), b(s)].
// Written directly on that scale so that z = a(s), b(s) hit the branch points exactly.
cplx W(cplx z, double s, double theta)
{
    const EdgeData e = edge_data(s, theta);
    if (z.imag() == 0.0 && z.real() > e.a && z.real() < e.b) fail(Errc::domain, "exp(theta G): argument on the cut");
    const cplx root = num::branch_sqrt(z, e.a, e.b);
    // at z = 1 the first form is 0/0; the reciprocal form of exp(-theta G) is regular there
    if (z == 1.0) return 2.0 * (z + theta * s) / ((1.0 - theta * s) + 2.0 * root);
    return ((1.0 - theta * s) - 2.0 * root) / (2.0 * (1.0 - z));
}

cplx level_ratio(cplx w, double s1, double s2, double theta)
{
    const cplx p = (w + 1.0) * (w + 1.0), m = (w - 1.0) * (w - 1.0);
    return (p * theta * s1 - m) / (p * theta * s2 - m);
}

}  // namespace

EdgeData edge_data(double s, double theta)
{
    check_positive(s, theta);
    EdgeData e;
    e.s = s;
    e.theta = theta;
    const double mid = 0.5 * (1.0 / s - theta), half = std::sqrt(theta / s);
    e.z_minus = mid - half;
    e.z_plus = mid + half;
    e.a = 0.5 * (1.0 - theta * s) - std::sqrt(theta * s);
    e.b = 0.5 * (1.0 - theta * s) + std::sqrt(theta * s);
    return e;
}

double mu_density(double x, double s, double theta)
{
    check_positive(s, theta);
    if (!(x > -theta && x < 1.0 / s)) return 0.0;
    const double arg = (1.0 / s - theta) / (2.0 * std::sqrt((x + theta) * (1.0 / s - x)));
    // outside [-1,1] the arccos is clamped: saturated (1/theta) below, empty above
    return std::acos(std::clamp(arg, -1.0, 1.0)) / (theta * kPi);
}

double nu_density(double x, double s, double theta)
{
    check_positive(s, theta);
    if (x * x < s) {
        const double arg = (1.0 - s) / (2.0 * std::sqrt((s + 1.0) * (s + 1.0) / 4.0 - x * x));
        return std::acos(std::clamp(arg, -1.0, 1.0)) / (theta * kPi);
    }
    if (s > 1.0 && std::abs(x) < (s + 1.0) / 2.0) return 1.0 / theta;
    return 0.0;
}

double limit_height_h(double x, double s, double theta)
{
    check_positive(s, theta);
    const double edge = (s + 1.0) / 2.0, r = std::sqrt(s);
    if (x <= -edge) return s / theta;
    if (x >= edge) return 0.0;
    auto nu = [&](double y) { return nu_density(y, s, theta); };
    double total = 0.0;
    // saturated outer pieces (present only for s > 1) are integrated exactly
    if (s > 1.0) {
        if (x < -r) total += (-r - x) / theta;
        total += (edge - std::max(x, r)) / theta;
    }
    const double lo = std::max(x, -r);
    if (lo < r) total += num::adaptive_integral_1d(nu, lo, r, 1e-13);
    return total;
}

cplx exp_thetaG(cplx z, double s, double theta)
{
    const EdgeData e = edge_data(s, theta);
    if (z.imag() == 0.0 && z.real() > e.z_minus && z.real() < e.z_plus)
        fail(Errc::domain, "exp_thetaG: argument on the cut");
    const double R = 1.0 / s - theta;
    const cplx root = num::branch_sqrt(z, e.z_minus, e.z_plus);
    if (z == 1.0 / s) return 2.0 * (z + theta) / (R + 2.0 * root);
    return (R - 2.0 * root) / (2.0 * (1.0 / s - z));
}

cplx exp_neg_thetaG(cplx z, double s, double theta)
{
    const EdgeData e = edge_data(s, theta);
    if (z.imag() == 0.0 && z.real() > e.z_minus && z.real() < e.z_plus)
        fail(Errc::domain, "exp_neg_thetaG: argument on the cut");
    const double R = 1.0 / s - theta;
    const cplx root = num::branch_sqrt(z, e.z_minus, e.z_plus);
    if (z == -theta) return 2.0 * (1.0 / s - z) / (R - 2.0 * root);
    return (R + 2.0 * root) / (2.0 * (z + theta));
}

cplx stieltjes_quadrature(cplx z, double s, double theta, double tol)
{
    const EdgeData e = edge_data(s, theta);
    if (z.imag() == 0.0 && z.real() >= -theta && z.real() <= 1.0 / s)
        fail(Errc::domain, "stieltjes_quadrature: argument on the support");
    auto part = [&](auto&& g, double lo, double hi) {
        if (!(lo < hi)) return cplx(0.0);
        const double re = num::adaptive_integral_1d([&](double t) { return g(t).real(); }, lo, hi, tol);
        const double im = num::adaptive_integral_1d([&](double t) { return g(t).imag(); }, lo, hi, tol);
        return cplx(re, im);
    };
    auto flat = [&](double x) { return mu_density(x, s, theta) / (z - x); };
    // inside the band x = c + r cos(phi) turns the square-root edges into smooth endpoints
    const double c = 0.5 * (e.z_minus + e.z_plus), r = 0.5 * (e.z_plus - e.z_minus);
    auto band = [&](double phi) {
        const double x = c + r * std::cos(phi);
        return mu_density(x, s, theta) / (z - x) * (r * std::sin(phi));
    };
    return part(flat, -theta, e.z_minus) + part(band, 0.0, kPi) + part(flat, e.z_plus, 1.0 / s);
}

IdentityResiduals identity_residuals(cplx z, double s, double theta, double fd_step)
{
    const EdgeData e = edge_data(s, theta);
    const cplx ep = exp_thetaG(z, s, theta), em = exp_neg_thetaG(z, s, theta);
    const cplx phi_minus = z + theta, phi_plus = 1.0 / s - z;
    IdentityResiduals r;
    r.sum_rule = std::abs(phi_minus * em + phi_plus * ep - (1.0 / s - theta));
    r.difference = std::abs(phi_minus * em - phi_plus * ep - 2.0 * num::branch_sqrt(z, e.z_minus, e.z_plus));
    r.product = std::abs((ep - 1.0) * (phi_plus - em * phi_minus) + 2.0 * theta);

    const double h = fd_step;
    const cplx Gs = (exp_thetaG(z, s + h, theta) - exp_thetaG(z, s - h, theta)) / (2.0 * h) / (theta * ep);
    const cplx Gz = (exp_thetaG(z + h, s, theta) - exp_thetaG(z - h, s, theta)) / (2.0 * h) / (theta * ep);
    r.transport_pde = std::abs(Gs - (z * ep - theta - z) * Gz / (s * (ep - 1.0)));
    return r;
}

cplx transport_F(cplx z, double s, double t, double theta)
{
    if (s < t) fail(Errc::domain, "transport_F: requires s >= t");
    const EdgeData e = edge_data(t, theta);
    if (z.imag() == 0.0 && z.real() > e.a && z.real() < e.b) fail(Errc::domain, "transport_F: argument on the cut");
    if (s == t) return z;
    const cplx w = W(z, t, theta);
    // a pole of W (z = 1 with theta*t >= 1) is a fixed point of the flow
    if (!std::isfinite(std::abs(w))) return z;
    return z + theta * (s - t) / (w - 1.0);
}

cplx transport_F_explicit(cplx z, double s, double t, double theta)
{
    if (s < t) fail(Errc::domain, "transport_F_explicit: requires s >= t");
    const EdgeData e = edge_data(t, theta);
    return z + (s - t) * (2.0 * z - 1.0 - theta * t) / (4.0 * t) +
           (s - t) / (2.0 * t) * num::branch_sqrt(z, e.a, e.b);
}

namespace {

cplx limcov_literal(cplx z1, double s1, cplx z2, double s2, double theta)
{
    const EdgeData e = edge_data(s1, theta);
    const cplx x2 = transport_F(z2, s1, s2, theta);
    const cplx w = W(z2, s2, theta);
    const cplx bracket = 1.0 - ((z1 - e.b) * (x2 - e.a) + (x2 - e.b) * (z1 - e.a)) /
                                   (2.0 * num::branch_sqrt(z1, e.a, e.b) * num::branch_sqrt(x2, e.a, e.b));
    return -(1.0 / theta) / (2.0 * (z1 - x2) * (z1 - x2)) * bracket * level_ratio(w, s1, s2, theta);
}

}  // namespace

cplx covariance_C(cplx z1, double s1, cplx z2, double s2, double theta)
{
    if (s1 < s2) {
        std::swap(z1, z2);
        std::swap(s1, s2);
    }
    const cplx x2 = transport_F(z2, s1, s2, theta);
    if (std::abs(z1 - x2) >= 1e-6) return limcov_literal(z1, s1, z2, s2, theta);
    // z1 sits on the removable singularity: average over small circles around z1 in the first
    // argument. An 8-point mean is exact through degree 7; the two radii cancel the degree-8 term.
    auto ring = [&](double r) {
        cplx acc = 0.0;
        for (int k = 0; k < 8; ++k) acc += limcov_literal(z1 + r * std::exp(kI * (2.0 * kPi * k / 8.0)), s1, z2, s2, theta);
        return acc / 8.0;
    };
    const cplx big = ring(1e-2), small = ring(5e-3);
    return (256.0 * small - big) / 255.0;
}

cplx characteristic_point(cplx c, double s, double theta) { return c / (c + 1.0) + theta * s / (c - 1.0); }

cplx covariance_characteristics(cplx z1, double s1, cplx z2, double s2, double theta)
{
    if (s1 < s2) fail(Errc::domain, "covariance_characteristics: requires s1 >= s2");
    const EdgeData e = edge_data(s1, theta);
    const cplx c = W(z2, s2, theta);
    const cplx x0 = characteristic_point(c, s1, theta);
    // equal-level kernel at s1, expanded form of the bracket
    const cplx num = 2.0 * z1 * x0 - (e.a + e.b) * (z1 + x0) + 2.0 * e.a * e.b;
    const cplx bracket = 1.0 - num / (2.0 * num::branch_sqrt(z1, e.a, e.b) * num::branch_sqrt(x0, e.a, e.b));
    const cplx equal_level = -1.0 / (2.0 * theta * (z1 - x0) * (z1 - x0)) * bracket;
    const cplx p = (c + 1.0) * (c + 1.0), m = (c - 1.0) * (c - 1.0);
    return equal_level * (p * theta * s1 - m) / (p * theta * s2 - m);
}

cplx covariance_equal_level_contour(cplx z1, cplx z2, double s, double theta, int nodes, double margin)
{
    const EdgeData e = edge_data(s, theta);
    const double c = 0.5 * (e.a + e.b), half = 0.5 * (e.b - e.a);
    const double d = std::min(std::abs(z1 - c), std::abs(z2 - c));
    if (margin <= 0.0) margin = std::min(0.3, 0.5 * (d - half));
    const double radius = half + margin;
    if (!(margin > 0.0) || d <= radius + 1e-3)
        fail(Errc::contour, "equal-level contour: z1 or z2 is inside the circle around the cut");
    auto integrand = [&](cplx zeta) {
        return num::branch_sqrt(zeta, e.a, e.b) / ((zeta - z2) * (zeta - z1) * (zeta - z1));
    };
    const cplx loop = num::circle_integral(integrand, {cplx(c, 0.0), radius, nodes}) / (2.0 * kPi * kI);
    return (1.0 / theta) / (2.0 * num::branch_sqrt(z2, e.a, e.b)) * loop;
}

cplx omega(double x, double s)
{
    if (!(s > 0.0) || !(x * x < s)) fail(Errc::domain, "omega: (x,s) outside the liquid region");
    return {x, std::sqrt(s - x * x)};
}

std::pair<double, double> omega_inv(cplx z)
{
    if (!(z.imag() > 0.0)) fail(Errc::domain, "omega_inv: argument must be in the upper half plane");
    return {z.real(), std::norm(z)};
}

cplx omega_hat(double x, double s, double theta)
{
    const EdgeData e = edge_data(s, theta);
    if (!(x > e.a && x < e.b)) fail(Errc::domain, "omega_hat: (x,s) outside the liquid region");
    return {0.5 * (1.0 - theta * s) - x, std::sqrt(x - e.a) * std::sqrt(e.b - x)};
}

std::pair<double, double> omega_hat_inv(cplx z, double theta)
{
    if (!(z.imag() > 0.0)) fail(Errc::domain, "omega_hat_inv: argument must be in the upper half plane");
    if (!(theta > 0.0)) fail(Errc::domain, "theta must be positive");
    const double r2 = std::norm(z);
    return {0.5 * (1.0 - r2) - z.real(), r2 / theta};
}

double gff_kernel(cplx z, cplx w)
{
    if (z.imag() < 0.0 || w.imag() < 0.0) fail(Errc::domain, "gff_kernel: arguments must lie in the closed upper half plane");
    if (z == w) fail(Errc::domain, "gff_kernel: singular at z = w");
    return -std::log(std::abs((z - w) / (z - std::conj(w)))) / (2.0 * kPi);
}

double gff_pairing_cov(const RealFn& f1, double s1, const RealFn& f2, double s2, double theta, GffVariant v,
                       int nodes)
{
    check_positive(s1, theta);
    check_positive(s2, theta);
    // each interval is parametrised by x = c + r cos(phi), which also removes the edge square roots
    double c1, r1, c2, r2;
    if (v == GffVariant::omega) {
        c1 = 0.0, r1 = std::sqrt(s1), c2 = 0.0, r2 = std::sqrt(s2);
    } else {
        const EdgeData e1 = edge_data(s1, theta), e2 = edge_data(s2, theta);
        c1 = 0.5 * (e1.a + e1.b), r1 = 0.5 * (e1.b - e1.a);
        c2 = 0.5 * (e2.a + e2.b), r2 = 0.5 * (e2.b - e2.a);
    }
    auto map = [&](double x, double s) { return v == GffVariant::omega ? omega(x, s) : omega_hat(x, s, theta); };
    auto g = [&](double p, double q) {
        const double x = c1 + r1 * std::cos(p), y = c2 + r2 * std::cos(q);
        const double jac = r1 * std::sin(p) * r2 * std::sin(q);
        if (jac == 0.0) return 0.0;
        const cplx zx = map(x, s1), zy = map(y, s2);
        if (zx == zy) return 0.0;
        return f1(x) * f2(y) * gff_kernel(zx, zy) * jac;
    };
    return num::tensor_integral_2d(g, {0.0, kPi, 0.0, kPi}, nodes);
}

cplx Poly::operator()(cplx z) const
{
    cplx acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
}

Poly Poly::derivative() const
{
    Poly d;
    for (std::size_t k = 1; k < c.size(); ++k) d.c.push_back(static_cast<double>(k) * c[k]);
    return d;
}

bool Poly::is_zero() const
{
    return std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; });
}

HB1Result hb1_consistency(double s1, double s2, double theta, const Poly& R1, const Poly& R2, int nodes,
                          int contour_nodes)
{
    if (s1 < s2) fail(Errc::domain, "hb1_consistency: requires s1 >= s2");
    const EdgeData e1 = edge_data(s1, theta), e2 = edge_data(s2, theta);
    const Poly D1 = R1.derivative(), D2 = R2.derivative();
    const double c1 = 0.5 * (e1.a + e1.b), r1 = 0.5 * (e1.b - e1.a);
    const double c2 = 0.5 * (e2.a + e2.b), r2 = 0.5 * (e2.b - e2.a);

    // Left side: v over [a1,b1] (v = c1 + r1 cos phi), z over a circle around [a2,b2].
    const int nc = contour_nodes;
    const double rc = r2 + 0.5;
    std::vector<cplx> pre(nc), x2(nc);
    for (int k = 0; k < nc; ++k) {
        const cplx u = std::exp(kI * (2.0 * kPi * k / nc));
        const cplx z = c2 + rc * u, dz = kI * rc * u * (2.0 * kPi / nc);
        x2[k] = transport_F(z, s1, s2, theta);
        pre[k] = R2(z) * level_ratio(W(z, s2, theta), s1, s2, theta) / num::branch_sqrt(x2[k], e1.a, e1.b) * dz;
    }
    const auto& gl = num::gauss_legendre(nodes);
    cplx lhs = 0.0;
    for (int m = 0; m < nodes; ++m) {
        const double phi = 0.5 * kPi * (gl.x[m] + 1.0), wphi = 0.5 * kPi * gl.w[m];
        const double v = c1 + r1 * std::cos(phi), sq = r1 * std::sin(phi);
        cplx inner = 0.0;
        for (int k = 0; k < nc; ++k) inner += pre[k] / (v - x2[k]);
        lhs += D1(v) * sq * inner * sq * wphi;
    }
    lhs *= -kI / ((2.0 * kPi * kI) * (2.0 * kPi * kI));

    auto rhs_integrand = [&](double p, double q, bool absolute) {
        const double v1 = c1 + r1 * std::cos(p), v2 = c2 + r2 * std::cos(q);
        const double jac = r1 * std::sin(p) * r2 * std::sin(q);
        if (jac == 0.0) return 0.0;
        const cplx w1 = omega_hat(v1, s1, theta), w2 = omega_hat(v2, s2, theta);
        if (w1 == w2) return 0.0;
        const double val = (D1(v1) * D2(v2)).real() * (-1.0 / (2.0 * kPi * kPi)) *
                           std::log(std::abs((w1 - w2) / (w1 - std::conj(w2)))) * jac;
        return absolute ? std::abs(val) : val;
    };
    HB1Result r;
    r.lhs = lhs.real();
    r.rhs = num::tensor_integral_2d([&](double p, double q) { return rhs_integrand(p, q, false); },
                                    {0.0, kPi, 0.0, kPi}, nodes);
    r.scale = num::tensor_integral_2d([&](double p, double q) { return rhs_integrand(p, q, true); },
                                      {0.0, kPi, 0.0, kPi}, nodes);
    r.gap = std::abs(r.lhs - r.rhs);
    const double denom = std::max({std::abs(r.lhs), std::abs(r.rhs), r.scale});
    r.rel_gap = denom > 0.0 ? r.gap / denom : 0.0;
    return r;
}

}  // namespace bk::asy
