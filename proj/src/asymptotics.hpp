/*
 * Copyright (c) 2026 The bkcorners contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 */
#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace bk::asy {

using cplx = std::complex<double>;

// Edges of the limiting support at level s. z_minus/z_plus live on the l/n scale,
// a/b = s*z_minus, s*z_plus on the l/K scale.
struct EdgeData {
    double s = 1.0;
    double theta = 1.0;
    double z_minus = 0.0;
    double z_plus = 0.0;
    double a = 0.0;
    double b = 0.0;
};

EdgeData edge_data(double s, double theta);

double mu_density(double x, double s, double theta);
double nu_density(double x, double s, double theta);
double limit_height_h(double x, double s, double theta);

// Closed forms of exp(+-theta G(z,s)), G the Stieltjes transform of mu(., s).
cplx exp_thetaG(cplx z, double s, double theta);
cplx exp_neg_thetaG(cplx z, double s, double theta);

// G(z,s) by direct quadrature of the density; independent of the closed forms.
cplx stieltjes_quadrature(cplx z, double s, double theta, double tol = 1e-13);

struct IdentityResiduals {
    double sum_rule = 0.0;       // Phi^- e^{-tG} + Phi^+ e^{tG} - (1/s - theta)
    double difference = 0.0;     // Phi^- e^{-tG} - Phi^+ e^{tG} - 2 sqrt((z-z-)(z-z+))
    double product = 0.0;        // (e^{tG} - 1)(Phi^+ - e^{-tG} Phi^-) + 2 theta
    double transport_pde = 0.0;  // first-order equation in (z,s), finite differences
};
IdentityResiduals identity_residuals(cplx z, double s, double theta, double fd_step = 1e-5);

// F(z; s, t) for s >= t; transports level t to level s along characteristics.
cplx transport_F(cplx z, double s, double t, double theta);
// The same map written through the square root directly (used as a cross-check).
cplx transport_F_explicit(cplx z, double s, double t, double theta);

cplx covariance_C(cplx z1, double s1, cplx z2, double s2, double theta);
cplx covariance_characteristics(cplx z1, double s1, cplx z2, double s2, double theta);
// Point x0 at level s with exp(theta G(x0/s, s)) = c; the characteristic through c.
cplx characteristic_point(cplx c, double s, double theta);
// margin <= 0 picks a circle halfway between the cut and the nearer of z1, z2
cplx covariance_equal_level_contour(cplx z1, cplx z2, double s, double theta, int nodes = 4096,
                                    double margin = 0.0);

cplx omega(double x, double s);
std::pair<double, double> omega_inv(cplx z);
cplx omega_hat(double x, double s, double theta);
std::pair<double, double> omega_hat_inv(cplx z, double theta);

double gff_kernel(cplx z, cplx w);

enum class GffVariant { omega, omega_hat };

using RealFn = std::function<double(double)>;
double gff_pairing_cov(const RealFn& f1, double s1, const RealFn& f2, double s2, double theta, GffVariant v,
                       int nodes = 400);

// Real polynomial sum c[k] x^k, evaluated on complex arguments.
struct Poly {
    std::vector<double> c;
    cplx operator()(cplx z) const;
    Poly derivative() const;
    bool is_zero() const;
};

struct HB1Result {
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;       // |lhs - rhs|
    double scale = 0.0;     // integral of the absolute right-hand integrand
    double rel_gap = 0.0;   // gap / max(|lhs|, |rhs|, scale), 0 when everything vanishes
};
HB1Result hb1_consistency(double s1, double s2, double theta, const Poly& R1, const Poly& R2, int nodes = 200,
                          int contour_nodes = 2048);

}  // namespace bk::asy
