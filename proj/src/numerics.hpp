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
#include <vector>

namespace bk::num {

using cplx = std::complex<double>;

// Circle contour, positively oriented.
struct Contour {
    cplx center{0.0, 0.0};
    double radius = 1.0;
    int nodes = 2048;
};

struct SignedLog {
    int sign = 1;
    double log_abs = 0.0;
    double value() const;
};

double log_gamma(double x);
SignedLog log_pochhammer(double b, int n);

// sqrt(z-a)*sqrt(z-b) with the cut on [a,b]; on the cut the upper-side limit is returned.
cplx branch_sqrt(cplx z, double a, double b);

cplx circle_integral(const std::function<cplx(cplx)>& f, const Contour& c);

struct AdaptiveOptions {
    int max_subdivisions = 1 << 22;
    int max_depth = 60;
};
double adaptive_integral_1d(const std::function<double(double)>& f, double a, double b, double tol,
                            const AdaptiveOptions& opt = {});

// Gauss-Legendre rule on [-1,1]; cached and shared between threads.
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};
const GaussRule& gauss_legendre(int n);

// Integral of f over [a,b] with n Gauss-Legendre points.
double gauss_integral(const std::function<double(double)>& f, double a, double b, int n);

struct Rect {
    double a1, b1, a2, b2;
};
double tensor_integral_2d(const std::function<double(double, double)>& f, const Rect& r, int nodes);

struct DegreeCheck {
    bool ok = false;
    double residual = 0.0;
};
DegreeCheck degree_at_most(const std::vector<cplx>& values, int d, double tol = 1e-8);

}  // namespace bk::num
