/*
 * Copyright (c) 2026 The bkcorners contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 */
#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "asymptotics.hpp"
#include "corners_exact.hpp"
#include "numerics.hpp"

namespace bk::verify {

bool Suite::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void Suite::add(std::string name, double value, double tol)
{
    checks.push_back({std::move(name), value, tol, std::isfinite(value) && value < tol});
}

namespace {

std::string tag(double theta, int K, int N, const char* last = "N")
{
    std::ostringstream os;
    os << "theta=" << theta << ",K=" << K << ',' << last << '=' << N;
    return os.str();
}

std::string theta_tag(double theta)
{
    std::ostringstream os;
    os << "theta=" << theta;
    return os.str();
}

}  // namespace

Suite verify_exact(double tol_scale)
{
    Suite s;
    for (double theta : {0.5, 1.0, 2.0})
        for (int K = 0; K <= 3; ++K)
            for (int N = 1; N <= 3; ++N) {
                const double zb = exact::partition_function(theta, K, N, exact::ZMode::brute);
                const double zc = exact::partition_function(theta, K, N, exact::ZMode::closed);
                s.add("Z_brute_vs_closed[" + tag(theta, K, N) + "]", std::fabs(zb - zc) / std::fabs(zc), 1e-10 * tol_scale);
                double proj = 0.0, marg = 0.0;
                for (int n = 1; n <= N; ++n) {
                    proj = std::max(proj, exact::projection_discrepancy(theta, K, N, n));
                    marg = std::max(marg, exact::marginal_level(theta, K, N, n).max_abs_diff);
                }
                s.add("projection[" + tag(theta, K, N) + "]", proj, 1e-10 * tol_scale);
                s.add("single_level_marginal[" + tag(theta, K, N) + "]", marg, 1e-10 * tol_scale);
                if (K >= 1 && K <= 2) s.add("jack_crosscheck[" + tag(theta, K, N) + "]", exact::jack_crosscheck(theta, K, N), 1e-9 * tol_scale);
            }
    for (auto [theta, K, n] : std::vector<std::tuple<double, int, int>>{{1.0, 2, 2}, {0.5, 3, 2}, {2.0, 2, 2}}) {
        const auto r = exact::nekrasov_check(theta, K, n, {3.0, 3.5, 4.0, 4.5});
        s.add("nekrasov_degree_one[" + tag(theta, K, n, "n") + "]", r.residual, 1e-8 * tol_scale);
    }
    return s;
}

Suite verify_analytic(double tol_scale)
{
    using asy::cplx;
    Suite s;
    const std::vector<double> thetas{0.5, 1.0, 2.0};
    for (double theta : thetas) {
        const std::string th = theta_tag(theta);
        double r123 = 0.0, r4 = 0.0, eg = 0.0, mass = 0.0, lemma = 0.0, om = 0.0, omh = 0.0;
        for (double sv : {0.3, 0.7, 1.0, 1.8, 3.0}) {
            const std::vector<cplx> zs{cplx(1.0 / sv + 0.5, 0.0), cplx(0.2, 0.9), cplx(-1.5, -0.4), cplx(0.0, 3.0),
                                       cplx(-theta - 0.5, 0.0)};
            for (const cplx& z : zs) {
                const auto r = asy::identity_residuals(z, sv, theta);
                r123 = std::max({r123, r.sum_rule, r.difference, r.product});
                r4 = std::max(r4, r.transport_pde);
            }
            mass = std::max(mass, std::fabs(num::adaptive_integral_1d(
                                                [&](double x) { return asy::mu_density(x, sv, theta); }, -theta, 1.0 / sv, 1e-12) -
                                            1.0));
        }
        // twenty points on a circle around the support of mu(., 1)
        for (int k = 0; k < 20; ++k) {
            const cplx z = cplx(0.5 * (1.0 - theta), 0.0) +
                           (0.5 * (1.0 + theta) + 0.6) * std::exp(cplx(0.0, 2.0 * std::numbers::pi * (k + 0.3) / 20.0));
            eg = std::max(eg, std::abs(asy::exp_thetaG(z, 1.0, theta) - std::exp(theta * asy::stieltjes_quadrature(z, 1.0, theta))));
        }
        for (auto [sv, t] : std::vector<std::pair<double, double>>{{1.7, 0.6}, {2.0, 1.0}, {1.2, 0.8}}) {
            const auto et = asy::edge_data(t, theta), es = asy::edge_data(sv, theta);
            const double shift = 0.5 * std::sqrt(theta / t) * std::pow(std::sqrt(sv) - std::sqrt(t), 2);
            lemma = std::max(lemma, std::abs(asy::transport_F(et.b, sv, t, theta) - (es.b + shift)));
            lemma = std::max(lemma, std::abs(asy::transport_F(et.a, sv, t, theta) - (es.a - shift)));
        }
        for (double sv : {0.3, 1.0, 2.2})
            for (int k = -9; k <= 9; ++k) {
                const double x = k / 10.0 * std::sqrt(sv);
                const auto [x2, s2] = asy::omega_inv(asy::omega(x, sv));
                om = std::max({om, std::fabs(x2 - x), std::fabs(s2 - sv)});
                const auto e = asy::edge_data(sv, theta);
                const double y = 0.5 * (e.a + e.b) + k / 10.0 * 0.5 * (e.b - e.a);
                const auto [y2, t2] = asy::omega_hat_inv(asy::omega_hat(y, sv, theta), theta);
                omh = std::max({omh, std::fabs(y2 - y), std::fabs(t2 - sv)});
            }
        s.add("identities_i_ii_iii[" + th + "]", r123, 1e-12 * tol_scale);
        s.add("transport_pde[" + th + "]", r4, 1e-6 * tol_scale);
        s.add("exp_thetaG_vs_quadrature[" + th + "]", eg, 1e-8 * tol_scale);
        s.add("mu_total_mass[" + th + "]", mass, 1e-8 * tol_scale);
        s.add("transport_endpoints[" + th + "]", lemma, 1e-12 * tol_scale);
        s.add("omega_round_trip[" + th + "]", om, 1e-12 * tol_scale);
        s.add("omega_hat_round_trip[" + th + "]", omh, 1e-12 * tol_scale);

        double dchar = 0.0, dcont = 0.0;
        for (int k = 0; k < 10; ++k) {
            const cplx z1(2.0 + 0.3 * k, 1.0 - 0.15 * k), z2(-2.5 + 0.2 * k, 0.5 + 0.1 * k);
            const double s1 = 1.2 + 0.05 * k, s2 = 0.8 - 0.03 * k;
            dchar = std::max(dchar, std::abs(asy::covariance_C(z1, s1, z2, s2, theta) -
                                             asy::covariance_characteristics(z1, s1, z2, s2, theta)));
            const double sv = 0.6 + 0.1 * k;
            const auto e = asy::edge_data(sv, theta);
            const double c = 0.5 * (e.a + e.b), half = 0.5 * (e.b - e.a);
            const cplx w1 = c + (half + 0.8 + 0.1 * k) * std::exp(cplx(0, 0.3 + 0.5 * k));
            const cplx w2 = c + (half + 1.2) * std::exp(cplx(0, 2.0 + 0.4 * k));
            dcont = std::max(dcont, std::abs(asy::covariance_C(w1, sv, w2, sv, theta) -
                                             asy::covariance_equal_level_contour(w1, w2, sv, theta)));
        }
        s.add("limcov_vs_characteristics[" + th + "]", dchar, 1e-10 * tol_scale);
        s.add("limcov_vs_contour[" + th + "]", dcont, 1e-8 * tol_scale);
    }

    const asy::Poly R1{{0.0, 1.0}}, R2{{0.0, 0.0, 0.5}};
    for (auto [s1, s2] : std::vector<std::pair<double, double>>{{1.2, 0.8}, {1.0, 1.0}}) {
        const auto r = asy::hb1_consistency(s1, s2, 1.0, R1, R2);
        std::ostringstream name;
        name << "hb1_relative_gap[s1=" << s1 << ",s2=" << s2 << "]";
        s.add(name.str(), r.rel_gap, 1e-3 * tol_scale);
    }

    // the omega-variant targets do not involve theta
    auto one = [](double) { return 1.0; };
    auto lin = [](double x) { return x; };
    double spread = 0.0;
    for (double s1 : {0.75, 1.25})
        for (double s2 : {0.75, 1.25})
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const asy::RealFn f1 = a ? asy::RealFn(lin) : asy::RealFn(one), f2 = b ? asy::RealFn(lin) : asy::RealFn(one);
                    const double lo = asy::gff_pairing_cov(f1, s1, f2, s2, 0.5, asy::GffVariant::omega, 200);
                    const double hi = asy::gff_pairing_cov(f1, s1, f2, s2, 2.0, asy::GffVariant::omega, 200);
                    spread = std::max(spread, std::fabs(lo - hi));
                }
    s.add("omega_targets_theta_free", spread, 1e-10 * tol_scale);
    return s;
}

void write_suite_csv(std::ostream& os, const Suite& s)
{
    std::ostringstream buf;
    buf << std::setprecision(17) << "check,value,tol,pass\n";
    for (const auto& c : s.checks) buf << '"' << c.name << "\"," << c.value << ',' << c.tol << ',' << (c.pass ? 1 : 0) << '\n';
    os << buf.str();
}

}  // namespace bk::verify
