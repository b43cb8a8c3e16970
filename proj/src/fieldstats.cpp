/*
 * Copyright (c) 2026 The bkcorners contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 */
#include "fieldstats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "error.hpp"
#include "numerics.hpp"

namespace bk::stats {

namespace {

void check_table(const std::vector<cplx>& t, int n)
{
    if (n < 1 || n > kMaxTableOrder) fail(Errc::invalid_argument, "cumulant tables support 1 to 6 variables");
    if (t.size() != (std::size_t{1} << n)) fail(Errc::incomplete_table, "table must have 2^n entries");
    for (std::size_t m = 1; m < t.size(); ++m)
        if (!std::isfinite(t[m].real()) || !std::isfinite(t[m].imag()))
            fail(Errc::incomplete_table, "table entry for subset " + std::to_string(m) + " is missing");
}

// Calls visit(blocks) for every set partition of the bitmask `set`.
template <class Visit>
void for_each_partition(unsigned set, std::vector<unsigned>& blocks, Visit&& visit)
{
    if (set == 0) {
        visit(blocks);
        return;
    }
    const unsigned first = set & (~set + 1);
    const unsigned rest = set ^ first;
    // the block holding the lowest element is `first` plus any subset of the rest
    for (unsigned sub = rest;; sub = (sub - 1) & rest) {
        blocks.push_back(first | sub);
        for_each_partition(rest ^ sub, blocks, visit);
        blocks.pop_back();
        if (sub == 0) break;
    }
}

double factorial(int k)
{
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

cplx cumulant_of_set(const std::vector<cplx>& moments, unsigned set)
{
    cplx total = 0.0;
    std::vector<unsigned> blocks;
    for_each_partition(set, blocks, [&](const std::vector<unsigned>& bl) {
        const int r = static_cast<int>(bl.size());
        cplx term = (r % 2 ? 1.0 : -1.0) * factorial(r - 1);
        for (unsigned b : bl) term *= moments[b];
        total += term;
    });
    return total;
}

cplx moment_of_set(const std::vector<cplx>& cumulants, unsigned set)
{
    cplx total = 0.0;
    std::vector<unsigned> blocks;
    for_each_partition(set, blocks, [&](const std::vector<unsigned>& bl) {
        cplx term = 1.0;
        for (unsigned b : bl) term *= cumulants[b];
        total += term;
    });
    return total;
}

}  // namespace

cplx cumulant_from_moments(const std::vector<cplx>& moments, int n)
{
    check_table(moments, n);
    return cumulant_of_set(moments, (1u << n) - 1);
}

std::vector<cplx> cumulants_from_moments(const std::vector<cplx>& moments, int n)
{
    check_table(moments, n);
    std::vector<cplx> out(moments.size(), 0.0);
    for (unsigned m = 1; m < out.size(); ++m) out[m] = cumulant_of_set(moments, m);
    return out;
}

cplx moment_from_cumulants(const std::vector<cplx>& cumulants, int n)
{
    check_table(cumulants, n);
    return moment_of_set(cumulants, (1u << n) - 1);
}

std::vector<cplx> moments_from_cumulants(const std::vector<cplx>& cumulants, int n)
{
    check_table(cumulants, n);
    std::vector<cplx> out(cumulants.size(), 0.0);
    out[0] = 1.0;
    for (unsigned m = 1; m < out.size(); ++m) out[m] = moment_of_set(cumulants, m);
    return out;
}

cplx product_cumulant_expand(const std::vector<cplx>& cumulants, int n)
{
    check_table(cumulants, n);
    if (n < 2) fail(Errc::invalid_argument, "product expansion needs X and Y");
    const unsigned rest_all = ((1u << n) - 1) & ~3u;
    cplx total = cumulants[(1u << n) - 1];
    for (unsigned I = rest_all;; I = (I - 1) & rest_all) {
        total += cumulants[1u | I] * cumulants[2u | (rest_all ^ I)];
        if (I == 0) break;
    }
    return total;
}

namespace {

// Joint cumulant of all series over the snapshots in idx, centred by their own mean.
cplx range_cumulant(const std::vector<std::vector<cplx>>& series, const std::vector<std::size_t>& idx)
{
    const int n = static_cast<int>(series.size());
    const double count = static_cast<double>(idx.size());
    std::vector<cplx> mean(n, 0.0);
    for (int k = 0; k < n; ++k) {
        for (std::size_t t : idx) mean[k] += series[k][t];
        mean[k] /= count;
    }
    if (n == 1) return 0.0;  // centred first cumulant vanishes by construction
    std::vector<cplx> moments(std::size_t{1} << n, 0.0);
    moments[0] = 1.0;
    std::vector<cplx> prod(moments.size());
    for (std::size_t t : idx) {
        prod[0] = 1.0;
        for (unsigned m = 1; m < moments.size(); ++m) {
            const unsigned low = m & (~m + 1);
            const int k = std::countr_zero(low);
            prod[m] = prod[m ^ low] * (series[k][t] - mean[k]);
            moments[m] += prod[m];
        }
    }
    for (unsigned m = 1; m < moments.size(); ++m) moments[m] /= count;
    return cumulant_of_set(moments, static_cast<unsigned>(moments.size() - 1));
}

}  // namespace

CumulantEstimate estimate_cumulant(const std::vector<std::vector<cplx>>& series, const std::vector<int>& batch_of,
                                   int min_batches)
{
    const int n = static_cast<int>(series.size());
    if (n < 1 || n > kMaxTableOrder) fail(Errc::invalid_argument, "cumulant order must be between 1 and 6");
    const std::size_t T = batch_of.size();
    for (const auto& s : series)
        if (s.size() != T) fail(Errc::invalid_argument, "series and batch labels differ in length");
    if (T == 0) fail(Errc::insufficient_chains, "no snapshots");

    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t t = 0; t < T; ++t) groups[batch_of[t]].push_back(t);
    const int B = static_cast<int>(groups.size());
    if (B < std::max(2, min_batches))
        fail(Errc::insufficient_chains, "need at least " + std::to_string(std::max(2, min_batches)) + " chains, got " +
                                            std::to_string(B));

    std::vector<std::size_t> all(T);
    for (std::size_t t = 0; t < T; ++t) all[t] = t;
    CumulantEstimate est;
    est.order = n;
    est.n_batches = B;
    est.value = range_cumulant(series, all);

    std::vector<cplx> per;
    for (const auto& [id, idx] : groups) per.push_back(range_cumulant(series, idx));
    cplx mean = 0.0;
    for (const cplx& v : per) mean += v;
    mean /= static_cast<double>(B);
    double ss = 0.0;
    for (const cplx& v : per) ss += std::norm(v - mean);
    est.stderr = std::sqrt(ss / (B - 1.0) / B);
    return est;
}

std::vector<int> chain_ids(const mc::SampleBatch& b)
{
    std::vector<int> ids;
    ids.reserve(b.snapshots.size());
    for (const auto& s : b.snapshots) ids.push_back(s.chain);
    return ids;
}

std::vector<cplx> stieltjes_series(const mc::SampleBatch& b, cplx z, double s)
{
    std::vector<cplx> out;
    out.reserve(b.snapshots.size());
    for (const auto& snap : b.snapshots) out.push_back(mc::stieltjes_field(snap, z, s, b.params.K, b.params.theta));
    return out;
}

CumulantEstimate estimate_joint_cumulant(const mc::SampleBatch& b, const std::vector<FieldPoint>& obs, int min_batches)
{
    if (obs.empty() || obs.size() > 4) fail(Errc::invalid_argument, "joint cumulant order must be 1 to 4");
    if (b.snapshots.empty()) fail(Errc::insufficient_chains, "empty batch");
    std::vector<std::vector<cplx>> series;
    for (const auto& o : obs) series.push_back(stieltjes_series(b, o.z, o.s));
    return estimate_cumulant(series, chain_ids(b), min_batches);
}

std::vector<double> pairing_rv(const mc::SampleBatch& b, const RealFn& f, double s, GffVariant v)
{
    const double theta = b.params.theta;
    const int K = b.params.K;
    std::vector<double> out(b.snapshots.size(), 0.0);
    if (K == 0) return out;
    const int n = v == GffVariant::omega ? mc::level_for_H(s, K, theta) : mc::level_for_hat(s, K);
    const auto& gl = num::gauss_legendre(16);
    // With H(x) = #{i : p_i >= x}, the integral of H f from a fixed left point L equals
    // sum_i of the integral of f over [L, p_i]. L = 0 is used; the constant it adds cancels
    // on centring. 16-point Gauss-Legendre is exact for polynomials up to degree 31.
    auto integral_to = [&](double p) {
        double acc = 0.0;
        for (std::size_t k = 0; k < gl.x.size(); ++k) acc += gl.w[k] * f(0.5 * p * (gl.x[k] + 1.0));
        return 0.5 * p * acc;
    };
    for (std::size_t t = 0; t < b.snapshots.size(); ++t) {
        const auto it = b.snapshots[t].levels.find(n);
        if (it == b.snapshots[t].levels.end()) fail(Errc::level_range, "pairing_rv: level " + std::to_string(n) + " not recorded");
        const auto& lam = it->second;
        double acc = 0.0;
        for (int i = 1; i <= n; ++i) {
            double p = lam[i - 1] - i * theta;
            if (v == GffVariant::omega) p += -K / 2.0 + theta * (n + 1) / 2.0;
            acc += integral_to(p / K);
        }
        out[t] = acc;
    }
    double mean = 0.0;
    for (double x : out) mean += x;
    if (!out.empty()) mean /= static_cast<double>(out.size());
    const double scale = std::sqrt(theta * std::numbers::pi);
    for (double& x : out) x = scale * (x - mean);
    return out;
}

std::vector<std::pair<double, double>> default_lln_grid(const std::vector<double>& s_values, double theta, int nx)
{
    (void)theta;
    std::vector<std::pair<double, double>> g;
    for (double s : s_values) {
        const double edge = (s + 1.0) / 2.0;
        for (int k = 0; k < nx; ++k) g.emplace_back(-edge + 2.0 * edge * k / (nx - 1), s);
    }
    return g;
}

LlnReport lln_report(const mc::SampleBatch& b, const std::vector<std::pair<double, double>>& grid)
{
    const double theta = b.params.theta;
    const int K = b.params.K;
    LlnReport r;
    r.grid = grid;
    std::vector<double> target;
    for (auto [x, s] : grid) target.push_back(asy::limit_height_h(x, s, theta));
    for (const auto& snap : b.snapshots) {
        double sup = 0.0;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const auto [x, s] = grid[g];
            const double emp = K > 0 ? mc::height_H(snap, x, s, K, theta) / static_cast<double>(K) : 0.0;
            sup = std::max(sup, std::fabs(emp - target[g]));
        }
        r.sup_gap.push_back(sup);
    }
    for (double v : r.sup_gap) {
        r.mean_gap += v;
        r.max_gap = std::max(r.max_gap, v);
    }
    if (!r.sup_gap.empty()) r.mean_gap /= static_cast<double>(r.sup_gap.size());
    return r;
}

CltReport clt_report(const mc::SampleBatch& b, const std::vector<PairingSpec>& specs, GffVariant v, int gff_nodes,
                     double z_limit)
{
    const double theta = b.params.theta;
    const int m = static_cast<int>(specs.size());
    std::vector<std::vector<cplx>> x(m);
    for (int k = 0; k < m; ++k) {
        const auto p = pairing_rv(b, specs[k].f, specs[k].s, v);
        x[k].assign(p.begin(), p.end());
    }
    const auto ids = chain_ids(b);
    CltReport rep;
    auto label = [&](std::initializer_list<int> ks) {
        std::string q;
        for (int k : ks) q += (q.empty() ? "" : ";") + specs[k].name;
        return q;
    };
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            const auto est = estimate_cumulant({x[i], x[j]}, ids);
            ReportRow row;
            row.quantity = "cov[" + label({i, j}) + "]";
            row.order = 2;
            row.estimate = est.value.real();
            row.stderr = est.stderr;
            row.target = asy::gff_pairing_cov(specs[i].f, specs[i].s, specs[j].f, specs[j].s, theta, v, gff_nodes);
            row.zscore = est.stderr > 0 ? (row.estimate - row.target) / est.stderr : 0.0;
            rep.max_cov_z = std::max(rep.max_cov_z, std::fabs(row.zscore));
            rep.covariance_ok = rep.covariance_ok && std::fabs(row.zscore) < z_limit;
            rep.rows.push_back(row);
        }
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j)
            for (int k = j; k < m; ++k) {
                const auto est = estimate_cumulant({x[i], x[j], x[k]}, ids);
                ReportRow row;
                row.quantity = "k3[" + label({i, j, k}) + "]";
                row.order = 3;
                row.estimate = est.value.real();
                row.stderr = est.stderr;
                row.zscore = est.stderr > 0 ? row.estimate / est.stderr : 0.0;
                rep.max_third_ratio = std::max(rep.max_third_ratio, std::fabs(row.zscore));
                rep.third_ok = rep.third_ok && std::fabs(row.zscore) < z_limit;
                rep.rows.push_back(row);
            }
    // fourth cumulants are reported for information only
    for (int i = 0; i < m; ++i) {
        const auto est = estimate_cumulant({x[i], x[i], x[i], x[i]}, ids);
        ReportRow row;
        row.quantity = "k4[" + label({i, i, i, i}) + "]";
        row.order = 4;
        row.estimate = est.value.real();
        row.stderr = est.stderr;
        row.zscore = est.stderr > 0 ? row.estimate / est.stderr : 0.0;
        row.checked = false;
        rep.rows.push_back(row);
    }
    return rep;
}

std::vector<ReportRow> StieltjesCovCheck::rows() const
{
    ReportRow re, im;
    re.quantity = "stieltjes_cov_re";
    im.quantity = "stieltjes_cov_im";
    re.order = im.order = 2;
    re.estimate = estimate.value.real();
    im.estimate = estimate.value.imag();
    re.target = target.real();
    im.target = target.imag();
    re.stderr = im.stderr = estimate.stderr;
    re.zscore = im.zscore = zscore;
    return {re, im};
}

StieltjesCovCheck stieltjes_covariance_check(const mc::SampleBatch& b, cplx z1, double s1, cplx z2, double s2)
{
    StieltjesCovCheck c;
    c.estimate = estimate_joint_cumulant(b, {{z1, s1}, {z2, s2}});
    c.target = asy::covariance_C(z1, s1, z2, s2, b.params.theta);
    c.zscore = c.estimate.stderr > 0 ? std::abs(c.estimate.value - c.target) / c.estimate.stderr : 0.0;
    return c;
}

void write_report_csv(std::ostream& os, const std::vector<ReportRow>& rows)
{
    std::ostringstream buf;
    buf << std::setprecision(17);
    buf << "quantity,estimate,stderr,target,zscore\n";
    for (const auto& r : rows)
        buf << r.quantity << ',' << r.estimate << ',' << r.stderr << ',' << r.target << ',' << r.zscore << '\n';
    os << buf.str();
}

}  // namespace bk::stats
