/*
 * Copyright (c) 2026 The bkcorners contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 */
#include "bkcorners/bkcorners.h"

#include <algorithm>
#include <cmath>
#include <new>
#include <string>

#include "asymptotics.hpp"
#include "corners_exact.hpp"
#include "error.hpp"
#include "fieldstats.hpp"
#include "sampler.hpp"
#include "verify.hpp"

#ifndef BKCORNERS_VERSION
#define BKCORNERS_VERSION "0.0.0"
#endif

struct bk_enumeration {
    bk::exact::Enumeration e;
};
struct bk_suite {
    bk::verify::Suite s;
};
struct bk_batch {
    bk::mc::SampleBatch b;
};
struct bk_report {
    std::vector<bk::stats::ReportRow> rows;
    bool pass = true;
    double max_cov_z = 0.0;
    double max_third_ratio = 0.0;
};

namespace {

thread_local std::string g_last_error;

using cplx = std::complex<double>;

cplx to_cplx(bk_complex z) { return {z.re, z.im}; }
bk_complex from_cplx(cplx z) { return {z.real(), z.imag()}; }

// Runs body and converts any exception into a status code plus a stored message.
template <class F>
bk_status guarded(F&& body)
{
    try {
        body();
        return BK_OK;
    } catch (const bk::Error& e) {
        g_last_error = e.what();
        return static_cast<bk_status>(static_cast<int>(e.code()));
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return BK_ERR_BUDGET;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return BK_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return BK_ERR_INTERNAL;
    }
}

template <class... P>
bool any_null(const P*... p)
{
    if (((p == nullptr) || ...)) {
        g_last_error = "null pointer argument";
        return true;
    }
    return false;
}

bk::asy::RealFn wrap(bk_real_fn f, void* user)
{
    if (!f) bk::fail(bk::Errc::invalid_argument, "null test function");
    return [f, user](double x) { return f(x, user); };
}

bk::asy::GffVariant variant(bk_gff_variant v)
{
    return v == BK_GFF_OMEGA_HAT ? bk::asy::GffVariant::omega_hat : bk::asy::GffVariant::omega;
}

std::int64_t guard_or_default(std::int64_t g) { return g > 0 ? g : bk::exact::kDefaultGuard; }

}  // namespace

extern "C" {

const char* bk_version(void) { return BKCORNERS_VERSION; }

const char* bk_status_name(bk_status s)
{
    switch (s) {
    case BK_OK: return "ok";
    case BK_ERR_DOMAIN: return "domain";
    case BK_ERR_POLE: return "pole";
    case BK_ERR_BUDGET: return "budget";
    case BK_ERR_TOO_FEW_POINTS: return "too_few_points";
    case BK_ERR_INCOMPLETE_TABLE: return "incomplete_table";
    case BK_ERR_INSUFFICIENT_CHAINS: return "insufficient_chains";
    case BK_ERR_LEVEL_RANGE: return "level_range";
    case BK_ERR_CONTOUR: return "contour";
    case BK_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case BK_ERR_PRECONDITION: return "precondition";
    case BK_ERR_NULL_POINTER: return "null_pointer";
    case BK_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* bk_last_error(void) { return g_last_error.c_str(); }

/* exact model */

bk_status bk_partition_function(double theta, int K, int N, int closed, double* out)
{
    if (any_null(out)) return BK_ERR_NULL_POINTER;
    return guarded([&] {
        *out = bk::exact::partition_function(theta, K, N, closed ? bk::exact::ZMode::closed : bk::exact::ZMode::brute);
    });
}

bk_status bk_printed_partition_function(double theta, int K, int N, double* out)
{
    if (any_null(out)) return BK_ERR_NULL_POINTER;
    return guarded([&] { *out = bk::exact::printed_partition_function(theta, K, N); });
}

bk_status bk_projection_discrepancy(double theta, int K, int N, int n, double* out)
{
    if (any_null(out)) return BK_ERR_NULL_POINTER;
    return guarded([&] { *out = bk::exact::projection_discrepancy(theta, K, N, n); });
}

bk_status bk_marginal_discrepancy(double theta, int K, int N, int n, double* out)
{
    if (any_null(out)) return BK_ERR_NULL_POINTER;
    return guarded([&] { *out = bk::exact::marginal_level(theta, K, N, n).max_abs_diff; });
}

bk_status bk_nekrasov_residual(double theta, int K, int n, const double z[4], double* out)
{
    if (any_null(z, out)) return BK_ERR_NULL_POINTER;
    return guarded([&] { *out = bk::exact::nekrasov_check(theta, K, n, {z[0], z[1], z[2], z[3]}).residual; });
}

bk_status bk_jack_crosscheck(double theta, int K, int N, double* out)
{
    if (any_null(out)) return BK_ERR_NULL_POINTER;
    return guarded([&] { *out = bk::exact::jack_crosscheck(theta, K, N); });
}

bk_status bk_enumerate(double theta, int K, int N, int64_t guard, bk_enumeration** out)
{
    if (any_null(out)) return BK_ERR_NULL_POINTER;
    *out = nullptr;
    return guarded([&] {
        auto* h = new bk_enumeration{bk::exact::enumerate_measure({theta, K, N}, guard_or_default(guard))};
        *out = h;
    });
}

void bk_enumeration_free(bk_enumeration* e) { delete e; }

size_t bk_enumeration_size(const bk_enumeration* e) { return e ? e->e.configs.size() : 0; }

double bk_enumeration_partition_function(const bk_enumeration* e) { return e ? e->e.Z : std::nan(""); }

bk_status bk_enumeration_config(const bk_enumeration* e, size_t index, int level, int* lambda, double* log_weight,
                                double* probability)
{
    if (any_null(e)) return BK_ERR_NULL_POINTER;
    return guarded([&] {
        if (index >= e->e.configs.size()) bk::fail(bk::Errc::invalid_argument, "configuration index out of range");
        const auto& c = e->e.configs[index];
        if (level < 1 || level > static_cast<int>(c.levels.size())) bk::fail(bk::Errc::level_range, "level out of range");
        if (lambda) std::copy(c.level(level).lambda.begin(), c.level(level).lambda.end(), lambda);
        if (log_weight) *log_weight = e->e.log_weight[index];
        if (probability) *probability = e->e.probability[index];
    });
}

/* verification suites */

bk_status bk_verify_exact(double tol_scale, bk_suite** out)
{
    if (any_null(out)) return BK_ERR_NULL_POINTER;
    *out = nullptr;
    return guarded([&] { *out = new bk_suite{bk::verify::verify_exact(tol_scale)}; });
}

bk_status bk_verify_analytic(double tol_scale, bk_suite** out)
{
    if (any_null(out)) return BK_ERR_NULL_POINTER;
    *out = nullptr;
    return guarded([&] { *out = new bk_suite{bk::verify::verify_analytic(tol_scale)}; });
}

void bk_suite_free(bk_suite* s) { delete s; }

size_t bk_suite_size(const bk_suite* s) { return s ? s->s.checks.size() : 0; }

bk_status bk_suite_check(const bk_suite* s, size_t index, const char** name, double* value, double* tol, int* pass)
{
    if (any_null(s)) return BK_ERR_NULL_POINTER;
    if (index >= s->s.checks.size()) {
        g_last_error = "check index out of range";
        return BK_ERR_INVALID_ARGUMENT;
    }
    const auto& c = s->s.checks[index];
    if (name) *name = c.name.c_str();
    if (value) *value = c.value;
    if (tol) *tol = c.tol;
    if (pass) *pass = c.pass ? 1 : 0;
    return BK_OK;
}

int bk_suite_all_pass(const bk_suite* s) { return s && s->s.all_pass() ? 1 : 0; }

/* sampler */

void bk_chain_config_init(bk_chain_config* cfg)
{
    if (!cfg) return;
    *cfg = bk_chain_config{1, -1, -1, 0, nullptr, 0, BK_INIT_QUANTILE};
}

int bk_default_burnin(int K) { return bk::mc::default_burnin({1.0, K, 1}); }
int bk_default_thin(int K) { return bk::mc::default_thin({1.0, K, 1}); }

bk_status bk_sample(double theta, int K, int N, const bk_chain_config* cfg, int n_chains, bk_batch** out)
{
    if (any_null(cfg, out)) return BK_ERR_NULL_POINTER;
    *out = nullptr;
    return guarded([&] {
        bk::mc::ChainConfig c;
        c.seed = cfg->seed;
        c.burnin_sweeps = cfg->burnin_sweeps;
        c.thin_sweeps = cfg->thin_sweeps;
        c.n_samples = cfg->n_samples;
        if (cfg->n_record_levels > 0) {
            if (!cfg->record_levels) bk::fail(bk::Errc::invalid_argument, "record_levels is null");
            c.record_levels.assign(cfg->record_levels, cfg->record_levels + cfg->n_record_levels);
        }
        c.init = cfg->init == BK_INIT_ZERO ? bk::mc::InitKind::zero : bk::mc::InitKind::quantile;
        *out = new bk_batch{bk::mc::sample_chains({theta, K, N}, c, n_chains)};
    });
}

void bk_batch_free(bk_batch* b) { delete b; }

size_t bk_batch_size(const bk_batch* b) { return b ? b->b.snapshots.size() : 0; }

static const bk::mc::Snapshot& snapshot_at(const bk_batch* b, size_t index)
{
    if (index >= b->b.snapshots.size()) bk::fail(bk::Errc::invalid_argument, "snapshot index out of range");
    return b->b.snapshots[index];
}

bk_status bk_batch_snapshot(const bk_batch* b, size_t index, int* chain, int64_t* sweep)
{
    if (any_null(b)) return BK_ERR_NULL_POINTER;
    return guarded([&] {
        const auto& s = snapshot_at(b, index);
        if (chain) *chain = s.chain;
        if (sweep) *sweep = s.sweep;
    });
}

bk_status bk_batch_levels(const bk_batch* b, size_t index, int* levels, int capacity, int* count)
{
    if (any_null(b, count)) return BK_ERR_NULL_POINTER;
    return guarded([&] {
        const auto& s = snapshot_at(b, index);
        *count = static_cast<int>(s.levels.size());
        if (!levels) return;
        if (capacity < *count) bk::fail(bk::Errc::invalid_argument, "level buffer too small");
        int k = 0;
        for (const auto& kv : s.levels) levels[k++] = kv.first;
    });
}

bk_status bk_batch_level(const bk_batch* b, size_t index, int level, int* lambda, int capacity)
{
    if (any_null(b, lambda)) return BK_ERR_NULL_POINTER;
    return guarded([&] {
        const auto& s = snapshot_at(b, index);
        auto it = s.levels.find(level);
        if (it == s.levels.end()) bk::fail(bk::Errc::level_range, "level " + std::to_string(level) + " not recorded");
        if (capacity < static_cast<int>(it->second.size())) bk::fail(bk::Errc::invalid_argument, "lambda buffer too small");
        std::copy(it->second.begin(), it->second.end(), lambda);
    });
}

bk_status bk_batch_height(const bk_batch* b, size_t index, double x, double s, int hat, int* out)
{
    if (any_null(b, out)) return BK_ERR_NULL_POINTER;
    return guarded([&] {
        const auto& p = b->b.params;
        const auto& snap = snapshot_at(b, index);
        *out = hat ? bk::mc::height_hat(snap, x, s, p.K, p.theta) : bk::mc::height_H(snap, x, s, p.K, p.theta);
    });
}

/* limit objects */

bk_status bk_edge_data(double s, double theta, bk_edges* out)
{
    if (any_null(out)) return BK_ERR_NULL_POINTER;
    return guarded([&] {
        const auto e = bk::asy::edge_data(s, theta);
        *out = {e.z_minus, e.z_plus, e.a, e.b};
    });
}

bk_status bk_mu_density(double x, double s, double theta, double* out)
{
    if (any_null(out)) return BK_ERR_NULL_POINTER;
    return guarded([&] { *out = bk::asy::mu_density(x, s, theta); });
}

bk_status bk_nu_density(double x, double s, double theta, double* out)
{
    if (any_null(out)) return BK_ERR_NULL_POINTER;
    return guarded([&] { *out = bk::asy::nu_density(x, s, theta); });
}

bk_status bk_limit_height(double x, double s, double theta, double* out)
{
    if (any_null(out)) return BK_ERR_NULL_POINTER;
    return guarded([&] { *out = bk::asy::limit_height_h(x, s, theta); });
}

bk_status bk_exp_theta_g(bk_complex z, double s, double theta, bk_complex* out)
{
    if (any_null(out)) return BK_ERR_NULL_POINTER;
    return guarded([&] { *out = from_cplx(bk::asy::exp_thetaG(to_cplx(z), s, theta)); });
}

bk_status bk_stieltjes_quadrature(bk_complex z, double s, double theta, bk_complex* out)
{
    if (any_null(out)) return BK_ERR_NULL_POINTER;
    return guarded([&] { *out = from_cplx(bk::asy::stieltjes_quadrature(to_cplx(z), s, theta)); });
}

bk_status bk_transport_map(bk_complex z, double s, double t, double theta, bk_complex* out)
{
    if (any_null(out)) return BK_ERR_NULL_POINTER;
    return guarded([&] { *out = from_cplx(bk::asy::transport_F(to_cplx(z), s, t, theta)); });
}

bk_status bk_covariance(bk_complex z1, double s1, bk_complex z2, double s2, double theta, bk_complex* out)
{
    if (any_null(out)) return BK_ERR_NULL_POINTER;
    return guarded([&] { *out = from_cplx(bk::asy::covariance_C(to_cplx(z1), s1, to_cplx(z2), s2, theta)); });
}

bk_status bk_covariance_characteristics(bk_complex z1, double s1, bk_complex z2, double s2, double theta,
                                        bk_complex* out)
{
    if (any_null(out)) return BK_ERR_NULL_POINTER;
    return guarded(
        [&] { *out = from_cplx(bk::asy::covariance_characteristics(to_cplx(z1), s1, to_cplx(z2), s2, theta)); });
}

bk_status bk_gff_pairing_cov(bk_real_fn f1, void* u1, double s1, bk_real_fn f2, void* u2, double s2, double theta,
                             bk_gff_variant v, int nodes, double* out)
{
    if (any_null(out)) return BK_ERR_NULL_POINTER;
    return guarded([&] {
        *out = bk::asy::gff_pairing_cov(wrap(f1, u1), s1, wrap(f2, u2), s2, theta, variant(v), nodes > 0 ? nodes : 400);
    });
}

bk_status bk_hb1_gap(double s1, double s2, double theta, const double* r1, int n1, const double* r2, int n2,
                     double* rel_gap)
{
    if (any_null(r1, r2, rel_gap)) return BK_ERR_NULL_POINTER;
    return guarded([&] {
        if (n1 < 0 || n2 < 0) bk::fail(bk::Errc::invalid_argument, "negative polynomial length");
        const bk::asy::Poly p1{{r1, r1 + n1}}, p2{{r2, r2 + n2}};
        *rel_gap = bk::asy::hb1_consistency(s1, s2, theta, p1, p2).rel_gap;
    });
}

/* field statistics */

bk_status bk_lln_report(const bk_batch* b, const double* s_values, int n_s, int nx, bk_lln* out)
{
    if (any_null(b, s_values, out)) return BK_ERR_NULL_POINTER;
    return guarded([&] {
        if (n_s <= 0) bk::fail(bk::Errc::invalid_argument, "no levels for the law of large numbers report");
        const std::vector<double> sv(s_values, s_values + n_s);
        const auto r = bk::stats::lln_report(b->b, bk::stats::default_lln_grid(sv, b->b.params.theta, nx));
        const auto n = r.sup_gap.size();
        double ss = 0.0;
        for (double g : r.sup_gap) ss += (g - r.mean_gap) * (g - r.mean_gap);
        const double se = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
        *out = {r.mean_gap, r.max_gap, se, n};
    });
}

bk_status bk_clt_report(const bk_batch* b, const bk_pairing_spec* specs, int n_specs, bk_gff_variant v, int gff_nodes,
                        double z_limit, bk_report** out)
{
    if (any_null(b, specs, out)) return BK_ERR_NULL_POINTER;
    *out = nullptr;
    return guarded([&] {
        std::vector<bk::stats::PairingSpec> sp;
        for (int k = 0; k < n_specs; ++k)
            sp.push_back({specs[k].name ? specs[k].name : "f" + std::to_string(k), specs[k].s, wrap(specs[k].f, specs[k].user)});
        const auto r = bk::stats::clt_report(b->b, sp, variant(v), gff_nodes > 0 ? gff_nodes : 400, z_limit > 0 ? z_limit : 3.0);
        *out = new bk_report{r.rows, r.covariance_ok && r.third_ok, r.max_cov_z, r.max_third_ratio};
    });
}

bk_status bk_stieltjes_cov_report(const bk_batch* b, bk_complex z1, double s1, bk_complex z2, double s2,
                                  bk_report** out)
{
    if (any_null(b, out)) return BK_ERR_NULL_POINTER;
    *out = nullptr;
    return guarded([&] {
        const auto c = bk::stats::stieltjes_covariance_check(b->b, to_cplx(z1), s1, to_cplx(z2), s2);
        *out = new bk_report{c.rows(), c.zscore < 3.0, c.zscore, 0.0};
    });
}

void bk_report_free(bk_report* r) { delete r; }

size_t bk_report_size(const bk_report* r) { return r ? r->rows.size() : 0; }

bk_status bk_report_row_at(const bk_report* r, size_t index, bk_report_row* out)
{
    if (any_null(r, out)) return BK_ERR_NULL_POINTER;
    if (index >= r->rows.size()) {
        g_last_error = "row index out of range";
        return BK_ERR_INVALID_ARGUMENT;
    }
    const auto& w = r->rows[index];
    *out = {w.quantity.c_str(), w.order, w.estimate, w.stderr, w.target, w.zscore, w.checked ? 1 : 0};
    return BK_OK;
}

bk_status bk_report_summary(const bk_report* r, int* pass, double* max_cov_z, double* max_third_ratio)
{
    if (any_null(r)) return BK_ERR_NULL_POINTER;
    if (pass) *pass = r->pass ? 1 : 0;
    if (max_cov_z) *max_cov_z = r->max_cov_z;
    if (max_third_ratio) *max_third_ratio = r->max_third_ratio;
    return BK_OK;
}

bk_status bk_joint_cumulant(const bk_batch* b, const bk_complex* z, const double* s, int order, bk_complex* value,
                            double* stderr_out)
{
    if (any_null(b, z, s, value)) return BK_ERR_NULL_POINTER;
    return guarded([&] {
        std::vector<bk::stats::FieldPoint> obs;
        for (int k = 0; k < order; ++k) obs.push_back({to_cplx(z[k]), s[k]});
        const auto e = bk::stats::estimate_joint_cumulant(b->b, obs);
        *value = from_cplx(e.value);
        if (stderr_out) *stderr_out = e.stderr;
    });
}

}  // extern "C"
