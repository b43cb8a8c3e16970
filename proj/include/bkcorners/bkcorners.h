/*
 * Copyright (c) 2026 The bkcorners contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 */
#ifndef BKCORNERS_H
#define BKCORNERS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BKCORNERS_BUILD)
#    define BK_API __declspec(dllexport)
#  else
#    define BK_API __declspec(dllimport)
#  endif
#else
#  define BK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns a status. On failure a description is kept per thread. */
typedef enum bk_status {
    BK_OK = 0,
    BK_ERR_DOMAIN = 1,
    BK_ERR_POLE = 2,
    BK_ERR_BUDGET = 3,
    BK_ERR_TOO_FEW_POINTS = 4,
    BK_ERR_INCOMPLETE_TABLE = 5,
    BK_ERR_INSUFFICIENT_CHAINS = 6,
    BK_ERR_LEVEL_RANGE = 7,
    BK_ERR_CONTOUR = 8,
    BK_ERR_INVALID_ARGUMENT = 9,
    BK_ERR_PRECONDITION = 10,
    BK_ERR_NULL_POINTER = 100,
    BK_ERR_INTERNAL = 101
} bk_status;

typedef struct bk_complex {
    double re;
    double im;
} bk_complex;

BK_API const char* bk_version(void);
BK_API const char* bk_status_name(bk_status s);
BK_API const char* bk_last_error(void);

/* ---- exact finite model ---------------------------------------------- */

/* closed != 0 uses the product formula, otherwise the brute-force sum */
BK_API bk_status bk_partition_function(double theta, int K, int N, int closed, double* out);
BK_API bk_status bk_printed_partition_function(double theta, int K, int N, double* out);
BK_API bk_status bk_projection_discrepancy(double theta, int K, int N, int n, double* out);
BK_API bk_status bk_marginal_discrepancy(double theta, int K, int N, int n, double* out);
BK_API bk_status bk_nekrasov_residual(double theta, int K, int n, const double z[4], double* out);
BK_API bk_status bk_jack_crosscheck(double theta, int K, int N, double* out);

typedef struct bk_enumeration bk_enumeration;

/* guard <= 0 selects the default budget */
BK_API bk_status bk_enumerate(double theta, int K, int N, int64_t guard, bk_enumeration** out);
BK_API void bk_enumeration_free(bk_enumeration* e);
BK_API size_t bk_enumeration_size(const bk_enumeration* e);
BK_API double bk_enumeration_partition_function(const bk_enumeration* e);
/* lambda must hold `level` entries */
BK_API bk_status bk_enumeration_config(const bk_enumeration* e, size_t index, int level, int* lambda,
                                       double* log_weight, double* probability);

/* ---- verification suites --------------------------------------------- */

typedef struct bk_suite bk_suite;

BK_API bk_status bk_verify_exact(double tol_scale, bk_suite** out);
BK_API bk_status bk_verify_analytic(double tol_scale, bk_suite** out);
BK_API void bk_suite_free(bk_suite* s);
BK_API size_t bk_suite_size(const bk_suite* s);
/* name stays valid for the lifetime of the suite */
BK_API bk_status bk_suite_check(const bk_suite* s, size_t index, const char** name, double* value, double* tol,
                                int* pass);
BK_API int bk_suite_all_pass(const bk_suite* s);

/* ---- sampler --------------------------------------------------------- */

typedef enum bk_init { BK_INIT_QUANTILE = 0, BK_INIT_ZERO = 1 } bk_init;

typedef struct bk_chain_config {
    uint64_t seed;
    int burnin_sweeps; /* negative: model default */
    int thin_sweeps;   /* negative: model default */
    int n_samples;
    const int* record_levels; /* NULL or empty: every level */
    int n_record_levels;
    bk_init init;
} bk_chain_config;

BK_API void bk_chain_config_init(bk_chain_config* cfg);
BK_API int bk_default_burnin(int K);
BK_API int bk_default_thin(int K);

typedef struct bk_batch bk_batch;

/* Chain c uses the Philox stream (seed, c). */
BK_API bk_status bk_sample(double theta, int K, int N, const bk_chain_config* cfg, int n_chains, bk_batch** out);
BK_API void bk_batch_free(bk_batch* b);
BK_API size_t bk_batch_size(const bk_batch* b);
BK_API bk_status bk_batch_snapshot(const bk_batch* b, size_t index, int* chain, int64_t* sweep);
/* Recorded levels of a snapshot in increasing order; levels may be NULL to query the count. */
BK_API bk_status bk_batch_levels(const bk_batch* b, size_t index, int* levels, int capacity, int* count);
BK_API bk_status bk_batch_level(const bk_batch* b, size_t index, int level, int* lambda, int capacity);
BK_API bk_status bk_batch_height(const bk_batch* b, size_t index, double x, double s, int hat, int* out);

/* ---- limit objects --------------------------------------------------- */

typedef struct bk_edges {
    double z_minus;
    double z_plus;
    double a;
    double b;
} bk_edges;

typedef double (*bk_real_fn)(double x, void* user);

typedef enum bk_gff_variant { BK_GFF_OMEGA = 0, BK_GFF_OMEGA_HAT = 1 } bk_gff_variant;

BK_API bk_status bk_edge_data(double s, double theta, bk_edges* out);
BK_API bk_status bk_mu_density(double x, double s, double theta, double* out);
BK_API bk_status bk_nu_density(double x, double s, double theta, double* out);
BK_API bk_status bk_limit_height(double x, double s, double theta, double* out);
BK_API bk_status bk_exp_theta_g(bk_complex z, double s, double theta, bk_complex* out);
BK_API bk_status bk_stieltjes_quadrature(bk_complex z, double s, double theta, bk_complex* out);
BK_API bk_status bk_transport_map(bk_complex z, double s, double t, double theta, bk_complex* out);
BK_API bk_status bk_covariance(bk_complex z1, double s1, bk_complex z2, double s2, double theta, bk_complex* out);
BK_API bk_status bk_covariance_characteristics(bk_complex z1, double s1, bk_complex z2, double s2, double theta,
                                               bk_complex* out);
BK_API bk_status bk_gff_pairing_cov(bk_real_fn f1, void* u1, double s1, bk_real_fn f2, void* u2, double s2,
                                    double theta, bk_gff_variant v, int nodes, double* out);
/* polynomials given by coefficient arrays, lowest degree first */
BK_API bk_status bk_hb1_gap(double s1, double s2, double theta, const double* r1, int n1, const double* r2, int n2,
                            double* rel_gap);

/* ---- field statistics ------------------------------------------------- */

typedef struct bk_lln {
    double mean_gap;
    double max_gap;
    double stderr_gap; /* spread of the per-snapshot gaps over the square root of their count */
    size_t n_snapshots;
} bk_lln;

/* Sup-distance between sampled and limiting heights on a default grid of nx points per level. */
BK_API bk_status bk_lln_report(const bk_batch* b, const double* s_values, int n_s, int nx, bk_lln* out);

typedef struct bk_pairing_spec {
    const char* name;
    double s;
    bk_real_fn f;
    void* user;
} bk_pairing_spec;

typedef struct bk_report bk_report;

typedef struct bk_report_row {
    const char* quantity; /* valid for the lifetime of the report */
    int order;
    double estimate;
    double stderr_;
    double target;
    double zscore;
    int checked;
} bk_report_row;

BK_API bk_status bk_clt_report(const bk_batch* b, const bk_pairing_spec* specs, int n_specs, bk_gff_variant v,
                               int gff_nodes, double z_limit, bk_report** out);
BK_API bk_status bk_stieltjes_cov_report(const bk_batch* b, bk_complex z1, double s1, bk_complex z2, double s2,
                                         bk_report** out);
BK_API void bk_report_free(bk_report* r);
BK_API size_t bk_report_size(const bk_report* r);
BK_API bk_status bk_report_row_at(const bk_report* r, size_t index, bk_report_row* out);
/* max |z| over checked covariance rows and max |k3|/stderr over third cumulants */
BK_API bk_status bk_report_summary(const bk_report* r, int* pass, double* max_cov_z, double* max_third_ratio);

BK_API bk_status bk_joint_cumulant(const bk_batch* b, const bk_complex* z, const double* s, int order,
                                   bk_complex* value, double* stderr_out);

#ifdef __cplusplus
}
#endif

#endif /* BKCORNERS_H */
