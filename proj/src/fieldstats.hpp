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
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "asymptotics.hpp"
#include "sampler.hpp"

namespace bk::stats {

using cplx = std::complex<double>;

// Tables are indexed by subset bitmask over n variables; entry 0 is unused.
constexpr int kMaxTableOrder = 6;

cplx cumulant_from_moments(const std::vector<cplx>& moments, int n);
std::vector<cplx> cumulants_from_moments(const std::vector<cplx>& moments, int n);
cplx moment_from_cumulants(const std::vector<cplx>& cumulants, int n);
std::vector<cplx> moments_from_cumulants(const std::vector<cplx>& cumulants, int n);
// Variables are ordered (X, Y, X_1, ..., X_{n-2}); returns the cumulant M(XY, X_1, ..., X_{n-2}).
cplx product_cumulant_expand(const std::vector<cplx>& cumulants, int n);

struct CumulantEstimate {
    int order = 0;
    cplx value{};
    double stderr = 0.0;  // standard error of the complex value, |.| scale
    int n_batches = 0;
};

// series[k][t] is observable k at snapshot t; batch_of[t] names the batch (chain) of snapshot t.
// The estimate uses all snapshots; the error bar comes from the spread of per-batch estimates.
CumulantEstimate estimate_cumulant(const std::vector<std::vector<cplx>>& series, const std::vector<int>& batch_of,
                                   int min_batches = 8);

std::vector<int> chain_ids(const mc::SampleBatch& b);

struct FieldPoint {
    cplx z;
    double s;
};
std::vector<cplx> stieltjes_series(const mc::SampleBatch& b, cplx z, double s);
CumulantEstimate estimate_joint_cumulant(const mc::SampleBatch& b, const std::vector<FieldPoint>& obs,
                                         int min_batches = 8);

using asy::GffVariant;
using asy::RealFn;

// sqrt(theta pi) * integral of (H - sample mean of H) f over the line, one value per snapshot.
std::vector<double> pairing_rv(const mc::SampleBatch& b, const RealFn& f, double s, GffVariant v);

struct LlnReport {
    std::vector<std::pair<double, double>> grid;  // (x, s)
    std::vector<double> sup_gap;                  // per snapshot
    double mean_gap = 0.0;
    double max_gap = 0.0;
};
std::vector<std::pair<double, double>> default_lln_grid(const std::vector<double>& s_values, double theta, int nx = 201);
LlnReport lln_report(const mc::SampleBatch& b, const std::vector<std::pair<double, double>>& grid);

struct ReportRow {
    std::string quantity;
    int order = 0;
    double estimate = 0.0;
    double stderr = 0.0;
    double target = 0.0;
    double zscore = 0.0;
    bool checked = true;  // counts toward pass/fail
};

struct PairingSpec {
    std::string name;
    double s = 1.0;
    RealFn f;
};

struct CltReport {
    std::vector<ReportRow> rows;
    bool covariance_ok = true;
    bool third_ok = true;
    double max_cov_z = 0.0;
    double max_third_ratio = 0.0;  // max |kappa_3| / stderr
};
CltReport clt_report(const mc::SampleBatch& b, const std::vector<PairingSpec>& specs, GffVariant v,
                     int gff_nodes = 400, double z_limit = 3.0);

// Covariance of the centred Stieltjes field at two points against the limit kernel.
struct StieltjesCovCheck {
    CumulantEstimate estimate;
    cplx target{};
    double zscore = 0.0;  // |estimate - target| / stderr
    std::vector<ReportRow> rows() const;  // real and imaginary parts as two CSV rows
};
StieltjesCovCheck stieltjes_covariance_check(const mc::SampleBatch& b, cplx z1, double s1, cplx z2, double s2);

// CSV with columns quantity,estimate,stderr,target,zscore; 17 significant digits.
void write_report_csv(std::ostream& os, const std::vector<ReportRow>& rows);

}  // namespace bk::stats
