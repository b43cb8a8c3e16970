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
#include <cstdint>
#include <map>
#include <vector>

#include "corners_exact.hpp"
#include "rng.hpp"

namespace bk::mc {

using exact::CornersConfig;
using exact::ModelParams;

enum class InitKind { zero, quantile };

struct ChainConfig {
    std::uint64_t seed = 1;
    int burnin_sweeps = -1;  // negative: 20*K
    int thin_sweeps = -1;    // negative: max(K,1)
    int n_samples = 0;
    std::vector<int> record_levels;  // empty: every level
    InitKind init = InitKind::quantile;
};

// resolved defaults for a given model
int default_burnin(const ModelParams& p);
int default_thin(const ModelParams& p);

struct Snapshot {
    int chain = 0;
    std::int64_t sweep = 0;
    std::map<int, std::vector<int>> levels;  // level n -> (lambda_1..lambda_n)
};

struct SampleBatch {
    ModelParams params;
    ChainConfig chain;
    int n_chains = 1;
    std::vector<Snapshot> snapshots;  // chain-major, in sweep order
};

struct Interval {
    int lo = 0;
    int hi = 0;
};

Interval site_support(const CornersConfig& c, int K, int j, int i);

// Log conditional weights of lambda^j_i over its support, relative to the lowest value.
std::vector<double> conditional_log_weights(const CornersConfig& c, double theta, int K, int j, int i);

void heat_bath_update(CornersConfig& c, double theta, int K, int j, int i, Philox4x32& rng);

// Deterministic starting point: zeros, or particles placed at quantiles of the limit density.
CornersConfig initial_config(const ModelParams& p, InitKind kind);

void sweep(CornersConfig& c, double theta, int K, Philox4x32& rng);

SampleBatch sample_corners(const ModelParams& p, const ChainConfig& cfg, int chain_index = 0);
SampleBatch sample_chains(const ModelParams& p, const ChainConfig& cfg, int n_chains);

// level index helpers, ceil with a tolerance so that s*K exactly integral is not bumped
int level_for_H(double s, int K, double theta);
int level_for_hat(double s, int K);

int height_H(const std::vector<int>& level, double x, double s, int K, double theta);
int height_hat(const std::vector<int>& level, double x, double s, int K, double theta);
std::complex<double> stieltjes_field(const std::vector<int>& level, std::complex<double> z, int K, double theta,
                                     bool* near_pole = nullptr);

// Snapshot/CornersConfig front ends that look the level up and throw level_range if absent.
int height_H(const Snapshot& s, double x, double sv, int K, double theta);
int height_hat(const Snapshot& s, double x, double sv, int K, double theta);
std::complex<double> stieltjes_field(const Snapshot& s, std::complex<double> z, double sv, int K, double theta,
                                     bool* near_pole = nullptr);
int height_H(const CornersConfig& c, double x, double s, int K, double theta);
int height_hat(const CornersConfig& c, double x, double s, int K, double theta);
std::complex<double> stieltjes_field(const CornersConfig& c, std::complex<double> z, double s, int K, double theta,
                                     bool* near_pole = nullptr);

}  // namespace bk::mc
