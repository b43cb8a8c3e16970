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

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace bk::exact {

struct ModelParams {
    double theta = 1.0;
    int K = 0;
    int N = 1;
};
void validate(const ModelParams& p);

// One level of the array: n integers K >= lambda_1 >= ... >= lambda_n >= 0.
struct LevelConfig {
    std::vector<int> lambda;
    int n() const { return static_cast<int>(lambda.size()); }
    // l_i = lambda_i - i*theta, i is 1-based
    double position(int i, double theta) const { return lambda[i - 1] - i * theta; }
};

// levels[j-1] holds level j (j particles)
struct CornersConfig {
    std::vector<LevelConfig> levels;
    int N() const { return static_cast<int>(levels.size()); }
    const LevelConfig& level(int j) const { return levels[j - 1]; }
    LevelConfig& level(int j) { return levels[j - 1]; }
};

bool interlaces(const LevelConfig& upper, const LevelConfig& lower);
bool in_state_space(const CornersConfig& c, int K);

constexpr std::int64_t kDefaultGuard = 1000000;

std::vector<LevelConfig> enumerate_levels(int K, int n, std::int64_t guard = kDefaultGuard);
std::vector<CornersConfig> enumerate_corners(int K, int N, std::int64_t guard = kDefaultGuard);

double log_weight_I(const LevelConfig& upper, const LevelConfig& lower, double theta);
double log_weight_Ht(const LevelConfig& top, double theta, int K);
double log_weight_Hb(const LevelConfig& level, double theta);
double log_weight_corners(const CornersConfig& c, double theta, int K);

enum class ZMode { brute, closed };
double partition_function(double theta, int K, int N, ZMode mode, std::int64_t guard = kDefaultGuard);
// The normalization exactly as printed in the source derivation; kept for comparison only.
double printed_partition_function(double theta, int K, int N);
// Normalization of the single-level law of level n.
double single_level_normalization(double theta, int K, int n);
// Unnormalized log weight of the single-level law of level n.
double log_single_level_weight(const LevelConfig& level, double theta, int K);

struct Enumeration {
    ModelParams params;
    std::vector<CornersConfig> configs;
    std::vector<double> log_weight;
    std::vector<double> probability;
    double Z = 0.0;
};
Enumeration enumerate_measure(const ModelParams& p, std::int64_t guard = kDefaultGuard);

struct MarginalTable {
    std::vector<LevelConfig> levels;
    std::vector<double> by_sum;      // summing the full measure over the other levels
    std::vector<double> by_formula;  // closed single-level law
    double max_abs_diff = 0.0;
};
MarginalTable marginal_level(double theta, int K, int N, int n, std::int64_t guard = kDefaultGuard);

// Max abs difference between the projection of P_N to levels 1..n and P_n.
double projection_discrepancy(double theta, int K, int N, int n, std::int64_t guard = kDefaultGuard);

std::complex<double> exact_expectation(const std::function<std::complex<double>(const CornersConfig&)>& g,
                                       double theta, int K, int N, std::int64_t guard = kDefaultGuard);

struct NekrasovResult {
    std::array<std::complex<double>, 4> R{};
    double residual = 0.0;
};
NekrasovResult nekrasov_check(double theta, int K, int n, const std::array<double, 4>& z,
                              std::int64_t guard = kDefaultGuard);

double jack_crosscheck(double theta, int K, int N, std::int64_t guard = kDefaultGuard);

}  // namespace bk::exact
