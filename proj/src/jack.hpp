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

#include <vector>

namespace bk::jack {

// Weakly decreasing nonnegative parts with trailing zeros trimmed.
class Partition {
public:
    Partition() = default;
    Partition(std::vector<int> parts);  // NOLINT(google-explicit-constructor)
    Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

    const std::vector<int>& parts() const { return parts_; }
    int length() const { return static_cast<int>(parts_.size()); }
    int weight() const;
    // i is 1-based; parts past the length are zero
    int operator[](int i) const { return (i >= 1 && i <= length()) ? parts_[i - 1] : 0; }
    bool operator==(const Partition& o) const { return parts_ == o.parts_; }

private:
    std::vector<int> parts_;
};

Partition conjugate(const Partition& lambda);

// True when mu interlaces below lambda: lambda_1 >= mu_1 >= lambda_2 >= mu_2 >= ...
bool interlaces(const Partition& lambda, const Partition& mu);

double jack_pure_alpha(const Partition& lambda, int N, double theta);
double jack_dual_pure_beta(const Partition& lambda, int K, double theta);

// Single-variable skew value. The double product runs over i <= j <= k-1; k defaults to
// length(lambda)+1 and every k > length(mu) gives the same result.
double jack_skew_one(const Partition& lambda, const Partition& mu, double theta, int k = -1);

double ascending_weight(const std::vector<Partition>& seq, int K, double theta);

struct BranchingSum {
    double lhs = 0.0;
    double ratio = 0.0;
};
BranchingSum branching_sum_check(const Partition& nu, int K, double theta);

}  // namespace bk::jack
