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

#include <iosfwd>
#include <string>
#include <vector>

namespace bk::verify {

struct Check {
    std::string name;
    double value = 0.0;  // residual or gap; smaller is better
    double tol = 0.0;
    bool pass = false;
};

struct Suite {
    std::vector<Check> checks;
    bool all_pass() const;
    void add(std::string name, double value, double tol);
};

// Exact finite-model identities: normalization, projections, single-level marginals,
// the degree-one property of the loop observable, and the Jack cross-check.
// Every tolerance is multiplied by tol_scale.
Suite verify_exact(double tol_scale = 1.0);

// Closed-form identities of the limit objects, covariance cross-checks and the
// height-function consistency integral.
Suite verify_analytic(double tol_scale = 1.0);

// CSV with columns check,value,tol,pass.
void write_suite_csv(std::ostream& os, const Suite& s);

}  // namespace bk::verify
