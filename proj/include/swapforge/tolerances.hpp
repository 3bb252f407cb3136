// Copyright 2026 The swapforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

namespace swapforge {

/// Numerical thresholds shared by every module. Defaults are tuned for
/// double precision on matrices up to 81x81.
struct Tolerances {
    double herm_tol = 1e-10;         // max|M - M^dag|, scaled by max(1, max|M|)
    double psd_tol = 1e-10;          // eigenvalues in [-psd_tol, 0) clamp to 0
    double rank_rel_tol = 1e-10;     // relative to the largest eigenvalue
    double ppt_tol = 1e-10;          // absolute, on partial-transpose spectra
    double insep_tol = 1e-9;         // on I-concurrence values
    double prob_tol = 1e-12;         // branches below this are dropped
    double completeness_tol = 1e-9;  // max|sum_n Pi_n - I|
    double branch_sum_tol = 1e-6;    // average_negativity sibling check
};

} // namespace swapforge
