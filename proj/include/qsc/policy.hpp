// Copyright 2026 The qsc developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

namespace qsc {

/// Central numeric policy. Every tolerance used by validation, the solver and
/// verdict classification is derived from these three knobs so that a single
/// record controls the numeric behaviour of the whole library.
struct NumericPolicy {
  /// Input validation: Hermiticity defect, PSD clamp floor, probability sums.
  double validation_tol = 1e-9;
  /// Interior-point termination: normalized KKT residuals and relative gap.
  double solver_tol = 1e-8;
  /// Verdict classification margin for ordering decisions.
  double verdict_margin = 1e-6;

  /// Residuals in [solver_tol, borderline_band()] classify as borderline
  /// rather than as a clean verdict.
  double borderline_band() const { return 10.0 * solver_tol; }
};

inline NumericPolicy default_policy() { return NumericPolicy{}; }

}  // namespace qsc
