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

// Reference-preserving ordering along a mixing path: sliding sigma from rho
// toward the reference omega always admits an omega-fixing channel, while
// moving away from omega never does.

#include <cstdio>

#include "qsc/qsc.hpp"

int main() {
  using namespace qsc;

  DensityMatrix rho = DensityMatrix::pure({cplx(std::sqrt(0.85), 0.0),
                                           cplx(std::sqrt(0.15), 0.0)});
  std::vector<cplx> gibbs = {cplx(0.75, 0.0), cplx(0.0, 0.0),
                             cplx(0.0, 0.0), cplx(0.25, 0.0)};
  DensityMatrix omega(HermitianMatrix::from_entries(2, gibbs));

  auto toward = [&](double lambda) {
    HermitianMatrix m = rho.mat();
    m *= 1.0 - lambda;
    HermitianMatrix w = omega.mat();
    w *= lambda;
    m += w;
    return DensityMatrix(m);
  };

  std::printf("sigma = (1 - lambda) rho + lambda omega\n");
  for (double lambda : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    OrderingVerdict v = decide_thermal_ordering(rho, toward(lambda), omega);
    std::printf("  lambda %.2f  ->  %s\n", lambda, to_string(v.relation));
  }

  // Un-mixing: carrying the halfway state back to the sharp one would move
  // away from the fixed reference.
  OrderingVerdict bad = decide_thermal_ordering(toward(0.5), rho, omega);
  std::printf("  un-mixing (halfway state back to rho)  ->  %s\n", to_string(bad.relation));
  if (bad.witness.has_value() && bad.witness->witness_found)
    std::printf("  counterexample gap: %.3e\n", bad.witness->gap);
  return 0;
}
