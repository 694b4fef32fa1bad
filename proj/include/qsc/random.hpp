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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qsc/hermitian.hpp"
#include "qsc/states.hpp"

namespace qsc {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Engine for sample `index` of a seeded stream. Indexed rather than
/// sequential so parallel evaluation order cannot change the draws.
inline std::mt19937_64 engine_for(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 1)));
}

/// Full-rank Hilbert-Schmidt-style random state: G G^dagger normalized,
/// G with i.i.d. standard complex Gaussian entries.
inline DensityMatrix random_density(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix g(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) g.at(r, c) = cplx(gauss(rng), gauss(rng));
  ComplexMatrix w = mul(g, g.adjoint());
  double tr = 0.0;
  for (int i = 0; i < d; ++i) tr += w.at(i, i).real();
  for (cplx& v : w.a) v /= tr;
  return DensityMatrix(HermitianMatrix::from_complex(w, 1e-6));
}

/// Symmetric Dirichlet(1) draw over the k-cell simplex via normalized
/// exponentials.
inline std::vector<double> dirichlet_uniform(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(k));
  double total = 0.0;
  for (double& x : v) {
    double u = unif(rng);
    while (u <= 0.0) u = unif(rng);
    x = -std::log(u);
    total += x;
  }
  for (double& x : v) x /= total;
  return v;
}

/// Random encoding over U x X (num_y = 0) or U x Y x X, Dirichlet-uniform
/// over the whole joint simplex.
inline Encoding random_encoding(int u_size, int num_y, std::mt19937_64& rng) {
  int cells = u_size * std::max(1, num_y) * 2;
  std::vector<double> probs = dirichlet_uniform(cells, rng);
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(u_size));
  for (int u = 0; u < u_size; ++u) labels.push_back("u" + std::to_string(u));
  return Encoding(std::move(labels), num_y, std::move(probs));
}

}  // namespace qsc
