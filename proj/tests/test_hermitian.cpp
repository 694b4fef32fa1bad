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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "qsc/hermitian.hpp"
#include "qsc/random.hpp"

using qsc::cplx;
using qsc::HermitianMatrix;

namespace {

HermitianMatrix pauli_x() {
  HermitianMatrix m(2);
  m.set(0, 1, 1.0);
  return m;
}

HermitianMatrix random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  HermitianMatrix m(d);
  for (int r = 0; r < d; ++r) {
    m.set(r, r, g(rng));
    for (int c = r + 1; c < d; ++c) m.set(r, c, cplx(g(rng), g(rng)));
  }
  return m;
}

double reconstruction_error(const HermitianMatrix& m, const qsc::EigResult& e) {
  int d = m.dim();
  double worst = 0.0;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      cplx s = 0.0;
      for (int k = 0; k < d; ++k)
        s += e.vectors(r, k) * e.values[k] * std::conj(e.vectors(c, k));
      worst = std::max(worst, std::abs(s - m(r, c)));
    }
  return worst;
}

double unitarity_error(const qsc::ComplexMatrix& v) {
  int d = v.rows;
  double worst = 0.0;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      cplx s = 0.0;
      for (int k = 0; k < d; ++k) s += std::conj(v(k, r)) * v(k, c);
      worst = std::max(worst, std::abs(s - (r == c ? 1.0 : 0.0)));
    }
  return worst;
}

}  // namespace

TEST_CASE("construction validates hermiticity") {
  std::vector<cplx> ok = {cplx(1.0), cplx(0.0, 2.0), cplx(0.0, -2.0), cplx(-1.0)};
  REQUIRE_NOTHROW(HermitianMatrix::from_entries(2, ok));
  std::vector<cplx> bad = {cplx(1.0), cplx(0.5), cplx(0.7), cplx(-1.0)};
  REQUIRE_THROWS(HermitianMatrix::from_entries(2, bad));
  std::vector<cplx> imag_diag = {cplx(1.0, 0.5), cplx(0.0), cplx(0.0), cplx(1.0)};
  REQUIRE_THROWS(HermitianMatrix::from_entries(2, imag_diag));
}

TEST_CASE("eigendecomposition of fixed matrices") {
  auto e = qsc::eig_hermitian(pauli_x());
  REQUIRE(e.values.size() == 2);
  CHECK(e.values[0] == Catch::Approx(1.0).margin(1e-12));
  CHECK(e.values[1] == Catch::Approx(-1.0).margin(1e-12));

  auto id3 = qsc::eig_hermitian(HermitianMatrix::identity(3));
  for (double v : id3.values) CHECK(v == Catch::Approx(1.0).margin(1e-14));

  HermitianMatrix diag(2);
  diag.set(0, 0, 0.7);
  diag.set(1, 1, 0.3);
  auto ed = qsc::eig_hermitian(diag);
  CHECK(ed.values[0] == Catch::Approx(0.7).margin(1e-14));
  CHECK(ed.values[1] == Catch::Approx(0.3).margin(1e-14));
  CHECK(std::abs(ed.vectors(0, 0)) == Catch::Approx(1.0).margin(1e-12));
  CHECK(std::abs(ed.vectors(1, 1)) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("eigendecomposition round-trips on random matrices up to dim 16") {
  for (int d : {2, 3, 5, 8, 12, 16}) {
    auto rng = qsc::engine_for(17, d);
    HermitianMatrix m = random_hermitian(d, rng);
    auto e = qsc::eig_hermitian(m);
    REQUIRE(static_cast<int>(e.values.size()) == d);
    for (int k = 0; k + 1 < d; ++k) REQUIRE(e.values[k] >= e.values[k + 1]);
    CHECK(reconstruction_error(m, e) <= 1e-10);
    CHECK(unitarity_error(e.vectors) <= 1e-10);
  }
}

TEST_CASE("trace norm values") {
  HermitianMatrix m(2);
  m.set(0, 0, 1.0);
  m.set(1, 1, -2.0);
  CHECK(qsc::trace_norm(m) == Catch::Approx(3.0).margin(1e-12));

  // |0><0| - |+><+| has eigenvalues +-1/sqrt(2).
  HermitianMatrix diff(2);
  diff.set(0, 0, 0.5);
  diff.set(1, 1, -0.5);
  diff.set(0, 1, -0.5);
  CHECK(qsc::trace_norm(diff) == Catch::Approx(std::sqrt(2.0)).margin(1e-12));

  auto rng = qsc::engine_for(3, 0);
  for (int trial = 0; trial < 5; ++trial) {
    auto rho = qsc::random_density(3, rng);
    CHECK(qsc::trace_norm(rho.mat()) == Catch::Approx(1.0).margin(1e-10));
  }
}

TEST_CASE("trace norm dominates absolute trace") {
  auto rng = qsc::engine_for(11, 0);
  for (int trial = 0; trial < 10; ++trial) {
    HermitianMatrix m = random_hermitian(4, rng);
    CHECK(qsc::trace_norm(m) >= std::abs(m.trace()) - 1e-12);
  }
  auto rho = qsc::random_density(4, rng);
  CHECK(qsc::trace_norm(rho.mat()) == Catch::Approx(std::abs(rho.mat().trace())).margin(1e-10));
}

TEST_CASE("tensor products") {
  auto i2 = HermitianMatrix::identity(2);
  auto t = qsc::tensor(i2, i2);
  REQUIRE(t.dim() == 4);
  CHECK(qsc::max_abs_diff(t, HermitianMatrix::identity(4)) <= 1e-15);

  HermitianMatrix a(2), b(2);
  a.set(0, 0, 1.0);
  b.set(1, 1, 1.0);
  auto ab = qsc::tensor(a, b);
  CHECK(std::abs(ab(1, 1) - cplx(1.0)) <= 1e-15);
  CHECK(std::abs(ab(0, 0)) <= 1e-15);
  CHECK(std::abs(ab(2, 2)) <= 1e-15);
  CHECK(std::abs(ab(3, 3)) <= 1e-15);

  auto rng = qsc::engine_for(5, 0);
  HermitianMatrix r2 = random_hermitian(2, rng);
  HermitianMatrix r3 = random_hermitian(3, rng);
  CHECK(qsc::tensor(r2, r3).trace() == Catch::Approx(r2.trace() * r3.trace()).margin(1e-12));
}

TEST_CASE("partial trace") {
  auto rng = qsc::engine_for(7, 0);
  HermitianMatrix a = random_hermitian(2, rng);
  HermitianMatrix b = random_hermitian(3, rng);
  auto ab = qsc::tensor(a, b);

  auto ta = qsc::partial_trace(ab, 2, 3, qsc::Subsystem::first);
  HermitianMatrix expect = a;
  expect *= b.trace();
  CHECK(qsc::max_abs_diff(ta, expect) <= 1e-12);

  auto tb = qsc::partial_trace(ab, 2, 3, qsc::Subsystem::second);
  HermitianMatrix expect_b = b;
  expect_b *= a.trace();
  CHECK(qsc::max_abs_diff(tb, expect_b) <= 1e-12);

  CHECK(ta.trace() == Catch::Approx(ab.trace()).margin(1e-12));

  // Maximally entangled 2-qubit projector reduces to I/2.
  std::vector<cplx> bell(4, 0.0);
  bell[0] = 1.0 / std::sqrt(2.0);
  bell[3] = 1.0 / std::sqrt(2.0);
  HermitianMatrix proj(4);
  for (int r = 0; r < 4; ++r)
    for (int c = r; c < 4; ++c) proj.set(r, c, bell[r] * std::conj(bell[c]));
  auto red = qsc::partial_trace(proj, 2, 2, qsc::Subsystem::first);
  HermitianMatrix half = HermitianMatrix::identity(2);
  half *= 0.5;
  CHECK(qsc::max_abs_diff(red, half) <= 1e-12);

  REQUIRE_THROWS(qsc::partial_trace(a, 2, 3, qsc::Subsystem::first));
}

TEST_CASE("hermitian basis is orthonormal and spans") {
  for (int d : {2, 3}) {
    auto basis = qsc::hermitian_basis(d);
    REQUIRE(static_cast<int>(basis.size()) == d * d);
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = i; j < basis.size(); ++j) {
        double want = (i == j) ? 1.0 : 0.0;
        CHECK(qsc::hs_inner(basis[i], basis[j]) == Catch::Approx(want).margin(1e-14));
      }
  }
}
