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
#include <cstdint>
#include <random>

#include "qsc/comparison.hpp"
#include "qsc/oracle.hpp"
#include "qsc/random.hpp"
#include "qsc/states.hpp"

namespace {

using namespace qsc;

CqState binary_cq(double w, const DensityMatrix& r0, const DensityMatrix& r1) {
  return build_cq_state(Encoding::binary(w, 0.0, 0.0, 1.0 - w), r0, r1);
}

DensityMatrix plus_state() {
  double s = 1.0 / std::sqrt(2.0);
  return DensityMatrix::pure({cplx(s, 0.0), cplx(s, 0.0)});
}

}  // namespace

TEST_CASE("bloch-scan guessing oracle on pinned instances") {
  SECTION("orthogonal uniform pair") {
    CqState cq = binary_cq(0.5, DensityMatrix::basis_state(2, 0),
                           DensityMatrix::basis_state(2, 1));
    REQUIRE(oracle_pguess_qubit(cq, 64) == Catch::Approx(1.0).margin(1e-3));
  }
  SECTION("identical states give the best prior exactly") {
    auto rng = engine_for(211, 0);
    DensityMatrix r = random_density(2, rng);
    CqState cq = binary_cq(0.3, r, r);
    REQUIRE(oracle_pguess_qubit(cq, 256) == 0.7);
  }
  SECTION("|0> vs |+> uniform") {
    CqState cq = binary_cq(0.5, DensityMatrix::basis_state(2, 0), plus_state());
    double v = oracle_pguess_qubit(cq, 4096);
    REQUIRE(v == Catch::Approx(0.853553).margin(1e-4));
    REQUIRE(v <= 0.5 * (1.0 + 1.0 / std::sqrt(2.0)) + 1e-12);
  }
}

TEST_CASE("guessing oracle never exceeds the optimizer") {
  for (int k = 0; k < 10; ++k) {
    auto rng = engine_for(223, static_cast<std::uint64_t>(k));
    DensityMatrix r0 = random_density(2, rng);
    DensityMatrix r1 = random_density(2, rng);
    std::uniform_real_distribution<double> u(0.1, 0.9);
    double w = u(rng);
    CqState cq = binary_cq(w, r0, r1);
    double sdp = guessing_probability(cq).p_guess;
    double orc = oracle_pguess_qubit(cq, 4096);
    REQUIRE(orc <= sdp + 1e-9);
    REQUIRE(sdp - orc <= 1e-3);
  }
}

TEST_CASE("secondary trace-norm path agrees with the primary one") {
  SECTION("pinned values") {
    HermitianMatrix m(2);
    m.set(0, 0, 1.0);
    m.set(1, 1, -2.0);
    REQUIRE(oracle_trace_norm(m) == Catch::Approx(3.0).margin(1e-12));
    for (int d : {2, 3, 5}) {
      auto rng = engine_for(227, static_cast<std::uint64_t>(d));
      REQUIRE(oracle_trace_norm(random_density(d, rng).mat()) ==
              Catch::Approx(1.0).margin(1e-8));
    }
    HermitianMatrix one(1);
    one.set(0, 0, -0.25);
    REQUIRE(oracle_trace_norm(one) == Catch::Approx(0.25).margin(1e-15));
  }
  SECTION("random cross-checks up to dim 8") {
    for (int d = 2; d <= 8; ++d) {
      for (int k = 0; k < 6; ++k) {
        auto rng = engine_for(229, static_cast<std::uint64_t>(8 * d + k));
        std::normal_distribution<double> g(0.0, 1.0);
        HermitianMatrix m(d);
        for (int r = 0; r < d; ++r) {
          m.set(r, r, g(rng));
          for (int c = r + 1; c < d; ++c) m.set(r, c, cplx(g(rng), g(rng)));
        }
        REQUIRE(oracle_trace_norm(m) == Catch::Approx(trace_norm(m)).margin(1e-6));
      }
    }
  }
  SECTION("dimension cap") {
    REQUIRE_THROWS_AS(oracle_trace_norm(HermitianMatrix::identity(9)),
                      std::invalid_argument);
  }
}

TEST_CASE("channel-search oracle recovers planted channels") {
  for (int k = 0; k < 4; ++k) {
    auto rng = engine_for(233, static_cast<std::uint64_t>(k));
    DensityMatrix r0 = random_density(2, rng);
    DensityMatrix r1 = random_density(2, rng);
    ChoiMatrix j = random_choi(2, 2, rng);
    DensityMatrix s0 = apply_choi(j, r0);
    DensityMatrix s1 = apply_choi(j, r1);
    OracleChannelResult res = oracle_feasibility_qubit(r0, r1, s0, s1, 8, 91 + k);
    INFO("instance " << k << " residual " << res.residual);
    REQUIRE(res.found);
    REQUIRE(res.residual < 1e-6);
    REQUIRE(res.choi.has_value());
  }
}

TEST_CASE("channel-search oracle finds the identity instance") {
  auto rng = engine_for(239, 0);
  DensityMatrix r0 = random_density(2, rng);
  DensityMatrix r1 = random_density(2, rng);
  OracleChannelResult res = oracle_feasibility_qubit(r0, r1, r0, r1, 8, 5);
  REQUIRE(res.found);
  DensityMatrix img = apply_choi(*res.choi, r0);
  HermitianMatrix diff = img.mat();
  diff -= r0.mat();
  REQUIRE(trace_norm(diff) < 1e-5);
}

TEST_CASE("channel-search oracle respects certified infeasibility") {
  DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  DensityMatrix z0 = DensityMatrix::basis_state(2, 0);
  DensityMatrix z1 = DensityMatrix::basis_state(2, 1);
  FeasibilityVerdict fv = channel_feasibility(mixed, mixed, z0, z1);
  REQUIRE(fv.verdict == Feasibility::infeasible);
  REQUIRE(fv.margin > 1e-5);
  OracleChannelResult res = oracle_feasibility_qubit(mixed, mixed, z0, z1, 6, 7);
  REQUIRE_FALSE(res.found);
}
