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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "qsc/io.hpp"
#include "qsc/random.hpp"

using Catch::Matchers::ContainsSubstring;
using qsc::ChoiMatrix;
using qsc::cplx;
using qsc::DensityMatrix;
using qsc::Encoding;
using qsc::HermitianMatrix;
using qsc::engine_for;
using qsc::io::ordered_json;

namespace {

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("qsc_io_" + name)).string();
}

HermitianMatrix random_herm(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cplx> e(static_cast<std::size_t>(d) * d);
  for (int r = 0; r < d; ++r) {
    e[static_cast<std::size_t>(r) * d + r] = g(rng);
    for (int c = r + 1; c < d; ++c) {
      cplx v(g(rng), g(rng));
      e[static_cast<std::size_t>(r) * d + c] = v;
      e[static_cast<std::size_t>(c) * d + r] = std::conj(v);
    }
  }
  return HermitianMatrix::from_entries(d, e);
}

}  // namespace

TEST_CASE("matrix files round-trip exactly") {
  auto rng = engine_for(401, 0);
  for (int d : {1, 2, 3, 5}) {
    HermitianMatrix m = random_herm(d, rng);
    std::string path = tmp_path("mat_" + std::to_string(d) + ".json");
    qsc::io::save_matrix(path, m);
    HermitianMatrix back = qsc::io::load_matrix(path);
    REQUIRE(back.dim() == d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        REQUIRE(back(r, c).real() == m(r, c).real());
        REQUIRE(back(r, c).imag() == m(r, c).imag());
      }
  }
}

TEST_CASE("matrix parse errors carry the file and field") {
  std::string path = tmp_path("bad.json");
  auto write = [&](const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    out << text;
  };

  SECTION("not json") {
    write("dim: 2");
    REQUIRE_THROWS_MATCHES(qsc::io::load_matrix(path), qsc::io::ParseError,
                           Catch::Matchers::MessageMatches(ContainsSubstring(path)));
  }
  SECTION("missing im") {
    write("{\"dim\": 2, \"re\": [[1,0],[0,0]]}");
    REQUIRE_THROWS_MATCHES(
        qsc::io::load_matrix(path), qsc::io::ParseError,
        Catch::Matchers::MessageMatches(ContainsSubstring("missing field 'im'")));
  }
  SECTION("ragged row") {
    write("{\"dim\": 2, \"re\": [[1,0],[0]], \"im\": [[0,0],[0,0]]}");
    REQUIRE_THROWS_MATCHES(
        qsc::io::load_matrix(path), qsc::io::ParseError,
        Catch::Matchers::MessageMatches(ContainsSubstring("row 1")));
  }
  SECTION("non-number entry") {
    write("{\"dim\": 1, \"re\": [[\"x\"]], \"im\": [[0]]}");
    REQUIRE_THROWS_MATCHES(
        qsc::io::load_matrix(path), qsc::io::ParseError,
        Catch::Matchers::MessageMatches(ContainsSubstring("not a number")));
  }
  SECTION("not hermitian") {
    write("{\"dim\": 2, \"re\": [[0.6,0.4],[0.1,0.4]], \"im\": [[0,0],[0,0]]}");
    REQUIRE_THROWS_AS(qsc::io::load_matrix(path), qsc::io::ParseError);
  }
  SECTION("missing file") {
    REQUIRE_THROWS_MATCHES(
        qsc::io::load_matrix(tmp_path("no_such_file.json")), qsc::io::ParseError,
        Catch::Matchers::MessageMatches(ContainsSubstring("cannot open")));
  }
}

TEST_CASE("encoding files round-trip") {
  SECTION("plain binary") {
    Encoding e = Encoding::binary(0.3, 0.1, 0.2, 0.4);
    std::string path = tmp_path("enc_plain.json");
    qsc::io::save_encoding(path, e);
    Encoding back = qsc::io::load_encoding(path);
    REQUIRE(back.num_u() == e.num_u());
    REQUIRE(back.num_y() == 0);
    REQUIRE(back.labels_u() == e.labels_u());
    // The constructor renormalizes, so a reload may shift cells by an ulp.
    for (int u = 0; u < e.num_u(); ++u)
      for (int x = 0; x < 2; ++x)
        REQUIRE_THAT(back.p(u, x), Catch::Matchers::WithinAbs(e.p(u, x), 1e-15));
  }
  SECTION("with register") {
    auto rng = engine_for(402, 0);
    std::vector<double> cells = qsc::dirichlet_uniform(3 * 4 * 2, rng);
    Encoding e({"u0", "u1", "u2"}, 4, cells);
    std::string path = tmp_path("enc_reg.json");
    qsc::io::save_encoding(path, e);
    Encoding back = qsc::io::load_encoding(path);
    REQUIRE(back.num_y() == 4);
    for (int u = 0; u < 3; ++u)
      for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 2; ++x)
          REQUIRE_THAT(back.p(u, y, x), Catch::Matchers::WithinAbs(e.p(u, y, x), 1e-15));
  }
}

TEST_CASE("choi files round-trip and reproduce channel action") {
  auto rng = engine_for(403, 0);
  ChoiMatrix j = qsc::random_choi(2, 3, rng);
  std::string path = tmp_path("choi.json");
  qsc::io::save_choi(path, j);
  ChoiMatrix back = qsc::io::load_choi(path);
  REQUIRE(back.dim_in() == 2);
  REQUIRE(back.dim_out() == 3);

  for (int k = 0; k < 5; ++k) {
    HermitianMatrix m = random_herm(2, rng);
    m += 4.0 * HermitianMatrix::identity(2);
    m *= 1.0 / m.trace();
    DensityMatrix rho(m);
    DensityMatrix a = qsc::apply_choi(j, rho);
    DensityMatrix b = qsc::apply_choi(back, rho);
    double worst = 0.0;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        worst = std::max(worst, std::abs(a.mat()(r, c) - b.mat()(r, c)));
    REQUIRE(worst <= 1e-12);
  }
}

TEST_CASE("content digests are stable and content-sensitive") {
  // Standard FNV-1a 64 vectors.
  REQUIRE(qsc::io::fnv1a_digest("") == "cbf29ce484222325");
  REQUIRE(qsc::io::fnv1a_digest("a") == "af63dc4c8601ec8c");

  std::string p1 = tmp_path("dig1.json");
  std::string p2 = tmp_path("dig2.json");
  qsc::io::save_matrix(p1, HermitianMatrix::identity(2));
  qsc::io::save_matrix(p2, HermitianMatrix::identity(2));
  REQUIRE(qsc::io::file_digest(p1) == qsc::io::file_digest(p2));
  qsc::io::save_matrix(p2, HermitianMatrix::identity(3));
  REQUIRE(qsc::io::file_digest(p1) != qsc::io::file_digest(p2));
}

TEST_CASE("policy picks up environment overrides") {
  unsetenv("QSC_SOLVER_TOL");
  unsetenv("QSC_VERDICT_MARGIN");
  unsetenv("QSC_VALIDATION_TOL");
  qsc::NumericPolicy base = qsc::io::policy_from_env();
  REQUIRE(base.solver_tol == qsc::NumericPolicy{}.solver_tol);

  setenv("QSC_SOLVER_TOL", "1e-7", 1);
  setenv("QSC_VERDICT_MARGIN", "1e-5", 1);
  qsc::NumericPolicy p = qsc::io::policy_from_env();
  REQUIRE(p.solver_tol == 1e-7);
  REQUIRE(p.verdict_margin == 1e-5);
  REQUIRE(p.validation_tol == base.validation_tol);

  setenv("QSC_SOLVER_TOL", "banana", 1);
  REQUIRE_THROWS_AS(qsc::io::policy_from_env(), std::runtime_error);
  setenv("QSC_SOLVER_TOL", "-1e-8", 1);
  REQUIRE_THROWS_AS(qsc::io::policy_from_env(), std::runtime_error);
  unsetenv("QSC_SOLVER_TOL");
  unsetenv("QSC_VERDICT_MARGIN");
}

TEST_CASE("verdict reports serialize with timing last") {
  std::string p = tmp_path("rep_in.json");
  qsc::io::save_matrix(p, HermitianMatrix::identity(2));
  qsc::io::VerdictReport rep;
  rep.command = "demo";
  rep.argv = {"qsc", "demo", p};
  rep.inputs = {{"mat", p}};
  rep.seed = 7;
  rep.payload["value"] = 0.25;
  rep.timing_ms = 1.5;
  ordered_json j = rep.to_json();
  REQUIRE(j["command"] == "demo");
  REQUIRE(j["inputs"]["mat"]["fnv1a64"] == qsc::io::file_digest(p));
  REQUIRE(j["seed"] == 7);
  REQUIRE(j["report"]["value"] == 0.25);
  std::string text = j.dump();
  REQUIRE(text.find("timing_ms") > text.find("report"));
  REQUIRE(text.find("timing_ms") == text.rfind("timing_ms"));
  // Identical content except timing differs only in that field.
  rep.timing_ms = 99.0;
  ordered_json j2 = rep.to_json();
  j2["timing_ms"] = j["timing_ms"];
  REQUIRE(j2 == j);
}
