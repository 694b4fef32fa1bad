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

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsc/qsc.hpp"

namespace {

using qsc::io::ordered_json;
using Clock = std::chrono::steady_clock;

// Exit protocol: 0 = holds/feasible, 1 = fails/infeasible, 2 = borderline,
// greater than 2 = error.
int exit_of(qsc::Relation r) {
  switch (r) {
    case qsc::Relation::holds: return 0;
    case qsc::Relation::fails: return 1;
    default: return 2;
  }
}

int exit_of(qsc::Feasibility f) {
  switch (f) {
    case qsc::Feasibility::feasible: return 0;
    case qsc::Feasibility::infeasible: return 1;
    default: return 2;
  }
}

int exit_of(qsc::AuKind k) {
  switch (k) {
    case qsc::AuKind::holds: return 0;
    case qsc::AuKind::fails: return 1;
    default: return 2;
  }
}

ordered_json json_of(const qsc::AuVerdict& v) {
  ordered_json j;
  j["criterion"] = "exact";
  j["verdict"] = v.kind == qsc::AuKind::holds    ? "holds"
                 : v.kind == qsc::AuKind::fails ? "fails"
                                                : "borderline";
  if (std::isfinite(v.t_witness)) j["t_witness"] = v.t_witness;
  j["margin"] = v.margin;
  return j;
}

ordered_json json_of(const qsc::GridVerdict& v) {
  ordered_json j;
  j["criterion"] = "grid";
  j["violation_found"] = v.violation_found;
  j["max_violation"] = v.max_violation;
  if (v.violation_found) j["t_witness"] = v.t_witness;
  return j;
}

ordered_json json_of(const qsc::FeasibilityVerdict& v) {
  ordered_json j;
  j["verdict"] = qsc::to_string(v.verdict);
  j["margin"] = v.margin;
  if (!v.note.empty()) j["note"] = v.note;
  j["has_channel"] = v.choi.has_value();
  if (v.certificate.has_value()) j["certificate"] = *v.certificate;
  return j;
}

ordered_json json_of(const qsc::WitnessReport& w) {
  ordered_json j;
  j["witness_found"] = w.witness_found;
  j["gap"] = w.gap;
  j["p_guess_input"] = w.p_guess_input;
  j["p_guess_target"] = w.p_guess_target;
  if (std::isfinite(w.t_used)) j["t_used"] = w.t_used;
  j["evaluations"] = w.evaluations;
  if (!w.note.empty()) j["note"] = w.note;
  if (w.encoding.has_value()) j["encoding"] = qsc::io::encoding_to_json(*w.encoding);
  return j;
}

ordered_json json_of(const qsc::OrderingVerdict& v) {
  ordered_json j;
  j["relation"] = qsc::to_string(v.relation);
  j["regime"] = qsc::to_string(v.regime);
  j["ordering"] = v.ordering;
  if (v.au.has_value()) j["exact_criterion"] = json_of(*v.au);
  j["feasibility"] = json_of(v.feasibility);
  if (v.witness.has_value()) j["witness"] = json_of(*v.witness);
  j["notes"] = v.notes;
  return j;
}

ordered_json json_of_solver(const qsc::SdpSolution& s) {
  ordered_json j;
  j["status"] = qsc::to_string(s.status);
  j["iterations"] = s.iterations;
  return j;
}

struct Ctx {
  std::vector<std::string> argv;
  qsc::NumericPolicy policy;
  int exit_code = 3;
};

void emit(Ctx& ctx, qsc::io::VerdictReport rep, Clock::time_point t0, int code) {
  rep.argv = ctx.argv;
  rep.policy = ctx.policy;
  rep.timing_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  std::cout << rep.to_json().dump(2) << "\n";
  ctx.exit_code = code;
}

void add_pguess(CLI::App& app, Ctx& ctx) {
  auto* cmd = app.add_subcommand(
      "pguess", "Optimal guessing probability and min-entropy of an encoding");
  auto r0 = std::make_shared<std::string>();
  auto r1 = std::make_shared<std::string>();
  auto enc = std::make_shared<std::string>();
  cmd->add_option("rho0", *r0, "state file for x=0")->required();
  cmd->add_option("rho1", *r1, "state file for x=1")->required();
  cmd->add_option("encoding", *enc, "encoding file")->required();
  cmd->callback([&ctx, r0, r1, enc] {
    auto t0 = Clock::now();
    qsc::DensityMatrix rho0 = qsc::io::load_density(*r0, ctx.policy.validation_tol);
    qsc::DensityMatrix rho1 = qsc::io::load_density(*r1, ctx.policy.validation_tol);
    qsc::Encoding e = qsc::io::load_encoding(*enc);
    qsc::CqState cq =
        e.has_y() ? qsc::build_extended_cq_state(
                        e, qsc::standard_complete_cq(rho0.dim()), rho0, rho1)
                  : qsc::build_cq_state(e, rho0, rho1);
    qsc::GuessingResult res = qsc::guessing_probability(cq, ctx.policy);
    qsc::io::VerdictReport rep;
    rep.command = "pguess";
    rep.inputs = {{"rho0", *r0}, {"rho1", *r1}, {"encoding", *enc}};
    rep.payload["dim"] = cq.dim();
    rep.payload["labels"] = cq.num_labels();
    rep.payload["extended"] = e.has_y();
    rep.payload["p_guess"] = res.p_guess;
    rep.payload["hmin"] = -std::log2(res.p_guess);
    rep.payload["solver"] = json_of_solver(res.solution);
    emit(ctx, std::move(rep), t0, 0);
  });
}

void add_au(CLI::App& app, Ctx& ctx) {
  auto* cmd = app.add_subcommand(
      "au", "Trace-norm comparison ||rho0 - t rho1|| >= ||sigma0 - t sigma1|| over t");
  auto r0 = std::make_shared<std::string>();
  auto r1 = std::make_shared<std::string>();
  auto s0 = std::make_shared<std::string>();
  auto s1 = std::make_shared<std::string>();
  auto exact = std::make_shared<bool>(false);
  auto grid = std::make_shared<bool>(false);
  auto tmax = std::make_shared<double>(1e3);
  auto points = std::make_shared<int>(512);
  cmd->add_option("rho0", *r0, "input state file for x=0")->required();
  cmd->add_option("rho1", *r1, "input state file for x=1")->required();
  cmd->add_option("sigma0", *s0, "target state file for x=0")->required();
  cmd->add_option("sigma1", *s1, "target state file for x=1")->required();
  auto* fe = cmd->add_flag("--exact", *exact, "exact qubit decision");
  auto* fg = cmd->add_flag("--grid", *grid, "grid screen (any dimension)");
  fe->excludes(fg);
  fg->excludes(fe);
  cmd->add_option("--tmax", *tmax, "largest t on the grid")->check(CLI::PositiveNumber);
  cmd->add_option("--points", *points, "grid points")->check(CLI::PositiveNumber);
  cmd->callback([&ctx, r0, r1, s0, s1, exact, grid, tmax, points] {
    auto t0 = Clock::now();
    double vt = ctx.policy.validation_tol;
    qsc::DensityMatrix rho0 = qsc::io::load_density(*r0, vt);
    qsc::DensityMatrix rho1 = qsc::io::load_density(*r1, vt);
    qsc::DensityMatrix sigma0 = qsc::io::load_density(*s0, vt);
    qsc::DensityMatrix sigma1 = qsc::io::load_density(*s1, vt);
    bool all_qubit = rho0.dim() == 2 && rho1.dim() == 2 && sigma0.dim() == 2 &&
                     sigma1.dim() == 2;
    bool use_exact = *exact || (!*grid && all_qubit);
    qsc::io::VerdictReport rep;
    rep.command = "au";
    rep.inputs = {{"rho0", *r0}, {"rho1", *r1}, {"sigma0", *s0}, {"sigma1", *s1}};
    int code;
    if (use_exact) {
      qsc::AuVerdict v = qsc::alberti_uhlmann_qubit(rho0, rho1, sigma0, sigma1);
      rep.payload = json_of(v);
      code = exit_of(v.kind);
    } else {
      qsc::GridSpec spec{*points, *tmax};
      qsc::GridVerdict v =
          qsc::alberti_uhlmann_grid(rho0, rho1, sigma0, sigma1, spec, ctx.policy);
      rep.payload = json_of(v);
      // The screen certifies only violations; silence is inconclusive.
      code = v.violation_found ? 1 : 2;
    }
    emit(ctx, std::move(rep), t0, code);
  });
}

void add_feasible(CLI::App& app, Ctx& ctx) {
  auto* cmd = app.add_subcommand(
      "feasible", "Existence of a channel carrying (rho0,rho1) to (sigma0,sigma1)");
  auto r0 = std::make_shared<std::string>();
  auto r1 = std::make_shared<std::string>();
  auto s0 = std::make_shared<std::string>();
  auto s1 = std::make_shared<std::string>();
  auto choi_out = std::make_shared<std::string>();
  cmd->add_option("rho0", *r0, "input state file for x=0")->required();
  cmd->add_option("rho1", *r1, "input state file for x=1")->required();
  cmd->add_option("sigma0", *s0, "target state file for x=0")->required();
  cmd->add_option("sigma1", *s1, "target state file for x=1")->required();
  cmd->add_option("--choi-out", *choi_out, "write the found channel to this file");
  cmd->callback([&ctx, r0, r1, s0, s1, choi_out] {
    auto t0 = Clock::now();
    double vt = ctx.policy.validation_tol;
    qsc::DensityMatrix rho0 = qsc::io::load_density(*r0, vt);
    qsc::DensityMatrix rho1 = qsc::io::load_density(*r1, vt);
    qsc::DensityMatrix sigma0 = qsc::io::load_density(*s0, vt);
    qsc::DensityMatrix sigma1 = qsc::io::load_density(*s1, vt);
    qsc::FeasibilityVerdict v =
        qsc::channel_feasibility(rho0, rho1, sigma0, sigma1, ctx.policy);
    qsc::io::VerdictReport rep;
    rep.command = "feasible";
    rep.inputs = {{"rho0", *r0}, {"rho1", *r1}, {"sigma0", *s0}, {"sigma1", *s1}};
    rep.payload = json_of(v);
    if (!choi_out->empty()) {
      if (v.choi.has_value()) {
        qsc::io::save_choi(*choi_out, *v.choi);
        rep.payload["choi_written"] = *choi_out;
      } else {
        rep.payload["choi_written"] = nullptr;
      }
    }
    emit(ctx, std::move(rep), t0, exit_of(v.verdict));
  });
}

void add_thermal(CLI::App& app, Ctx& ctx) {
  auto* cmd = app.add_subcommand(
      "thermal", "Existence of a channel fixing omega while carrying rho to sigma");
  auto rho = std::make_shared<std::string>();
  auto sigma = std::make_shared<std::string>();
  auto omega = std::make_shared<std::string>();
  auto omega_out = std::make_shared<std::string>();
  cmd->add_option("rho", *rho, "input state file")->required();
  cmd->add_option("sigma", *sigma, "target state file")->required();
  cmd->add_option("omega", *omega, "reference state file")->required();
  cmd->add_option("omega_out", *omega_out,
                  "optional distinct reference on the output side");
  cmd->callback([&ctx, rho, sigma, omega, omega_out] {
    auto t0 = Clock::now();
    double vt = ctx.policy.validation_tol;
    qsc::DensityMatrix r = qsc::io::load_density(*rho, vt);
    qsc::DensityMatrix s = qsc::io::load_density(*sigma, vt);
    qsc::DensityMatrix w_in = qsc::io::load_density(*omega, vt);
    qsc::io::VerdictReport rep;
    rep.command = "thermal";
    rep.inputs = {{"rho", *rho}, {"sigma", *sigma}, {"omega", *omega}};
    qsc::OrderingVerdict v;
    if (omega_out->empty()) {
      v = qsc::decide_thermal_ordering(r, s, w_in, ctx.policy);
    } else {
      qsc::DensityMatrix w_out = qsc::io::load_density(*omega_out, vt);
      rep.inputs.push_back({"omega_out", *omega_out});
      v = qsc::decide_thermal_ordering(r, s, w_in, w_out, ctx.policy);
    }
    rep.payload = json_of(v);
    emit(ctx, std::move(rep), t0, exit_of(v.relation));
  });
}

void add_sample(CLI::App& app, Ctx& ctx) {
  auto* cmd = app.add_subcommand(
      "sample", "Seeded random-encoding probe of the claimed ordering");
  auto r0 = std::make_shared<std::string>();
  auto r1 = std::make_shared<std::string>();
  auto s0 = std::make_shared<std::string>();
  auto s1 = std::make_shared<std::string>();
  auto n = std::make_shared<int>(100);
  auto u_size = std::make_shared<int>(2);
  auto with_r = std::make_shared<bool>(false);
  auto seed = std::make_shared<std::uint64_t>(0);
  cmd->add_option("rho0", *r0, "input state file for x=0")->required();
  cmd->add_option("rho1", *r1, "input state file for x=1")->required();
  cmd->add_option("sigma0", *s0, "target state file for x=0")->required();
  cmd->add_option("sigma1", *s1, "target state file for x=1")->required();
  cmd->add_option("--n", *n, "number of sampled encodings")->check(CLI::NonNegativeNumber);
  cmd->add_option("--u-size", *u_size, "labels per encoding")->check(CLI::PositiveNumber);
  cmd->add_flag("--with-R", *with_r, "extend encodings with a spanning register");
  cmd->add_option("--seed", *seed, "random seed")->required();
  cmd->callback([&ctx, r0, r1, s0, s1, n, u_size, with_r, seed] {
    auto t0 = Clock::now();
    double vt = ctx.policy.validation_tol;
    qsc::DensityMatrix rho0 = qsc::io::load_density(*r0, vt);
    qsc::DensityMatrix rho1 = qsc::io::load_density(*r1, vt);
    qsc::DensityMatrix sigma0 = qsc::io::load_density(*s0, vt);
    qsc::DensityMatrix sigma1 = qsc::io::load_density(*s1, vt);
    qsc::SampleReport sr = qsc::sample_ordering_check(rho0, rho1, sigma0, sigma1, *n,
                                                      *u_size, *with_r, *seed, ctx.policy);
    qsc::io::VerdictReport rep;
    rep.command = "sample";
    rep.inputs = {{"rho0", *r0}, {"rho1", *r1}, {"sigma0", *s0}, {"sigma1", *s1}};
    rep.seed = *seed;
    rep.payload["samples"] = sr.samples;
    rep.payload["used_spanning_register"] = sr.used_spanning_register;
    rep.payload["max_violation"] = sr.max_violation;
    rep.payload["violations_over_margin"] = sr.violations_over_margin;
    if (sr.worst_encoding.has_value())
      rep.payload["worst_encoding"] = qsc::io::encoding_to_json(*sr.worst_encoding);
    rep.payload["note"] =
        "each violation is an achieved counterexample; finding none proves nothing";
    emit(ctx, std::move(rep), t0, sr.violations_over_margin > 0 ? 1 : 0);
  });
}

void add_oracle(CLI::App& app, Ctx& ctx) {
  auto* cmd = app.add_subcommand(
      "oracle", "Solver-free reference evaluators for spot checks");
  cmd->require_subcommand(1);

  auto* pg = cmd->add_subcommand(
      "pguess", "Bloch-scan lower bound on the qubit guessing probability");
  auto pr0 = std::make_shared<std::string>();
  auto pr1 = std::make_shared<std::string>();
  auto penc = std::make_shared<std::string>();
  auto dirs = std::make_shared<int>(4096);
  pg->add_option("rho0", *pr0, "qubit state file for x=0")->required();
  pg->add_option("rho1", *pr1, "qubit state file for x=1")->required();
  pg->add_option("encoding", *penc, "encoding file (two labels, no register)")->required();
  pg->add_option("--dirs", *dirs, "scan directions")->check(CLI::PositiveNumber);
  pg->callback([&ctx, pr0, pr1, penc, dirs] {
    auto t0 = Clock::now();
    double vt = ctx.policy.validation_tol;
    qsc::DensityMatrix rho0 = qsc::io::load_density(*pr0, vt);
    qsc::DensityMatrix rho1 = qsc::io::load_density(*pr1, vt);
    qsc::Encoding e = qsc::io::load_encoding(*penc);
    qsc::CqState cq = qsc::build_cq_state(e, rho0, rho1);
    double value = qsc::oracle_pguess_qubit(cq, *dirs);
    qsc::io::VerdictReport rep;
    rep.command = "oracle pguess";
    rep.inputs = {{"rho0", *pr0}, {"rho1", *pr1}, {"encoding", *penc}};
    rep.payload["n_dirs"] = *dirs;
    rep.payload["p_guess_lower_bound"] = value;
    emit(ctx, std::move(rep), t0, 0);
  });

  auto* tn = cmd->add_subcommand("tracenorm", "Closed-form/power-iteration trace norm");
  auto mat = std::make_shared<std::string>();
  tn->add_option("matrix", *mat, "Hermitian matrix file")->required();
  tn->callback([&ctx, mat] {
    auto t0 = Clock::now();
    qsc::HermitianMatrix m = qsc::io::load_matrix(*mat, ctx.policy.validation_tol);
    double value = qsc::oracle_trace_norm(m);
    qsc::io::VerdictReport rep;
    rep.command = "oracle tracenorm";
    rep.inputs = {{"matrix", *mat}};
    rep.payload["trace_norm"] = value;
    emit(ctx, std::move(rep), t0, 0);
  });

  auto* fe = cmd->add_subcommand(
      "feasible", "Direct parametric search for a qubit channel");
  auto fr0 = std::make_shared<std::string>();
  auto fr1 = std::make_shared<std::string>();
  auto fs0 = std::make_shared<std::string>();
  auto fs1 = std::make_shared<std::string>();
  auto restarts = std::make_shared<int>(8);
  auto fseed = std::make_shared<std::uint64_t>(0);
  fe->add_option("rho0", *fr0, "qubit input state file for x=0")->required();
  fe->add_option("rho1", *fr1, "qubit input state file for x=1")->required();
  fe->add_option("sigma0", *fs0, "qubit target state file for x=0")->required();
  fe->add_option("sigma1", *fs1, "qubit target state file for x=1")->required();
  fe->add_option("--restarts", *restarts, "search restarts")->check(CLI::PositiveNumber);
  fe->add_option("--seed", *fseed, "random seed")->required();
  fe->callback([&ctx, fr0, fr1, fs0, fs1, restarts, fseed] {
    auto t0 = Clock::now();
    double vt = ctx.policy.validation_tol;
    qsc::DensityMatrix rho0 = qsc::io::load_density(*fr0, vt);
    qsc::DensityMatrix rho1 = qsc::io::load_density(*fr1, vt);
    qsc::DensityMatrix sigma0 = qsc::io::load_density(*fs0, vt);
    qsc::DensityMatrix sigma1 = qsc::io::load_density(*fs1, vt);
    qsc::OracleChannelResult res =
        qsc::oracle_feasibility_qubit(rho0, rho1, sigma0, sigma1, *restarts, *fseed);
    qsc::io::VerdictReport rep;
    rep.command = "oracle feasible";
    rep.inputs = {{"rho0", *fr0}, {"rho1", *fr1}, {"sigma0", *fs0}, {"sigma1", *fs1}};
    rep.seed = *fseed;
    rep.payload["found"] = res.found;
    rep.payload["residual"] = res.residual;
    rep.payload["restarts_used"] = res.restarts_used;
    rep.payload["note"] =
        "a found channel is feasibility evidence; a failed search proves nothing";
    // Search failure is inconclusive, never an infeasibility verdict.
    emit(ctx, std::move(rep), t0, res.found ? 0 : 2);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Statistical comparison of quantum state pairs: guessing probabilities, "
               "trace-norm criteria, channel feasibility, and reference-preserving "
               "orderings"};
  app.require_subcommand(1);
  Ctx ctx;
  for (int i = 0; i < argc; ++i) ctx.argv.emplace_back(argv[i]);

  try {
    ctx.policy = qsc::io::policy_from_env();
    add_pguess(app, ctx);
    add_au(app, ctx);
    add_feasible(app, ctx);
    add_thermal(app, ctx);
    add_sample(app, ctx);
    add_oracle(app, ctx);
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  } catch (const qsc::io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return ctx.exit_code;
}
