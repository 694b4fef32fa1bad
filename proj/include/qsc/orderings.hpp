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

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsc/comparison.hpp"
#include "qsc/hermitian.hpp"
#include "qsc/policy.hpp"
#include "qsc/random.hpp"
#include "qsc/states.hpp"

namespace qsc {

enum class Relation { holds, fails, borderline };
enum class Regime { qubit, semiquantum, general };

inline const char* to_string(Relation r) {
  switch (r) {
    case Relation::holds: return "holds";
    case Relation::fails: return "fails";
    default: return "borderline";
  }
}

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::qubit: return "qubit";
    case Regime::semiquantum: return "semiquantum";
    default: return "general";
  }
}

struct OrderingVerdict {
  Relation relation = Relation::borderline;
  Regime regime = Regime::general;
  /// "information" when the verdict decides the plain ordering (qubit and
  /// semiquantum regimes), "complete" when only the extended ordering is
  /// decided (general regime).
  std::string ordering = "information";
  std::optional<AuVerdict> au;
  FeasibilityVerdict feasibility;
  std::optional<WitnessReport> witness;
  std::vector<std::string> notes;
};

/// Max-norm of the commutator sigma0 sigma1 - sigma1 sigma0.
inline double commutator_norm(const DensityMatrix& s0, const DensityMatrix& s1) {
  if (s0.dim() != s1.dim()) throw std::invalid_argument("commutator_norm: dim mismatch");
  ComplexMatrix ab = mul(s0.mat().to_complex(), s1.mat().to_complex());
  ComplexMatrix ba = mul(s1.mat().to_complex(), s0.mat().to_complex());
  double worst = 0.0;
  for (std::size_t i = 0; i < ab.a.size(); ++i)
    worst = std::max(worst, std::abs(ab.a[i] - ba.a[i]));
  return worst;
}

namespace detail {

inline Relation relation_from_feasibility(Feasibility f) {
  switch (f) {
    case Feasibility::feasible: return Relation::holds;
    case Feasibility::infeasible: return Relation::fails;
    default: return Relation::borderline;
  }
}

}  // namespace detail

/// Decides whether the first pair can be carried onto the second by one
/// channel. Dispatch: qubits get the exact trace-norm criterion (with the
/// SDP as a mandatory cross-check), commuting targets inherit the verdict
/// for the plain ordering, everything else is decided as the extended
/// ordering only.
inline OrderingVerdict decide_pair_ordering(const DensityMatrix& rho0,
                                            const DensityMatrix& rho1,
                                            const DensityMatrix& sigma0,
                                            const DensityMatrix& sigma1,
                                            const NumericPolicy& policy = NumericPolicy{},
                                            std::uint64_t witness_seed = 0) {
  OrderingVerdict v;
  v.feasibility = channel_feasibility(rho0, rho1, sigma0, sigma1, policy);
  Relation sdp_rel = detail::relation_from_feasibility(v.feasibility.verdict);

  bool qubit = rho0.dim() == 2 && rho1.dim() == 2 && sigma0.dim() == 2 && sigma1.dim() == 2;
  if (qubit) {
    v.regime = Regime::qubit;
    v.ordering = "information";
    v.au = alberti_uhlmann_qubit(rho0, rho1, sigma0, sigma1);
    Relation au_rel = v.au->kind == AuKind::holds    ? Relation::holds
                      : v.au->kind == AuKind::fails ? Relation::fails
                                                    : Relation::borderline;
    if (au_rel != Relation::borderline && sdp_rel != Relation::borderline &&
        au_rel != sdp_rel) {
      std::ostringstream msg;
      msg << "decide_pair_ordering: exact criterion says " << to_string(au_rel)
          << " but the feasibility program says " << to_string(sdp_rel)
          << " (exact margin " << v.au->margin << ", program margin "
          << v.feasibility.margin << ")";
      throw std::runtime_error(msg.str());
    }
    v.relation = (au_rel != Relation::borderline) ? au_rel : sdp_rel;
    v.notes.push_back("exact trace-norm criterion cross-checked against the feasibility "
                      "program");
  } else {
    double comm = commutator_norm(sigma0, sigma1);
    if (comm <= 1e-9) {
      v.regime = Regime::semiquantum;
      v.ordering = "information";
      v.relation = sdp_rel;
      std::ostringstream note;
      note << "targets commute (norm " << comm
           << "); channel existence decides the plain ordering";
      v.notes.push_back(note.str());
    } else {
      v.regime = Regime::general;
      v.ordering = "complete";
      v.relation = sdp_rel;
      std::ostringstream note;
      note << "targets do not commute (norm " << comm
           << "); verdict applies to the extended ordering with a spanning register, the "
              "plain ordering is NOT decided";
      v.notes.push_back(note.str());
    }
  }

  if (v.relation == Relation::fails && v.feasibility.verdict == Feasibility::infeasible) {
    v.witness =
        extract_witness(rho0, rho1, sigma0, sigma1, v.feasibility, policy, witness_seed);
    if (v.witness->witness_found) {
      std::ostringstream note;
      note << "witness encoding found with guessing-probability gap " << v.witness->gap;
      v.notes.push_back(note.str());
    } else {
      v.notes.push_back("no witness encoding found; dual certificate stands alone");
    }
  }
  return v;
}

/// Decides existence of a channel that fixes the reference state omega
/// while carrying rho to sigma, allowing different reference states on the
/// two sides. A holds verdict re-validates the Choi evidence on both
/// requirements.
inline OrderingVerdict decide_thermal_ordering(const DensityMatrix& rho,
                                               const DensityMatrix& sigma,
                                               const DensityMatrix& omega_in,
                                               const DensityMatrix& omega_out,
                                               const NumericPolicy& policy = NumericPolicy{}) {
  OrderingVerdict v = decide_pair_ordering(rho, omega_in, sigma, omega_out, policy);
  if (v.relation == Relation::holds) {
    if (!v.feasibility.choi.has_value()) {
      v.relation = Relation::borderline;
      v.notes.push_back("holds verdict lacked a channel witness; downgraded");
      return v;
    }
    const ChoiMatrix& j = *v.feasibility.choi;
    HermitianMatrix fixed =
        detail::apply_choi_raw(j.mat(), j.dim_in(), j.dim_out(), omega_in.mat());
    fixed -= omega_out.mat();
    HermitianMatrix carried =
        detail::apply_choi_raw(j.mat(), j.dim_in(), j.dim_out(), rho.mat());
    carried -= sigma.mat();
    double worst = std::max(trace_norm(fixed), trace_norm(carried));
    if (worst > 1e-7) {
      v.relation = Relation::borderline;
      std::ostringstream note;
      note << "channel evidence violates the fixed-point or transport requirement by "
           << worst << "; downgraded";
      v.notes.push_back(note.str());
    } else {
      v.notes.push_back("channel evidence fixes the reference state and carries the input "
                        "to the target within 1e-7");
    }
  }
  return v;
}

inline OrderingVerdict decide_thermal_ordering(const DensityMatrix& rho,
                                               const DensityMatrix& sigma,
                                               const DensityMatrix& omega,
                                               const NumericPolicy& policy = NumericPolicy{}) {
  return decide_thermal_ordering(rho, sigma, omega, omega, policy);
}

struct SampleReport {
  int samples = 0;
  bool used_spanning_register = false;
  /// Worst observed guessing-probability gap (target minus input); positive
  /// values contradict the claimed ordering.
  double max_violation = -std::numeric_limits<double>::infinity();
  std::optional<Encoding> worst_encoding;
  int violations_over_margin = 0;
};

/// Draws seeded random encodings (Dirichlet-uniform over the joint simplex,
/// one independent engine per index) and measures how distinguishability
/// changes between the two pairs. Probes the ordering empirically; never a
/// verdict source.
inline SampleReport sample_ordering_check(const DensityMatrix& rho0, const DensityMatrix& rho1,
                                          const DensityMatrix& sigma0,
                                          const DensityMatrix& sigma1, int n, int u_size,
                                          bool use_r, std::uint64_t seed,
                                          const NumericPolicy& policy = NumericPolicy{}) {
  if (u_size < 1) throw std::invalid_argument("sample_ordering_check: u_size must be >= 1");
  SampleReport rep;
  rep.used_spanning_register = use_r;
  if (n <= 0) return rep;
  std::optional<CompleteCqChannel> cc;
  if (use_r) cc.emplace(standard_complete_cq(sigma0.dim()));
  std::vector<std::string> labels;
  for (int u = 0; u < u_size; ++u) labels.push_back("u" + std::to_string(u));
  int ny = use_r ? cc->size() : 0;
  std::size_t cells = static_cast<std::size_t>(u_size) * (use_r ? ny : 1) * 2;

  for (int idx = 0; idx < n; ++idx) {
    auto rng = engine_for(seed, static_cast<std::uint64_t>(idx));
    Encoding enc(labels, ny, dirichlet_uniform(static_cast<int>(cells), rng));
    CqState in = use_r ? build_extended_cq_state(enc, *cc, rho0, rho1)
                       : build_cq_state(enc, rho0, rho1);
    CqState tg = use_r ? build_extended_cq_state(enc, *cc, sigma0, sigma1)
                       : build_cq_state(enc, sigma0, sigma1);
    double gap = guessing_probability(tg, policy).p_guess -
                 guessing_probability(in, policy).p_guess;
    ++rep.samples;
    if (gap > policy.verdict_margin) ++rep.violations_over_margin;
    if (gap > rep.max_violation) {
      rep.max_violation = gap;
      rep.worst_encoding = enc;
    }
  }
  return rep;
}

}  // namespace qsc
