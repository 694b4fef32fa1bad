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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qsc/hermitian.hpp"
#include "qsc/policy.hpp"
#include "qsc/random.hpp"
#include "qsc/sdp.hpp"
#include "qsc/states.hpp"

namespace qsc {

/// Choi representation of a channel from dim d_in to dim d_out, stored on
/// input (x) output with J[(j,a),(k,b)] = Phi(|j><k|)[a,b]. Trace
/// preservation reads as partial trace over the output factor = identity.
class ChoiMatrix {
 public:
  ChoiMatrix(HermitianMatrix m, int d_in, int d_out, double tol = 1e-8)
      : mat_(std::move(m)), d_in_(d_in), d_out_(d_out) {
    if (d_in_ <= 0 || d_out_ <= 0 || mat_.dim() != d_in_ * d_out_)
      throw std::invalid_argument("ChoiMatrix: dimension mismatch");
    double lo = lambda_min(mat_);
    if (lo < -tol) {
      std::ostringstream msg;
      msg << "ChoiMatrix: minimum eigenvalue " << lo << " below -" << tol;
      throw std::invalid_argument(msg.str());
    }
    HermitianMatrix red = partial_trace(mat_, d_in_, d_out_, Subsystem::first);
    red -= HermitianMatrix::identity(d_in_);
    if (red.max_abs() > tol) {
      std::ostringstream msg;
      msg << "ChoiMatrix: trace-preservation defect " << red.max_abs() << " exceeds " << tol;
      throw std::invalid_argument(msg.str());
    }
  }

  static ChoiMatrix identity(int d) {
    HermitianMatrix j(d * d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) j.set(a * d + a, b * d + b, 1.0);
    return ChoiMatrix(j, d, d);
  }

  static ChoiMatrix depolarizing(int d_in, int d_out) {
    HermitianMatrix j = HermitianMatrix::identity(d_in * d_out);
    j *= 1.0 / d_out;
    return ChoiMatrix(j, d_in, d_out);
  }

  const HermitianMatrix& mat() const { return mat_; }
  int dim_in() const { return d_in_; }
  int dim_out() const { return d_out_; }

 private:
  HermitianMatrix mat_;
  int d_in_ = 0;
  int d_out_ = 0;
};

namespace detail {

/// Entrywise transpose of a Hermitian matrix (equals its conjugate).
inline HermitianMatrix transpose_herm(const HermitianMatrix& h) {
  int d = h.dim();
  HermitianMatrix t(d);
  for (int r = 0; r < d; ++r)
    for (int c = r; c < d; ++c) t.set(r, c, std::conj(h(r, c)));
  return t;
}

inline HermitianMatrix apply_choi_raw(const HermitianMatrix& j, int d_in, int d_out,
                                      const HermitianMatrix& rho) {
  ComplexMatrix out(d_out, d_out);
  for (int a = 0; a < d_out; ++a)
    for (int b = 0; b < d_out; ++b) {
      cplx s = 0.0;
      for (int jj = 0; jj < d_in; ++jj)
        for (int k = 0; k < d_in; ++k) s += rho(jj, k) * j(jj * d_out + a, k * d_out + b);
      out.at(a, b) = s;
    }
  return HermitianMatrix::from_complex(out, 1e-6);
}

}  // namespace detail

/// Evaluates the channel on a state through its Choi matrix.
inline DensityMatrix apply_choi(const ChoiMatrix& j, const DensityMatrix& rho) {
  if (rho.dim() != j.dim_in()) throw std::invalid_argument("apply_choi: input dim mismatch");
  return DensityMatrix(detail::apply_choi_raw(j.mat(), j.dim_in(), j.dim_out(), rho.mat()),
                       1e-6);
}

struct GuessingResult {
  double p_guess = 0.0;
  Povm povm;
  SdpProblem problem;
  SdpSolution solution;
};

/// Maximum probability of guessing the label from the quantum side,
/// optimized over POVMs: one PSD block per label, completeness as equality
/// rows over an operator basis. The reported value is a certified upper
/// bound obtained from an exactly feasible dual point (the solver's dual
/// shifted along the identity); the returned POVM achieves it from below.
inline GuessingResult guessing_probability(const CqState& cq,
                                           const NumericPolicy& policy = NumericPolicy{}) {
  int n = cq.num_labels();
  int d = cq.dim();
  SdpProblem p;
  p.sense = SdpSense::maximize;
  p.block_dims.assign(n, d);
  for (int u = 0; u < n; ++u) {
    HermitianMatrix c = cq.conditionals[u].mat();
    c *= cq.weights[u];
    p.objective.push_back({u, c});
  }
  std::vector<HermitianMatrix> basis = hermitian_basis(d);
  for (const HermitianMatrix& f : basis) {
    SdpConstraint con;
    for (int u = 0; u < n; ++u) con.blocks.push_back({u, f});
    con.rhs = f.trace();
    p.constraints.push_back(con);
  }

  NumericPolicy tight = policy;
  tight.solver_tol = policy.solver_tol / 10.0;
  SdpSolution sol = solve(p, tight);
  if (sol.status != SdpStatus::optimal) {
    std::ostringstream msg;
    msg << "guessing_probability: solver returned " << to_string(sol.status) << " ("
        << sol.message << ")";
    throw std::runtime_error(msg.str());
  }

  // Certified upper bound: make the dual exactly feasible by shifting along
  // the identity (the first d basis elements are the diagonal units, so a
  // shift of delta on each adds delta*I to the dual operator and delta*d to
  // the dual objective).
  double delta = 0.0;
  for (int u = 0; u < n; ++u) {
    HermitianMatrix z(d);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (sol.y[k] == 0.0) continue;
      HermitianMatrix t = basis[k];
      t *= sol.y[k];
      z += t;
    }
    HermitianMatrix c = cq.conditionals[u].mat();
    c *= cq.weights[u];
    z -= c;
    delta = std::max(delta, -lambda_min(z));
  }
  double upper = sol.dual_objective + delta * d;

  // POVM extraction: distribute the completeness defect, clamp to the PSD
  // cone, repeat once; validation below enforces the contract.
  std::vector<HermitianMatrix> elems;
  for (int u = 0; u < n; ++u) elems.push_back(sol.X[u]);
  for (int round = 0; round < 2; ++round) {
    HermitianMatrix defect(d);
    for (const HermitianMatrix& e : elems) defect += e;
    defect -= HermitianMatrix::identity(d);
    defect *= 1.0 / n;
    for (HermitianMatrix& e : elems) {
      e -= defect;
      EigResult eg = eig_hermitian(e);
      if (eg.values.back() >= 0.0) continue;
      ComplexMatrix rebuilt(d, d);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
          cplx acc = 0.0;
          for (int k = 0; k < d; ++k)
            acc += std::max(eg.values[k], 0.0) * eg.vectors(r, k) * std::conj(eg.vectors(c, k));
          rebuilt.at(r, c) = acc;
        }
      e = HermitianMatrix::from_complex(rebuilt, 1e-6);
    }
  }
  GuessingResult out{0.0, Povm(elems), std::move(p), std::move(sol)};

  double achieved = 0.0;
  for (int u = 0; u < n; ++u)
    achieved += cq.weights[u] * hs_inner(cq.conditionals[u].mat(), out.povm.element(u));
  out.p_guess = std::min(upper, 1.0);
  if (std::abs(out.p_guess - achieved) > 1e-7) {
    std::ostringstream msg;
    msg << "guessing_probability: POVM value " << achieved << " does not match bound "
        << out.p_guess;
    throw std::runtime_error(msg.str());
  }
  return out;
}

/// Conditional min-entropy of the label given the quantum side.
inline double hmin(const CqState& cq, const NumericPolicy& policy = NumericPolicy{}) {
  return -std::log2(guessing_probability(cq, policy).p_guess);
}

/// Optimal binary discrimination probability (1 + ||pi0 rho0 - pi1 rho1||_1)/2.
inline double helstrom_binary(double pi0, const DensityMatrix& rho0, double pi1,
                              const DensityMatrix& rho1) {
  if (pi0 < 0.0 || pi1 < 0.0 || std::abs(pi0 + pi1 - 1.0) > 1e-12)
    throw std::invalid_argument("helstrom_binary: priors must be a distribution");
  if (rho0.dim() != rho1.dim())
    throw std::invalid_argument("helstrom_binary: dimension mismatch");
  HermitianMatrix m = rho0.mat();
  m *= pi0;
  HermitianMatrix m1 = rho1.mat();
  m1 *= pi1;
  m -= m1;
  return 0.5 * (1.0 + trace_norm(m));
}

enum class AuKind { holds, fails, borderline };

struct AuVerdict {
  AuKind kind = AuKind::borderline;
  /// Violating t for kind=fails (quiet NaN otherwise).
  double t_witness = std::numeric_limits<double>::quiet_NaN();
  /// fails: the trace-norm violation at t_witness. holds/borderline: the
  /// signed normalized maximum of the determinant-difference polynomial
  /// (negative = safely holds; -1 when the inequality is vacuous).
  double margin = 0.0;
};

namespace detail {

struct QuadPoly {
  double a = 0.0, b = 0.0, c = 0.0;
  double operator()(double t) const { return (a * t + b) * t + c; }
};

// det(rho0 - t rho1) as a quadratic in t, from 2x2 closed forms.
inline QuadPoly det_poly(const DensityMatrix& r0, const DensityMatrix& r1) {
  double m00 = hs_inner(r0.mat(), r0.mat());
  double m01 = hs_inner(r0.mat(), r1.mat());
  double m11 = hs_inner(r1.mat(), r1.mat());
  return QuadPoly{0.5 * (1.0 - m11), m01 - 1.0, 0.5 * (1.0 - m00)};
}

inline double trace_norm_line(const QuadPoly& dp, double t) {
  double tau = 1.0 - t;
  double d = dp(t);
  if (d >= 0.0) return std::abs(tau);
  return std::sqrt(tau * tau - 4.0 * d);
}

}  // namespace detail

/// Exact qubit decision of ||rho0 - t rho1||_1 >= ||sigma0 - t sigma1||_1
/// for all real t. For t <= 0 both sides equal 1 + |t|. For t > 0 a
/// violation exists iff det(rho0 - t rho1) > det(sigma0 - t sigma1)
/// somewhere on the region N where the sigma determinant is negative, so
/// the decision reduces to maximizing a quadratic over an interval.
inline AuVerdict alberti_uhlmann_qubit(const DensityMatrix& rho0, const DensityMatrix& rho1,
                                       const DensityMatrix& sigma0,
                                       const DensityMatrix& sigma1) {
  if (rho0.dim() != 2 || rho1.dim() != 2 || sigma0.dim() != 2 || sigma1.dim() != 2)
    throw std::invalid_argument("alberti_uhlmann_qubit: all states must be qubits");
  detail::QuadPoly dr = detail::det_poly(rho0, rho1);
  detail::QuadPoly ds = detail::det_poly(sigma0, sigma1);
  detail::QuadPoly g{dr.a - ds.a, dr.b - ds.b, dr.c - ds.c};
  double gscale = std::max({1.0, std::abs(g.a), std::abs(g.b), std::abs(g.c)});

  // Region N = {t > 0 : ds(t) < 0}; ds opens upward with ds(0) >= 0.
  double lo = 0.0, hi = 0.0;
  bool unbounded = false;
  bool empty = true;
  if (ds.a > 1e-14) {
    double disc = ds.b * ds.b - 4.0 * ds.a * ds.c;
    if (disc > 0.0) {
      double q = -0.5 * (ds.b + (ds.b >= 0.0 ? 1.0 : -1.0) * std::sqrt(disc));
      double r1 = q / ds.a;
      double r2 = (q != 0.0) ? ds.c / q : 0.0;
      if (r1 > r2) std::swap(r1, r2);
      lo = std::max(r1, 0.0);
      hi = r2;
      empty = !(hi > lo);
    }
  } else if (ds.b < -1e-14) {
    lo = std::max(-ds.c / ds.b, 0.0);
    unbounded = true;
    empty = false;
  }

  AuVerdict v;
  if (empty) {
    v.kind = AuKind::holds;
    v.margin = -1.0;
    return v;
  }

  // Maximize g over [lo, hi] (or [lo, inf)).
  double best_t = lo;
  double best_g = g(lo);
  auto consider = [&](double t) {
    double val = g(t);
    if (val > best_g) {
      best_g = val;
      best_t = t;
    }
  };
  if (unbounded) {
    if (g.a > 0.0 || (g.a == 0.0 && g.b > 0.0)) {
      // g grows without bound: certain violation; find a decisive finite t.
      double t = lo + 1.0;
      for (int i = 0; i < 200 && g(t) <= 1e-6 * gscale; ++i) t *= 2.0;
      best_t = t;
      best_g = g(t);
    } else if (g.a < 0.0) {
      double ts = -g.b / (2.0 * g.a);
      if (ts > lo) consider(ts);
    }
  } else {
    consider(hi);
    consider(0.5 * (lo + hi));
    if (g.a < 0.0) {
      double ts = -g.b / (2.0 * g.a);
      if (ts > lo && ts < hi) consider(ts);
    }
  }

  double normalized = best_g / gscale;
  if (normalized > 1e-11) {
    // The decision came from the exact polynomial test; for reporting, pick
    // the candidate t with the largest violation in trace-norm units (the
    // polynomial maximizer can sit at an endpoint where the violation
    // vanishes).
    auto viol_at = [&](double t) {
      return detail::trace_norm_line(ds, t) - detail::trace_norm_line(dr, t);
    };
    std::vector<double> cand;
    auto push = [&](double t) {
      if (t > lo && (unbounded || t < hi)) cand.push_back(t);
    };
    if (!unbounded) {
      double width = hi - lo;
      cand.push_back(std::clamp(best_t, lo + 1e-9 * width, hi - 1e-9 * width));
      push(0.5 * (lo + hi));
    } else {
      cand.push_back(best_t <= lo ? lo + 1e-9 * std::max(1.0, lo) : best_t);
      push(lo + 1.0);
      push(2.0 * (lo + 1.0));
    }
    push(1.0);
    if (ds.a > 0.0) push(-0.5 * ds.b / ds.a);
    double t = cand.front();
    double viol = viol_at(t);
    for (double c : cand) {
      double vc = viol_at(c);
      if (vc > viol) {
        viol = vc;
        t = c;
      }
    }
    // Local polish on log t, accepted only when it improves.
    {
      const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
      double a = std::log(std::max(t / 3.0, lo > 0.0 ? lo : t / 3.0));
      double b = std::log(unbounded ? 3.0 * t : std::min(3.0 * t, hi));
      double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
      double f1 = viol_at(std::exp(x1)), f2 = viol_at(std::exp(x2));
      for (int i = 0; i < 50; ++i) {
        if (f1 >= f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - phi * (b - a);
          f1 = viol_at(std::exp(x1));
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + phi * (b - a);
          f2 = viol_at(std::exp(x2));
        }
      }
      double tr = std::exp(f1 >= f2 ? x1 : x2);
      if (viol_at(tr) > viol && tr > lo && (unbounded || tr < hi)) {
        t = tr;
        viol = viol_at(tr);
      }
    }
    if (viol <= 0.0) {
      t = best_t;  // fall back to the raw maximizer
      viol = viol_at(t);
    }
    v.kind = AuKind::fails;
    v.t_witness = t;
    v.margin = viol;
    return v;
  }
  if (normalized >= -1e-11 && normalized <= 1e-11 && std::abs(normalized) > 0.0) {
    v.kind = AuKind::borderline;
    v.margin = normalized;
    return v;
  }
  v.kind = AuKind::holds;
  v.margin = normalized;
  return v;
}

struct GridSpec {
  int points = 512;
  double t_max = 1e3;
};

struct GridVerdict {
  bool violation_found = false;
  double t_witness = std::numeric_limits<double>::quiet_NaN();
  /// Largest value of ||sigma0 - t sigma1||_1 - ||rho0 - t rho1||_1 seen.
  double max_violation = -std::numeric_limits<double>::infinity();
};

/// Grid screen of the trace-norm inequality over t in (0, t_max], sampled
/// log-symmetrically in t <-> 1/t, with golden-section refinement around the
/// worst grid point. Finding no violation proves nothing; a violation is a
/// definitive negative certificate.
inline GridVerdict alberti_uhlmann_grid(const DensityMatrix& rho0, const DensityMatrix& rho1,
                                        const DensityMatrix& sigma0,
                                        const DensityMatrix& sigma1,
                                        const GridSpec& spec = GridSpec{},
                                        const NumericPolicy& policy = NumericPolicy{}) {
  if (rho0.dim() != rho1.dim() || sigma0.dim() != sigma1.dim())
    throw std::invalid_argument("alberti_uhlmann_grid: pair dimension mismatch");
  if (spec.points < 2 || spec.t_max <= 1.0)
    throw std::invalid_argument("alberti_uhlmann_grid: bad grid spec");

  auto diff = [&](double u) {
    double t = std::exp(u);
    HermitianMatrix a = rho0.mat();
    HermitianMatrix a1 = rho1.mat();
    a1 *= t;
    a -= a1;
    HermitianMatrix b = sigma0.mat();
    HermitianMatrix b1 = sigma1.mat();
    b1 *= t;
    b -= b1;
    return trace_norm(b) - trace_norm(a);
  };

  double umax = std::log(spec.t_max);
  GridVerdict out;
  double best_u = 0.0;
  for (int i = 0; i < spec.points; ++i) {
    double u = -umax + 2.0 * umax * i / (spec.points - 1);
    double v = diff(u);
    if (v > out.max_violation) {
      out.max_violation = v;
      best_u = u;
    }
  }
  // Golden-section maximization on the bracket around the best grid point.
  double step = 2.0 * umax / (spec.points - 1);
  double a = best_u - step, b = best_u + step;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = diff(x1), f2 = diff(x2);
  for (int i = 0; i < 80; ++i) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = diff(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = diff(x2);
    }
  }
  double uref = (f1 >= f2) ? x1 : x2;
  double fref = std::max(f1, f2);
  if (fref > out.max_violation) {
    out.max_violation = fref;
    best_u = uref;
  }
  if (out.max_violation > policy.verdict_margin) {
    out.violation_found = true;
    out.t_witness = std::exp(best_u);
  }
  return out;
}

enum class Feasibility { feasible, infeasible, borderline };

inline const char* to_string(Feasibility f) {
  switch (f) {
    case Feasibility::feasible: return "feasible";
    case Feasibility::infeasible: return "infeasible";
    default: return "borderline";
  }
}

struct FeasibilityVerdict {
  Feasibility verdict = Feasibility::borderline;
  std::optional<ChoiMatrix> choi;
  /// Farkas ray over the equality rows of the exact program, for infeasible.
  std::optional<std::vector<double>> certificate;
  /// feasible: smallest eigenvalue of the polished Choi matrix.
  /// infeasible/borderline: the optimal residual radius of the relaxed
  /// program (a lower bound on how far the image constraints must move).
  double margin = 0.0;
  std::string note;
  /// Every (problem, solution) pair produced on the way, for re-audit.
  std::vector<std::pair<SdpProblem, SdpSolution>> audit;
};

namespace detail {

struct ChannelPrograms {
  SdpProblem exact;    // equality-only program over the Choi block
  SdpProblem relaxed;  // residual-radius program, strictly feasible both sides
  int n_tp = 0;
  int n_img = 0;
};

inline ChannelPrograms build_channel_programs(const DensityMatrix& rho0,
                                              const DensityMatrix& rho1,
                                              const DensityMatrix& sigma0,
                                              const DensityMatrix& sigma1) {
  int din = rho0.dim();
  int dout = sigma0.dim();
  int dj = din * dout;
  ChannelPrograms cp;

  std::vector<std::pair<HermitianMatrix, double>> rows;
  for (const HermitianMatrix& f : hermitian_basis(din)) {
    rows.push_back({tensor(f, HermitianMatrix::identity(dout)), f.trace()});
    ++cp.n_tp;
  }
  std::vector<const DensityMatrix*> ins = {&rho0, &rho1};
  std::vector<const DensityMatrix*> outs = {&sigma0, &sigma1};
  for (int i = 0; i < 2; ++i) {
    HermitianMatrix rt = transpose_herm(ins[i]->mat());
    for (const HermitianMatrix& g : hermitian_basis(dout)) {
      rows.push_back({tensor(rt, g), hs_inner(g, outs[i]->mat())});
      ++cp.n_img;
    }
  }

  cp.exact.block_dims = {dj};
  cp.exact.sense = SdpSense::minimize;
  for (const auto& [a, b] : rows) cp.exact.constraints.push_back({{{0, a}}, b});

  // Relaxed program: minimize r subject to |<A_i, J> - b_i| <= r on the
  // image rows (via slack scalars), trace preservation exact. Strictly
  // feasible on both sides, so the solver always reaches an optimum.
  SdpProblem& rp = cp.relaxed;
  rp.sense = SdpSense::minimize;
  int n_img = cp.n_img;
  rp.block_dims.assign(2 + 2 * n_img, 1);
  rp.block_dims[0] = dj;
  HermitianMatrix one(1);
  one.set(0, 0, 1.0);
  rp.objective = {{1, one}};
  for (int k = 0; k < cp.n_tp; ++k)
    rp.constraints.push_back({{{0, rows[k].first}}, rows[k].second});
  for (int i = 0; i < n_img; ++i) {
    const auto& [a, b] = rows[cp.n_tp + i];
    HermitianMatrix minus(1);
    minus.set(0, 0, -1.0);
    SdpConstraint up;  // <A,J> - r + u_i = b
    up.blocks = {{0, a}, {1, minus}, {2 + i, one}};
    up.rhs = b;
    rp.constraints.push_back(up);
    SdpConstraint dn;  // <A,J> + r - v_i = b
    dn.blocks = {{0, a}, {1, one}, {2 + n_img + i, minus}};
    dn.rhs = b;
    rp.constraints.push_back(dn);
  }
  return cp;
}

// Least-squares projection of J onto the affine space of the equality rows.
inline HermitianMatrix polish_to_rows(const HermitianMatrix& j,
                                      const std::vector<SdpConstraint>& rows) {
  int n = static_cast<int>(rows.size());
  RMat gram(n);
  std::vector<double> res(n);
  for (int k = 0; k < n; ++k) {
    const HermitianMatrix& ak = rows[k].blocks.front().second;
    res[k] = rows[k].rhs - hs_inner(ak, j);
    for (int l = k; l < n; ++l) {
      double g = hs_inner(ak, rows[l].blocks.front().second);
      gram.at(k, l) = g;
      gram.at(l, k) = g;
    }
  }
  RealEig eg = jacobi_sym(gram, true);
  double cut = 1e-12 * std::max(eg.values.front(), 1.0);
  std::vector<double> coef(n, 0.0);
  for (int k = 0; k < n; ++k) {
    if (eg.values[k] <= cut) continue;
    double proj = 0.0;
    for (int i = 0; i < n; ++i) proj += eg.vectors.at(i, k) * res[i];
    proj /= eg.values[k];
    for (int i = 0; i < n; ++i) coef[i] += eg.vectors.at(i, k) * proj;
  }
  HermitianMatrix out = j;
  for (int k = 0; k < n; ++k) {
    if (coef[k] == 0.0) continue;
    HermitianMatrix t = rows[k].blocks.front().second;
    t *= coef[k];
    out += t;
  }
  return out;
}

}  // namespace detail

/// Decides whether a channel maps rho_i to sigma_i for i = 0,1 by solving a
/// strictly feasible residual program over Choi matrices: the optimal
/// residual radius is ~0 exactly when the channel exists. Feasible verdicts
/// carry a polished Choi matrix; infeasible verdicts carry a Farkas ray for
/// the equality program assembled from the relaxed program's dual.
inline FeasibilityVerdict channel_feasibility(const DensityMatrix& rho0,
                                              const DensityMatrix& rho1,
                                              const DensityMatrix& sigma0,
                                              const DensityMatrix& sigma1,
                                              const NumericPolicy& policy = NumericPolicy{}) {
  if (rho0.dim() != rho1.dim() || sigma0.dim() != sigma1.dim())
    throw std::invalid_argument("channel_feasibility: pair dimension mismatch");
  int din = rho0.dim();
  int dout = sigma0.dim();
  detail::ChannelPrograms cp =
      detail::build_channel_programs(rho0, rho1, sigma0, sigma1);
  // Solve one decade below the verdict threshold so the residual of an
  // exactly feasible instance resolves clearly inside the feasible band.
  NumericPolicy tight = policy;
  tight.solver_tol = policy.solver_tol / 10.0;
  SdpSolution sol = solve(cp.relaxed, tight);
  FeasibilityVerdict out;
  if (sol.status != SdpStatus::optimal) {
    out.verdict = Feasibility::borderline;
    std::ostringstream msg;
    msg << "relaxed program did not reach an optimum: " << to_string(sol.status) << " ("
        << sol.message << ")";
    out.note = msg.str();
    out.audit.push_back({cp.relaxed, sol});
    return out;
  }
  double rstar = std::max(sol.primal_objective, 0.0);
  out.audit.push_back({cp.relaxed, sol});

  if (rstar <= policy.solver_tol) {
    HermitianMatrix j = detail::polish_to_rows(sol.X[0], cp.exact.constraints);
    std::string note;
    std::optional<ChoiMatrix> choi;
    try {
      choi.emplace(j, din, dout);
    } catch (const std::exception&) {
      try {
        choi.emplace(sol.X[0], din, dout);
        note = "polish rejected; returning the raw solver iterate";
        j = sol.X[0];
      } catch (const std::exception& ex2) {
        out.verdict = Feasibility::borderline;
        out.margin = rstar;
        out.note = std::string("residual ~0 but Choi validation failed: ") + ex2.what();
        return out;
      }
    }
    double reproduce = 0.0;
    const DensityMatrix* ins[2] = {&rho0, &rho1};
    const DensityMatrix* outs[2] = {&sigma0, &sigma1};
    for (int i = 0; i < 2; ++i) {
      HermitianMatrix img = detail::apply_choi_raw(j, din, dout, ins[i]->mat());
      img -= outs[i]->mat();
      reproduce = std::max(reproduce, trace_norm(img));
    }
    if (reproduce > 1e-7) {
      out.verdict = Feasibility::borderline;
      out.margin = rstar;
      std::ostringstream msg;
      msg << "candidate map misses the targets by " << reproduce << " in trace norm";
      out.note = msg.str();
      return out;
    }
    out.verdict = Feasibility::feasible;
    out.choi = std::move(choi);
    out.margin = lambda_min(j);
    out.note = note;
    return out;
  }

  if (rstar >= policy.borderline_band()) {
    // Dual rows of the relaxed program: [tp rows | plus rows | minus rows].
    // The combination y_tp on tp rows and (y_plus + y_minus) on image rows
    // is a Farkas ray for the equality program: its operator part is the
    // negated dual slack on the Choi block, and its value is r* > 0.
    int m_exact = cp.n_tp + cp.n_img;
    std::vector<double> ray(m_exact, 0.0);
    for (int k = 0; k < cp.n_tp; ++k) ray[k] = sol.y[k];
    for (int i = 0; i < cp.n_img; ++i)
      ray[cp.n_tp + i] = sol.y[cp.n_tp + 2 * i] + sol.y[cp.n_tp + 2 * i + 1];
    double norm = 0.0;
    for (double v : ray) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double& v : ray) v /= norm;
    SdpSolution synth;
    synth.status = SdpStatus::infeasible;
    synth.certificate = ray;
    synth.y.assign(m_exact, 0.0);
    synth.message = "ray assembled from the residual program dual";
    out.verdict = Feasibility::infeasible;
    out.certificate = ray;
    out.margin = rstar;
    out.audit.push_back({cp.exact, synth});
    return out;
  }

  out.verdict = Feasibility::borderline;
  out.margin = rstar;
  std::ostringstream msg;
  msg << "residual " << rstar << " falls inside the borderline band";
  out.note = msg.str();
  return out;
}

/// Random trace-preserving completely positive map via a Ginibre Choi
/// matrix renormalized on its input marginal.
inline ChoiMatrix random_choi(int d_in, int d_out, std::mt19937_64& rng) {
  int dj = d_in * d_out;
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix gm(dj, dj);
  for (cplx& v : gm.a) v = cplx(g(rng), g(rng));
  ComplexMatrix j0 = mul(gm, gm.adjoint());
  HermitianMatrix j0h = HermitianMatrix::from_complex(j0, 1e-6);
  HermitianMatrix y = partial_trace(j0h, d_in, d_out, Subsystem::first);
  EigResult ey = eig_hermitian(y);
  ComplexMatrix yinv(d_in, d_in);
  for (int r = 0; r < d_in; ++r)
    for (int c = 0; c < d_in; ++c) {
      cplx s = 0.0;
      for (int k = 0; k < d_in; ++k)
        s += ey.vectors(r, k) * (1.0 / std::sqrt(ey.values[k])) * std::conj(ey.vectors(c, k));
      yinv.at(r, c) = s;
    }
  ComplexMatrix lift(dj, dj);
  for (int r = 0; r < d_in; ++r)
    for (int c = 0; c < d_in; ++c)
      for (int a = 0; a < d_out; ++a) lift.at(r * d_out + a, c * d_out + a) = yinv.at(r, c);
  ComplexMatrix jc = mul(lift, mul(j0h.to_complex(), lift));
  return ChoiMatrix(HermitianMatrix::from_complex(jc, 1e-6), d_in, d_out, 1e-6);
}

struct WitnessReport {
  bool witness_found = false;
  /// guessing probability of the target pair minus the input pair under the
  /// best encoding found (positive means the claimed ordering fails).
  double gap = -std::numeric_limits<double>::infinity();
  std::optional<Encoding> encoding;
  double p_guess_input = 0.0;
  double p_guess_target = 0.0;
  double t_used = std::numeric_limits<double>::quiet_NaN();
  int evaluations = 0;
  std::string note;
};

namespace detail {

// Binary encoding with weights (1/(1+t), t/(1+t)) on labels (a,b) reading
// out rho0 under a and rho1 under b.
inline Encoding encoding_from_t(double t) {
  double wa = 1.0 / (1.0 + t);
  return Encoding::binary(wa, 0.0, 0.0, 1.0 - wa);
}

}  // namespace detail

/// Searches for an encoding under which the target pair is strictly more
/// distinguishable than the input pair, demonstrating that no channel maps
/// the inputs to the targets. For qubit inputs the search is driven by the
/// exact trace-norm criterion (binary encodings suffice); in general it is
/// best-effort: binary-weight sweeps, grid-derived t values, and seeded
/// random encodings, including extended ones with a spanning register.
inline WitnessReport extract_witness(const DensityMatrix& rho0, const DensityMatrix& rho1,
                                     const DensityMatrix& sigma0, const DensityMatrix& sigma1,
                                     const FeasibilityVerdict& verdict,
                                     const NumericPolicy& policy = NumericPolicy{},
                                     std::uint64_t seed = 0) {
  if (verdict.verdict != Feasibility::infeasible)
    throw std::invalid_argument("extract_witness: requires an infeasible verdict");
  WitnessReport rep;

  auto evaluate_binary = [&](const Encoding& enc, double t_tag) {
    CqState in = build_cq_state(enc, rho0, rho1);
    CqState tg = build_cq_state(enc, sigma0, sigma1);
    double pin = guessing_probability(in, policy).p_guess;
    double ptg = guessing_probability(tg, policy).p_guess;
    ++rep.evaluations;
    double gap = ptg - pin;
    if (gap > rep.gap) {
      rep.gap = gap;
      rep.encoding = enc;
      rep.p_guess_input = pin;
      rep.p_guess_target = ptg;
      rep.t_used = t_tag;
    }
  };

  // Closed-form surrogate of the gap for fast t refinement.
  auto surrogate = [&](double t) {
    HermitianMatrix a = rho0.mat();
    HermitianMatrix a1 = rho1.mat();
    a1 *= t;
    a -= a1;
    HermitianMatrix b = sigma0.mat();
    HermitianMatrix b1 = sigma1.mat();
    b1 *= t;
    b -= b1;
    return (trace_norm(b) - trace_norm(a)) / (2.0 * (1.0 + t));
  };

  std::vector<double> t_seeds;
  bool qubit = rho0.dim() == 2 && rho1.dim() == 2 && sigma0.dim() == 2 && sigma1.dim() == 2;
  if (qubit) {
    AuVerdict au = alberti_uhlmann_qubit(rho0, rho1, sigma0, sigma1);
    if (au.kind == AuKind::fails) t_seeds.push_back(au.t_witness);
  }
  GridVerdict gv = alberti_uhlmann_grid(rho0, rho1, sigma0, sigma1, GridSpec{}, policy);
  if (gv.violation_found) t_seeds.push_back(gv.t_witness);

  for (double t0 : t_seeds) {
    // Golden-section maximization of the surrogate around the seed.
    double a = std::log(t0) - 1.0, b = std::log(t0) + 1.0;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = surrogate(std::exp(x1)), f2 = surrogate(std::exp(x2));
    for (int i = 0; i < 60; ++i) {
      if (f1 >= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - phi * (b - a);
        f1 = surrogate(std::exp(x1));
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + phi * (b - a);
        f2 = surrogate(std::exp(x2));
      }
    }
    double tr = std::exp(f1 >= f2 ? x1 : x2);
    evaluate_binary(detail::encoding_from_t(tr), tr);
    if (tr != t0) evaluate_binary(detail::encoding_from_t(t0), t0);
  }

  if (rep.gap <= policy.verdict_margin) {
    // Weight sweep over binary encodings.
    for (int k = 1; k < 20; ++k) {
      double alpha = k / 20.0;
      evaluate_binary(Encoding::binary(alpha, 0.0, 0.0, 1.0 - alpha),
                      (1.0 - alpha) / alpha);
    }
  }

  if (rep.gap <= policy.verdict_margin && !qubit) {
    // Seeded random restarts: plain encodings with up to dout^2 labels and
    // extended encodings over a spanning register on the target dimension.
    int dout = sigma0.dim();
    int nu = dout * dout;
    for (std::uint64_t idx = 0; idx < 16; ++idx) {
      auto rng = engine_for(seed, idx);
      std::vector<double> cells = dirichlet_uniform(2 * nu, rng);
      std::vector<std::string> labels;
      for (int u = 0; u < nu; ++u) labels.push_back("u" + std::to_string(u));
      Encoding enc(labels, 0, cells);
      CqState in = build_cq_state(enc, rho0, rho1);
      CqState tg = build_cq_state(enc, sigma0, sigma1);
      double pin = guessing_probability(in, policy).p_guess;
      double ptg = guessing_probability(tg, policy).p_guess;
      ++rep.evaluations;
      if (ptg - pin > rep.gap) {
        rep.gap = ptg - pin;
        rep.encoding = enc;
        rep.p_guess_input = pin;
        rep.p_guess_target = ptg;
        rep.t_used = std::numeric_limits<double>::quiet_NaN();
      }
    }
    auto cc = standard_complete_cq(dout);
    for (std::uint64_t idx = 16; idx < 24; ++idx) {
      auto rng = engine_for(seed, idx);
      std::vector<double> cells = dirichlet_uniform(2 * cc.size() * nu, rng);
      std::vector<std::string> labels;
      for (int u = 0; u < nu; ++u) labels.push_back("u" + std::to_string(u));
      Encoding enc(labels, cc.size(), cells);
      CqState in = build_extended_cq_state(enc, cc, rho0, rho1);
      CqState tg = build_extended_cq_state(enc, cc, sigma0, sigma1);
      double pin = guessing_probability(in, policy).p_guess;
      double ptg = guessing_probability(tg, policy).p_guess;
      ++rep.evaluations;
      if (ptg - pin > rep.gap) {
        rep.gap = ptg - pin;
        rep.encoding = enc;
        rep.p_guess_input = pin;
        rep.p_guess_target = ptg;
        rep.t_used = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }

  rep.witness_found = rep.gap > 1e-6;
  if (!rep.witness_found)
    rep.note = "no encoding with a significant gap found; the dual certificate remains the "
               "authoritative evidence";
  return rep;
}

}  // namespace qsc
