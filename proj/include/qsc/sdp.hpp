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
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qsc/detail/dense.hpp"
#include "qsc/hermitian.hpp"
#include "qsc/policy.hpp"

namespace qsc {

enum class SdpStatus { optimal, infeasible, borderline, error };
enum class SdpSense { minimize, maximize };

inline const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::infeasible: return "infeasible";
    case SdpStatus::borderline: return "borderline";
    default: return "error";
  }
}

/// One equality row sum_b <A_b, X_b> = rhs over the named blocks; blocks not
/// listed act as zero coefficients.
struct SdpConstraint {
  std::vector<std::pair<int, HermitianMatrix>> blocks;
  double rhs = 0.0;
};

/// Standard-form program over a product of Hermitian PSD cones:
/// optimize sum_b <C_b, X_b> subject to the equality rows and X_b >= 0.
struct SdpProblem {
  std::vector<int> block_dims;
  std::vector<std::pair<int, HermitianMatrix>> objective;
  std::vector<SdpConstraint> constraints;
  SdpSense sense = SdpSense::minimize;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::error;
  std::vector<HermitianMatrix> X;
  std::vector<double> y;
  std::vector<HermitianMatrix> S;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;
  /// Dual improving ray for status=infeasible: sum_i y_i A_i <= 0 with
  /// sum_i y_i b_i > 0, normalized to unit Euclidean length.
  std::optional<std::vector<double>> certificate;
  std::string message;
  int iterations = 0;
};

namespace detail {

// Real symmetric embedding of a Hermitian block: [[Re, -Im], [Im, Re]].
// Real inner products are exactly twice the complex Hilbert-Schmidt values.
inline RMat embed(const HermitianMatrix& h) {
  int d = h.dim();
  RMat m(2 * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      double re = h(r, c).real();
      double im = h(r, c).imag();
      m.at(r, c) = re;
      m.at(r + d, c + d) = re;
      m.at(r, c + d) = -im;
      m.at(r + d, c) = im;
    }
  return m;
}

inline HermitianMatrix unembed(const RMat& m, int d) {
  std::vector<cplx> entries(static_cast<std::size_t>(d) * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      double re = 0.5 * (m.at(r, c) + m.at(r + d, c + d));
      double im = 0.5 * (m.at(r + d, c) - m.at(r, c + d));
      entries[static_cast<std::size_t>(r) * d + c] = cplx(re, im);
    }
  return HermitianMatrix::from_entries(d, entries, 1e-6);
}

struct RealConstraint {
  std::vector<std::pair<int, RMat>> blocks;
  double rhs = 0.0;
};

// Concatenated scaled upper-triangle coordinates; preserves inner products.
inline std::vector<double> svec_row(const std::vector<int>& dims, const RealConstraint& con) {
  const double rt2 = std::sqrt(2.0);
  std::size_t total = 0;
  std::vector<std::size_t> offsets(dims.size());
  for (std::size_t b = 0; b < dims.size(); ++b) {
    offsets[b] = total;
    total += static_cast<std::size_t>(dims[b]) * (dims[b] + 1) / 2;
  }
  std::vector<double> v(total, 0.0);
  for (const auto& [bi, mat] : con.blocks) {
    std::size_t k = offsets[bi];
    int n = dims[bi];
    for (int r = 0; r < n; ++r)
      for (int c = r; c < n; ++c, ++k) v[k] = (r == c) ? mat.at(r, c) : rt2 * mat.at(r, c);
  }
  return v;
}

struct HsdResult {
  SdpStatus status = SdpStatus::error;
  std::vector<RMat> X;
  std::vector<double> y;
  std::vector<RMat> S;
  double tau = 1.0;
  double kappa = 1.0;
  std::vector<double> ray;  // over the pruned rows, for status=infeasible
  std::string message;
  int iterations = 0;
};

// Homogeneous self-dual interior-point core over real symmetric blocks,
// Nesterov-Todd scaling, Mehrotra-style adaptive centering.
class HsdSolver {
 public:
  HsdSolver(std::vector<int> dims, std::vector<RMat> C, std::vector<RealConstraint> cons,
            std::vector<double> b, double tol, int max_iter)
      : dims_(std::move(dims)),
        C_(std::move(C)),
        cons_(std::move(cons)),
        b_(std::move(b)),
        tol_(tol),
        max_iter_(max_iter) {
    nblocks_ = static_cast<int>(dims_.size());
    m_ = static_cast<int>(cons_.size());
    users_.resize(nblocks_);
    for (int i = 0; i < m_; ++i)
      for (const auto& [bi, mat] : cons_[i].blocks) users_[bi].push_back({i, &mat});
    bnorm_ = 0.0;
    for (double v : b_) bnorm_ += v * v;
    bnorm_ = std::sqrt(bnorm_);
    cnorm_ = 0.0;
    for (const RMat& c : C_) cnorm_ += c.frob() * c.frob();
    cnorm_ = std::sqrt(cnorm_);
    anorm_ = 1.0;
    for (const auto& con : cons_)
      for (const auto& [bi, mat] : con.blocks) {
        (void)bi;
        anorm_ = std::max(anorm_, mat.frob());
      }
  }

  HsdResult run() {
    HsdResult out;
    int nu = 1;
    for (int d : dims_) nu += d;
    std::vector<RMat> X, S;
    for (int d : dims_) {
      X.push_back(RMat::identity(d));
      S.push_back(RMat::identity(d));
    }
    std::vector<double> y(m_, 0.0);
    double tau = 1.0, kappa = 1.0;
    int stall = 0;
    double best_measure = std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < max_iter_; ++iter) {
      out.iterations = iter;
      std::vector<double> ax = apply_A(X);
      std::vector<double> rp(m_);
      for (int i = 0; i < m_; ++i) rp[i] = b_[i] * tau - ax[i];
      std::vector<RMat> aty = apply_At(y);
      std::vector<RMat> Rd(nblocks_);
      for (int bl = 0; bl < nblocks_; ++bl) {
        RMat r = C_[bl];
        r.scale(tau);
        r.axpy(-1.0, aty[bl]);
        r.axpy(-1.0, S[bl]);
        Rd[bl] = std::move(r);
      }
      double bty = 0.0;
      for (int i = 0; i < m_; ++i) bty += b_[i] * y[i];
      double cx = dot_C(X);
      double rg = bty - cx - kappa;
      double xs = 0.0;
      for (int bl = 0; bl < nblocks_; ++bl) xs += dot(X[bl], S[bl]);
      double mu = (xs + tau * kappa) / nu;

      // Normalized optimality measures at the de-homogenized point.
      double pinf = 0.0;
      for (int i = 0; i < m_; ++i) {
        double v = ax[i] / tau - b_[i];
        pinf += v * v;
      }
      pinf = std::sqrt(pinf) / (1.0 + bnorm_);
      double dinf = 0.0;
      for (int bl = 0; bl < nblocks_; ++bl) {
        RMat r = C_[bl];
        r.axpy(-1.0 / tau, aty[bl]);
        r.axpy(-1.0 / tau, S[bl]);
        dinf += r.frob() * r.frob();
      }
      dinf = std::sqrt(dinf) / (1.0 + cnorm_);
      double pobj = cx / tau, dobj = bty / tau;
      double relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
      double measure = std::max({pinf, dinf, relgap});
      best_measure = std::min(best_measure, measure);

      if (measure <= tol_) {
        out.status = SdpStatus::optimal;
        out.X = X;
        out.y = y;
        out.S = S;
        out.tau = tau;
        out.kappa = kappa;
        return out;
      }

      // Farkas-ray candidate: y certifies primal infeasibility when
      // sum_i y_i A_i <= 0 and b^T y > 0 (scale-invariant test).
      if (bty > 1e-12) {
        double worst = -std::numeric_limits<double>::infinity();
        for (int bl = 0; bl < nblocks_; ++bl) worst = std::max(worst, lambda_max(aty[bl]));
        if (worst <= tol_ * anorm_ * bty) {
          out.status = SdpStatus::infeasible;
          out.ray = y;
          for (double& v : out.ray) v /= bty;
          out.message = "primal infeasibility certified by dual ray";
          out.iterations = iter;
          return out;
        }
      }
      // Unboundedness candidate: X ray with A(X) ~ 0 and <C,X> < 0.
      if (-cx > 1e-12) {
        double axn = 0.0;
        for (double v : ax) axn = std::max(axn, std::abs(v));
        if (axn <= tol_ * anorm_ * (-cx)) {
          out.status = SdpStatus::error;
          out.message = "dual infeasible (objective unbounded along a primal ray)";
          return out;
        }
      }

      // Nesterov-Todd scaling per block: W = L (L^T S L)^{-1/2} L^T with
      // X = L L^T, which gives W S W = X.
      std::vector<RMat> Lx(nblocks_), Rs(nblocks_), W(nblocks_), Sinv(nblocks_);
      bool breakdown = false;
      for (int bl = 0; bl < nblocks_ && !breakdown; ++bl) {
        if (!chol_jitter(X[bl], Lx[bl]) || !chol_jitter(S[bl], Rs[bl])) {
          breakdown = true;
          break;
        }
        const RMat& L = Lx[bl];
        RMat T = mul(transpose(L), mul(S[bl], L));
        T.symmetrize();
        RealEig te;
        try {
          te = jacobi_sym(T, true);
        } catch (const std::exception&) {
          breakdown = true;
          break;
        }
        if (te.values.back() <= 0.0) {
          breakdown = true;
          break;
        }
        int n = T.n;
        RMat U = mul(L, te.vectors);
        RMat Us = U;
        for (int c = 0; c < n; ++c) {
          double s = 1.0 / std::sqrt(te.values[c]);
          for (int r = 0; r < n; ++r) Us.at(r, c) *= s;
        }
        RMat w = mul(Us, transpose(U));
        w.symmetrize();
        W[bl] = std::move(w);
        RMat inv = RMat::identity(n);
        solve_lower_mat(Rs[bl], inv);
        RMat sinv = mul(transpose(inv), inv);
        sinv.symmetrize();
        Sinv[bl] = std::move(sinv);
      }
      if (breakdown) {
        finish_indeterminate(out, best_measure,
                             "scaling breakdown (iterate left the cone numerically)");
        return out;
      }

      // Schur complement M_ij = sum_b <A_i, W A_j W>, h = A(W C W).
      std::vector<RMat> WCW(nblocks_);
      for (int bl = 0; bl < nblocks_; ++bl) {
        RMat t = mul(W[bl], mul(C_[bl], W[bl]));
        t.symmetrize();
        WCW[bl] = std::move(t);
      }
      RMat M(m_);
      for (int j = 0; j < m_; ++j)
        for (const auto& [bi, mat] : cons_[j].blocks) {
          RMat t = mul(W[bi], mul(mat, W[bi]));
          for (const auto& [i, ai] : users_[bi]) M.at(i, j) += dot(*ai, t);
        }
      M.symmetrize();
      std::vector<double> h(m_, 0.0);
      for (int bl = 0; bl < nblocks_; ++bl)
        for (const auto& [i, ai] : users_[bl]) h[i] += dot(*ai, WCW[bl]);
      RMat Mf;
      if (!chol_jitter(M, Mf)) {
        finish_indeterminate(out, best_measure, "Schur complement not positive definite");
        return out;
      }
      auto solve_m = [&](const std::vector<double>& rhs) {
        std::vector<double> x = rhs;
        solve_lower(Mf, x);
        solve_lower_t(Mf, x);
        // One round of iterative refinement against the unfactored matrix.
        std::vector<double> r = rhs;
        for (int i = 0; i < m_; ++i)
          for (int j = 0; j < m_; ++j) r[i] -= M.at(i, j) * x[j];
        solve_lower(Mf, r);
        solve_lower_t(Mf, r);
        for (int i = 0; i < m_; ++i) x[i] += r[i];
        return x;
      };
      std::vector<double> uh = solve_m(h);
      std::vector<double> ub = solve_m(b_);
      std::vector<double> u2(m_);
      for (int i = 0; i < m_; ++i) u2[i] = uh[i] + ub[i];
      // Homogeneous-step denominator in residual form: kappa/tau plus two
      // nonnegative quadratic forms (the W-metric distance of C from the
      // constraint range, and b' M^{-1} b). The naive <C,WCW> - h'M^{-1}h
      // form cancels catastrophically near degenerate optima.
      std::vector<RMat> atuh = apply_At(uh);
      double denom = kappa / tau;
      for (int bl = 0; bl < nblocks_; ++bl) {
        RMat z = C_[bl];
        z.axpy(-1.0, atuh[bl]);
        z.symmetrize();
        RMat wzw = mul(W[bl], mul(z, W[bl]));
        denom += std::max(dot(z, wzw), 0.0);
      }
      double btub = 0.0;
      for (int i = 0; i < m_; ++i) btub += b_[i] * ub[i];
      denom += std::max(btub, 0.0);
      if (!(denom > 0.0) || !std::isfinite(denom)) {
        finish_indeterminate(out, best_measure, "homogeneous step denominator lost positivity");
        return out;
      }

      std::vector<RMat> WRdW(nblocks_);
      for (int bl = 0; bl < nblocks_; ++bl) {
        RMat t = mul(W[bl], mul(Rd[bl], W[bl]));
        t.symmetrize();
        WRdW[bl] = std::move(t);
      }
      std::vector<double> a_wrdw = apply_A(WRdW);
      double c_wrdw = dot_C(WRdW);

      struct Direction {
        std::vector<RMat> dX, dS;
        std::vector<double> dy;
        double dtau = 0.0, dkappa = 0.0;
      };
      auto newton = [&](double sigma, double so2) {
        double eta = 1.0 - sigma;
        std::vector<RMat> Rc(nblocks_);
        for (int bl = 0; bl < nblocks_; ++bl) {
          RMat rc = Sinv[bl];
          rc.scale(sigma * mu);
          rc.axpy(-1.0, X[bl]);
          Rc[bl] = std::move(rc);
        }
        std::vector<double> a_rc = apply_A(Rc);
        double c_rc = dot_C(Rc);
        std::vector<double> u1(m_);
        for (int i = 0; i < m_; ++i) u1[i] = eta * rp[i] - a_rc[i] + eta * a_wrdw[i];
        double q2 = -eta * rg + c_rc - eta * c_wrdw + (sigma * mu - tau * kappa - so2) / tau;
        u1 = solve_m(u1);
        double num = q2;
        for (int i = 0; i < m_; ++i) num -= (b_[i] - h[i]) * u1[i];
        Direction d;
        d.dtau = num / denom;
        d.dy.resize(m_);
        for (int i = 0; i < m_; ++i) d.dy[i] = u1[i] + d.dtau * u2[i];
        std::vector<RMat> atdy = apply_At(d.dy);
        d.dS.resize(nblocks_);
        d.dX.resize(nblocks_);
        for (int bl = 0; bl < nblocks_; ++bl) {
          RMat ds = C_[bl];
          ds.scale(d.dtau);
          ds.axpy(-1.0, atdy[bl]);
          ds.axpy(eta, Rd[bl]);
          ds.symmetrize();
          RMat wdsw = mul(W[bl], mul(ds, W[bl]));
          RMat dx = Rc[bl];
          dx.axpy(-1.0, wdsw);
          dx.symmetrize();
          d.dS[bl] = std::move(ds);
          d.dX[bl] = std::move(dx);
        }
        d.dkappa = (sigma * mu - tau * kappa - so2 - kappa * d.dtau) / tau;
        return d;
      };

      auto boundary = [&](const Direction& d) {
        double am = std::numeric_limits<double>::infinity();
        try {
          for (int bl = 0; bl < nblocks_; ++bl) {
            double gmin = lambda_min(congruence_inv(Lx[bl], d.dX[bl]));
            if (gmin < 0.0) am = std::min(am, -1.0 / gmin);
            gmin = lambda_min(congruence_inv(Rs[bl], d.dS[bl]));
            if (gmin < 0.0) am = std::min(am, -1.0 / gmin);
          }
        } catch (const std::exception&) {
          return 0.0;
        }
        if (d.dtau < 0.0) am = std::min(am, -tau / d.dtau);
        if (d.dkappa < 0.0) am = std::min(am, -kappa / d.dkappa);
        return am;
      };

      Direction aff = newton(0.0, 0.0);
      double a_aff = std::min(1.0, boundary(aff));
      double xs_lin = 0.0, xs_quad = 0.0;
      for (int bl = 0; bl < nblocks_; ++bl) {
        xs_lin += dot(X[bl], aff.dS[bl]) + dot(aff.dX[bl], S[bl]);
        xs_quad += dot(aff.dX[bl], aff.dS[bl]);
      }
      double mu_aff = (xs + a_aff * xs_lin + a_aff * a_aff * xs_quad +
                       (tau + a_aff * aff.dtau) * (kappa + a_aff * aff.dkappa)) /
                      nu;
      mu_aff = std::max(mu_aff, 0.0);
      double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 1e-4, 0.8);

      Direction dir = newton(sigma, aff.dtau * aff.dkappa);
      double alpha = std::min(1.0, 0.98 * boundary(dir));
      if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        finish_indeterminate(out, best_measure, "step computation failed");
        return out;
      }
      if (alpha < 1e-4) {
        if (++stall >= 5) {
          finish_indeterminate(out, best_measure, "progress stalled (step size collapsed)");
          return out;
        }
      } else {
        stall = 0;
      }
      for (int bl = 0; bl < nblocks_; ++bl) {
        X[bl].axpy(alpha, dir.dX[bl]);
        X[bl].symmetrize();
        S[bl].axpy(alpha, dir.dS[bl]);
        S[bl].symmetrize();
      }
      for (int i = 0; i < m_; ++i) y[i] += alpha * dir.dy[i];
      tau += alpha * dir.dtau;
      kappa += alpha * dir.dkappa;
      bool bad = !(tau > 0.0) || !(kappa > 0.0);
      for (int bl = 0; bl < nblocks_ && !bad; ++bl)
        for (double v : X[bl].a)
          if (!std::isfinite(v)) {
            bad = true;
            break;
          }
      if (bad) {
        out.status = SdpStatus::error;
        out.message = "iterate diverged (non-finite values)";
        return out;
      }
    }
    out.iterations = max_iter_;
    finish_indeterminate(out, best_measure, "iteration cap reached");
    return out;
  }

 private:
  bool chol_jitter(const RMat& A, RMat& L) const {
    if (cholesky(A, L)) return true;
    double base = 1e-14 * (1.0 + std::abs(A.trace()) / std::max(1, A.n));
    for (int k = 0; k < 6; ++k) {
      RMat J = A;
      for (int i = 0; i < J.n; ++i) J.at(i, i) += base;
      if (cholesky(J, L)) return true;
      base *= 10.0;
    }
    return false;
  }

  void finish_indeterminate(HsdResult& out, double best_measure, const std::string& why) const {
    std::ostringstream msg;
    msg << why << "; best normalized residual " << best_measure;
    out.message = msg.str();
    out.status = (best_measure <= 10.0 * tol_) ? SdpStatus::borderline : SdpStatus::error;
  }

  std::vector<double> apply_A(const std::vector<RMat>& X) const {
    std::vector<double> out(m_, 0.0);
    for (int i = 0; i < m_; ++i)
      for (const auto& [bi, mat] : cons_[i].blocks) out[i] += dot(mat, X[bi]);
    return out;
  }

  std::vector<RMat> apply_At(const std::vector<double>& y) const {
    std::vector<RMat> out;
    out.reserve(nblocks_);
    for (int d : dims_) out.emplace_back(d);
    for (int i = 0; i < m_; ++i) {
      if (y[i] == 0.0) continue;
      for (const auto& [bi, mat] : cons_[i].blocks) out[bi].axpy(y[i], mat);
    }
    return out;
  }

  double dot_C(const std::vector<RMat>& X) const {
    double s = 0.0;
    for (int bl = 0; bl < nblocks_; ++bl) s += dot(C_[bl], X[bl]);
    return s;
  }

  std::vector<int> dims_;
  std::vector<RMat> C_;
  std::vector<RealConstraint> cons_;
  std::vector<double> b_;
  double tol_;
  int max_iter_;
  int nblocks_ = 0;
  int m_ = 0;
  std::vector<std::vector<std::pair<int, const RMat*>>> users_;
  double bnorm_ = 0.0, cnorm_ = 0.0, anorm_ = 1.0;
};

}  // namespace detail

/// Solves a standard-form SDP via a homogeneous self-dual interior-point
/// method with Nesterov-Todd scaling. Deterministic for identical inputs:
/// fixed iteration schedule, no randomized pivoting.
inline SdpSolution solve(const SdpProblem& p, const NumericPolicy& policy = NumericPolicy{}) {
  SdpSolution sol;
  int nblocks = static_cast<int>(p.block_dims.size());
  if (nblocks == 0) {
    sol.message = "no blocks";
    return sol;
  }
  for (int d : p.block_dims)
    if (d <= 0) {
      sol.message = "non-positive block dimension";
      return sol;
    }
  int m = static_cast<int>(p.constraints.size());
  if (m == 0) {
    sol.message = "unconstrained problems are not supported";
    return sol;
  }
  auto block_ok = [&](int bi, const HermitianMatrix& h) {
    return bi >= 0 && bi < nblocks && h.dim() == p.block_dims[bi];
  };
  for (const auto& [bi, h] : p.objective)
    if (!block_ok(bi, h)) {
      sol.message = "objective block mismatch";
      return sol;
    }
  for (const auto& con : p.constraints)
    for (const auto& [bi, h] : con.blocks)
      if (!block_ok(bi, h)) {
        sol.message = "constraint block mismatch";
        return sol;
      }

  double obj_sign = (p.sense == SdpSense::maximize) ? -1.0 : 1.0;

  std::vector<int> rdims;
  rdims.reserve(nblocks);
  for (int d : p.block_dims) rdims.push_back(2 * d);
  std::vector<detail::RMat> C;
  for (int d : rdims) C.emplace_back(d);
  for (const auto& [bi, h] : p.objective) {
    detail::RMat e = detail::embed(h);
    e.scale(obj_sign);
    C[bi].axpy(1.0, e);
  }
  std::vector<detail::RealConstraint> rcons(m);
  for (int i = 0; i < m; ++i) {
    for (const auto& [bi, h] : p.constraints[i].blocks)
      rcons[i].blocks.push_back({bi, detail::embed(h)});
    rcons[i].rhs = 2.0 * p.constraints[i].rhs;
  }

  // Rank-revealing row pruning. Dependent-but-consistent rows are dropped;
  // a dependent row with a contradictory right-hand side is an exact
  // infeasibility proof (combination coefficients form a Farkas ray whose
  // operator part vanishes).
  std::vector<std::vector<double>> basis;      // orthonormal svec rows
  std::vector<double> gamma;                   // rhs carried through the basis
  std::vector<std::vector<double>> expansion;  // basis rows in original coords
  std::vector<int> kept;
  std::vector<detail::RealConstraint> pruned;
  std::vector<double> pb;
  for (int i = 0; i < m; ++i) {
    std::vector<double> v = detail::svec_row(rdims, rcons[i]);
    double orig_norm = 0.0;
    for (double x : v) orig_norm += x * x;
    orig_norm = std::sqrt(orig_norm);
    double beta = rcons[i].rhs;
    std::vector<double> combo(m, 0.0);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      double c = 0.0;
      for (std::size_t t = 0; t < v.size(); ++t) c += v[t] * basis[k][t];
      if (c == 0.0) continue;
      for (std::size_t t = 0; t < v.size(); ++t) v[t] -= c * basis[k][t];
      beta -= c * gamma[k];
      for (int j = 0; j < m; ++j) combo[j] += c * expansion[k][j];
    }
    double rn = 0.0;
    for (double x : v) rn += x * x;
    rn = std::sqrt(rn);
    if (rn > 1e-9 * std::max(1.0, orig_norm)) {
      for (double& x : v) x /= rn;
      basis.push_back(std::move(v));
      gamma.push_back(beta / rn);
      std::vector<double> exp_row(m, 0.0);
      for (int j = 0; j < m; ++j) exp_row[j] = -combo[j] / rn;
      exp_row[i] += 1.0 / rn;
      expansion.push_back(std::move(exp_row));
      kept.push_back(i);
      pruned.push_back(rcons[i]);
      pb.push_back(rcons[i].rhs);
      continue;
    }
    if (std::abs(beta) > 1e-9 * (1.0 + std::abs(rcons[i].rhs))) {
      std::vector<double> ray(m, 0.0);
      double sign = beta > 0.0 ? 1.0 : -1.0;
      ray[i] += sign;
      for (int j = 0; j < m; ++j) ray[j] -= sign * combo[j];
      double norm = 0.0;
      for (double x : ray) norm += x * x;
      norm = std::sqrt(norm);
      for (double& x : ray) x /= norm;
      sol.status = SdpStatus::infeasible;
      sol.certificate = std::move(ray);
      sol.y.assign(m, 0.0);
      sol.message = "inconsistent linear constraints";
      return sol;
    }
  }

  detail::HsdSolver solver(rdims, std::move(C), std::move(pruned), std::move(pb),
                           policy.solver_tol, 200);
  detail::HsdResult res;
  try {
    res = solver.run();
  } catch (const std::exception& ex) {
    sol.status = SdpStatus::error;
    sol.message = ex.what();
    return sol;
  }
  sol.iterations = res.iterations;
  sol.message = res.message;
  sol.status = res.status;

  auto scatter = [&](const std::vector<double>& v) {
    std::vector<double> full(m, 0.0);
    for (std::size_t j = 0; j < kept.size(); ++j) full[kept[j]] = v[j];
    return full;
  };

  if (res.status == SdpStatus::optimal) {
    double ysign = (p.sense == SdpSense::maximize) ? -1.0 : 1.0;
    for (int bl = 0; bl < nblocks; ++bl) {
      detail::RMat xb = res.X[bl];
      xb.scale(1.0 / res.tau);
      sol.X.push_back(detail::unembed(xb, p.block_dims[bl]));
      detail::RMat sb = res.S[bl];
      sb.scale(1.0 / res.tau);
      // For maximization the public dual slack convention is
      // S = A*(y) - C with y = -y_internal, which equals the internal slack.
      sol.S.push_back(detail::unembed(sb, p.block_dims[bl]));
    }
    std::vector<double> yv(res.y.size());
    for (std::size_t i = 0; i < res.y.size(); ++i) yv[i] = ysign * res.y[i] / res.tau;
    sol.y = scatter(yv);
    double pobj = 0.0;
    for (const auto& [bi, h] : p.objective) pobj += hs_inner(h, sol.X[bi]);
    double dobj = 0.0;
    for (int i = 0; i < m; ++i) dobj += p.constraints[i].rhs * sol.y[i];
    sol.primal_objective = pobj;
    sol.dual_objective = dobj;
    sol.gap = std::abs(pobj - dobj);
  } else if (res.status == SdpStatus::infeasible) {
    std::vector<double> ray = scatter(res.ray);
    double norm = 0.0;
    for (double v : ray) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double& v : ray) v /= norm;
    sol.certificate = std::move(ray);
    sol.y.assign(m, 0.0);
  }
  return sol;
}

/// Re-verifies an optimal or infeasible solution against the original data;
/// trusts nothing from solver internals.
inline bool check_certificate(const SdpProblem& p, const SdpSolution& s,
                              const NumericPolicy& policy = NumericPolicy{}) {
  int nblocks = static_cast<int>(p.block_dims.size());
  int m = static_cast<int>(p.constraints.size());
  double scale = 1.0;
  for (const auto& con : p.constraints) scale = std::max(scale, std::abs(con.rhs));
  for (const auto& [bi, h] : p.objective) {
    (void)bi;
    scale = std::max(scale, h.frob());
  }
  double tol = 50.0 * policy.solver_tol * scale;

  if (s.status == SdpStatus::infeasible) {
    if (!s.certificate || static_cast<int>(s.certificate->size()) != m) return false;
    const std::vector<double>& y = *s.certificate;
    double bty = 0.0;
    for (int i = 0; i < m; ++i) bty += p.constraints[i].rhs * y[i];
    if (!(bty > policy.solver_tol)) return false;
    std::vector<HermitianMatrix> acc;
    acc.reserve(nblocks);
    for (int d : p.block_dims) acc.emplace_back(d);
    double ynorm = 0.0;
    for (double v : y) ynorm = std::max(ynorm, std::abs(v));
    for (int i = 0; i < m; ++i) {
      if (y[i] == 0.0) continue;
      for (const auto& [bi, h] : p.constraints[i].blocks) {
        HermitianMatrix t = h;
        t *= y[i];
        acc[bi] += t;
      }
    }
    for (const HermitianMatrix& z : acc)
      if (lambda_max(z) > tol * (1.0 + ynorm)) return false;
    return true;
  }

  if (s.status != SdpStatus::optimal) return false;
  if (static_cast<int>(s.X.size()) != nblocks || static_cast<int>(s.y.size()) != m)
    return false;
  for (int bl = 0; bl < nblocks; ++bl) {
    if (s.X[bl].dim() != p.block_dims[bl]) return false;
    if (lambda_min(s.X[bl]) < -tol) return false;
  }
  for (int i = 0; i < m; ++i) {
    double v = -p.constraints[i].rhs;
    for (const auto& [bi, h] : p.constraints[i].blocks) v += hs_inner(h, s.X[bi]);
    if (std::abs(v) > tol) return false;
  }
  // Dual slack: C - A*(y) >= 0 (minimize) or A*(y) - C >= 0 (maximize).
  std::vector<HermitianMatrix> slack;
  slack.reserve(nblocks);
  for (int d : p.block_dims) slack.emplace_back(d);
  double dual_sign = (p.sense == SdpSense::maximize) ? -1.0 : 1.0;
  for (const auto& [bi, h] : p.objective) {
    HermitianMatrix t = h;
    t *= dual_sign;
    slack[bi] += t;
  }
  for (int i = 0; i < m; ++i) {
    if (s.y[i] == 0.0) continue;
    for (const auto& [bi, h] : p.constraints[i].blocks) {
      HermitianMatrix t = h;
      t *= -dual_sign * s.y[i];
      slack[bi] += t;
    }
  }
  double ynorm = 0.0;
  for (double v : s.y) ynorm = std::max(ynorm, std::abs(v));
  for (const HermitianMatrix& z : slack)
    if (lambda_min(z) < -tol * (1.0 + ynorm)) return false;
  double pobj = 0.0;
  for (const auto& [bi, h] : p.objective) pobj += hs_inner(h, s.X[bi]);
  double dobj = 0.0;
  for (int i = 0; i < m; ++i) dobj += p.constraints[i].rhs * s.y[i];
  if (std::abs(pobj - s.primal_objective) > tol * (1.0 + std::abs(pobj))) return false;
  if (std::abs(dobj - s.dual_objective) > tol * (1.0 + std::abs(dobj))) return false;
  if (std::abs(pobj - dobj) > tol * (1.0 + std::abs(pobj) + std::abs(dobj))) return false;
  return true;
}

}  // namespace qsc
