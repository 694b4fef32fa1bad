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
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsc/detail/dense.hpp"
#include "qsc/hermitian.hpp"
#include "qsc/policy.hpp"

namespace qsc {

/// PSD unit-trace state. Construction clamps eigenvalues in [-tol, 0) to
/// zero and renormalizes the trace when it is within tol of 1; anything
/// further out is rejected.
class DensityMatrix {
 public:
  explicit DensityMatrix(const HermitianMatrix& m, double tol = 1e-9) : mat_(m) {
    double tr = mat_.trace();
    if (std::abs(tr - 1.0) > tol) {
      std::ostringstream msg;
      msg << "DensityMatrix: trace " << tr << " not within " << tol << " of 1";
      throw std::invalid_argument(msg.str());
    }
    EigResult e = eig_hermitian(mat_);
    double lo = e.values.back();
    if (lo < -tol) {
      std::ostringstream msg;
      msg << "DensityMatrix: minimum eigenvalue " << lo << " below -" << tol;
      throw std::invalid_argument(msg.str());
    }
    if (lo < 0.0) {
      // Rebuild from clamped spectrum so the stored matrix is exactly PSD.
      int d = mat_.dim();
      double s = 0.0;
      for (double& v : e.values) {
        v = std::max(v, 0.0);
        s += v;
      }
      ComplexMatrix rebuilt(d, d);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
          cplx acc = 0.0;
          for (int k = 0; k < d; ++k)
            acc += e.values[static_cast<std::size_t>(k)] * e.vectors.at(r, k) *
                   std::conj(e.vectors.at(c, k));
          rebuilt.at(r, c) = acc / s;
        }
      mat_ = HermitianMatrix::from_complex(rebuilt, 1e-6);
    } else if (tr != 1.0) {
      mat_ *= 1.0 / tr;
    }
  }

  /// Projector onto the (normalized) complex vector v.
  static DensityMatrix pure(const std::vector<cplx>& v) {
    int d = static_cast<int>(v.size());
    double n2 = 0.0;
    for (const cplx& c : v) n2 += std::norm(c);
    if (n2 <= 0.0) throw std::invalid_argument("DensityMatrix::pure: zero vector");
    HermitianMatrix m(d);
    for (int r = 0; r < d; ++r)
      for (int c = r; c < d; ++c) m.set(r, c, v[static_cast<std::size_t>(r)] * std::conj(v[static_cast<std::size_t>(c)]) / n2);
    return DensityMatrix(m);
  }

  static DensityMatrix basis_state(int d, int j) {
    std::vector<cplx> v(static_cast<std::size_t>(d), 0.0);
    v[static_cast<std::size_t>(j)] = 1.0;
    return pure(v);
  }

  static DensityMatrix maximally_mixed(int d) {
    HermitianMatrix m = HermitianMatrix::identity(d);
    m *= 1.0 / d;
    return DensityMatrix(m);
  }

  int dim() const { return mat_.dim(); }
  const HermitianMatrix& mat() const { return mat_; }
  const cplx& operator()(int r, int c) const { return mat_(r, c); }

 private:
  HermitianMatrix mat_;
};

/// Measurement: PSD elements summing to the identity, indexed by label.
class Povm {
 public:
  Povm(std::vector<HermitianMatrix> outcomes, double psd_tol = 1e-9, double sum_tol = 1e-8)
      : outcomes_(std::move(outcomes)) {
    if (outcomes_.empty()) throw std::invalid_argument("Povm: no outcomes");
    int d = outcomes_.front().dim();
    HermitianMatrix sum(d);
    for (const HermitianMatrix& p : outcomes_) {
      if (p.dim() != d) throw std::invalid_argument("Povm: mixed dimensions");
      if (lambda_min(p) < -psd_tol) {
        std::ostringstream msg;
        msg << "Povm: element eigenvalue " << lambda_min(p) << " below -" << psd_tol;
        throw std::invalid_argument(msg.str());
      }
      sum += p;
    }
    sum -= HermitianMatrix::identity(d);
    if (sum.max_abs() > sum_tol) {
      std::ostringstream msg;
      msg << "Povm: completeness defect " << sum.max_abs() << " exceeds " << sum_tol;
      throw std::invalid_argument(msg.str());
    }
  }

  int size() const { return static_cast<int>(outcomes_.size()); }
  int dim() const { return outcomes_.front().dim(); }
  const HermitianMatrix& element(int u) const { return outcomes_[static_cast<std::size_t>(u)]; }

 private:
  std::vector<HermitianMatrix> outcomes_;
};

/// Joint probability distribution over U x X (binary X) or U x Y x X.
/// Storage is u-major, then y (when present), then x.
class Encoding {
 public:
  Encoding(std::vector<std::string> labels_u, int num_y, std::vector<double> probs)
      : labels_u_(std::move(labels_u)), num_y_(num_y), probs_(std::move(probs)) {
    if (labels_u_.empty()) throw std::invalid_argument("Encoding: empty label set");
    if (num_y_ < 0) throw std::invalid_argument("Encoding: negative |Y|");
    std::size_t cells = labels_u_.size() * static_cast<std::size_t>(std::max(1, num_y_)) * 2;
    if (probs_.size() != cells)
      throw std::invalid_argument("Encoding: probability table size mismatch");
    double total = 0.0;
    for (double& p : probs_) {
      if (p < -1e-12) throw std::invalid_argument("Encoding: negative probability");
      p = std::max(p, 0.0);
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      std::ostringstream msg;
      msg << "Encoding: total probability " << total << " not within 1e-12 of 1";
      throw std::invalid_argument(msg.str());
    }
    for (double& p : probs_) p /= total;
  }

  /// Binary-U two-cell helper: p(u0,x=0)=p00, p(u0,x=1)=p01, etc.
  static Encoding binary(double p00, double p01, double p10, double p11) {
    return Encoding({"a", "b"}, 0, {p00, p01, p10, p11});
  }

  int num_u() const { return static_cast<int>(labels_u_.size()); }
  bool has_y() const { return num_y_ > 0; }
  int num_y() const { return num_y_; }
  const std::vector<std::string>& labels_u() const { return labels_u_; }

  double p(int u, int x) const {
    if (has_y()) throw std::logic_error("Encoding: p(u,x) undefined when Y present");
    return probs_[static_cast<std::size_t>(u) * 2 + static_cast<std::size_t>(x)];
  }

  double p(int u, int y, int x) const {
    if (!has_y()) throw std::logic_error("Encoding: p(u,y,x) undefined without Y");
    return probs_[(static_cast<std::size_t>(u) * num_y_ + static_cast<std::size_t>(y)) * 2 +
                  static_cast<std::size_t>(x)];
  }

  double p_u(int u) const {
    std::size_t stride = static_cast<std::size_t>(std::max(1, num_y_)) * 2;
    double s = 0.0;
    for (std::size_t k = 0; k < stride; ++k) s += probs_[static_cast<std::size_t>(u) * stride + k];
    return s;
  }

 private:
  std::vector<std::string> labels_u_;
  int num_y_ = 0;
  std::vector<double> probs_;
};

/// Classical label distributed jointly with conditional quantum states. The
/// classical register is the label index; no diagonal embedding is stored.
struct CqState {
  std::vector<double> weights;
  std::vector<DensityMatrix> conditionals;
  std::vector<std::string> labels;

  int num_labels() const { return static_cast<int>(weights.size()); }
  int dim() const { return conditionals.front().dim(); }
};

namespace detail {
inline CqState finalize_cq(std::vector<double> w, std::vector<DensityMatrix> cond,
                           std::vector<std::string> labels) {
  if (w.empty()) throw std::invalid_argument("CqState: no labels with positive weight");
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return CqState{std::move(w), std::move(cond), std::move(labels)};
}
}  // namespace detail

/// Assembles the cq state with conditionals sum_x p(x|u) rho_x; labels with
/// p(u) = 0 are dropped.
inline CqState build_cq_state(const Encoding& enc, const DensityMatrix& rho0,
                              const DensityMatrix& rho1) {
  if (enc.has_y()) throw std::invalid_argument("build_cq_state: encoding has a Y register");
  if (rho0.dim() != rho1.dim()) throw std::invalid_argument("build_cq_state: dim mismatch");
  std::vector<double> w;
  std::vector<DensityMatrix> cond;
  std::vector<std::string> labels;
  for (int u = 0; u < enc.num_u(); ++u) {
    double pu = enc.p_u(u);
    if (pu <= 0.0) continue;
    HermitianMatrix m = (enc.p(u, 0) / pu) * rho0.mat() + (enc.p(u, 1) / pu) * rho1.mat();
    w.push_back(pu);
    cond.emplace_back(m);
    labels.push_back(enc.labels_u()[static_cast<std::size_t>(u)]);
  }
  return detail::finalize_cq(std::move(w), std::move(cond), std::move(labels));
}

/// Family of states spanning the full operator space of H_R; |Y| = d^2.
class CompleteCqChannel {
 public:
  explicit CompleteCqChannel(std::vector<DensityMatrix> states)
      : states_(std::move(states)) {
    if (states_.empty()) throw std::invalid_argument("CompleteCqChannel: empty");
    dim_r_ = states_.front().dim();
    int need = dim_r_ * dim_r_;
    if (static_cast<int>(states_.size()) != need)
      throw std::invalid_argument("CompleteCqChannel: need dim^2 states");
  }

  int dim_r() const { return dim_r_; }
  int size() const { return static_cast<int>(states_.size()); }
  const DensityMatrix& state(int y) const { return states_[static_cast<std::size_t>(y)]; }
  const std::vector<DensityMatrix>& states() const { return states_; }

 private:
  std::vector<DensityMatrix> states_;
  int dim_r_ = 0;
};

/// Rank of the Gram matrix trace(tau_y tau_y'), counting normalized
/// singular values above 1e-8.
inline int span_dimension(const std::vector<DensityMatrix>& states) {
  if (states.empty()) throw std::invalid_argument("span_dimension: empty list");
  int n = static_cast<int>(states.size());
  detail::RMat gram(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double g = hs_inner(states[static_cast<std::size_t>(i)].mat(), states[static_cast<std::size_t>(j)].mat());
      gram.at(i, j) = g;
      gram.at(j, i) = g;
    }
  detail::RealEig e = detail::jacobi_sym(gram, false);
  double top = e.values.front();
  if (top <= 0.0) return 0;
  int rank = 0;
  for (double v : e.values)
    if (v / top > 1e-8) ++rank;
  return rank;
}

/// The d^2 pure states |j><j|, and projectors onto (|j>+|k>)/sqrt(2) and
/// (|j>+i|k>)/sqrt(2) for j<k. Deterministic and exactly spanning.
inline CompleteCqChannel standard_complete_cq(int d) {
  if (d < 1) throw std::invalid_argument("standard_complete_cq: d must be >= 1");
  std::vector<DensityMatrix> states;
  states.reserve(static_cast<std::size_t>(d) * d);
  for (int j = 0; j < d; ++j) states.push_back(DensityMatrix::basis_state(d, j));
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      std::vector<cplx> plus(static_cast<std::size_t>(d), 0.0);
      plus[static_cast<std::size_t>(j)] = 1.0;
      plus[static_cast<std::size_t>(k)] = 1.0;
      states.push_back(DensityMatrix::pure(plus));
      std::vector<cplx> imag(static_cast<std::size_t>(d), 0.0);
      imag[static_cast<std::size_t>(j)] = 1.0;
      imag[static_cast<std::size_t>(k)] = cplx(0.0, 1.0);
      states.push_back(DensityMatrix::pure(imag));
    }
  return CompleteCqChannel(std::move(states));
}

/// Extended cq state on R (x) Q with conditionals
/// sum_{y,x} p(y,x|u) tau_y (x) rho_x.
inline CqState build_extended_cq_state(const Encoding& enc, const CompleteCqChannel& cc,
                                       const DensityMatrix& rho0, const DensityMatrix& rho1) {
  if (!enc.has_y()) throw std::invalid_argument("build_extended_cq_state: encoding lacks Y");
  if (enc.num_y() != cc.size())
    throw std::invalid_argument("build_extended_cq_state: |Y| does not match channel");
  if (rho0.dim() != rho1.dim())
    throw std::invalid_argument("build_extended_cq_state: dim mismatch");
  int dq = rho0.dim();
  int dr = cc.dim_r();
  std::vector<double> w;
  std::vector<DensityMatrix> cond;
  std::vector<std::string> labels;
  for (int u = 0; u < enc.num_u(); ++u) {
    double pu = enc.p_u(u);
    if (pu <= 0.0) continue;
    HermitianMatrix m(dr * dq);
    for (int y = 0; y < enc.num_y(); ++y)
      for (int x = 0; x < 2; ++x) {
        double pyx = enc.p(u, y, x);
        if (pyx <= 0.0) continue;
        const DensityMatrix& rho = (x == 0) ? rho0 : rho1;
        HermitianMatrix term = tensor(cc.state(y).mat(), rho.mat());
        term *= pyx / pu;
        m += term;
      }
    w.push_back(pu);
    cond.emplace_back(m);
    labels.push_back(enc.labels_u()[static_cast<std::size_t>(u)]);
  }
  return detail::finalize_cq(std::move(w), std::move(cond), std::move(labels));
}

}  // namespace qsc
