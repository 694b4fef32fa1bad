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

// Brute-force reference implementations used to validate the optimized
// paths. Deliberately disjoint from the main algorithms: no shared
// eigensolver and no semidefinite programming in this header.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsc/comparison.hpp"
#include "qsc/hermitian.hpp"
#include "qsc/random.hpp"
#include "qsc/states.hpp"

namespace qsc {

/// Lower bound on the binary guessing probability of a qubit cq state by
/// scanning projective measurements along Fibonacci-sphere directions plus
/// the two always-guess strategies, with pattern-search refinement around
/// the best scanned direction. In Bloch coordinates the value along
/// direction n is (1 + |n . (w0 r0 - w1 r1)|)/2, so only dot products are
/// needed; every candidate is a true measurement, so the result never
/// exceeds the optimum.
inline double oracle_pguess_qubit(const CqState& cq, int n_dirs) {
  if (cq.dim() != 2 || cq.num_labels() != 2)
    throw std::invalid_argument("oracle_pguess_qubit: needs a 2-label qubit cq state");
  if (n_dirs < 2) throw std::invalid_argument("oracle_pguess_qubit: n_dirs must be >= 2");
  auto bloch = [](const HermitianMatrix& m, double w, double out[3]) {
    out[0] = w * 2.0 * m(0, 1).real();
    out[1] = w * -2.0 * m(0, 1).imag();
    out[2] = w * (m(0, 0).real() - m(1, 1).real());
  };
  double a[3], b[3];
  bloch(cq.conditionals[0].mat(), cq.weights[0], a);
  bloch(cq.conditionals[1].mat(), cq.weights[1], b);
  double d[3] = {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  auto value = [&](const double n[3]) {
    return 0.5 * (1.0 + std::abs(n[0] * d[0] + n[1] * d[1] + n[2] * d[2]));
  };

  double best = std::max(cq.weights[0], cq.weights[1]);
  double best_n[3] = {0.0, 0.0, 1.0};
  const double golden_angle = 3.14159265358979323846 * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n_dirs; ++i) {
    double z = 1.0 - 2.0 * i / (n_dirs - 1);
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = golden_angle * i;
    double n[3] = {r * std::cos(phi), r * std::sin(phi), z};
    double v = value(n);
    if (v > best) {
      best = v;
      best_n[0] = n[0];
      best_n[1] = n[1];
      best_n[2] = n[2];
    }
  }

  // Pattern search on the sphere: probe 8 tangent offsets of shrinking
  // radius around the incumbent, renormalizing each candidate.
  double alpha = 4.0 / std::sqrt(static_cast<double>(n_dirs));
  for (int round = 0; round < 60 && alpha > 1e-9; ++round) {
    // Tangent frame at best_n.
    double e1[3];
    if (std::abs(best_n[2]) < 0.9) {
      e1[0] = -best_n[1];
      e1[1] = best_n[0];
      e1[2] = 0.0;
    } else {
      e1[0] = 0.0;
      e1[1] = -best_n[2];
      e1[2] = best_n[1];
    }
    double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
    for (double& v : e1) v /= n1;
    double e2[3] = {best_n[1] * e1[2] - best_n[2] * e1[1],
                    best_n[2] * e1[0] - best_n[0] * e1[2],
                    best_n[0] * e1[1] - best_n[1] * e1[0]};
    bool improved = false;
    for (int k = 0; k < 8; ++k) {
      double ang = 2.0 * 3.14159265358979323846 * k / 8.0;
      double c = std::cos(ang), s = std::sin(ang);
      double cand[3];
      double norm2 = 0.0;
      for (int j = 0; j < 3; ++j) {
        cand[j] = best_n[j] + alpha * (c * e1[j] + s * e2[j]);
        norm2 += cand[j] * cand[j];
      }
      double inv = 1.0 / std::sqrt(norm2);
      for (double& v : cand) v *= inv;
      double val = value(cand);
      if (val > best) {
        best = val;
        best_n[0] = cand[0];
        best_n[1] = cand[1];
        best_n[2] = cand[2];
        improved = true;
      }
    }
    if (!improved) alpha *= 0.5;
  }
  return best;
}

namespace detail {

inline double det2_herm(const HermitianMatrix& m) {
  return m(0, 0).real() * m(1, 1).real() - std::norm(m(0, 1));
}

inline double trace_norm2_closed(const HermitianMatrix& m) {
  double tr = m.trace();
  double disc = tr * tr - 4.0 * det2_herm(m);
  if (disc <= 0.0) return std::abs(tr);
  return std::max(std::abs(tr), std::sqrt(disc));
}

inline double det3_herm(const HermitianMatrix& m) {
  cplx det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
             m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  return det.real();
}

// Trigonometric eigenvalues of a 3x3 Hermitian matrix.
inline void eig3_closed(const HermitianMatrix& m, double out[3]) {
  double p1 = std::norm(m(0, 1)) + std::norm(m(0, 2)) + std::norm(m(1, 2));
  double q = m.trace() / 3.0;
  if (p1 == 0.0) {
    out[0] = m(0, 0).real();
    out[1] = m(1, 1).real();
    out[2] = m(2, 2).real();
    return;
  }
  double p2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    double dii = m(i, i).real() - q;
    p2 += dii * dii;
  }
  p2 += 2.0 * p1;
  double p = std::sqrt(p2 / 6.0);
  HermitianMatrix bmat = m;
  HermitianMatrix shift = HermitianMatrix::identity(3);
  shift *= q;
  bmat -= shift;
  bmat *= 1.0 / p;
  double r = std::clamp(det3_herm(bmat) / 2.0, -1.0, 1.0);
  double phi = std::acos(r) / 3.0;
  out[0] = q + 2.0 * p * std::cos(phi);
  out[2] = q + 2.0 * p * std::cos(phi + 2.0 * 3.14159265358979323846 / 3.0);
  out[1] = 3.0 * q - out[0] - out[2];
}

// Eigenvalues of the PSD square via power iteration with deflation by
// orthogonalization; returns the |eigenvalues| of m in some order.
inline std::vector<double> abs_spectrum_power(const HermitianMatrix& m) {
  int d = m.dim();
  ComplexMatrix m2 = mul(m.to_complex(), m.to_complex());
  std::vector<std::vector<cplx>> found;
  std::vector<double> out;
  for (int round = 0; round < d; ++round) {
    std::vector<cplx> v(static_cast<std::size_t>(d), cplx(1e-3, 0.0));
    v[static_cast<std::size_t>(round)] += 1.0;
    auto orth = [&]() {
      for (const auto& f : found) {
        cplx ip = 0.0;
        for (int i = 0; i < d; ++i) ip += std::conj(f[i]) * v[i];
        for (int i = 0; i < d; ++i) v[i] -= ip * f[i];
      }
      double n2 = 0.0;
      for (int i = 0; i < d; ++i) n2 += std::norm(v[i]);
      double n = std::sqrt(n2);
      if (n > 0.0)
        for (int i = 0; i < d; ++i) v[i] /= n;
      return n;
    };
    orth();
    double theta = 0.0;
    for (int it = 0; it < 100000; ++it) {
      std::vector<cplx> w(static_cast<std::size_t>(d), 0.0);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) w[static_cast<std::size_t>(r)] += m2.at(r, c) * v[static_cast<std::size_t>(c)];
      theta = 0.0;
      for (int i = 0; i < d; ++i) theta += (std::conj(v[static_cast<std::size_t>(i)]) * w[static_cast<std::size_t>(i)]).real();
      double res2 = 0.0;
      for (int i = 0; i < d; ++i) res2 += std::norm(w[static_cast<std::size_t>(i)] - theta * v[static_cast<std::size_t>(i)]);
      v = std::move(w);
      double n = orth();
      if (n == 0.0) break;
      if (std::sqrt(res2) <= 1e-13 * (1.0 + theta)) break;
    }
    found.push_back(v);
    out.push_back(std::sqrt(std::max(theta, 0.0)));
  }
  return out;
}

}  // namespace detail

/// Secondary trace-norm path: closed forms for d <= 3, power iteration on
/// the square with deflation for d <= 8.
inline double oracle_trace_norm(const HermitianMatrix& m) {
  int d = m.dim();
  if (d == 1) return std::abs(m(0, 0).real());
  if (d == 2) return detail::trace_norm2_closed(m);
  if (d == 3) {
    double e[3];
    detail::eig3_closed(m, e);
    return std::abs(e[0]) + std::abs(e[1]) + std::abs(e[2]);
  }
  if (d > 8) throw std::invalid_argument("oracle_trace_norm: supported up to dim 8");
  double s = 0.0;
  for (double a : detail::abs_spectrum_power(m)) s += a;
  return s;
}

struct OracleChannelResult {
  bool found = false;
  /// Sum over both pairs of ||Phi(rho_i) - sigma_i||_1 at the best point.
  double residual = std::numeric_limits<double>::infinity();
  std::optional<ChoiMatrix> choi;
  int restarts_used = 0;
};

namespace detail {

// Closed-form inverse square root of a positive definite 2x2 Hermitian
// matrix: sqrt(g) = (g + sqrt(det g) I)/sqrt(tr g + 2 sqrt(det g)), then a
// closed-form 2x2 inverse.
inline bool inv_sqrt2(const HermitianMatrix& g, ComplexMatrix& out) {
  double det = det2_herm(g);
  double tr = g.trace();
  if (det <= 0.0 || tr <= 0.0) return false;
  double sd = std::sqrt(det);
  double denom = std::sqrt(tr + 2.0 * sd);
  cplx s00 = (g(0, 0) + sd) / denom;
  cplx s01 = g(0, 1) / denom;
  cplx s10 = g(1, 0) / denom;
  cplx s11 = (g(1, 1) + sd) / denom;
  cplx dets = s00 * s11 - s01 * s10;
  if (std::abs(dets) <= 0.0) return false;
  out = ComplexMatrix(2, 2);
  out.at(0, 0) = s11 / dets;
  out.at(0, 1) = -s01 / dets;
  out.at(1, 0) = -s10 / dets;
  out.at(1, 1) = s00 / dets;
  return true;
}

struct QubitChannelSearch {
  // Cholesky-style parameters of K = L L^dagger: 4 real diagonals and 6
  // complex subdiagonals packed as 16 reals.
  std::array<double, 16> x{};

  ComplexMatrix to_l() const {
    ComplexMatrix l(4, 4);
    int k = 4;
    for (int i = 0; i < 4; ++i) {
      l.at(i, i) = x[static_cast<std::size_t>(i)];
      for (int j = 0; j < i; ++j) {
        l.at(i, j) = cplx(x[static_cast<std::size_t>(k)], x[static_cast<std::size_t>(k + 1)]);
        k += 2;
      }
    }
    return l;
  }
};

// Residual of the trace-preserving normalization of K = L L^dagger against
// the target pair; infinity when the input marginal is singular.
inline double qubit_channel_residual(const QubitChannelSearch& s, const HermitianMatrix& rho0,
                                     const HermitianMatrix& rho1, const HermitianMatrix& sigma0,
                                     const HermitianMatrix& sigma1,
                                     HermitianMatrix* j_out = nullptr) {
  ComplexMatrix l = s.to_l();
  ComplexMatrix k = mul(l, l.adjoint());
  HermitianMatrix kh = HermitianMatrix::from_complex(k, 1e-6);
  HermitianMatrix g = partial_trace(kh, 2, 2, Subsystem::first);
  ComplexMatrix ginv;
  if (!inv_sqrt2(g, ginv)) return std::numeric_limits<double>::infinity();
  ComplexMatrix lift(4, 4);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      for (int a = 0; a < 2; ++a) lift.at(r * 2 + a, c * 2 + a) = ginv.at(r, c);
  ComplexMatrix jc = mul(lift, mul(k, lift));
  HermitianMatrix j = HermitianMatrix::from_complex(jc, 1e-6);
  double res = 0.0;
  const HermitianMatrix* ins[2] = {&rho0, &rho1};
  const HermitianMatrix* tgts[2] = {&sigma0, &sigma1};
  for (int i = 0; i < 2; ++i) {
    HermitianMatrix img = apply_choi_raw(j, 2, 2, *ins[i]);
    img -= *tgts[i];
    res += trace_norm2_closed(img);
  }
  if (j_out) *j_out = j;
  return res;
}

}  // namespace detail

/// Randomized search for a qubit channel carrying rho_i to sigma_i:
/// seeded random starts over a Cholesky parametrization of the Choi matrix
/// (trace preservation restored in closed form), refined by cyclic
/// coordinate descent with golden-section line searches. found=false is not
/// a proof of infeasibility.
inline OracleChannelResult oracle_feasibility_qubit(const DensityMatrix& rho0,
                                                    const DensityMatrix& rho1,
                                                    const DensityMatrix& sigma0,
                                                    const DensityMatrix& sigma1,
                                                    int n_restarts = 8,
                                                    std::uint64_t seed = 0) {
  if (rho0.dim() != 2 || rho1.dim() != 2 || sigma0.dim() != 2 || sigma1.dim() != 2)
    throw std::invalid_argument("oracle_feasibility_qubit: all states must be qubits");
  OracleChannelResult out;
  auto objective = [&](const detail::QubitChannelSearch& s) {
    return detail::qubit_channel_residual(s, rho0.mat(), rho1.mat(), sigma0.mat(),
                                          sigma1.mat());
  };
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  HermitianMatrix best_j(4);

  for (int restart = 0; restart < n_restarts; ++restart) {
    detail::QubitChannelSearch s;
    if (restart == 0) {
      // Identity-channel start: K = psi psi^dagger with psi = (1,0,0,1),
      // realized by an L whose first column is psi (plus diagonal jitter).
      s.x = {1.0, 1e-3, 1e-3, 1e-3, 0, 0, 0, 0, 0, 0, 1.0, 0, 0, 0, 0, 0};
    } else if (restart == 1) {
      // Depolarizing start: K = I/2.
      double v = std::sqrt(0.5);
      s.x = {v, v, v, v, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    } else {
      auto rng = engine_for(seed, static_cast<std::uint64_t>(restart));
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (double& v : s.x) v = gauss(rng);
    }
    double f = objective(s);
    if (!std::isfinite(f)) continue;
    double span = 1.0;
    for (int sweep = 0; sweep < 60 && f > 1e-8; ++sweep) {
      double f_before = f;
      for (int pidx = 0; pidx < 16; ++pidx) {
        double base = s.x[static_cast<std::size_t>(pidx)];
        double a = base - span, b = base + span;
        double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
        auto eval_at = [&](double xv) {
          detail::QubitChannelSearch t = s;
          t.x[static_cast<std::size_t>(pidx)] = xv;
          return objective(t);
        };
        double f1 = eval_at(x1), f2 = eval_at(x2);
        for (int it = 0; it < 28; ++it) {
          if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = eval_at(x1);
          } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = eval_at(x2);
          }
        }
        double xbest = (f1 <= f2) ? x1 : x2;
        double fbest = std::min(f1, f2);
        if (fbest < f) {
          s.x[static_cast<std::size_t>(pidx)] = xbest;
          f = fbest;
        }
      }
      span = std::max(span * 0.7, 1e-6);
      if (f_before - f < 1e-12 && f > 1e-6) break;
    }
    out.restarts_used = restart + 1;
    if (f < out.residual) {
      HermitianMatrix j(4);
      double check = detail::qubit_channel_residual(s, rho0.mat(), rho1.mat(), sigma0.mat(),
                                                    sigma1.mat(), &j);
      out.residual = check;
      best_j = j;
    }
    if (out.residual < 1e-7) break;
  }
  out.found = out.residual < 1e-6;
  if (out.found) out.choi.emplace(best_j, 2, 2, 1e-6);
  return out;
}

}  // namespace qsc
