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
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace qsc::detail {

// Dense real square matrix, row-major. Internal workhorse of the SDP engine;
// not part of the public API.
struct RMat {
  int n = 0;
  std::vector<double> a;

  RMat() = default;
  explicit RMat(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, 0.0) {}

  double& at(int r, int c) { return a[static_cast<std::size_t>(r) * n + c]; }
  double at(int r, int c) const { return a[static_cast<std::size_t>(r) * n + c]; }

  static RMat identity(int dim) {
    RMat m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
  }

  void axpy(double alpha, const RMat& other) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += alpha * other.a[i];
  }

  void scale(double alpha) {
    for (double& v : a) v *= alpha;
  }

  void symmetrize() {
    for (int r = 0; r < n; ++r)
      for (int c = r + 1; c < n; ++c) {
        double m = 0.5 * (at(r, c) + at(c, r));
        at(r, c) = m;
        at(c, r) = m;
      }
  }

  double trace() const {
    double t = 0.0;
    for (int i = 0; i < n; ++i) t += at(i, i);
    return t;
  }

  double frob() const {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
  }
};

inline double dot(const RMat& x, const RMat& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.a.size(); ++i) s += x.a[i] * y.a[i];
  return s;
}

inline RMat transpose(const RMat& x) {
  RMat t(x.n);
  for (int r = 0; r < x.n; ++r)
    for (int c = 0; c < x.n; ++c) t.at(c, r) = x.at(r, c);
  return t;
}

inline RMat mul(const RMat& x, const RMat& y) {
  RMat z(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      double xv = x.at(i, k);
      if (xv == 0.0) continue;
      for (int j = 0; j < x.n; ++j) z.at(i, j) += xv * y.at(k, j);
    }
  return z;
}

// L such that A = L L^T, L lower triangular. Returns false when a pivot is
// not strictly positive (A not positive definite to working precision).
inline bool cholesky(const RMat& A, RMat& L) {
  int n = A.n;
  L = RMat(n);
  for (int j = 0; j < n; ++j) {
    double d = A.at(j, j);
    for (int k = 0; k < j; ++k) d -= L.at(j, k) * L.at(j, k);
    if (!(d > 0.0)) return false;
    double root = std::sqrt(d);
    L.at(j, j) = root;
    for (int i = j + 1; i < n; ++i) {
      double s = A.at(i, j);
      for (int k = 0; k < j; ++k) s -= L.at(i, k) * L.at(j, k);
      L.at(i, j) = s / root;
    }
  }
  return true;
}

// Solves L x = b in place (L lower triangular).
inline void solve_lower(const RMat& L, std::vector<double>& b) {
  int n = L.n;
  for (int i = 0; i < n; ++i) {
    double s = b[static_cast<std::size_t>(i)];
    for (int k = 0; k < i; ++k) s -= L.at(i, k) * b[static_cast<std::size_t>(k)];
    b[static_cast<std::size_t>(i)] = s / L.at(i, i);
  }
}

// Solves L^T x = b in place.
inline void solve_lower_t(const RMat& L, std::vector<double>& b) {
  int n = L.n;
  for (int i = n - 1; i >= 0; --i) {
    double s = b[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < n; ++k) s -= L.at(k, i) * b[static_cast<std::size_t>(k)];
    b[static_cast<std::size_t>(i)] = s / L.at(i, i);
  }
}

// B <- L^{-1} B for a full matrix B (column-wise forward substitution).
inline void solve_lower_mat(const RMat& L, RMat& B) {
  int n = L.n;
  for (int c = 0; c < n; ++c) {
    for (int i = 0; i < n; ++i) {
      double s = B.at(i, c);
      for (int k = 0; k < i; ++k) s -= L.at(i, k) * B.at(k, c);
      B.at(i, c) = s / L.at(i, i);
    }
  }
}

// B <- L^{-1} B L^{-T}, i.e. the congruence L^{-1} B L^{-T} for symmetric B.
inline RMat congruence_inv(const RMat& L, const RMat& B) {
  RMat T = B;
  solve_lower_mat(L, T);  // T = L^{-1} B
  // Now need T L^{-T}: solve (L X^T = T^T) columnwise, via rows of T.
  int n = L.n;
  RMat R(n);
  for (int r = 0; r < n; ++r) {
    std::vector<double> row(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) row[static_cast<std::size_t>(c)] = T.at(r, c);
    solve_lower(L, row);  // solves L y = row^T, giving y = L^{-1} T(r,:)^T
    for (int c = 0; c < n; ++c) R.at(r, c) = row[static_cast<std::size_t>(c)];
  }
  R.symmetrize();
  return R;
}

struct RealEig {
  std::vector<double> values;  // descending
  RMat vectors;                // columns are eigenvectors (when requested)
};

// Cyclic Jacobi for real symmetric matrices. Throws on non-convergence with
// the residual off-diagonal norm in the message.
inline RealEig jacobi_sym(RMat A, bool want_vectors, int max_sweeps = 80) {
  int n = A.n;
  RMat V = want_vectors ? RMat::identity(n) : RMat();
  double scale = A.frob();
  if (scale == 0.0) scale = 1.0;
  double tol = 1e-15 * scale;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A.at(p, q) * A.at(p, q);
    off = std::sqrt(2.0 * off);
    if (off <= tol) {
      RealEig out;
      out.values.resize(static_cast<std::size_t>(n));
      std::vector<int> order(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
      std::sort(order.begin(), order.end(),
                [&](int x, int y) { return A.at(x, x) > A.at(y, y); });
      for (int i = 0; i < n; ++i) out.values[static_cast<std::size_t>(i)] = A.at(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
      if (want_vectors) {
        out.vectors = RMat(n);
        for (int c = 0; c < n; ++c)
          for (int r = 0; r < n; ++r) out.vectors.at(r, c) = V.at(r, order[static_cast<std::size_t>(c)]);
      }
      return out;
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = A.at(p, q);
        if (std::abs(apq) <= 1e-18 * scale) continue;
        double tau = (A.at(q, q) - A.at(p, p)) / (2.0 * apq);
        double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        // A <- G^T A G with the Givens rotation G in the (p,q) plane.
        for (int k = 0; k < n; ++k) {
          double akp = A.at(k, p), akq = A.at(k, q);
          A.at(k, p) = c * akp - s * akq;
          A.at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = A.at(p, k), aqk = A.at(q, k);
          A.at(p, k) = c * apk - s * aqk;
          A.at(q, k) = s * apk + c * aqk;
        }
        if (want_vectors) {
          for (int k = 0; k < n; ++k) {
            double vkp = V.at(k, p), vkq = V.at(k, q);
            V.at(k, p) = c * vkp - s * vkq;
            V.at(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
  }
  double off = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) off += A.at(p, q) * A.at(p, q);
  std::ostringstream msg;
  msg << "jacobi_sym failed to converge: off-diagonal residual " << std::sqrt(2.0 * off);
  throw std::runtime_error(msg.str());
}

inline double lambda_min(const RMat& A) {
  RealEig e = jacobi_sym(A, false);
  return e.values.back();
}

inline double lambda_max(const RMat& A) {
  RealEig e = jacobi_sym(A, false);
  return e.values.front();
}

}  // namespace qsc::detail
