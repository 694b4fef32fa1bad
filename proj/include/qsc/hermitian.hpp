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
#include <complex>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace qsc {

using cplx = std::complex<double>;

/// General dense complex matrix, row-major. Used for eigenvector bases and
/// non-Hermitian intermediates (products, commutators).
struct ComplexMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<cplx> a;

  ComplexMatrix() = default;
  ComplexMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

  cplx& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  const cplx& at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
  cplx& operator()(int r, int c) { return at(r, c); }
  const cplx& operator()(int r, int c) const { return at(r, c); }

  static ComplexMatrix identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(cols, rows);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m.at(c, r) = std::conj(at(r, c));
    return m;
  }
};

inline ComplexMatrix mul(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.cols != y.rows) throw std::invalid_argument("mul: dimension mismatch");
  ComplexMatrix z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      cplx xv = x.at(i, k);
      if (xv == cplx{}) continue;
      for (int j = 0; j < y.cols; ++j) z.at(i, j) += xv * y.at(k, j);
    }
  return z;
}

/// Square complex matrix maintained exactly Hermitian: construction
/// symmetrizes via (M + M^dagger)/2 and rejects inputs whose anti-Hermitian
/// part exceeds the given tolerance in max-norm.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim) {
    if (dim <= 0) throw std::invalid_argument("HermitianMatrix: dim must be positive");
  }

  static HermitianMatrix identity(int dim) {
    HermitianMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
    return m;
  }

  /// Validating constructor from row-major entries.
  static HermitianMatrix from_entries(int dim, const std::vector<cplx>& entries,
                                      double tol = 1e-9) {
    if (dim <= 0) throw std::invalid_argument("HermitianMatrix: dim must be positive");
    if (entries.size() != static_cast<std::size_t>(dim) * dim)
      throw std::invalid_argument("HermitianMatrix: entry count does not match dim");
    double defect = 0.0;
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) {
        cplx anti = 0.5 * (entries[static_cast<std::size_t>(r) * dim + c] -
                           std::conj(entries[static_cast<std::size_t>(c) * dim + r]));
        defect = std::max(defect, std::abs(anti));
      }
    if (defect > tol) {
      std::ostringstream msg;
      msg << "HermitianMatrix: anti-Hermitian part " << defect << " exceeds tolerance " << tol;
      throw std::invalid_argument(msg.str());
    }
    HermitianMatrix m(dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c)
        m.a_[static_cast<std::size_t>(r) * dim + c] =
            0.5 * (entries[static_cast<std::size_t>(r) * dim + c] +
                   std::conj(entries[static_cast<std::size_t>(c) * dim + r]));
    for (int i = 0; i < dim; ++i)
      m.a_[static_cast<std::size_t>(i) * dim + i] = m.a_[static_cast<std::size_t>(i) * dim + i].real();
    return m;
  }

  static HermitianMatrix from_complex(const ComplexMatrix& m, double tol = 1e-9) {
    if (m.rows != m.cols) throw std::invalid_argument("HermitianMatrix: matrix not square");
    return from_entries(m.rows, m.a, tol);
  }

  int dim() const { return dim_; }

  const cplx& operator()(int r, int c) const {
    return a_[static_cast<std::size_t>(r) * dim_ + c];
  }

  /// Sets (r,c) and mirrors to (c,r); diagonal entries keep only their real part.
  void set(int r, int c, cplx v) {
    if (r == c) v = v.real();
    a_[static_cast<std::size_t>(r) * dim_ + c] = v;
    a_[static_cast<std::size_t>(c) * dim_ + r] = std::conj(v);
  }

  const std::vector<cplx>& data() const { return a_; }

  ComplexMatrix to_complex() const {
    ComplexMatrix m(dim_, dim_);
    m.a = a_;
    return m;
  }

  double trace() const {
    double t = 0.0;
    for (int i = 0; i < dim_; ++i) t += operator()(i, i).real();
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (const cplx& v : a_) m = std::max(m, std::abs(v));
    return m;
  }

  double frob() const {
    double s = 0.0;
    for (const cplx& v : a_) s += std::norm(v);
    return std::sqrt(s);
  }

  HermitianMatrix& operator+=(const HermitianMatrix& o) {
    check_same_dim(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }

  HermitianMatrix& operator-=(const HermitianMatrix& o) {
    check_same_dim(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }

  HermitianMatrix& operator*=(double s) {
    for (cplx& v : a_) v *= s;
    return *this;
  }

  friend HermitianMatrix operator+(HermitianMatrix x, const HermitianMatrix& y) { return x += y; }
  friend HermitianMatrix operator-(HermitianMatrix x, const HermitianMatrix& y) { return x -= y; }
  friend HermitianMatrix operator*(double s, HermitianMatrix x) { return x *= s; }

 private:
  void check_same_dim(const HermitianMatrix& o) const {
    if (o.dim_ != dim_) throw std::invalid_argument("HermitianMatrix: dimension mismatch");
  }

  int dim_ = 0;
  std::vector<cplx> a_;
};

inline double max_abs_diff(const HermitianMatrix& x, const HermitianMatrix& y) {
  HermitianMatrix d = x;
  d -= y;
  return d.max_abs();
}

/// Hilbert-Schmidt inner product tr(A B); real for Hermitian arguments.
inline double hs_inner(const HermitianMatrix& x, const HermitianMatrix& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("hs_inner: dimension mismatch");
  double s = 0.0;
  const auto& xa = x.data();
  const auto& ya = y.data();
  for (std::size_t i = 0; i < xa.size(); ++i)
    s += xa[i].real() * ya[i].real() + xa[i].imag() * ya[i].imag();
  return s;
}

struct EigResult {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // unitary; column k pairs with values[k]
};

/// Cyclic Jacobi eigensolver for Hermitian matrices. Each pivot applies a
/// phase rotation that makes the pivot entry real, then a real Givens
/// rotation that annihilates it; both steps preserve Hermiticity. Throws on
/// non-convergence with the residual off-diagonal norm in the message.
inline EigResult eig_hermitian(const HermitianMatrix& h) {
  int n = h.dim();
  ComplexMatrix A = h.to_complex();
  ComplexMatrix V = ComplexMatrix::identity(n);
  double scale = h.frob();
  if (scale == 0.0) scale = 1.0;
  double tol = 1e-14 * scale;
  const int max_sweeps = 60;

  auto off_norm = [&]() {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) s += std::norm(A.at(p, q));
    return std::sqrt(2.0 * s);
  };

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= tol) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        cplx apq = A.at(p, q);
        double r = std::abs(apq);
        if (r <= 1e-18 * scale) continue;
        // Phase step: scale row/column q so the pivot becomes real positive.
        cplx e = std::conj(apq) / r;
        for (int k = 0; k < n; ++k) A.at(k, q) *= e;
        for (int k = 0; k < n; ++k) A.at(q, k) *= std::conj(e);
        for (int k = 0; k < n; ++k) V.at(k, q) *= e;
        // Real Givens step on the now-real 2x2 pivot block.
        double app = A.at(p, p).real();
        double aqq = A.at(q, q).real();
        double tau = (aqq - app) / (2.0 * r);
        double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          cplx akp = A.at(k, p), akq = A.at(k, q);
          A.at(k, p) = c * akp - s * akq;
          A.at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          cplx apk = A.at(p, k), aqk = A.at(q, k);
          A.at(p, k) = c * apk - s * aqk;
          A.at(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          cplx vkp = V.at(k, p), vkq = V.at(k, q);
          V.at(k, p) = c * vkp - s * vkq;
          V.at(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  double residual = off_norm();
  if (residual > tol * 10.0 && residual > 1e-12 * scale) {
    std::ostringstream msg;
    msg << "eig_hermitian failed to converge: off-diagonal residual " << residual;
    throw std::runtime_error(msg.str());
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return A.at(x, x).real() > A.at(y, y).real(); });
  EigResult out;
  out.values.resize(static_cast<std::size_t>(n));
  out.vectors = ComplexMatrix(n, n);
  for (int c = 0; c < n; ++c) {
    out.values[static_cast<std::size_t>(c)] = A.at(order[static_cast<std::size_t>(c)], order[static_cast<std::size_t>(c)]).real();
    for (int r = 0; r < n; ++r) out.vectors.at(r, c) = V.at(r, order[static_cast<std::size_t>(c)]);
  }
  return out;
}

/// Sum of absolute eigenvalues (Schatten 1-norm).
inline double trace_norm(const HermitianMatrix& h) {
  EigResult e = eig_hermitian(h);
  double s = 0.0;
  for (double v : e.values) s += std::abs(v);
  return s;
}

inline double lambda_min(const HermitianMatrix& h) {
  return eig_hermitian(h).values.back();
}

inline double lambda_max(const HermitianMatrix& h) {
  return eig_hermitian(h).values.front();
}

/// Kronecker product; index convention (a, b) -> a * dim(B) + b.
inline HermitianMatrix tensor(const HermitianMatrix& x, const HermitianMatrix& y) {
  int dx = x.dim(), dy = y.dim();
  HermitianMatrix out(dx * dy);
  for (int r1 = 0; r1 < dx; ++r1)
    for (int c1 = 0; c1 < dx; ++c1)
      for (int r2 = 0; r2 < dy; ++r2)
        for (int c2 = 0; c2 < dy; ++c2)
          out.set(r1 * dy + r2, c1 * dy + c2, x(r1, c1) * y(r2, c2));
  return out;
}

enum class Subsystem { first, second };

/// Partial trace over one tensor factor of a matrix on H_A (x) H_B.
inline HermitianMatrix partial_trace(const HermitianMatrix& m, int dim_a, int dim_b,
                                     Subsystem keep) {
  if (m.dim() != dim_a * dim_b)
    throw std::invalid_argument("partial_trace: dims do not factor the matrix");
  if (keep == Subsystem::first) {
    HermitianMatrix out(dim_a);
    for (int a = 0; a < dim_a; ++a)
      for (int a2 = a; a2 < dim_a; ++a2) {
        cplx s = 0.0;
        for (int b = 0; b < dim_b; ++b) s += m(a * dim_b + b, a2 * dim_b + b);
        out.set(a, a2, s);
      }
    return out;
  }
  HermitianMatrix out(dim_b);
  for (int b = 0; b < dim_b; ++b)
    for (int b2 = b; b2 < dim_b; ++b2) {
      cplx s = 0.0;
      for (int a = 0; a < dim_a; ++a) s += m(a * dim_b + b, a * dim_b + b2);
      out.set(b, b2, s);
    }
  return out;
}

/// Orthonormal basis of the real space of d x d Hermitian matrices under the
/// Hilbert-Schmidt inner product: diagonal units, then symmetric and
/// antisymmetric off-diagonal pairs scaled by 1/sqrt(2).
inline std::vector<HermitianMatrix> hermitian_basis(int d) {
  std::vector<HermitianMatrix> out;
  out.reserve(static_cast<std::size_t>(d) * d);
  const double r = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j) {
    HermitianMatrix m(d);
    m.set(j, j, 1.0);
    out.push_back(std::move(m));
  }
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      HermitianMatrix s(d);
      s.set(j, k, r);
      out.push_back(std::move(s));
      HermitianMatrix a(d);
      a.set(j, k, cplx(0.0, -r));
      out.push_back(std::move(a));
    }
  return out;
}

}  // namespace qsc
