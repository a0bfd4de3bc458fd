/* Copyright 2026 The grasp_metrics Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "grasp_metrics/error.hpp"

namespace grasp_metrics {

/// Square, finite, symmetric matrix. Construction checks symmetry to a
/// relative tolerance of 1e-10 and stores the exactly symmetrized value.
class SymMatrix {
 public:
  SymMatrix() = default;

  explicit SymMatrix(const Eigen::MatrixXd& m) : m_(m) {
    if (m.rows() != m.cols()) {
      throw Error(Errc::DimensionMismatch, "matrix is " + std::to_string(m.rows()) + "x" +
                                               std::to_string(m.cols()) + ", not square");
    }
    if (!m.allFinite()) throw Error(Errc::NumericalFailure, "matrix has non-finite entries");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (m.size() > 0 && (m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
      throw Error(Errc::NumericalFailure, "matrix is not symmetric");
    }
    m_ = 0.5 * (m + m.transpose());
  }

  static SymMatrix identity(Eigen::Index n) {
    return SymMatrix(Eigen::MatrixXd::Identity(n, n));
  }
  static SymMatrix zero(Eigen::Index n) { return SymMatrix(Eigen::MatrixXd::Zero(n, n)); }

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  double operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

 private:
  Eigen::MatrixXd m_;
};

struct SymEig {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column k pairs with values[k]
};

inline SymEig sym_eig(const SymMatrix& m) {
  if (m.dim() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::EigenFailure, "symmetric eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace detail {

inline double psd_floor(const Eigen::VectorXd& eigenvalues) {
  const double top = eigenvalues.size() ? eigenvalues.maxCoeff() : 0.0;
  return -1e-8 * std::max(1.0, top);
}

inline void require_psd(const Eigen::VectorXd& eigenvalues, const char* what) {
  if (eigenvalues.size() && eigenvalues.minCoeff() < psd_floor(eigenvalues)) {
    throw Error(Errc::NotPsd, std::string(what) + " has eigenvalue " +
                                  std::to_string(eigenvalues.minCoeff()));
  }
}

}  // namespace detail

/// Principal square root of a near-PSD matrix; eigenvalues in the tolerance
/// band below zero are clamped to zero.
inline SymMatrix psd_sqrt(const SymMatrix& m) {
  const SymEig eig = sym_eig(m);
  detail::require_psd(eig.values, "psd_sqrt input");
  const Eigen::VectorXd root = eig.values.cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd out = eig.vectors * root.asDiagonal() * eig.vectors.transpose();
  return SymMatrix(0.5 * (out + out.transpose()));
}

struct FrechetOptions {
  /// Adds 1e-6 * I to both covariances before the square roots.
  bool regularize = false;
};

inline constexpr double kRegularizationEpsilon = 1e-6;

/// Tr(s1) + Tr(s2) - 2 Tr((R s1 R)^{1/2}) with R = s2^{1/2}.
///
/// The last trace equals the sum of singular values of s1^{1/2} R, which is
/// how it is evaluated: the singular values of a product carry absolute error
/// on the order of machine epsilon, whereas taking square roots of the
/// eigenvalues of R s1 R amplifies roundoff in rank-deficient directions to
/// sqrt(epsilon). A result in [-1e-6, 0) is reported as 0.
inline double frechet_trace_term(const SymMatrix& s1, const SymMatrix& s2,
                                 FrechetOptions options = {}) {
  if (s1.dim() != s2.dim()) {
    throw Error(Errc::DimensionMismatch, "covariances are " + std::to_string(s1.dim()) +
                                             " and " + std::to_string(s2.dim()) +
                                             " dimensional");
  }
  const Eigen::Index n = s1.dim();
  if (n == 0) return 0.0;
  Eigen::MatrixXd a = s1.matrix();
  Eigen::MatrixXd b = s2.matrix();
  if (options.regularize) {
    a.diagonal().array() += kRegularizationEpsilon;
    b.diagonal().array() += kRegularizationEpsilon;
  }
  const SymMatrix root1 = psd_sqrt(SymMatrix(a));
  const SymMatrix root2 = psd_sqrt(SymMatrix(b));
  const Eigen::MatrixXd product = root1.matrix() * root2.matrix();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(product);
  const double cross = svd.singularValues().sum();
  const double term = a.trace() + b.trace() - 2.0 * cross;
  if (!std::isfinite(term)) throw Error(Errc::NumericalFailure, "trace term is not finite");
  if (term < 0.0 && term >= -1e-6) return 0.0;
  return term;
}

}  // namespace grasp_metrics
