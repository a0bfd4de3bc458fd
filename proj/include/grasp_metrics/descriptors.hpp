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
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "grasp_metrics/error.hpp"
#include "grasp_metrics/pose.hpp"

namespace grasp_metrics {

enum class DescriptorId { Identity, Geometric, DenseT, Spectral };

inline constexpr std::array<DescriptorId, 4> kAllDescriptors = {
    DescriptorId::Identity, DescriptorId::Geometric, DescriptorId::DenseT,
    DescriptorId::Spectral};

inline constexpr std::size_t kIdentityDim = kNumCoords;                                  // 42
inline constexpr std::size_t kGeometricDim = (kNumPoints - 1) + kNumPhalanges + kNumAdjacentPhalanges;  // 43
inline constexpr std::size_t kDenseTDim = kNumPoints * (kNumPoints - 1) / 2;             // 210
inline constexpr std::size_t kSpectralDim = kNumPoints + kNumPoints * kNumPoints;        // 462

inline constexpr std::size_t descriptor_dim(DescriptorId id) {
  switch (id) {
    case DescriptorId::Identity: return kIdentityDim;
    case DescriptorId::Geometric: return kGeometricDim;
    case DescriptorId::DenseT: return kDenseTDim;
    case DescriptorId::Spectral: return kSpectralDim;
  }
  return 0;
}

inline constexpr std::string_view descriptor_name(DescriptorId id) {
  switch (id) {
    case DescriptorId::Identity: return "identity";
    case DescriptorId::Geometric: return "geometric";
    case DescriptorId::DenseT: return "denset";
    case DescriptorId::Spectral: return "spectral";
  }
  return "";
}

/// Case-insensitive; throws UnknownDescriptor.
inline DescriptorId parse_descriptor(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (DescriptorId id : kAllDescriptors) {
    if (lower == descriptor_name(id)) return id;
  }
  throw Error(Errc::UnknownDescriptor, "no descriptor named '" + std::string(name) + "'");
}

struct DescriptorVector {
  DescriptorId id;
  Eigen::VectorXd values;
};

/// Rows are descriptor entries, columns the flattened (x0, y0, ..., x20, y20).
struct DescriptorJacobian {
  DescriptorId id;
  Eigen::MatrixXd matrix;
};

inline constexpr double kDegenerateLength = 1e-12;

namespace detail {

inline double distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// |u x v| / (|u| |v|) in [0, 1]; 0 when either vector is degenerate.
inline double abs_sine(double ux, double uy, double vx, double vy) {
  const double nu = std::hypot(ux, uy);
  const double nv = std::hypot(vx, vy);
  if (nu < kDegenerateLength || nv < kDegenerateLength) return 0.0;
  return std::clamp(std::abs(ux * vy - uy * vx) / (nu * nv), 0.0, 1.0);
}

}  // namespace detail

// Entry layouts (part of the on-disk format, do not reorder):
//   identity  : x0, y0, x1, y1, ..., x20, y20
//   geometric : |p_j - p_0| for j = 1..20, then the 14 phalange lengths in
//               topology order, then the 9 adjacent-phalange sines
//   denset    : |p_i - p_j| for i < j, lexicographic
//   spectral  : 21 Laplacian eigenvalues ascending, then the matching
//               eigenvectors stacked column by column

inline void identity_into(const HandPose& pose, std::span<double> out) {
  for (std::size_t i = 0; i < kNumPoints; ++i) {
    out[2 * i] = pose[i].x;
    out[2 * i + 1] = pose[i].y;
  }
}

inline void geometric_into(const HandPose& pose, const SkeletonTopology& topo,
                           std::span<double> out) {
  std::size_t k = 0;
  for (std::size_t j = 0; j < kNumPoints; ++j) {
    if (j == topo.root) continue;
    out[k++] = detail::distance(pose[topo.root], pose[j]);
  }
  for (const auto& [tail, head] : topo.phalanges) {
    out[k++] = detail::distance(pose[tail], pose[head]);
  }
  for (const auto& [first, second] : topo.adjacent_phalange_pairs) {
    const auto [a, b] = topo.phalanges[first];
    const auto [c, d] = topo.phalanges[second];
    out[k++] = detail::abs_sine(pose[b].x - pose[a].x, pose[b].y - pose[a].y,
                                pose[d].x - pose[c].x, pose[d].y - pose[c].y);
  }
}

inline void denset_into(const HandPose& pose, std::span<double> out) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < kNumPoints; ++i) {
    for (std::size_t j = i + 1; j < kNumPoints; ++j) {
      out[k++] = detail::distance(pose[i], pose[j]);
    }
  }
}

using LaplacianMatrix = Eigen::Matrix<double, kNumPoints, kNumPoints>;

/// Bone-length weighted Laplacian: -d(u, v) on skeleton edges, weighted
/// degree on the diagonal.
inline LaplacianMatrix weighted_laplacian(const HandPose& pose, const SkeletonTopology& topo) {
  LaplacianMatrix m = LaplacianMatrix::Zero();
  for (const auto& [u, v] : topo.edges) {
    const double w = detail::distance(pose[u], pose[v]);
    m(u, v) -= w;
    m(v, u) -= w;
    m(u, u) += w;
    m(v, v) += w;
  }
  return m;
}

inline void spectral_into(const HandPose& pose, const SkeletonTopology& topo,
                          std::span<double> out) {
  const LaplacianMatrix m = weighted_laplacian(pose, topo);
  Eigen::SelfAdjointEigenSolver<LaplacianMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::EigenFailure, "Laplacian eigensolver did not converge");
  }
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  constexpr std::size_t n = kNumPoints;
  for (std::size_t k = 0; k < n; ++k) out[k] = values[static_cast<Eigen::Index>(k)];
  for (std::size_t col = 0; col < n; ++col) {
    // Make the largest-magnitude component positive; first index wins ties.
    std::size_t pivot = 0;
    double best = -1.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double mag = std::abs(vectors(r, col));
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    const double sign = vectors(pivot, col) < 0.0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < n; ++r) out[n + col * n + r] = sign * vectors(r, col);
  }
}

inline void describe_into(const HandPose& pose, DescriptorId id, std::span<double> out) {
  const SkeletonTopology& topo = canonical_topology();
  switch (id) {
    case DescriptorId::Identity: identity_into(pose, out); return;
    case DescriptorId::Geometric: geometric_into(pose, topo, out); return;
    case DescriptorId::DenseT: denset_into(pose, out); return;
    case DescriptorId::Spectral: spectral_into(pose, topo, out); return;
  }
}

inline DescriptorVector describe(const HandPose& pose, DescriptorId id) {
  DescriptorVector v{id, Eigen::VectorXd(static_cast<Eigen::Index>(descriptor_dim(id)))};
  describe_into(pose, id, {v.values.data(), static_cast<std::size_t>(v.values.size())});
  return v;
}

inline DescriptorVector identity_desc(const HandPose& pose) {
  return describe(pose, DescriptorId::Identity);
}
inline DescriptorVector geometric_desc(const HandPose& pose,
                                       const SkeletonTopology& topo = canonical_topology()) {
  DescriptorVector v{DescriptorId::Geometric, Eigen::VectorXd(kGeometricDim)};
  geometric_into(pose, topo, {v.values.data(), kGeometricDim});
  return v;
}
inline DescriptorVector denset_desc(const HandPose& pose) {
  return describe(pose, DescriptorId::DenseT);
}
inline DescriptorVector spectral_desc(const HandPose& pose,
                                      const SkeletonTopology& topo = canonical_topology()) {
  DescriptorVector v{DescriptorId::Spectral, Eigen::VectorXd(kSpectralDim)};
  spectral_into(pose, topo, {v.values.data(), kSpectralDim});
  return v;
}

/// Name-keyed handle returned by descriptor_lookup.
struct Descriptor {
  DescriptorId id;

  std::string_view name() const { return descriptor_name(id); }
  std::size_t dim() const { return descriptor_dim(id); }
  bool differentiable() const { return id != DescriptorId::Spectral; }
  DescriptorVector operator()(const HandPose& pose) const { return describe(pose, id); }
};

inline Descriptor descriptor_lookup(std::string_view name) {
  return Descriptor{parse_descriptor(name)};
}

namespace detail {

using JacobianRow = Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>>;

/// d|p_i - p_j| / d(coords); zero when the points coincide.
inline void distance_gradient(const HandPose& pose, std::size_t i, std::size_t j,
                              JacobianRow row) {
  const double dx = pose[i].x - pose[j].x;
  const double dy = pose[i].y - pose[j].y;
  const double d = std::hypot(dx, dy);
  if (d < kDegenerateLength) return;
  row(2 * i) += dx / d;
  row(2 * i + 1) += dy / d;
  row(2 * j) -= dx / d;
  row(2 * j + 1) -= dy / d;
}

/// Gradient of |u x v| / (|u||v|) with u = p_b - p_a and v = p_d - p_c.
/// At u x v = 0 the subgradient 0 is taken for the absolute value.
inline void sine_gradient(const HandPose& pose, IndexPair u_bone, IndexPair v_bone,
                          JacobianRow row) {
  const auto [a, b] = u_bone;
  const auto [c, d] = v_bone;
  const double ux = pose[b].x - pose[a].x, uy = pose[b].y - pose[a].y;
  const double vx = pose[d].x - pose[c].x, vy = pose[d].y - pose[c].y;
  const double nu2 = ux * ux + uy * uy;
  const double nv2 = vx * vx + vy * vy;
  const double nu = std::sqrt(nu2);
  const double nv = std::sqrt(nv2);
  if (nu < kDegenerateLength || nv < kDegenerateLength) return;
  const double cross = ux * vy - uy * vx;
  const double sign = (cross > 0.0) - (cross < 0.0);
  const double s = std::abs(cross) / (nu * nv);
  const double inv = 1.0 / (nu * nv);
  const double gux = sign * vy * inv - s * ux / nu2;
  const double guy = -sign * vx * inv - s * uy / nu2;
  const double gvx = -sign * uy * inv - s * vx / nv2;
  const double gvy = sign * ux * inv - s * vy / nv2;
  row(2 * b) += gux;
  row(2 * b + 1) += guy;
  row(2 * a) -= gux;
  row(2 * a + 1) -= guy;
  row(2 * d) += gvx;
  row(2 * d + 1) += gvy;
  row(2 * c) -= gvx;
  row(2 * c + 1) -= gvy;
}

}  // namespace detail

/// Analytic Jacobian for identity, geometric and denset. Spectral throws
/// UnsupportedDescriptor.
inline DescriptorJacobian descriptor_jacobian(const HandPose& pose, DescriptorId id) {
  const auto dim = static_cast<Eigen::Index>(descriptor_dim(id));
  DescriptorJacobian jac{id, Eigen::MatrixXd::Zero(dim, kNumCoords)};
  Eigen::MatrixXd& j = jac.matrix;
  switch (id) {
    case DescriptorId::Identity:
      j.setIdentity();
      break;
    case DescriptorId::Geometric: {
      const SkeletonTopology& topo = canonical_topology();
      Eigen::Index k = 0;
      for (std::size_t p = 0; p < kNumPoints; ++p) {
        if (p == topo.root) continue;
        detail::distance_gradient(pose, topo.root, p, j.row(k++));
      }
      for (const auto& [tail, head] : topo.phalanges) {
        detail::distance_gradient(pose, tail, head, j.row(k++));
      }
      for (const auto& [first, second] : topo.adjacent_phalange_pairs) {
        detail::sine_gradient(pose, topo.phalanges[first], topo.phalanges[second],
                              j.row(k++));
      }
      break;
    }
    case DescriptorId::DenseT: {
      Eigen::Index k = 0;
      for (std::size_t a = 0; a < kNumPoints; ++a) {
        for (std::size_t b = a + 1; b < kNumPoints; ++b) {
          detail::distance_gradient(pose, a, b, j.row(k++));
        }
      }
      break;
    }
    case DescriptorId::Spectral:
      throw Error(Errc::UnsupportedDescriptor,
                  "spectral descriptor has no analytic Jacobian");
  }
  return jac;
}

}  // namespace grasp_metrics
