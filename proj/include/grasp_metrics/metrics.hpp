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
#include <chrono>
#include <cmath>
#include <cstddef>
#include <exception>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "grasp_metrics/descriptors.hpp"
#include "grasp_metrics/error.hpp"
#include "grasp_metrics/numerics.hpp"
#include "grasp_metrics/pose.hpp"

namespace grasp_metrics {

/// One descriptor vector per row, in population order.
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

/// Maps every pose through the descriptor. With threads > 1 the rows are
/// filled by contiguous chunks in parallel; the output does not depend on the
/// thread count.
inline FeatureMatrix descriptor_matrix(const PosePopulation& population, DescriptorId id,
                                       unsigned threads = 1) {
  const auto n = static_cast<Eigen::Index>(population.size());
  const auto dim = static_cast<Eigen::Index>(descriptor_dim(id));
  FeatureMatrix features(n, dim);
  auto fill = [&](Eigen::Index begin, Eigen::Index end) {
    for (Eigen::Index i = begin; i < end; ++i) {
      describe_into(population.poses[static_cast<std::size_t>(i)], id,
                    {features.row(i).data(), static_cast<std::size_t>(dim)});
    }
  };
  const auto workers = static_cast<Eigen::Index>(std::max(1u, threads));
  if (workers == 1 || n < 2 * workers) {
    fill(0, n);
    return features;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));
  const Eigen::Index chunk = (n + workers - 1) / workers;
  for (Eigen::Index w = 0; w < workers; ++w) {
    const Eigen::Index begin = w * chunk;
    const Eigen::Index end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, w, begin, end] {
      try {
        fill(begin, end);
      } catch (...) {
        failures[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return features;
}

struct PopulationStats {
  DescriptorId id;
  std::size_t count = 0;
  Eigen::VectorXd mean;
  SymMatrix cov;

  Eigen::Index dim() const { return mean.size(); }
};

/// Mean and population (1/N) covariance of a feature matrix, two passes in
/// row order.
inline PopulationStats stats_from_features(const FeatureMatrix& features, DescriptorId id) {
  const Eigen::Index n = features.rows();
  if (n == 0) throw Error(Errc::EmptyPopulation, "population is empty");
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(features.cols());
  for (Eigen::Index i = 0; i < n; ++i) mean += features.row(i).transpose();
  mean /= static_cast<double>(n);
  const FeatureMatrix centered = features.rowwise() - mean.transpose();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(features.cols(), features.cols());
  cov.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
  cov = cov.selfadjointView<Eigen::Lower>();
  cov /= static_cast<double>(n);
  return {id, static_cast<std::size_t>(n), std::move(mean), SymMatrix(cov)};
}

inline PopulationStats population_stats(const PosePopulation& population, DescriptorId id,
                                        unsigned threads = 1) {
  if (population.empty()) throw Error(Errc::EmptyPopulation, "population is empty");
  return stats_from_features(descriptor_matrix(population, id, threads), id);
}

enum class MetricKind { FFID, MMD };

inline constexpr std::string_view metric_name(MetricKind kind) {
  return kind == MetricKind::FFID ? "ffid" : "mmd";
}

struct MetricReport {
  MetricKind metric = MetricKind::FFID;
  DescriptorId descriptor = DescriptorId::Identity;
  double score = 0.0;
  std::size_t n_ref = 0;
  std::size_t n_gen = 0;
  double wall_time_seconds = 0.0;
  double precompute_seconds = 0.0;
  double evaluate_seconds = 0.0;
};

inline nlohmann::json to_json(const MetricReport& r) {
  return {
      {"metric", metric_name(r.metric)},
      {"descriptor", descriptor_name(r.descriptor)},
      {"score", r.score},
      {"n_ref", r.n_ref},
      {"n_gen", r.n_gen},
      {"wall_time_seconds", r.wall_time_seconds},
      {"precompute_seconds", r.precompute_seconds},
      {"evaluate_seconds", r.evaluate_seconds},
  };
}

namespace detail {

/// Scores in [-tolerance, 0) are floating-point noise and reported as 0.
inline double clamp_score(double score, double tolerance, std::string_view what) {
  if (!std::isfinite(score)) {
    throw Error(Errc::NumericalFailure, std::string(what) + " is not finite");
  }
  if (score < 0.0) {
    if (score >= -tolerance) return 0.0;
    throw Error(Errc::NumericalFailure,
                std::string(what) + " is negative: " + std::to_string(score));
  }
  return score;
}

}  // namespace detail

/// ||mu1 - mu2||^2 + Tr(S1 + S2 - 2 (S1 S2)^{1/2}).
inline MetricReport ffid(const PopulationStats& ref, const PopulationStats& gen,
                         FrechetOptions options = {}) {
  detail::Stopwatch clock;
  if (ref.id != gen.id) {
    throw Error(Errc::DescriptorMismatch, "statistics use descriptors '" +
                                              std::string(descriptor_name(ref.id)) + "' and '" +
                                              std::string(descriptor_name(gen.id)) + "'");
  }
  if (ref.dim() != gen.dim() || ref.cov.dim() != ref.dim() || gen.cov.dim() != gen.dim()) {
    throw Error(Errc::DimensionMismatch, "statistics dimensions differ");
  }
  const double mean_term = (ref.mean - gen.mean).squaredNorm();
  const double trace_term = frechet_trace_term(ref.cov, gen.cov, options);
  MetricReport report;
  report.metric = MetricKind::FFID;
  report.descriptor = ref.id;
  report.score = detail::clamp_score(mean_term + trace_term, 1e-6, "f-FID");
  report.n_ref = ref.count;
  report.n_gen = gen.count;
  report.evaluate_seconds = clock.seconds();
  report.wall_time_seconds = report.evaluate_seconds;
  return report;
}

/// Precompute phase: reference statistics. Evaluate phase: generated
/// statistics plus the score.
inline MetricReport ffid_populations(const PosePopulation& ref, const PosePopulation& gen,
                                     DescriptorId id, unsigned threads = 1,
                                     FrechetOptions options = {}) {
  detail::Stopwatch pre;
  const PopulationStats ref_stats = population_stats(ref, id, threads);
  const double precompute = pre.seconds();
  detail::Stopwatch eval;
  const PopulationStats gen_stats = population_stats(gen, id, threads);
  MetricReport report = ffid(ref_stats, gen_stats, options);
  report.precompute_seconds = precompute;
  report.evaluate_seconds = eval.seconds();
  report.wall_time_seconds = report.precompute_seconds + report.evaluate_seconds;
  return report;
}

namespace detail {

/// Mean Euclidean distance over the full Cartesian product of rows,
/// self-pairs included. Summed row by row in index order.
inline double mean_pairwise_distance(const FeatureMatrix& a, const FeatureMatrix& b) {
  const Eigen::Index n = a.rows();
  const Eigen::Index m = b.rows();
  const Eigen::Index dim = a.cols();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* x = a.row(i).data();
    double row_sum = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double* y = b.row(j).data();
      double sq = 0.0;
      for (Eigen::Index k = 0; k < dim; ++k) {
        const double diff = x[k] - y[k];
        sq += diff * diff;
      }
      row_sum += std::sqrt(sq);
    }
    total += row_sum;
  }
  return total / (static_cast<double>(n) * static_cast<double>(m));
}

}  // namespace detail

/// Cached reference side of the distance-kernel MMD: its descriptor rows and
/// within-population mean distance.
struct MmdReference {
  DescriptorId id;
  FeatureMatrix features;
  double within_mean = 0.0;

  std::size_t count() const { return static_cast<std::size_t>(features.rows()); }
};

inline MmdReference mmd_precompute(const PosePopulation& ref, DescriptorId id,
                                   unsigned threads = 1) {
  if (ref.empty()) throw Error(Errc::EmptyPopulation, "reference population is empty");
  MmdReference out{id, descriptor_matrix(ref, id, threads), 0.0};
  out.within_mean = detail::mean_pairwise_distance(out.features, out.features);
  return out;
}

/// V-statistic energy form:
///   2 E||x - y|| - E||x - x'|| - E||y - y'||
/// with every expectation over the full product, diagonals included.
inline MetricReport mmd_evaluate(const MmdReference& ref, const PosePopulation& gen,
                                 unsigned threads = 1) {
  detail::Stopwatch clock;
  if (gen.empty()) throw Error(Errc::EmptyPopulation, "generated population is empty");
  const FeatureMatrix features = descriptor_matrix(gen, ref.id, threads);
  const double cross = detail::mean_pairwise_distance(ref.features, features);
  const double within_gen = detail::mean_pairwise_distance(features, features);
  MetricReport report;
  report.metric = MetricKind::MMD;
  report.descriptor = ref.id;
  report.score = detail::clamp_score(2.0 * cross - ref.within_mean - within_gen, 1e-9, "MMD");
  report.n_ref = ref.count();
  report.n_gen = gen.size();
  report.evaluate_seconds = clock.seconds();
  report.wall_time_seconds = report.evaluate_seconds;
  return report;
}

inline MetricReport mmd(const PosePopulation& ref, const PosePopulation& gen,
                        DescriptorId id = DescriptorId::Identity, unsigned threads = 1) {
  if (ref.empty() || gen.empty()) throw Error(Errc::EmptyPopulation, "population is empty");
  detail::Stopwatch pre;
  const MmdReference reference = mmd_precompute(ref, id, threads);
  const double precompute = pre.seconds();
  MetricReport report = mmd_evaluate(reference, gen, threads);
  report.precompute_seconds = precompute;
  report.wall_time_seconds = precompute + report.evaluate_seconds;
  return report;
}

/// ||f(gt) - f(pred)||^2.
inline double pose_loss(const HandPose& gt, const HandPose& pred, DescriptorId id) {
  return (describe(gt, id).values - describe(pred, id).values).squaredNorm();
}

using PoseGradient = std::array<double, kNumCoords>;

/// d pose_loss / d pred = 2 J(pred)^T (f(pred) - f(gt)).
inline PoseGradient pose_loss_gradient(const HandPose& gt, const HandPose& pred,
                                       DescriptorId id) {
  const DescriptorJacobian jac = descriptor_jacobian(pred, id);
  const Eigen::VectorXd residual = describe(pred, id).values - describe(gt, id).values;
  const Eigen::VectorXd grad = 2.0 * jac.matrix.transpose() * residual;
  PoseGradient out{};
  std::copy(grad.data(), grad.data() + kNumCoords, out.begin());
  return out;
}

/// Central differences of pose_loss over each coordinate of `pred`.
inline PoseGradient fd_gradient_oracle(const HandPose& gt, const HandPose& pred,
                                       DescriptorId id, double h = 1e-6) {
  if (!(h > 0.0)) throw Error(Errc::InvalidParameter, "step must be positive");
  const auto base = pred.coords();
  PoseGradient out{};
  for (std::size_t m = 0; m < kNumCoords; ++m) {
    auto plus = base;
    auto minus = base;
    plus[m] += h;
    minus[m] -= h;
    const double up = pose_loss(gt, HandPose::from_coords(plus), id);
    const double down = pose_loss(gt, HandPose::from_coords(minus), id);
    out[m] = (up - down) / (plus[m] - minus[m]);
  }
  return out;
}

}  // namespace grasp_metrics
