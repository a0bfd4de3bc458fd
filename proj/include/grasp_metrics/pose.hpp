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

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "grasp_metrics/error.hpp"

namespace grasp_metrics {

inline constexpr std::size_t kNumPoints = 21;
inline constexpr std::size_t kNumCoords = 2 * kNumPoints;
inline constexpr std::size_t kNumEdges = 20;
inline constexpr std::size_t kNumPhalanges = 14;
inline constexpr std::size_t kNumAdjacentPhalanges = 9;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// A validated 21-keypoint 2D hand pose. Index 0 is the wrist; fingers follow
/// in blocks of four (thumb 1-4, index 5-8, middle 9-12, ring 13-16,
/// pinky 17-20), base to tip.
class HandPose {
 public:
  using Points = std::array<Point2, kNumPoints>;

  /// Throws NonFiniteCoordinate for NaN/inf input.
  explicit HandPose(const Points& points, std::optional<std::string> id = {})
      : points_(points), id_(std::move(id)) {
    for (std::size_t i = 0; i < kNumPoints; ++i) {
      if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y)) {
        throw Error(Errc::NonFiniteCoordinate,
                    "point " + std::to_string(i) + " has a non-finite coordinate");
      }
    }
  }

  const Points& points() const noexcept { return points_; }
  const Point2& operator[](std::size_t i) const { return points_[i]; }
  const std::optional<std::string>& id() const noexcept { return id_; }

  /// Flattened (x0, y0, ..., x20, y20).
  std::array<double, kNumCoords> coords() const {
    std::array<double, kNumCoords> out{};
    for (std::size_t i = 0; i < kNumPoints; ++i) {
      out[2 * i] = points_[i].x;
      out[2 * i + 1] = points_[i].y;
    }
    return out;
  }

  static HandPose from_coords(std::span<const double> coords,
                              std::optional<std::string> id = {}) {
    if (coords.size() != kNumCoords) {
      throw Error(Errc::WrongPointCount, "expected " + std::to_string(kNumCoords) +
                                             " coordinates, got " +
                                             std::to_string(coords.size()));
    }
    Points pts{};
    for (std::size_t i = 0; i < kNumPoints; ++i) {
      pts[i] = {coords[2 * i], coords[2 * i + 1]};
    }
    return HandPose(pts, std::move(id));
  }

 private:
  Points points_;
  std::optional<std::string> id_;
};

/// Builds a HandPose from an arbitrary-length point sequence.
inline HandPose validate_pose(std::span<const Point2> raw,
                              std::optional<std::string> id = {}) {
  if (raw.size() != kNumPoints) {
    throw Error(Errc::WrongPointCount, "expected 21 points, got " +
                                           std::to_string(raw.size()));
  }
  HandPose::Points pts{};
  std::copy(raw.begin(), raw.end(), pts.begin());
  return HandPose(pts, std::move(id));
}

using IndexPair = std::pair<std::size_t, std::size_t>;

struct SkeletonTopology {
  std::size_t root = 0;
  std::array<IndexPair, kNumEdges> edges;
  /// (tail, head) with the head further from the wrist.
  std::array<IndexPair, kNumPhalanges> phalanges;
  /// Indices into `phalanges`; the first's head is the second's tail.
  std::array<IndexPair, kNumAdjacentPhalanges> adjacent_phalange_pairs;
};

namespace detail {

inline constexpr SkeletonTopology make_topology() {
  SkeletonTopology t{};
  t.root = 0;
  std::size_t e = 0;
  for (std::size_t finger = 0; finger < 5; ++finger) {
    const std::size_t base = 1 + 4 * finger;
    t.edges[e++] = {0, base};
    for (std::size_t k = 0; k < 3; ++k) t.edges[e++] = {base + k, base + k + 1};
  }
  // Metacarpals excluded: every wrist edge plus the thumb's (1,2).
  std::size_t p = 0;
  std::size_t a = 0;
  for (std::size_t finger = 0; finger < 5; ++finger) {
    const std::size_t base = 1 + 4 * finger;
    const std::size_t first = (finger == 0) ? 1 : 0;
    const std::size_t start = p;
    for (std::size_t k = first; k < 3; ++k) {
      t.phalanges[p++] = {base + k, base + k + 1};
    }
    for (std::size_t q = start; q + 1 < p; ++q) t.adjacent_phalange_pairs[a++] = {q, q + 1};
  }
  return t;
}

}  // namespace detail

/// The single process-wide 21-point hand skeleton.
inline const SkeletonTopology& canonical_topology() {
  static constexpr SkeletonTopology kTopology = detail::make_topology();
  return kTopology;
}

struct PosePopulation {
  std::vector<HandPose> poses;
  std::optional<std::string> source;

  std::size_t size() const noexcept { return poses.size(); }
  bool empty() const noexcept { return poses.empty(); }
};

/// Rotates every point about the wrist by `rotation_angle` radians, then
/// translates.
inline HandPose transform_pose(const HandPose& pose, Point2 translation,
                               double rotation_angle) {
  const double c = std::cos(rotation_angle);
  const double s = std::sin(rotation_angle);
  const Point2 pivot = pose[0];
  HandPose::Points out{};
  for (std::size_t i = 0; i < kNumPoints; ++i) {
    if (rotation_angle == 0.0) {
      out[i] = {pose[i].x + translation.x, pose[i].y + translation.y};
      continue;
    }
    const double dx = pose[i].x - pivot.x;
    const double dy = pose[i].y - pivot.y;
    out[i] = {pivot.x + c * dx - s * dy + translation.x,
              pivot.y + s * dx + c * dy + translation.y};
  }
  return HandPose(out, pose.id());
}

inline PosePopulation transform_population(const PosePopulation& population,
                                           Point2 translation,
                                           double rotation_angle) {
  PosePopulation out;
  out.poses.reserve(population.size());
  for (const auto& p : population.poses) {
    out.poses.push_back(transform_pose(p, translation, rotation_angle));
  }
  return out;
}

}  // namespace grasp_metrics
