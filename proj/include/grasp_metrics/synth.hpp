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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "grasp_metrics/error.hpp"
#include "grasp_metrics/pose.hpp"

namespace grasp_metrics {

/// Open right hand, palm facing the camera, image coordinates (y grows
/// downward) in the unit square. Wrist at the bottom centre.
inline constexpr HandPose::Points kTemplateHand = {{
    {0.50, 0.90},                                              // wrist
    {0.38, 0.82}, {0.30, 0.72}, {0.24, 0.63}, {0.19, 0.55},    // thumb
    {0.42, 0.60}, {0.40, 0.45}, {0.39, 0.36}, {0.38, 0.28},    // index
    {0.50, 0.58}, {0.50, 0.42}, {0.50, 0.32}, {0.50, 0.23},    // middle
    {0.58, 0.60}, {0.60, 0.45}, {0.61, 0.36}, {0.62, 0.28},    // ring
    {0.65, 0.64}, {0.69, 0.52}, {0.71, 0.45}, {0.73, 0.38},    // pinky
}};

struct SynthParams {
  std::size_t count = 1;
  std::uint64_t seed = 0;
  double jitter_sigma = 0.0;
  double translate_range = 0.0;
  bool rotate = false;
};

/// Seeded population: template + per-coordinate Gaussian jitter, optional
/// uniform rotation about the wrist, then uniform translation in
/// [-translate_range, translate_range]^2. Deterministic for a given build.
inline PosePopulation synthesize_population(const SynthParams& params) {
  if (params.count == 0) throw Error(Errc::InvalidParameter, "count must be >= 1");
  if (!(params.jitter_sigma >= 0.0) || !std::isfinite(params.jitter_sigma)) {
    throw Error(Errc::InvalidParameter, "jitter_sigma must be a finite value >= 0");
  }
  if (!(params.translate_range >= 0.0) || !std::isfinite(params.translate_range)) {
    throw Error(Errc::InvalidParameter, "translate_range must be a finite value >= 0");
  }

  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  PosePopulation population;
  population.poses.reserve(params.count);
  for (std::size_t n = 0; n < params.count; ++n) {
    HandPose::Points pts = kTemplateHand;
    if (params.jitter_sigma > 0.0) {
      for (auto& p : pts) {
        p.x += params.jitter_sigma * noise(rng);
        p.y += params.jitter_sigma * noise(rng);
      }
    }
    double angle = 0.0;
    if (params.rotate) angle = 2.0 * std::numbers::pi * unit(rng);
    Point2 shift{};
    if (params.translate_range > 0.0) {
      shift.x = params.translate_range * (2.0 * unit(rng) - 1.0);
      shift.y = params.translate_range * (2.0 * unit(rng) - 1.0);
    }
    population.poses.push_back(transform_pose(HandPose(pts), shift, angle));
  }
  return population;
}

inline PosePopulation synthesize_population(std::size_t count, std::uint64_t seed,
                                            double jitter_sigma, double translate_range,
                                            bool rotate) {
  return synthesize_population(SynthParams{count, seed, jitter_sigma, translate_range, rotate});
}

}  // namespace grasp_metrics
