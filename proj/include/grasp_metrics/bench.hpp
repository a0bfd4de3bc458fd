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
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "grasp_metrics/descriptors.hpp"
#include "grasp_metrics/error.hpp"
#include "grasp_metrics/metrics.hpp"
#include "grasp_metrics/synth.hpp"

namespace grasp_metrics {

enum class BenchPhase { Precompute, Evaluate };

inline constexpr std::string_view phase_name(BenchPhase phase) {
  return phase == BenchPhase::Precompute ? "precompute" : "evaluate";
}

struct BenchRow {
  std::string metric;
  BenchPhase phase;
  std::size_t size;
  double seconds;
};

struct BenchConfig {
  std::vector<std::size_t> sizes = {2000, 20000};
  std::size_t eval_size = 360;
  std::uint64_t seed = 0;
  /// Each phase is timed this many times; the fastest run is reported.
  unsigned repeats = 3;
  unsigned threads = 1;
  double jitter_sigma = 0.02;
  double translate_range = 0.1;
  bool rotate = true;
};

inline constexpr std::array<std::string_view, 5> kBenchMetrics = {
    "identity-FID", "geometric-FID", "spectral-FID", "denset-FID", "MMD"};

namespace detail {

template <typename Fn>
double fastest_of(unsigned repeats, Fn&& fn) {
  double best = std::numeric_limits<double>::infinity();
  for (unsigned r = 0; r < std::max(1u, repeats); ++r) {
    Stopwatch clock;
    fn();
    best = std::min(best, clock.seconds());
  }
  return best;
}

}  // namespace detail

/// Times the precompute phase of every metric at each reference size, then
/// the evaluation of one eval_size population against the largest reference.
/// Populations are synthetic and generated outside the timed regions.
inline std::vector<BenchRow> run_bench(const BenchConfig& config) {
  if (config.sizes.size() < 2) {
    throw Error(Errc::InvalidParameter, "bench needs at least two reference sizes");
  }
  if (config.eval_size == 0 ||
      std::any_of(config.sizes.begin(), config.sizes.end(), [](auto s) { return s == 0; })) {
    throw Error(Errc::InvalidParameter, "bench sizes must be positive");
  }
  const std::size_t largest = *std::max_element(config.sizes.begin(), config.sizes.end());
  auto make = [&](std::size_t count, std::uint64_t seed) {
    return synthesize_population(SynthParams{count, seed, config.jitter_sigma,
                                             config.translate_range, config.rotate});
  };
  std::vector<PosePopulation> refs;
  for (std::size_t k = 0; k < config.sizes.size(); ++k) {
    refs.push_back(make(config.sizes[k], config.seed + k));
  }
  const PosePopulation gen = make(config.eval_size, config.seed + 1000003);
  const std::size_t largest_index = static_cast<std::size_t>(
      std::find(config.sizes.begin(), config.sizes.end(), largest) - config.sizes.begin());

  std::vector<BenchRow> rows;
  const std::array<DescriptorId, 4> fid_descriptors = {
      DescriptorId::Identity, DescriptorId::Geometric, DescriptorId::Spectral,
      DescriptorId::DenseT};
  for (std::size_t m = 0; m < fid_descriptors.size(); ++m) {
    const DescriptorId id = fid_descriptors[m];
    const std::string name(kBenchMetrics[m]);
    for (std::size_t k = 0; k < config.sizes.size(); ++k) {
      const double t = detail::fastest_of(config.repeats, [&] {
        (void)population_stats(refs[k], id, config.threads);
      });
      rows.push_back({name, BenchPhase::Precompute, config.sizes[k], t});
    }
    const PopulationStats ref_stats = population_stats(refs[largest_index], id, config.threads);
    const double t = detail::fastest_of(config.repeats, [&] {
      (void)ffid(ref_stats, population_stats(gen, id, config.threads));
    });
    rows.push_back({name, BenchPhase::Evaluate, config.eval_size, t});
  }

  const std::string mmd_name(kBenchMetrics[4]);
  for (std::size_t k = 0; k < config.sizes.size(); ++k) {
    const double t = detail::fastest_of(config.repeats, [&] {
      (void)mmd_precompute(refs[k], DescriptorId::Identity, config.threads);
    });
    rows.push_back({mmd_name, BenchPhase::Precompute, config.sizes[k], t});
  }
  const MmdReference reference =
      mmd_precompute(refs[largest_index], DescriptorId::Identity, config.threads);
  const double t = detail::fastest_of(config.repeats, [&] {
    (void)mmd_evaluate(reference, gen, config.threads);
  });
  rows.push_back({mmd_name, BenchPhase::Evaluate, config.eval_size, t});
  return rows;
}

inline constexpr std::string_view kBenchCsvHeader = "metric,phase,size,seconds";

inline void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kBenchCsvHeader << '\n';
  for (const auto& row : rows) {
    out << row.metric << ',' << phase_name(row.phase) << ',' << row.size << ','
        << row.seconds << '\n';
  }
}

}  // namespace grasp_metrics
