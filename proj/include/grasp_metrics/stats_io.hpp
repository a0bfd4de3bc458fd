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

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "grasp_metrics/descriptors.hpp"
#include "grasp_metrics/error.hpp"
#include "grasp_metrics/metrics.hpp"

namespace grasp_metrics {

inline constexpr int kStatsCacheVersion = 1;

// {"version": 1, "descriptor": name, "dim": d, "count": n,
//  "mean": [d reals], "cov": [d*d reals, row-major]}

inline nlohmann::json stats_to_json(const PopulationStats& stats) {
  const Eigen::Index d = stats.dim();
  std::vector<double> mean(stats.mean.data(), stats.mean.data() + d);
  std::vector<double> cov;
  cov.reserve(static_cast<std::size_t>(d * d));
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) cov.push_back(stats.cov(r, c));
  }
  return {{"version", kStatsCacheVersion},
          {"descriptor", descriptor_name(stats.id)},
          {"dim", d},
          {"count", stats.count},
          {"mean", std::move(mean)},
          {"cov", std::move(cov)}};
}

inline PopulationStats stats_from_json(const nlohmann::json& obj) {
  try {
    if (!obj.is_object()) throw Error(Errc::Parse, "stats cache is not a JSON object");
    if (obj.at("version").get<int>() != kStatsCacheVersion) {
      throw Error(Errc::Parse, "unsupported stats cache version");
    }
    const DescriptorId id = parse_descriptor(obj.at("descriptor").get<std::string>());
    const auto dim = obj.at("dim").get<std::size_t>();
    if (dim != descriptor_dim(id)) {
      throw Error(Errc::Parse, "dim " + std::to_string(dim) + " does not match descriptor '" +
                                   std::string(descriptor_name(id)) + "'");
    }
    const auto count = obj.at("count").get<std::size_t>();
    if (count == 0) throw Error(Errc::Parse, "count must be positive");
    const auto mean = obj.at("mean").get<std::vector<double>>();
    const auto cov = obj.at("cov").get<std::vector<double>>();
    if (mean.size() != dim || cov.size() != dim * dim) {
      throw Error(Errc::Parse, "mean/cov lengths do not match dim");
    }
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd m(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index c = 0; c < d; ++c) m(r, c) = cov[static_cast<std::size_t>(r * d + c)];
    }
    return {id, count, Eigen::Map<const Eigen::VectorXd>(mean.data(), d), SymMatrix(m)};
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Parse, std::string("stats cache: ") + e.what());
  }
}

inline void save_stats(const PopulationStats& stats, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot open " + path + " for writing");
  out << stats_to_json(stats).dump() << '\n';
  out.flush();
  if (!out) throw Error(Errc::Io, "write failed for " + path);
}

inline PopulationStats load_stats(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Parse, path + ": " + e.what());
  }
  return stats_from_json(obj);
}

}  // namespace grasp_metrics
