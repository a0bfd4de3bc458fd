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
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "grasp_metrics/error.hpp"
#include "grasp_metrics/pose.hpp"

namespace grasp_metrics {

// Pose files are JSON Lines: {"id": optional string, "points": [[x, y] x 21]}.

inline HandPose pose_from_json(const nlohmann::json& obj) {
  if (!obj.is_object()) throw Error(Errc::Parse, "pose record is not a JSON object");
  auto it = obj.find("points");
  if (it == obj.end() || !it->is_array()) {
    throw Error(Errc::Parse, "missing \"points\" array");
  }
  std::vector<Point2> raw;
  raw.reserve(it->size());
  for (const auto& pt : *it) {
    if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
      throw Error(Errc::Parse, "each point must be a [x, y] pair of numbers");
    }
    raw.push_back({pt[0].get<double>(), pt[1].get<double>()});
  }
  std::optional<std::string> id;
  if (auto id_it = obj.find("id"); id_it != obj.end() && !id_it->is_null()) {
    if (!id_it->is_string()) throw Error(Errc::Parse, "\"id\" must be a string");
    id = id_it->get<std::string>();
  }
  return validate_pose(raw, std::move(id));
}

inline nlohmann::json pose_to_json(const HandPose& pose) {
  nlohmann::json obj = nlohmann::json::object();
  if (pose.id()) obj["id"] = *pose.id();
  auto pts = nlohmann::json::array();
  for (const auto& p : pose.points()) pts.push_back({p.x, p.y});
  obj["points"] = std::move(pts);
  return obj;
}

inline PosePopulation read_poses(std::istream& in) {
  PosePopulation population;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      population.poses.push_back(pose_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::Parse, "line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return population;
}

inline PosePopulation load_poses(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  PosePopulation population = read_poses(in);
  population.source = path;
  return population;
}

inline void write_poses(const PosePopulation& population, std::ostream& out) {
  for (const auto& pose : population.poses) out << pose_to_json(pose).dump() << '\n';
}

inline void save_poses(const PosePopulation& population, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot open " + path + " for writing");
  write_poses(population, out);
  out.flush();
  if (!out) throw Error(Errc::Io, "write failed for " + path);
}

}  // namespace grasp_metrics
