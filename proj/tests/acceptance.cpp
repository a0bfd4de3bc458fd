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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when all pass).

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "grasp_metrics/grasp_metrics.hpp"
#include "test_support.hpp"

#ifndef GRASP_METRICS_CLI_PATH
#error "GRASP_METRICS_CLI_PATH must point at the grasp-metrics executable"
#endif

namespace gm = grasp_metrics;
namespace fs = std::filesystem;
using gm::DescriptorId;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

// 1. ffid(P, P) < 1e-6 for every descriptor on 1000 poses, under 30 s.
Outcome self_distance() {
  const auto t0 = std::chrono::steady_clock::now();
  const gm::PosePopulation p = gm::synthesize_population(1000, 101, 0.02, 0.1, true);
  bool ok = true;
  std::string detail;
  for (DescriptorId id : gm::kAllDescriptors) {
    const gm::PopulationStats s = gm::population_stats(p, id);
    const double raw = gm::frechet_trace_term(s.cov, s.cov);
    const double score = gm::ffid(s, s).score;
    ok = ok && score < 1e-6 && std::abs(raw) < 1e-6;
    detail += std::string(gm::descriptor_name(id)) + "=" + fmt(score) + " ";
  }
  const double elapsed = seconds_since(t0);
  ok = ok && elapsed < 30.0;
  return {ok, detail + "time=" + fmt(elapsed) + "s"};
}

// 2. Identity-FID under translation (0.1, 0.2) = 1.05; invariant descriptors ~ 0.
Outcome translation_closed_form() {
  const gm::PosePopulation p = gm::synthesize_population(1000, 102, 0.02, 0.1, true);
  const gm::PosePopulation q = gm::transform_population(p, {0.1, 0.2}, 0.0);
  const double identity = gm::ffid_populations(p, q, DescriptorId::Identity).score;
  bool ok = std::abs(identity - 1.05) <= 1e-6;
  std::string detail = "identity=" + fmt(identity) + " ";
  for (DescriptorId id : {DescriptorId::DenseT, DescriptorId::Geometric, DescriptorId::Spectral}) {
    const double s = gm::ffid_populations(p, q, id).score;
    ok = ok && s < 1e-6;
    detail += std::string(gm::descriptor_name(id)) + "=" + fmt(s) + " ";
  }
  return {ok, detail};
}

// 3. Scalar Frechet closed form.
Outcome scalar_frechet() {
  auto stats = [](double mean, double var) {
    Eigen::MatrixXd c(1, 1);
    c << var;
    return gm::PopulationStats{DescriptorId::Identity, 1, Eigen::VectorXd::Constant(1, mean),
                               gm::SymMatrix(c)};
  };
  const double score = gm::ffid(stats(0.0, 1.0), stats(1.0, 4.0)).score;
  return {std::abs(score - 2.0) <= 1e-10, "score=" + fmt(score)};
}

// 4. Spectral contract on 200 poses.
Outcome spectral_contract() {
  const gm::PosePopulation p = gm::synthesize_population(200, 104, 0.03, 0.2, true);
  double min_eig = INFINITY;
  double max_smallest = 0.0;
  double worst_recon = 0.0;
  bool ok = true;
  for (const auto& pose : p.poses) {
    const auto lap = gm::weighted_laplacian(pose, gm::canonical_topology());
    const Eigen::VectorXd v = gm::spectral_desc(pose).values;
    const Eigen::VectorXd lambda = v.head(gm::kNumPoints);
    const Eigen::MatrixXd vecs =
        Eigen::Map<const Eigen::MatrixXd>(v.data() + gm::kNumPoints, gm::kNumPoints, gm::kNumPoints);
    const double err = (vecs * lambda.asDiagonal() * vecs.transpose() - lap).norm();
    const double bound = 1e-8 * (1.0 + lap.norm());
    min_eig = std::min(min_eig, lambda.minCoeff());
    max_smallest = std::max(max_smallest, lambda[0]);
    worst_recon = std::max(worst_recon, err / bound);
    ok = ok && lambda.minCoeff() >= -1e-8 && lambda[0] < 1e-8 && err < bound;
  }
  return {ok, "min_eig=" + fmt(min_eig) + " max_smallest=" + fmt(max_smallest) +
                  " worst_recon/bound=" + fmt(worst_recon)};
}

// 5. Root-relative and bone-length entries appear among DenseT entries.
Outcome superset() {
  std::mt19937_64 rng(105);
  std::size_t missing = 0;
  for (int n = 0; n < 200; ++n) {
    const gm::HandPose pose = gm::testing::random_pose(rng);
    const Eigen::VectorXd g = gm::geometric_desc(pose).values;
    const Eigen::VectorXd d = gm::denset_desc(pose).values;
    for (Eigen::Index k = 0; k < 34; ++k) {
      const bool found = ((d.array() - g[k]).abs() <= 1e-12).any();
      if (!found) ++missing;
    }
  }
  return {missing == 0, "unmatched_entries=" + std::to_string(missing)};
}

// 6. Loss gradient vs central finite differences.
Outcome gradient_check() {
  std::mt19937_64 rng(106);
  bool ok = true;
  std::string detail;
  for (DescriptorId id : {DescriptorId::Identity, DescriptorId::Geometric, DescriptorId::DenseT}) {
    double worst = 0.0;
    for (int n = 0; n < 100; ++n) {
      const gm::HandPose gt = gm::testing::random_pose(rng);
      const gm::HandPose pred = gm::testing::random_pose(rng);
      worst = std::max(worst, gm::testing::max_relative_error(
                                  gm::pose_loss_gradient(gt, pred, id),
                                  gm::fd_gradient_oracle(gt, pred, id, 1e-6)));
    }
    ok = ok && worst < 1e-4;
    detail += std::string(gm::descriptor_name(id)) + "=" + fmt(worst) + " ";
  }
  return {ok, "max_rel_err " + detail};
}

// 7. Statistics vs naive two-pass accumulation; 1/|P| normalization.
Outcome statistics_oracle() {
  const gm::PosePopulation p = gm::synthesize_population(500, 107, 0.02, 0.1, true);
  const DescriptorId id = DescriptorId::DenseT;
  const gm::PopulationStats s = gm::population_stats(p, id);
  const std::size_t d = gm::descriptor_dim(id);
  std::vector<std::vector<double>> rows;
  for (const auto& pose : p.poses) {
    const auto v = gm::describe(pose, id).values;
    rows.emplace_back(v.data(), v.data() + d);
  }
  std::vector<double> mean(d, 0.0);
  for (const auto& r : rows)
    for (std::size_t a = 0; a < d; ++a) mean[a] += r[a];
  for (auto& m : mean) m /= static_cast<double>(rows.size());
  double worst = 0.0;
  for (std::size_t a = 0; a < d; ++a) {
    worst = std::max(worst, std::abs(s.mean[a] - mean[a]));
    for (std::size_t b = 0; b < d; ++b) {
      double c = 0.0;
      for (const auto& r : rows) c += (r[a] - mean[a]) * (r[b] - mean[b]);
      c /= static_cast<double>(rows.size());
      worst = std::max(worst, std::abs(s.cov(a, b) - c));
    }
  }
  gm::HandPose::Points lo = gm::kTemplateHand, hi = gm::kTemplateHand;
  lo[0].x = 1.0;
  hi[0].x = 3.0;
  const gm::PopulationStats two = gm::population_stats(
      gm::PosePopulation{{gm::HandPose(lo), gm::HandPose(hi)}, {}}, DescriptorId::Identity);
  const bool closed = two.mean[0] == 2.0 && two.cov(0, 0) == 1.0;
  return {worst <= 1e-10 && closed,
          "max_abs_diff=" + fmt(worst) + " two_point_var=" + fmt(two.cov(0, 0))};
}

// 8. MMD vs double loop; mmd(P, P) == 0 exactly.
Outcome mmd_oracle() {
  const gm::PosePopulation x = gm::synthesize_population(200, 108, 0.02, 0.1, true);
  const gm::PosePopulation y = gm::synthesize_population(200, 109, 0.05, 0.1, true);
  auto feats = [](const gm::PosePopulation& p) {
    std::vector<Eigen::VectorXd> out;
    for (const auto& pose : p.poses) out.push_back(gm::identity_desc(pose).values);
    return out;
  };
  const auto fx = feats(x), fy = feats(y);
  auto mean_dist = [](const auto& a, const auto& b) {
    long double s = 0.0L;
    for (const auto& u : a)
      for (const auto& v : b) s += (u - v).norm();
    return static_cast<double>(s / (static_cast<long double>(a.size()) * b.size()));
  };
  const double oracle = 2.0 * mean_dist(fx, fy) - mean_dist(fx, fx) - mean_dist(fy, fy);
  const double score = gm::mmd(x, y).score;
  const double self = gm::mmd(x, x).score;
  return {std::abs(score - oracle) <= 1e-10 && self == 0.0,
          "mmd=" + fmt(score) + " |diff|=" + fmt(std::abs(score - oracle)) +
              " self=" + fmt(self)};
}

// 9. DenseT-FID increases with generator noise.
Outcome monotone_noise() {
  const gm::PosePopulation ref = gm::synthesize_population(500, 110, 0.01, 0.1, false);
  std::vector<double> scores;
  for (double sigma : {0.02, 0.05, 0.10}) {
    const gm::PosePopulation gen = gm::synthesize_population(500, 111, sigma, 0.1, false);
    scores.push_back(gm::ffid_populations(ref, gen, DescriptorId::DenseT).score);
  }
  const bool ok = scores[0] < scores[1] && scores[1] < scores[2];
  return {ok, "scores=" + fmt(scores[0]) + "," + fmt(scores[1]) + "," + fmt(scores[2])};
}

// 10. Efficiency ordering at sizes 2000/20000 with 360 evaluated poses.
Outcome efficiency_ordering() {
  const auto t0 = std::chrono::steady_clock::now();
  gm::BenchConfig config;
  config.sizes = {2000, 20000};
  config.eval_size = 360;
  config.seed = 112;
  const auto rows = gm::run_bench(config);
  const double elapsed = seconds_since(t0);
  std::map<std::string, std::map<std::size_t, double>> pre;
  for (const auto& r : rows) {
    if (r.phase == gm::BenchPhase::Precompute) pre[r.metric][r.size] = r.seconds;
  }
  const double id20 = pre["identity-FID"][20000], geo20 = pre["geometric-FID"][20000];
  const double spec20 = pre["spectral-FID"][20000], dense20 = pre["denset-FID"][20000];
  const double mmd20 = pre["MMD"][20000];
  const bool ordering = id20 <= geo20 && geo20 <= spec20 && spec20 <= dense20 && dense20 < mmd20;
  const double mmd_ratio = mmd20 / pre["MMD"][2000];
  double worst_fid_ratio = 0.0;
  for (const char* m : {"identity-FID", "geometric-FID", "spectral-FID", "denset-FID"}) {
    worst_fid_ratio = std::max(worst_fid_ratio, pre[m][20000] / pre[m][2000]);
  }
  const bool ratios = mmd_ratio > worst_fid_ratio;
  std::string detail = "precompute@20k identity=" + fmt(id20) + " geometric=" + fmt(geo20) +
                       " spectral=" + fmt(spec20) + " denset=" + fmt(dense20) +
                       " mmd=" + fmt(mmd20) + "; ordering=" + (ordering ? "ok" : "VIOLATED") +
                       "; ratio mmd=" + fmt(mmd_ratio) + " max_ffid=" + fmt(worst_fid_ratio) +
                       "; total=" + fmt(elapsed) + "s";
  return {ordering && ratios && elapsed < 600.0, detail};
}

// 11. CLI pipeline and exit-code contract.
struct RunResult {
  int code;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(GRASP_METRICS_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r{-1, {}};
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Outcome cli_contract() {
  const fs::path dir = fs::temp_directory_path() / "grasp_metrics_acceptance";
  fs::create_directories(dir);
  const std::string p = (dir / "p.jsonl").string();
  const std::string q = (dir / "q.jsonl").string();
  const std::string stats = (dir / "p.stats.json").string();
  const std::string empty = (dir / "empty.jsonl").string();
  const std::string bad = (dir / "bad.jsonl").string();
  std::ofstream(empty).close();
  std::vector<std::string> failures;
  auto expect = [&](const std::string& what, bool cond) {
    if (!cond) failures.push_back(what);
  };
  auto parses = [](const std::string& s) {
    return !s.empty() && nlohmann::json::accept(s.substr(0, s.find('\n')));
  };

  auto r = run("gen-synthetic --count 200 --seed 1 --jitter 0.02 --translate 0.1 --rotate --out " + p);
  expect("gen-synthetic exit 0", r.code == 0 && parses(r.out));
  r = run("gen-synthetic --count 200 --seed 1 --jitter 0.02 --translate 0.1 --rotate --out " + q);
  {
    std::ifstream a(p), b(q);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    expect("gen-synthetic deterministic", r.code == 0 && sa.str() == sb.str());
  }
  r = run("precompute --descriptor denset --in " + p + " --out " + stats);
  expect("precompute exit 0", r.code == 0 && parses(r.out));
  r = run("ffid --ref " + stats + " --gen " + p + " --descriptor denset");
  expect("ffid exit 0", r.code == 0 && parses(r.out));
  if (r.code == 0 && parses(r.out)) {
    const auto j = nlohmann::json::parse(r.out);
    expect("ffid self score < 1e-6", j.at("score").get<double>() < 1e-6);
  }
  r = run("describe --descriptor spectral --in " + p);
  expect("describe exit 0", r.code == 0 && parses(r.out) &&
                                nlohmann::json::parse(r.out.substr(0, r.out.find('\n')))
                                        .at("values")
                                        .size() == 462);
  r = run("mmd --in1 " + p + " --in2 " + p);
  expect("mmd identical = 0", r.code == 0 && parses(r.out) &&
                                  nlohmann::json::parse(r.out).at("score").get<double>() == 0.0);
  r = run("loss --gt " + p + " --pred " + p + " --descriptor geometric --grad");
  expect("loss exit 0", r.code == 0 && parses(r.out) &&
                            nlohmann::json::parse(r.out).at("mean_loss").get<double>() == 0.0);
  r = run("bench --sizes 50,100 --eval-size 10 --repeats 1");
  {
    std::istringstream csv(r.out);
    std::string line;
    std::getline(csv, line);
    std::size_t rows = 0;
    while (std::getline(csv, line)) ++rows;
    expect("bench CSV", r.code == 0 && r.out.rfind("metric,phase,size,seconds\n", 0) == 0 &&
                            rows == 15);
  }

  // Error paths.
  {
    gm::PosePopulation one = gm::synthesize_population(1, 3, 0.0, 0.0, false);
    nlohmann::json line = gm::pose_to_json(one.poses[0]);
    line["points"].erase(0);
    std::ofstream out(bad);
    out << gm::pose_to_json(one.poses[0]).dump() << '\n' << line.dump() << '\n';
  }
  expect("gen-synthetic --count 0 -> 1", run("gen-synthetic --count 0 --out " + q).code == 1);
  expect("unknown descriptor -> 1", run("describe --descriptor foo --in " + p).code == 1);
  expect("bad pose line -> 2", run("describe --descriptor identity --in " + bad).code == 2);
  expect("precompute empty -> 2",
         run("precompute --descriptor identity --in " + empty + " --out " + stats + ".x").code == 2);
  expect("ffid descriptor mismatch -> 1",
         run("ffid --ref " + stats + " --gen " + p + " --descriptor geometric").code == 1);
  expect("mmd empty -> 2", run("mmd --in1 " + empty + " --in2 " + p).code == 2);
  expect("loss length mismatch -> 2",
         run("loss --gt " + p + " --pred " + bad + " --descriptor identity").code == 2);
  expect("loss --grad spectral -> 1",
         run("loss --gt " + p + " --pred " + p + " --descriptor spectral --grad").code == 1);
  expect("bench single size -> 1", run("bench --sizes 2000").code == 1);
  expect("missing subcommand -> 1", run("").code == 1);

  fs::remove_all(dir);
  std::string detail = failures.empty() ? "all pipeline steps and error codes as documented"
                                        : "failed:";
  for (const auto& f : failures) detail += " [" + f + "]";
  return {failures.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 self-distance", self_distance},
      {"2 translation closed form", translation_closed_form},
      {"3 scalar Frechet closed form", scalar_frechet},
      {"4 spectral contract", spectral_contract},
      {"5 DenseT superset", superset},
      {"6 loss gradient vs finite differences", gradient_check},
      {"7 statistics oracle", statistics_oracle},
      {"8 MMD oracle", mmd_oracle},
      {"9 monotone noise response", monotone_noise},
      {"10 efficiency ordering", efficiency_ordering},
      {"11 CLI contract", cli_contract},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o{false, {}};
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << "  " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed;
}
