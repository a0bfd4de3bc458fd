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

// grasp-metrics: command-line front end for descriptor extraction, f-FID,
// MMD, reconstruction losses and the timing harness.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "grasp_metrics/grasp_metrics.hpp"

namespace gm = grasp_metrics;
using nlohmann::json;

namespace {

struct Options {
  unsigned threads = 1;

  // gen-synthetic
  std::size_t count = 0;
  std::uint64_t seed = 0;
  double jitter = 0.02;
  double translate = 0.0;
  bool rotate = false;

  std::string descriptor;
  std::string in;
  std::string out;
  std::string ref;
  std::string gen;
  std::string in1;
  std::string in2;
  std::string gt;
  std::string pred;
  bool grad = false;
  bool regularize = false;

  std::vector<std::size_t> sizes = {2000, 20000};
  std::size_t eval_size = 360;
  unsigned repeats = 3;
};

int cmd_gen_synthetic(const Options& o) {
  const gm::PosePopulation population =
      gm::synthesize_population({o.count, o.seed, o.jitter, o.translate, o.rotate});
  gm::save_poses(population, o.out);
  std::cout << json{{"written", population.size()}, {"out", o.out}}.dump() << '\n';
  return 0;
}

int cmd_describe(const Options& o) {
  const gm::DescriptorId id = gm::parse_descriptor(o.descriptor);
  const gm::PosePopulation population = gm::load_poses(o.in);
  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out, std::ios::binary | std::ios::trunc);
    if (!file) throw gm::Error(gm::Errc::Io, "cannot open " + o.out + " for writing");
  }
  std::ostream& out = o.out.empty() ? std::cout : file;
  for (std::size_t i = 0; i < population.size(); ++i) {
    const gm::HandPose& pose = population.poses[i];
    const gm::DescriptorVector v = gm::describe(pose, id);
    std::vector<double> values(v.values.data(), v.values.data() + v.values.size());
    out << json{{"id", pose.id().value_or(std::to_string(i))},
                {"descriptor", gm::descriptor_name(id)},
                {"values", std::move(values)}}
               .dump()
        << '\n';
  }
  if (!out) throw gm::Error(gm::Errc::Io, "write failed");
  return 0;
}

int cmd_precompute(const Options& o) {
  const gm::DescriptorId id = gm::parse_descriptor(o.descriptor);
  const gm::PosePopulation population = gm::load_poses(o.in);
  gm::detail::Stopwatch clock;
  const gm::PopulationStats stats = gm::population_stats(population, id, o.threads);
  const double seconds = clock.seconds();
  gm::save_stats(stats, o.out);
  std::cout << json{{"descriptor", gm::descriptor_name(id)},
                    {"count", stats.count},
                    {"dim", stats.dim()},
                    {"seconds", seconds},
                    {"out", o.out}}
                   .dump()
            << '\n';
  return 0;
}

/// A stats cache is one JSON object carrying "version"; anything else is
/// read as a pose file.
bool is_stats_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gm::Error(gm::Errc::Io, "cannot open " + path);
  const json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  return doc.is_object() && doc.contains("version");
}

int cmd_ffid(const Options& o) {
  const gm::DescriptorId id = gm::parse_descriptor(o.descriptor);
  const gm::FrechetOptions frechet{o.regularize};

  gm::detail::Stopwatch pre;
  gm::PopulationStats ref_stats = is_stats_file(o.ref)
                                      ? gm::load_stats(o.ref)
                                      : gm::population_stats(gm::load_poses(o.ref), id, o.threads);
  if (ref_stats.id != id) {
    throw gm::Error(gm::Errc::DescriptorMismatch,
                    "reference statistics were built with '" +
                        std::string(gm::descriptor_name(ref_stats.id)) + "', not '" +
                        std::string(gm::descriptor_name(id)) + "'");
  }
  const double precompute = pre.seconds();

  gm::detail::Stopwatch eval;
  const gm::PopulationStats gen_stats =
      gm::population_stats(gm::load_poses(o.gen), id, o.threads);
  gm::MetricReport report = gm::ffid(ref_stats, gen_stats, frechet);
  report.precompute_seconds = precompute;
  report.evaluate_seconds = eval.seconds();
  report.wall_time_seconds = precompute + report.evaluate_seconds;
  std::cout << gm::to_json(report).dump() << '\n';
  return 0;
}

int cmd_mmd(const Options& o) {
  const gm::DescriptorId id = gm::parse_descriptor(o.descriptor);
  const gm::PosePopulation a = gm::load_poses(o.in1);
  const gm::PosePopulation b = gm::load_poses(o.in2);
  std::cout << gm::to_json(gm::mmd(a, b, id, o.threads)).dump() << '\n';
  return 0;
}

int cmd_loss(const Options& o) {
  const gm::DescriptorId id = gm::parse_descriptor(o.descriptor);
  if (o.grad && id == gm::DescriptorId::Spectral) {
    throw gm::Error(gm::Errc::UnsupportedDescriptor,
                    "--grad is not available for the spectral descriptor");
  }
  const gm::PosePopulation gt = gm::load_poses(o.gt);
  const gm::PosePopulation pred = gm::load_poses(o.pred);
  if (gt.size() != pred.size()) {
    throw gm::Error(gm::Errc::LengthMismatch, "--gt has " + std::to_string(gt.size()) +
                                                  " poses, --pred has " +
                                                  std::to_string(pred.size()));
  }
  if (gt.empty()) throw gm::Error(gm::Errc::EmptyPopulation, "no pose pairs");
  std::vector<double> losses;
  json grads = json::array();
  double total = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const double l = gm::pose_loss(gt.poses[i], pred.poses[i], id);
    losses.push_back(l);
    total += l;
    if (o.grad) grads.push_back(gm::pose_loss_gradient(gt.poses[i], pred.poses[i], id));
  }
  json report{{"descriptor", gm::descriptor_name(id)},
              {"count", losses.size()},
              {"losses", losses},
              {"mean_loss", total / static_cast<double>(losses.size())}};
  if (o.grad) report["gradients"] = std::move(grads);
  std::cout << report.dump() << '\n';
  return 0;
}

int cmd_bench(const Options& o) {
  gm::BenchConfig config;
  config.sizes = o.sizes;
  config.eval_size = o.eval_size;
  config.seed = o.seed;
  config.repeats = o.repeats;
  config.threads = o.threads;
  const auto rows = gm::run_bench(config);
  gm::write_bench_csv(std::cout, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hand-pose descriptors and generative evaluation metrics"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--threads", o.threads, "Worker threads for descriptor mapping")
      ->envname("GRASP_METRICS_THREADS")
      ->check(CLI::PositiveNumber);

  auto* gen = app.add_subcommand("gen-synthetic", "Write a seeded synthetic pose file");
  gen->add_option("--count", o.count, "Number of poses")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", o.seed, "PRNG seed");
  gen->add_option("--jitter", o.jitter, "Per-coordinate Gaussian sigma")
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--translate", o.translate, "Uniform translation half-range")
      ->check(CLI::NonNegativeNumber);
  gen->add_flag("--rotate", o.rotate, "Random rotation about the wrist");
  gen->add_option("--out", o.out, "Output pose file")->required();

  auto* describe = app.add_subcommand("describe", "Dump descriptor vectors as JSON Lines");
  describe->add_option("--descriptor", o.descriptor)->required();
  describe->add_option("--in", o.in, "Pose file")->required();
  describe->add_option("--out", o.out, "Output file (default stdout)");

  auto* precompute = app.add_subcommand("precompute", "Cache population mean and covariance");
  precompute->add_option("--descriptor", o.descriptor)->required();
  precompute->add_option("--in", o.in, "Pose file")->required();
  precompute->add_option("--out", o.out, "Stats cache file")->required();

  auto* ffid = app.add_subcommand("ffid", "f-FID between a reference and a generated population");
  ffid->add_option("--ref", o.ref, "Stats cache or pose file")->required();
  ffid->add_option("--gen", o.gen, "Generated pose file")->required();
  ffid->add_option("--descriptor", o.descriptor)->required();
  ffid->add_flag("--regularize", o.regularize, "Add 1e-6 I to both covariances");

  auto* mmd = app.add_subcommand("mmd", "Distance-kernel MMD between two pose files");
  mmd->add_option("--in1", o.in1)->required();
  mmd->add_option("--in2", o.in2)->required();
  o.descriptor = "identity";
  mmd->add_option("--descriptor", o.descriptor, "Descriptor space (default identity)");

  auto* loss = app.add_subcommand("loss", "Pose reconstruction loss per pair");
  loss->add_option("--gt", o.gt)->required();
  loss->add_option("--pred", o.pred)->required();
  loss->add_option("--descriptor", o.descriptor)->required();
  loss->add_flag("--grad", o.grad, "Also emit d loss / d pred");

  auto* bench = app.add_subcommand("bench", "Time precompute and evaluate phases as CSV");
  bench->add_option("--sizes", o.sizes, "Reference sizes")->delimiter(',');
  bench->add_option("--eval-size", o.eval_size)->check(CLI::PositiveNumber);
  bench->add_option("--seed", o.seed);
  bench->add_option("--repeats", o.repeats)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*gen) return cmd_gen_synthetic(o);
    if (*describe) return cmd_describe(o);
    if (*precompute) return cmd_precompute(o);
    if (*ffid) return cmd_ffid(o);
    if (*mmd) return cmd_mmd(o);
    if (*loss) return cmd_loss(o);
    if (*bench) return cmd_bench(o);
  } catch (const gm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return gm::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}
