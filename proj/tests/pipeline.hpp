#pragma once

// A small end-to-end run of every subcommand, used to check that replaying
// a manifest reproduces a run's outputs byte for byte.

#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "deeptraj/commands.hpp"
#include "deeptraj/config.hpp"
#include "deeptraj/io.hpp"

namespace pipeline {

namespace fs = std::filesystem;

struct Step {
  std::string command;
  deeptraj::RunConfig config;
};

/// Configurations for simulate, train, embed, cluster, kml, gbtm, evaluate,
/// plot and reproduce-sim, each writing under `root / <command>`.
inline std::vector<Step> small_steps(const fs::path& root, std::uint64_t seed) {
  using deeptraj::RunConfig;
  RunConfig base;
  base.seed = seed;
  base.sim.n_a = 12;
  base.sim.n_b = 12;
  base.sim.timesteps = 8;
  base.model.hidden_size = 6;
  base.model.decoder_widths = {8};
  base.train.epochs = 4;
  base.train.batch_size = 8;
  base.kml.k_max = 4;
  base.kml.restarts = 3;
  base.gbtm.k = 2;
  base.gbtm.order = 1;
  base.cluster.restarts = 3;

  const auto dir = [&](const char* name) { return (root / name).string(); };
  const std::string traj = (root / "simulate" / "trajectories.csv").string();
  const std::string labels = (root / "simulate" / "labels.csv").string();

  std::vector<Step> steps;
  const auto add = [&](const char* name, auto&& tweak) {
    RunConfig c = base;
    c.out = dir(name);
    tweak(c);
    steps.push_back({name, std::move(c)});
  };
  add("simulate", [](RunConfig&) {});
  add("train", [&](RunConfig& c) {
    c.data.trajectories = traj;
    c.data.labels = labels;
  });
  add("embed", [&](RunConfig& c) {
    c.data.trajectories = traj;
    c.model_path = (root / "train" / "model.txt").string();
  });
  add("cluster", [&](RunConfig& c) {
    c.data.labels = labels;
    c.data.trajectories = traj;
    c.cluster.embedding = (root / "train" / "embedding.csv").string();
  });
  add("kml", [&](RunConfig& c) { c.data.trajectories = traj; });
  add("gbtm", [&](RunConfig& c) { c.data.trajectories = traj; });
  add("evaluate", [&](RunConfig& c) {
    c.data.labels = labels;
    c.data.trajectories = traj;
    c.evaluate.memberships = {(root / "cluster" / "memberships.csv").string(),
                              (root / "kml" / "memberships.csv").string(),
                              (root / "gbtm" / "memberships.csv").string()};
    c.evaluate.partitions = {(root / "cluster" / "partition.csv").string(),
                             (root / "kml" / "partition.csv").string()};
  });
  add("plot", [&](RunConfig& c) {
    c.plot.kind = deeptraj::PlotKind::MeanCurves;
    c.plot.input = traj;
    c.plot.labels = labels;
    c.plot.title = "group means";
  });
  add("reproduce-sim", [](RunConfig&) {});
  return steps;
}

/// Every regular file under `dir` except the manifest, keyed by relative path.
inline std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().filename() == "manifest.cfg") continue;
    files[fs::relative(entry.path(), dir).string()] = deeptraj::read_text(entry.path());
  }
  return files;
}

/// Runs `step`, then replays it from its own manifest into `replay_dir`;
/// returns the names of files whose bytes differ (or exist on one side only).
inline std::vector<std::string> replay_differences(const Step& step, const fs::path& replay_dir) {
  std::ostringstream log;
  deeptraj::run_command(step.command, step.config, log);
  const fs::path out(step.config.out);
  deeptraj::RunConfig again = deeptraj::load_config(out / "manifest.cfg");
  again.out = replay_dir.string();
  deeptraj::run_command(step.command, again, log);

  const auto first = snapshot(out);
  const auto second = snapshot(replay_dir);
  std::vector<std::string> diffs;
  for (const auto& [name, bytes] : first) {
    const auto it = second.find(name);
    if (it == second.end() || it->second != bytes) diffs.push_back(name);
  }
  for (const auto& [name, bytes] : second)
    if (!first.count(name)) diffs.push_back(name);
  return diffs;
}

}  // namespace pipeline
