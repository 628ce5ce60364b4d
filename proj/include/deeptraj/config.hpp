#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "deeptraj/agglomerative.hpp"
#include "deeptraj/autoencoder.hpp"
#include "deeptraj/distance.hpp"
#include "deeptraj/optimizer.hpp"
#include "deeptraj/simulation.hpp"
#include "deeptraj/svg.hpp"

namespace deeptraj {

/// Everything a CLI run needs. Input size and sequence length of the model
/// come from the data; all stage seeds derive from `seed`.
struct RunConfig {
  std::uint64_t seed = 0;
  std::string out = "out";

  struct Data {
    std::string trajectories;
    std::string labels;
  } data;

  SimulationConfig sim;

  ModelDims model;
  std::string model_path;

  TrainConfig train;

  struct Cluster {
    std::string method = "agglomerative";  ///< agglomerative | kmeans
    std::size_t k = 2;
    std::size_t restarts = 20;
    Linkage linkage = Linkage::Single;
    std::string embedding;
  } cluster;

  struct Kml {
    TrajectoryMetric metric = TrajectoryMetric::L2;
    std::size_t k_min = 2;
    std::size_t k_max = 9;
    std::size_t restarts = 20;
  } kml;

  struct Gbtm {
    std::size_t k = 2;
    std::size_t order = 2;
    std::size_t max_iters = 500;
  } gbtm;

  struct Evaluate {
    std::vector<std::string> memberships;
    std::vector<std::string> partitions;
    std::string points;
  } evaluate;

  struct Plot {
    PlotKind kind = PlotKind::Trajectories;
    std::string input;
    std::string labels;
    std::string title;
  } plot;
};

/// One documented, settable configuration key.
struct ConfigField {
  std::string key;
  std::string help;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

/// Every key in file order.
const std::vector<ConfigField>& config_fields();

/// Sets one key from its text form; throws UnknownKey or InvalidArgument.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);

/**
 * Applies a `key = value` document to `base`. Blank lines and `#` comments
 * are ignored; unknown keys and malformed lines are errors (UnknownKey,
 * ParseError naming the line).
 */
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path);

/// Every key with its resolved value, parseable by parse_config.
std::string dump_config(const RunConfig& config);

enum class Stage : std::uint64_t { Simulate = 1, Train = 2, Cluster = 3, Kml = 4, Gbtm = 5 };

/// Seed of one pipeline stage, derived from the run seed.
std::uint64_t stage_seed(const RunConfig& config, Stage stage);

}  // namespace deeptraj
