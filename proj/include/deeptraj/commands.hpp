#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "deeptraj/config.hpp"

namespace deeptraj {

struct Command {
  std::string name;
  std::string help;
  void (*run)(const RunConfig& config, std::ostream& log);
};

/// simulate, train, embed, cluster, kml, gbtm, evaluate, plot, reproduce-sim.
const std::vector<Command>& commands();

/**
 * Runs one subcommand. Every run first writes `<out>/manifest.cfg`, the
 * fully resolved configuration; passing it back with --config replays the
 * run. Throws InvalidArgument for an unknown command name.
 */
void run_command(std::string_view name, const RunConfig& config, std::ostream& log);

}  // namespace deeptraj
