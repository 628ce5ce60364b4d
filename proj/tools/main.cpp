#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "deeptraj/commands.hpp"
#include "deeptraj/config.hpp"
#include "deeptraj/error.hpp"

namespace {

struct CommandOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::map<std::string, std::string> overrides;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deep clustering of longitudinal data: recurrent autoencoder embeddings, kml and trajectory models"};
  app.require_subcommand(1);

  std::map<std::string, CommandOptions> options;
  for (const auto& cmd : deeptraj::commands()) {
    auto& opts = options[cmd.name];
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--config", opts.config_path, "key = value configuration file (e.g. a manifest.cfg)");
    sub->add_option("--seed", opts.seed, "run seed");
    sub->add_option("--out", opts.out, "output directory");
    for (const auto& field : deeptraj::config_fields()) {
      if (field.key == "seed" || field.key == "out") continue;
      sub->add_option_function<std::string>(
          "--" + field.key, [&opts, key = field.key](const std::string& v) { opts.overrides[key] = v; },
          field.help);
    }
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& cmd : deeptraj::commands()) {
      if (!app.got_subcommand(cmd.name)) continue;
      const auto& opts = options[cmd.name];
      deeptraj::RunConfig config = opts.config_path.empty() ? deeptraj::RunConfig{}
                                                            : deeptraj::load_config(opts.config_path);
      for (const auto& [key, value] : opts.overrides) deeptraj::set_config_value(config, key, value);
      if (opts.seed) config.seed = *opts.seed;
      if (opts.out) config.out = *opts.out;
      deeptraj::run_command(cmd.name, config, std::cout);
    }
  } catch (const deeptraj::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
