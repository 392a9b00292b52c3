#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dynlearn/cli/commands.hpp"
#include "dynlearn/cli/presets.hpp"
#include "dynlearn/support/errors.hpp"

namespace {

struct CommonArgs {
  std::string preset;
  std::string config_file;
  std::string out;
  std::int64_t seed = -1;  ///< -1 keeps the config's run.seed
};

void add_common(CLI::App* sub, CommonArgs& args) {
  std::string names;
  for (const auto& n : dynlearn::preset_names()) {
    if (!names.empty()) names += ", ";
    names += n;
  }
  auto* preset =
      sub->add_option("--preset", args.preset, "built-in configuration (" + names + ")");
  auto* config =
      sub->add_option("--config", args.config_file, "key = value parameter file");
  preset->excludes(config);
  sub->add_option("--seed", args.seed, "override run.seed");
  sub->add_option("--out", args.out,
                  "output root (default artifacts-<preset> or artifacts)");
}

dynlearn::RunConfig materialize(const CommonArgs& args) {
  if (args.preset.empty() == args.config_file.empty())
    throw dynlearn::ConfigError("exactly one of --preset or --config is required");
  dynlearn::KeyValue kv = args.preset.empty()
                              ? dynlearn::KeyValue::parse_file(args.config_file)
                              : dynlearn::preset_config(args.preset);
  if (args.seed >= 0) kv.set_i64("run.seed", args.seed);
  std::filesystem::path out = args.out;
  if (out.empty())
    out = args.preset.empty() ? "artifacts" : "artifacts-" + args.preset;
  return dynlearn::make_run_config(kv, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduced-order power-component dynamics: simulate, learn, analyze"};
  app.require_subcommand(1);

  struct SubSpec {
    const char* name;
    const char* help;
    int (*run)(const dynlearn::RunConfig&);
    CommonArgs args;
  };
  SubSpec subs[] = {
      {"simulate", "sweep scenarios and write trajectory CSVs", dynlearn::cmd_simulate, {}},
      {"dataset", "window simulated trajectories into a training dataset",
       dynlearn::cmd_dataset, {}},
      {"train", "fit the configured one-step predictor", dynlearn::cmd_train, {}},
      {"eval", "one-step and rollout accuracy of a trained checkpoint",
       dynlearn::cmd_eval, {}},
      {"sensitivity", "set-point sensitivity of the simulation and the model",
       dynlearn::cmd_sensitivity, {}},
      {"gradcheck", "finite-difference audit of the reverse pass",
       dynlearn::cmd_gradcheck, {}},
  };
  for (auto& s : subs) add_common(app.add_subcommand(s.name, s.help), s.args);

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto& s : subs)
      if (app.get_subcommand(s.name)->parsed()) return s.run(materialize(s.args));
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
