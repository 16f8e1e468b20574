#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"

int main(int argc, char** argv) {
  using namespace l96sp::cli;
  CLI::App app{"Two-tier Lorenz 96 stochastic parameterization laboratory"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "RNG seed (overrides the config)");
    sub->add_option("--scale", opt.scale, "desk-scale factor for durations and counts");
    sub->add_option("--out", opt.out, "output directory");
  };

  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const CommonOptions&);
  };
  const Entry entries[] = {
      {"gen-truth", "integrate the two-tier model and write truth trajectories", cmd_gen_truth},
      {"fit-poly", "fit the cubic + AR1 baseline", cmd_fit_poly},
      {"train-rnn", "train the recurrent model by maximum likelihood", cmd_train_rnn},
      {"simulate", "free-running simulation of a fitted model", cmd_simulate},
      {"evaluate", "weather, climate, regime, likelihood and cost metrics", cmd_evaluate},
      {"cost", "flops per time step for each model", cmd_cost},
  };
  std::vector<std::pair<CLI::App*, const Entry*>> subs;
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    add_common(sub);
    subs.emplace_back(sub, &e);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (const auto& [sub, entry] : subs) {
    if (!sub->parsed()) continue;
    if (sub->count("--seed") > 0) opt.seed = seed;
    try {
      return entry->run(opt);
    } catch (const std::exception& e) {
      std::cerr << "l96sp " << entry->name << ": " << e.what() << '\n';
      return exit_code_for(e);
    }
  }
  return 2;
}
