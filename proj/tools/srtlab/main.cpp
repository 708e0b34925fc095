#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "srtlab/errors.hpp"

using namespace srtlab;
using namespace srtlab::cli;

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kInvariant = 3, kBudget = 4 };

struct Flags {
  std::string config;
  std::string preset;
  std::string out;
  std::string cache;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool svg = false;
};

ExperimentConfig load(const Flags& f) {
  json j = json::object();
  if (!f.preset.empty()) j = preset(f.preset);
  if (!f.config.empty()) j.merge_patch(read_config_file(f.config));
  ExperimentConfig c = parse_config(j);
  if (!f.out.empty()) c.out = f.out;
  if (!f.cache.empty()) c.cache = f.cache;
  if (f.seed) c.seed = *f.seed;
  if (f.threads) c.threads = *f.threads;
  if (f.svg) c.svg = true;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"srtlab: strong renewal theorem diagnostics for lattice laws"};
  app.require_subcommand(1);
  Flags flags;

  using Command = json (*)(const ExperimentConfig&, std::ostream&);
  const std::pair<const char*, Command> commands[] = {
      {"dist-build", cmd_dist_build}, {"renewal", cmd_renewal}, {"criteria", cmd_criteria},
      {"probe", cmd_probe},           {"mc", cmd_mc},           {"report", cmd_report}};
  const char* help[] = {"build and validate a law, write law.csv and law.json",
                        "renewal table, local and integrated ratios (cached)",
                        "criterion grids and verdicts",
                        "big-jump lemma and necessity probes",
                        "Monte Carlo estimates",
                        "collect the JSON sidecars of an output directory"};
  Command selected = nullptr;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i].first, help[i]);
    sub->add_option("--config", flags.config, "JSON config file (strict keys)");
    sub->add_option("--preset", flags.preset, "named preset; --config keys override it");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--cache", flags.cache, "renewal cache directory");
    sub->add_option("--seed", flags.seed, "Monte Carlo seed");
    sub->add_option("--threads", flags.threads, "worker threads (0 = hardware)");
    sub->add_flag("--svg", flags.svg, "also emit SVG charts");
    sub->callback([&selected, cmd = commands[i].second] { selected = cmd; });
  }
  app.footer("presets: pareto-0.3 pareto-0.4 pareto-0.5 pareto-0.7 uao-0.5 twosided-0.25 half\n"
             "exit codes: 0 ok, 2 config error, 3 invariant failure, 4 budget exceeded");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    selected(load(flags), std::cout);
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const InvariantError& e) {
    std::cerr << "invariant failure: " << e.what() << '\n';
    return kInvariant;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
