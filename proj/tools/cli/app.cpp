#include "app.hpp"

#include <CLI11.hpp>

#include "commands.hpp"
#include "valvelab/error.hpp"

namespace valvelab::cli {

namespace {

const char* summary(const std::string& command) {
  if (command == "sweep") return "static up/down step sweep (hysteresis map)";
  if (command == "etfe") return "open-loop PRBS run and empirical transfer function estimate";
  if (command == "identify") return "ARX least-squares fit and order scan";
  if (command == "design") return "PI or robust RST design with sensitivity functions";
  if (command == "track") return "closed-loop reference staircase on a simulated valve";
  if (command == "adapt") return "iterative closed-loop identification and controller redesign";
  return "write the parameters of simulated valve presets";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"valvelab: throttle-valve identification and control workbench"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  std::string out_dir;
  unsigned parallel = 1;
  std::string selected;

  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name, summary(name));
    sub->add_option("--config,-c", config_path, "scenario file with [section] key = value lines");
    sub->add_option("--set,-s", overrides, "override as section.key=value (repeatable)");
    sub->add_option("--seed", seed, "noise seed of the simulated valve");
    sub->add_option("--out,-o", out_dir, "output directory");
    sub->add_option("--parallel,-j", parallel, "workers for several valve presets")->check(CLI::PositiveNumber);
    sub->callback([&selected, name] { selected = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  Config config;
  RunOptions options;
  try {
    if (!config_path.empty()) config = Config::load(config_path);
    for (const auto& o : overrides) config.set(o);
  } catch (const Error& e) {
    err << "valvelab " << selected << ": " << e.what() << "\n";
    return kInvalid;
  }
  for (auto* sub : app.get_subcommands()) {
    if (sub->count("--seed")) options.seed = seed;
    if (sub->count("--out")) options.out = out_dir;
  }
  options.parallel = parallel;

  std::ostringstream log;
  const int status = run_command(selected, config, options, log);
  (status == kOk ? out : err) << log.str();
  return status;
}

}  // namespace valvelab::cli
