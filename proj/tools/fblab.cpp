#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "commands.hpp"
#include "fblab/config.hpp"
#include "fblab/errors.hpp"

namespace {

int fail(const std::string& kind, const std::string& message, std::optional<int> line = {}) {
  nlohmann::json err = {{"kind", kind}, {"message", message}};
  if (line) err["line"] = *line;
  std::cerr << nlohmann::json{{"error", err}}.dump() << "\n";
  return fblab::app::kError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fblab: singularly perturbed biharmonic free boundary lab"};
  app.require_subcommand(1, 1);
  std::string config_path, out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out, "output directory (overrides run.out)");
  app.add_option("--seed", seed, "random seed (overrides run.seed)");
  app.add_flag("--quiet", quiet, "only errors on stderr");
  app.set_help_all_flag("--help-all");
  for (const std::string& name : fblab::app::subcommands()) {
    app.add_subcommand(name, name == "all" ? "every module, then the acceptance suite" : "run the " + name + " module")
        ->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what());
  }

  fblab::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = fblab::load_config(config_path);
  } catch (const fblab::ParseError& e) {
    return fail(e.kind(), e.what(), e.line());
  }
  if (!out.empty()) cfg.run.out = out;
  if (seed) cfg.run.seed = *seed;

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return fblab::app::run_subcommand(name, cfg, quiet, config_path.empty() ? "defaults" : config_path);
  } catch (const fblab::Error& e) {
    return fail(e.kind(), e.what());
  }
}
