// apec: command-line front end for model-set generation, amorphic complexity
// runs and window dimension fits.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "apec/commands.hpp"
#include "apec/config.hpp"
#include "apec/error.hpp"
#include "apec/version.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned threads = 1;
};

apec::RunConfig resolve(const Options& opt) {
  apec::RunConfig config = opt.preset.empty() ? apec::RunConfig{} : apec::preset(opt.preset);
  if (!opt.config_path.empty()) config = apec::load_config_file(opt.config_path, config);
  if (opt.seed) config.seed = *opt.seed;
  if (!opt.out.empty()) config.out_dir = opt.out;
  config.threads = opt.threads;
  if (const char* cap = std::getenv("APEC_RESOURCE_CAP")) {
    config = apec::parse_config(std::string("resource.cap = ") + cap, config);
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cut-and-project model sets and amorphic complexity"};
  app.set_version_flag("--version", apec::version());
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--config", opt.config_path, "Config file (key = value lines)");
  app.add_option("--preset", opt.preset, "Named preset applied before the config file")
      ->check(CLI::IsMember(apec::preset_names()));
  app.add_option("--seed", opt.seed, "Sampler seed");
  app.add_option("--out", opt.out, "Output directory");
  app.add_option("--threads", opt.threads, "Worker threads (results do not depend on it)")->check(CLI::Range(1u, 1024u));

  auto* generate = app.add_subcommand("generate", "Write the model set of the configured window");
  auto* ac = app.add_subcommand("ac", "Estimate amorphic complexity and check the dimension bound");
  auto* dim = app.add_subcommand("dim", "Fit box-counting and Minkowski exponents of the window boundary");
  auto* show = app.add_subcommand("config", "Print the resolved config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << apec::error_json(apec::Error(apec::ErrorCode::config, e.what())) << "\n";
    return 2;
  }

  try {
    const apec::RunConfig config = resolve(opt);
    if (show->parsed()) {
      std::cout << apec::to_config_text(config);
      return 0;
    }
    apec::CommandResult result;
    if (generate->parsed()) result = apec::cmd_generate(config);
    if (ac->parsed()) result = apec::cmd_ac(config);
    if (dim->parsed()) result = apec::cmd_dim(config);
    for (const auto& w : result.warnings) std::cerr << nlohmann::json{{"warning", w}}.dump() << "\n";
    std::cout << result.summary << "\n";
    return 0;
  } catch (const apec::Error& e) {
    std::cerr << apec::error_json(e) << "\n";
    return apec::exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", {{"code", "INTERNAL"}, {"message", e.what()}}}}.dump() << "\n";
    return 1;
  }
}
