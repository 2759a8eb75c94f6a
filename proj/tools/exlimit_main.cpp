// exlimit: evaluate the limit laws of the rescaled maximum of partial
// sums for exchangeable sequences and verify them by simulation.
//
//   exlimit <scenario.cfg> [flags]          run the scenario as configured
//   exlimit <mode> <scenario.cfg> [flags]   run it under a different mode
//
// Modes: limit | simulate | verify | sweep. See README for the scenario
// file format.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "exlimit/exlimit.hpp"

namespace {

std::string read_file_or_throw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int resolve_threads_flag(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("EXLIMIT_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  return 0;  // engine default: hardware concurrency
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exlimit: limit laws of max(S_1..S_n)/sqrt(n) for exchangeable sequences,\n"
      "with deterministic Monte Carlo verification"};

  std::string mode_or_config;
  std::string config_path;
  double assert_tol = -1.0;
  std::uint64_t seed_flag = 0;
  int threads_flag = 0;
  std::string out_flag;

  app.add_option("mode-or-config", mode_or_config,
                 "scenario file, or a mode (limit|simulate|verify|sweep) followed by one")
      ->required();
  app.add_option("config", config_path, "scenario file (when a mode is given first)");
  auto* assert_opt =
      app.add_option("--assert", assert_tol,
                     "verify mode: exit with status 3 if sup_distance exceeds TOL");
  auto* seed_opt = app.add_option("--seed", seed_flag, "override the scenario seed");
  app.add_option("--threads", threads_flag,
                 "worker threads (default: EXLIMIT_THREADS or hardware concurrency); "
                 "never changes numerical output");
  auto* out_opt = app.add_option("--out", out_flag, "override the scenario output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    std::optional<exlimit::RunMode> mode_override = exlimit::parse_mode(mode_or_config);
    std::string path;
    if (mode_override) {
      if (config_path.empty()) {
        std::cerr << "validation error: mode '" << mode_or_config
                  << "' given but no scenario file\n";
        return 1;
      }
      path = config_path;
    } else {
      if (!config_path.empty()) {
        std::cerr << "validation error: unexpected second argument '" << config_path
                  << "' ('" << mode_or_config << "' is not a mode)\n";
        return 1;
      }
      path = mode_or_config;
    }

    exlimit::Scenario scenario = exlimit::parse_scenario(read_file_or_throw(path));
    if (mode_override) scenario.mode = *mode_override;

    exlimit::RunOptions options;
    if (*assert_opt) options.assert_tol = assert_tol;
    if (*seed_opt) options.seed = seed_flag;
    if (*out_opt) options.output_path = out_flag;
    options.threads = resolve_threads_flag(threads_flag);

    return exlimit::run_scenario(std::move(scenario), options);
  } catch (const exlimit::validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
}
