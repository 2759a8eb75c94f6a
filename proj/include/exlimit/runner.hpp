#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "exlimit/engine.hpp"
#include "exlimit/errors.hpp"
#include "exlimit/format.hpp"
#include "exlimit/scenario.hpp"
#include "exlimit/verify.hpp"

namespace exlimit {

struct RunOptions {
  std::optional<double> assert_tol;         // verify mode: fail (status 3) if sup exceeds
  std::optional<std::uint64_t> seed;        // overrides the scenario seed
  std::optional<std::string> output_path;   // overrides the scenario output path
  int threads = 0;                          // 0 = hardware concurrency
  std::ostream* log = &std::cout;
};

namespace detail {

inline void write_file_or_throw(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline nlohmann::json summary_to_json(const ModelSummary& summary) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& atom : summary.sigma_sub_law.atoms()) {
    atoms.push_back({{"weight", atom.weight}, {"sigma", atom.sigma}});
  }
  return {{"p_neg", summary.p_neg},
          {"p_pos", summary.p_pos},
          {"p_zero_degenerate", summary.p_zero_degenerate},
          {"sigma_atoms", atoms}};
}

}  // namespace detail

/// Executes one scenario and writes its outputs: the mode-specific CSV
/// (schemas below) plus a machine-readable sidecar `<output>.summary.json`.
///
///   limit     x,theoretical
///   simulate  x,empirical
///   verify    x,empirical,theoretical,abs_diff
///   sweep     n,sup_distance
///
/// Returns the process exit status: 0 ok, 1 validation error, 2 runtime
/// error, 3 assert tolerance breached (verify mode with assert_tol set).
inline int run_scenario(Scenario scenario, const RunOptions& options = {}) {
  try {
    if (options.seed) scenario.seed = *options.seed;
    if (options.output_path) scenario.output_path = *options.output_path;
    const auto started = std::chrono::steady_clock::now();

    const DirectingMeasure measure = scenario.measure.build();
    const ModelSummary summary = summarize(measure);
    const std::vector<double> grid = scenario.x_grid.expand();

    std::string csv;
    nlohmann::json sidecar{{"name", scenario.name},
                           {"mode", to_string(scenario.mode)},
                           {"n", scenario.n},
                           {"replications", scenario.replications},
                           {"seed", scenario.seed},
                           {"model_summary", detail::summary_to_json(summary)}};
    double sup_distance = -1.0;

    switch (scenario.mode) {
      case RunMode::limit: {
        csv += "x,theoretical\n";
        for (double x : grid) {
          csv += format_double(x) + "," + format_double(general_limit(x, summary)) + "\n";
        }
        break;
      }
      case RunMode::simulate: {
        SimulationConfig config{scenario.n, scenario.replications, scenario.seed, grid};
        const EmpiricalCdf ecdf = simulate_max_batch(measure, config, options.threads);
        csv += "x,empirical\n";
        for (double x : grid) {
          csv += format_double(x) + "," + format_double(ecdf.evaluate(x).value()) + "\n";
        }
        nlohmann::json quantiles = nlohmann::json::array();
        for (int percent = 1; percent <= 99; ++percent) {
          quantiles.push_back(ecdf.quantile(static_cast<double>(percent) / 100.0));
        }
        sidecar["quantiles"] = quantiles;
        sidecar["min"] = ecdf.sorted_samples().front();
        sidecar["max"] = ecdf.sorted_samples().back();
        break;
      }
      case RunMode::verify: {
        SimulationConfig config{scenario.n, scenario.replications, scenario.seed, grid};
        const ComparisonReport report =
            compare_to_limit(measure, config, scenario.atom_exclusion, options.threads);
        csv += "x,empirical,theoretical,abs_diff\n";
        for (std::size_t i = 0; i < report.x_grid.size(); ++i) {
          csv += format_double(report.x_grid[i]) + "," + format_double(report.empirical[i]) +
                 "," + format_double(report.theoretical[i]) + "," +
                 format_double(std::abs(report.empirical[i] - report.theoretical[i])) + "\n";
        }
        sup_distance = report.sup_distance;
        sidecar["sup_distance"] = report.sup_distance;
        sidecar["excluded_points"] = report.excluded_points;
        break;
      }
      case RunMode::sweep: {
        const auto points = convergence_sweep(measure, scenario.sweep_ns,
                                              scenario.replications, scenario.seed, grid,
                                              scenario.atom_exclusion, options.threads);
        csv += "n,sup_distance\n";
        nlohmann::json sweep = nlohmann::json::array();
        for (const auto& point : points) {
          csv += format_int(point.n) + "," + format_double(point.sup_distance) + "\n";
          sweep.push_back({{"n", point.n}, {"sup_distance", point.sup_distance}});
        }
        sidecar["sweep"] = sweep;
        break;
      }
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    sidecar["runtime_seconds"] = elapsed;

    detail::write_file_or_throw(scenario.output_path, csv);
    detail::write_file_or_throw(scenario.output_path + ".summary.json",
                                sidecar.dump(2) + "\n");

    if (options.log) {
      *options.log << "[exlimit] " << scenario.name << " mode=" << to_string(scenario.mode);
      if (sup_distance >= 0.0) *options.log << " sup_distance=" << sup_distance;
      *options.log << " -> " << scenario.output_path << " (" << elapsed << "s)\n";
    }

    if (scenario.mode == RunMode::verify && options.assert_tol &&
        sup_distance > *options.assert_tol) {
      if (options.log) {
        *options.log << "[exlimit] ASSERT FAILED: sup_distance " << sup_distance
                     << " exceeds tolerance " << *options.assert_tol << "\n";
      }
      return 3;
    }
    return 0;
  } catch (const validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const precondition_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace exlimit
