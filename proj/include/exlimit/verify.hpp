#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "exlimit/engine.hpp"
#include "exlimit/errors.hpp"
#include "exlimit/limit_laws.hpp"
#include "exlimit/measures.hpp"

namespace exlimit {

/// Empirical-vs-theoretical comparison on a grid. sup_distance is taken
/// over the grid points not excluded around atoms of the limit.
struct ComparisonReport {
  std::vector<double> x_grid;
  std::vector<double> empirical;
  std::vector<double> theoretical;
  double sup_distance = 0.0;
  std::int64_t n = 0;
  std::int64_t replications = 0;
  std::vector<double> excluded_points;

  friend bool operator==(const ComparisonReport&, const ComparisonReport&) = default;
};

/// Default half-width of the window around a limit atom excluded from the
/// sup distance (weak convergence gives no pointwise control there).
inline constexpr double kDefaultAtomExclusion = 0.05;

/// Simulates the rescaled maxima and compares their empirical CDF with
/// the drift-decomposed limit on config.x_grid. Grid points within
/// atom_exclusion of an atom of the limit (x = 0 when the measure carries
/// degenerate mass) are reported but excluded from the sup.
inline ComparisonReport compare_to_limit(const DirectingMeasure& measure,
                                         const SimulationConfig& config,
                                         double atom_exclusion = kDefaultAtomExclusion,
                                         int threads = 0) {
  config.validate();
  if (config.x_grid.empty()) {
    throw precondition_error("compare_to_limit: x_grid must be non-empty");
  }
  const ModelSummary summary = summarize(measure);
  const EmpiricalCdf ecdf = simulate_max_batch(measure, config, threads);

  ComparisonReport report;
  report.x_grid = config.x_grid;
  report.n = config.n;
  report.replications = config.replications;
  const bool atom_at_zero = summary.p_zero_degenerate > 0.0;
  for (double x : config.x_grid) {
    report.empirical.push_back(ecdf.evaluate(x).value());
    report.theoretical.push_back(general_limit(x, summary));
    const bool excluded = atom_at_zero && std::abs(x) < atom_exclusion;
    if (excluded) {
      report.excluded_points.push_back(x);
    } else {
      report.sup_distance = std::max(
          report.sup_distance, std::abs(report.empirical.back() - report.theoretical.back()));
    }
  }
  return report;
}

/// Pair-sampled estimates of E X1 X2 and E X1^2 X2^2 with standard
/// errors: one component draw, then two conditional draws per pair. Under
/// exchangeability E X1 X2 equals the second moment of the conditional
/// mean, so a zero estimate witnesses E_F X1 = 0 a.s.
struct MomentEstimates {
  double e_x1x2 = 0.0;
  double se_x1x2 = 0.0;
  double e_x1sq_x2sq = 0.0;
  double se_x1sq_x2sq = 0.0;
};

inline MomentEstimates moment_conditions(const DirectingMeasure& measure, std::int64_t pairs,
                                         std::uint64_t master_seed) {
  if (pairs < 1000) {
    throw precondition_error("moment_conditions: needs at least 1000 pairs");
  }
  double sum1 = 0.0, sumsq1 = 0.0;
  double sum2 = 0.0, sumsq2 = 0.0;
  for (std::int64_t i = 0; i < pairs; ++i) {
    RandomStream stream(master_seed, static_cast<std::uint64_t>(i));
    const auto& law = measure.components()[measure.sample_component(stream)].law;
    const double x1 = law.sample(stream);
    const double x2 = law.sample(stream);
    const double prod = x1 * x2;
    const double prod_sq = x1 * x1 * x2 * x2;
    sum1 += prod;
    sumsq1 += prod * prod;
    sum2 += prod_sq;
    sumsq2 += prod_sq * prod_sq;
  }
  const double count = static_cast<double>(pairs);
  MomentEstimates est;
  est.e_x1x2 = sum1 / count;
  est.e_x1sq_x2sq = sum2 / count;
  est.se_x1x2 = std::sqrt(std::max(0.0, sumsq1 / count - est.e_x1x2 * est.e_x1x2) / count);
  est.se_x1sq_x2sq =
      std::sqrt(std::max(0.0, sumsq2 / count - est.e_x1sq_x2sq * est.e_x1sq_x2sq) / count);
  return est;
}

/// Largest deviation of S_n/n from the drawn component's exact mean over
/// the replications: the conditional strong law made quantitative.
inline double lln_drift_check(const DirectingMeasure& measure, std::int64_t n,
                              std::int64_t replications, std::uint64_t master_seed,
                              int threads = 0) {
  if (n < 1000) throw precondition_error("lln_drift_check: needs n >= 1000");
  if (replications < 1) {
    throw precondition_error("lln_drift_check: needs replications >= 1");
  }
  std::vector<double> deviations(static_cast<std::size_t>(replications), 0.0);
  detail::parallel_for_blocks(replications, threads,
                              [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t r = begin; r < end; ++r) {
      RandomStream stream(master_seed, static_cast<std::uint64_t>(r));
      const auto& law = measure.components()[measure.sample_component(stream)].law;
      law.visit_sampler([&](auto&& draw) {
        detail::CompensatedSum sums;
        for (std::int64_t k = 0; k < n; ++k) sums.add(draw(stream));
        deviations[static_cast<std::size_t>(r)] =
            std::abs(sums.value() / static_cast<double>(n) - law.mean());
      });
    }
  });
  return *std::max_element(deviations.begin(), deviations.end());
}

/// Sup distance between the empirical CDF of the per-component
/// standardized sums (S_n - n mean_j)/(sqrt(n) sigma_j) and the standard
/// normal CDF on a fixed 201-point grid over [-4,4]. Replications that
/// draw a degenerate component cannot be standardized and are skipped.
struct CltReport {
  double sup_distance = 0.0;
  std::int64_t replications_used = 0;
  std::int64_t replications_skipped = 0;
};

inline CltReport clt_check(const DirectingMeasure& measure, std::int64_t n,
                           std::int64_t replications, std::uint64_t master_seed,
                           int threads = 0) {
  if (measure.all_components_degenerate()) {
    throw precondition_error("clt_check: every component of the measure is degenerate");
  }
  if (n < 1) throw precondition_error("clt_check: n must be >= 1");
  if (replications < 1) throw precondition_error("clt_check: replications must be >= 1");

  constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> standardized(static_cast<std::size_t>(replications), kNan);
  detail::parallel_for_blocks(replications, threads,
                              [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t r = begin; r < end; ++r) {
      RandomStream stream(master_seed, static_cast<std::uint64_t>(r));
      const auto& law = measure.components()[measure.sample_component(stream)].law;
      if (law.variance() == 0.0) continue;  // skipped, reported below
      law.visit_sampler([&](auto&& draw) {
        detail::CompensatedSum sums;
        for (std::int64_t k = 0; k < n; ++k) sums.add(draw(stream));
        const double centered = sums.value() - static_cast<double>(n) * law.mean();
        standardized[static_cast<std::size_t>(r)] =
            centered / (std::sqrt(static_cast<double>(n)) * law.sigma());
      });
    }
  });

  std::vector<double> used;
  used.reserve(standardized.size());
  for (double v : standardized) {
    if (!std::isnan(v)) used.push_back(v);
  }
  CltReport report;
  report.replications_used = static_cast<std::int64_t>(used.size());
  report.replications_skipped = replications - report.replications_used;
  if (used.empty()) {
    throw precondition_error("clt_check: no replication drew a non-degenerate component");
  }
  const EmpiricalCdf ecdf(std::move(used), n, report.replications_used);
  for (int i = 0; i <= 200; ++i) {
    const double x = -4.0 + static_cast<double>(i) * (8.0 / 200.0);
    report.sup_distance = std::max(
        report.sup_distance, std::abs(ecdf.evaluate(x).value() - std_normal_cdf(x).value()));
  }
  return report;
}

/// Sup distance against the limit for each n in n_list (shared seed and
/// replication count), exhibiting the convergence trend.
struct SweepPoint {
  std::int64_t n = 0;
  double sup_distance = 0.0;
  friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

inline std::vector<SweepPoint> convergence_sweep(const DirectingMeasure& measure,
                                                 const std::vector<std::int64_t>& n_list,
                                                 std::int64_t replications,
                                                 std::uint64_t master_seed,
                                                 const std::vector<double>& x_grid,
                                                 double atom_exclusion = kDefaultAtomExclusion,
                                                 int threads = 0) {
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    if (!(n_list[i - 1] < n_list[i])) {
      throw precondition_error("convergence_sweep: n_list must be increasing");
    }
  }
  std::vector<SweepPoint> points;
  points.reserve(n_list.size());
  for (std::int64_t n : n_list) {
    SimulationConfig config{n, replications, master_seed, x_grid};
    const ComparisonReport report = compare_to_limit(measure, config, atom_exclusion, threads);
    points.push_back({n, report.sup_distance});
  }
  return points;
}

}  // namespace exlimit
