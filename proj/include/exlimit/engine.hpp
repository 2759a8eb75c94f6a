#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <new>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "exlimit/errors.hpp"
#include "exlimit/measures.hpp"
#include "exlimit/probability.hpp"
#include "exlimit/random.hpp"

namespace exlimit {

/// Input for one simulation batch. x_grid is the set of evaluation points
/// carried along for the comparison stages; the engine itself only needs
/// n, replications and the seed.
struct SimulationConfig {
  std::int64_t n = 10000;
  std::int64_t replications = 100000;
  std::uint64_t master_seed = 42;
  std::vector<double> x_grid;

  void validate() const {
    if (n < 1) throw validation_error("SimulationConfig: n must be >= 1");
    if (replications < 1) {
      throw validation_error("SimulationConfig: replications must be >= 1");
    }
    for (std::size_t i = 1; i < x_grid.size(); ++i) {
      if (!(x_grid[i - 1] < x_grid[i])) {
        throw validation_error("SimulationConfig: x_grid must be strictly increasing");
      }
    }
  }

  friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

/// Sorted batch of rescaled maxima, one value per replication.
class EmpiricalCdf {
 public:
  EmpiricalCdf(std::vector<double> samples, std::int64_t n_used,
               std::int64_t replications_used)
      : samples_(std::move(samples)), n_used_(n_used), replications_used_(replications_used) {
    if (samples_.empty()) throw validation_error("EmpiricalCdf: no samples");
    if (static_cast<std::int64_t>(samples_.size()) != replications_used_) {
      throw validation_error("EmpiricalCdf: sample count != replications");
    }
    std::sort(samples_.begin(), samples_.end());
  }

  const std::vector<double>& sorted_samples() const { return samples_; }
  std::int64_t n_used() const { return n_used_; }
  std::int64_t replications_used() const { return replications_used_; }

  /// Fraction of samples strictly below x (the "<" convention of the
  /// limit theorems), by binary search.
  Probability evaluate(double x) const {
    const auto below = std::lower_bound(samples_.begin(), samples_.end(), x);
    return Probability(static_cast<double>(below - samples_.begin()) /
                       static_cast<double>(samples_.size()));
  }

  /// Order-statistic quantile, q in [0,1].
  double quantile(double q) const {
    if (!(q >= 0.0 && q <= 1.0)) throw precondition_error("quantile: q outside [0,1]");
    const auto count = static_cast<std::int64_t>(samples_.size());
    auto rank = static_cast<std::int64_t>(std::ceil(q * static_cast<double>(count))) - 1;
    rank = std::clamp<std::int64_t>(rank, 0, count - 1);
    return samples_[static_cast<std::size_t>(rank)];
  }

  friend bool operator==(const EmpiricalCdf&, const EmpiricalCdf&) = default;

 private:
  std::vector<double> samples_;
  std::int64_t n_used_;
  std::int64_t replications_used_;
};

inline Probability evaluate_cdf(const EmpiricalCdf& ecdf, double x) {
  return ecdf.evaluate(x);
}

namespace detail {

// Neumaier-compensated running sum; keeps the partial sums S_k accurate
// to a few ulps over millions of terms.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + comp; }
};

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(begin, end) over a contiguous partition of [0, count) on the
// requested number of workers. Partition boundaries never influence
// results: every index owns its work unit outright.
template <class Fn>
void parallel_for_blocks(std::int64_t count, int threads, Fn&& fn) {
  threads = std::min<std::int64_t>(resolve_threads(threads), count);
  if (threads <= 1) {
    fn(std::int64_t{0}, count);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(threads));
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const std::int64_t chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::int64_t begin = t * chunk;
    const std::int64_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([&, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

/// Outcome of scanning one conditional path: the running maximum of the
/// partial sums and the first step at which the sum exceeded the
/// threshold (-1 if it never did within n steps).
struct PathOutcome {
  double max_partial_sum = 0.0;
  std::int64_t first_passage_step = -1;
};

/// Full scan of one replication: n draws from law, streaming compensated
/// partial sums, O(1) memory.
inline PathOutcome scan_path(const ComponentLaw& law, std::int64_t n, double threshold,
                             RandomStream& stream) {
  return law.visit_sampler([&](auto&& draw) {
    detail::CompensatedSum sums;
    PathOutcome outcome;
    outcome.max_partial_sum = -std::numeric_limits<double>::infinity();
    for (std::int64_t k = 1; k <= n; ++k) {
      sums.add(draw(stream));
      const double s_k = sums.value();
      if (s_k > outcome.max_partial_sum) outcome.max_partial_sum = s_k;
      if (outcome.first_passage_step < 0 && s_k > threshold) {
        outcome.first_passage_step = k;
      }
    }
    return outcome;
  });
}

/// Early-exit scan: stops at the first k with S_k > threshold. Returns k,
/// or -1 if the threshold is never crossed within n steps. Pathwise
/// equivalent to scan_path on the same stream: the step-k comparisons are
/// identical, so first_passage_step agrees bit for bit.
inline std::int64_t first_passage_step(const ComponentLaw& law, std::int64_t n,
                                       double threshold, RandomStream& stream) {
  return law.visit_sampler([&](auto&& draw) -> std::int64_t {
    detail::CompensatedSum sums;
    for (std::int64_t k = 1; k <= n; ++k) {
      sums.add(draw(stream));
      if (sums.value() > threshold) return k;
    }
    return -1;
  });
}

namespace detail {

inline void check_batch_size(const SimulationConfig& config) {
  const std::int64_t n = config.n;
  const std::int64_t r = config.replications;
  if (r > std::numeric_limits<std::int64_t>::max() / n) {
    throw resource_error("simulation batch too large: n = " + std::to_string(n) +
                         ", replications = " + std::to_string(r) +
                         " (n*replications overflows)");
  }
}

inline std::vector<double> allocate_samples(const SimulationConfig& config) {
  try {
    return std::vector<double>(static_cast<std::size_t>(config.replications));
  } catch (const std::bad_alloc&) {
    throw resource_error("cannot allocate sample buffer: n*replications = " +
                         std::to_string(config.n * config.replications));
  } catch (const std::length_error&) {
    throw resource_error("cannot allocate sample buffer: n*replications = " +
                         std::to_string(config.n * config.replications));
  }
}

}  // namespace detail

/// Rescaled maxima max(S_1..S_n)/sqrt(n) over config.replications
/// independent replications. Each replication r draws its component and
/// its n conditional values from the dedicated stream (master_seed, r);
/// results land in slot r and are only then sorted, so the output is
/// bit-identical for any thread count or scheduling order.
inline EmpiricalCdf simulate_max_batch(const DirectingMeasure& measure,
                                       const SimulationConfig& config, int threads = 0) {
  config.validate();
  detail::check_batch_size(config);
  std::vector<double> samples = detail::allocate_samples(config);
  const double root_n = std::sqrt(static_cast<double>(config.n));
  const double no_threshold = std::numeric_limits<double>::infinity();
  detail::parallel_for_blocks(config.replications, threads,
                              [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t r = begin; r < end; ++r) {
      RandomStream stream(config.master_seed, static_cast<std::uint64_t>(r));
      const std::size_t j = measure.sample_component(stream);
      const PathOutcome outcome =
          scan_path(measure.components()[j].law, config.n, no_threshold, stream);
      samples[static_cast<std::size_t>(r)] = outcome.max_partial_sum / root_n;
    }
  });
  return EmpiricalCdf(std::move(samples), config.n, config.replications);
}

/// Monte Carlo estimate of P(T_n(x) <= n), where T_n(x) is the first step
/// at which the partial sum exceeds x*sqrt(n). Same stream discipline as
/// simulate_max_batch; the early exit changes cost, never results.
inline Probability first_passage_probability(const DirectingMeasure& measure,
                                             const SimulationConfig& config, double x,
                                             int threads = 0) {
  config.validate();
  detail::check_batch_size(config);
  if (!std::isfinite(x)) {
    throw std::domain_error("first_passage_probability: non-finite threshold");
  }
  const double threshold = x * std::sqrt(static_cast<double>(config.n));
  const int worker_count = detail::resolve_threads(threads);
  std::vector<std::int64_t> hit_counts(static_cast<std::size_t>(worker_count), 0);
  std::atomic<std::size_t> next_slot{0};
  detail::parallel_for_blocks(config.replications, worker_count,
                              [&](std::int64_t begin, std::int64_t end) {
    const std::size_t slot = next_slot.fetch_add(1);
    std::int64_t hits = 0;
    for (std::int64_t r = begin; r < end; ++r) {
      RandomStream stream(config.master_seed, static_cast<std::uint64_t>(r));
      const std::size_t j = measure.sample_component(stream);
      if (first_passage_step(measure.components()[j].law, config.n, threshold, stream) > 0) {
        ++hits;
      }
    }
    hit_counts[slot] += hits;
  });
  std::int64_t total = 0;
  for (std::int64_t h : hit_counts) total += h;
  return Probability(static_cast<double>(total) / static_cast<double>(config.replications));
}

}  // namespace exlimit
