#pragma once

#include <cstdint>

#include "exlimit/normal.hpp"

namespace exlimit {

/// Counter-based random stream (Philox4x32-10, Salmon et al. 2011).
///
/// The output is a pure function of (master_seed, replication_index,
/// draw counter): replications can be generated in any order, on any
/// number of workers, and replayed exactly. The master seed keys the
/// generator; the replication index selects a statistically independent
/// substream; the block counter advances as values are drawn.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t replication_index)
      : key0_(static_cast<std::uint32_t>(master_seed)),
        key1_(static_cast<std::uint32_t>(master_seed >> 32)),
        replication_(replication_index) {}

  std::uint64_t master_seed() const {
    return static_cast<std::uint64_t>(key0_) | (static_cast<std::uint64_t>(key1_) << 32);
  }
  std::uint64_t replication_index() const { return replication_; }

  std::uint64_t next_u64() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    std::uint64_t lo, hi;
    philox_block(lo, hi);
    spare_ = hi;
    has_spare_ = true;
    return lo;
  }

  /// Uniform on the open interval (0,1): 53-bit mantissa centered off the
  /// endpoints, so the normal quantile transform stays finite.
  double next_uniform() {
    const double u53 = static_cast<double>(next_u64() >> 11);
    return (u53 + 0.5) * 0x1.0p-53;
  }

  /// Standard normal draw by inverse CDF; consumes exactly one uniform.
  double next_normal() { return std_normal_quantile(next_uniform()); }

 private:
  static constexpr std::uint32_t kMult0 = 0xD2511F53u;
  static constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  void philox_block(std::uint64_t& out_lo, std::uint64_t& out_hi) {
    std::uint32_t c0 = static_cast<std::uint32_t>(block_);
    std::uint32_t c1 = static_cast<std::uint32_t>(block_ >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(replication_);
    std::uint32_t c3 = static_cast<std::uint32_t>(replication_ >> 32);
    std::uint32_t k0 = key0_;
    std::uint32_t k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMult0) * c0;
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMult1) * c2;
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      c0 = hi1 ^ c1 ^ k0;
      c1 = lo1;
      c2 = hi0 ^ c3 ^ k1;
      c3 = lo0;
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    ++block_;
    out_lo = static_cast<std::uint64_t>(c0) | (static_cast<std::uint64_t>(c1) << 32);
    out_hi = static_cast<std::uint64_t>(c2) | (static_cast<std::uint64_t>(c3) << 32);
  }

  std::uint32_t key0_;
  std::uint32_t key1_;
  std::uint64_t replication_;
  std::uint64_t block_ = 0;
  std::uint64_t spare_ = 0;
  bool has_spare_ = false;
};

}  // namespace exlimit
