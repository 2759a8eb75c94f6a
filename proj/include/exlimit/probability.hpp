#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace exlimit {

/// A value constrained to [0,1]. Construction tolerates sub-nanoscale
/// floating point spill past the endpoints and clamps it; anything larger
/// is a genuine bug and throws.
class Probability {
 public:
  constexpr Probability() = default;

  explicit Probability(double v) {
    constexpr double slack = 1e-9;
    if (!(v >= -slack && v <= 1.0 + slack)) {
      throw std::domain_error("probability outside [0,1]: " + std::to_string(v));
    }
    value_ = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
  }

  double value() const { return value_; }
  operator double() const { return value_; }

  friend bool operator==(Probability a, Probability b) { return a.value_ == b.value_; }

 private:
  double value_ = 0.0;
};

}  // namespace exlimit
