#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "exlimit/errors.hpp"
#include "exlimit/limit_laws.hpp"
#include "exlimit/random.hpp"

namespace exlimit {

/// One conditional distribution F: a parametric family with closed-form
/// mean and variance and a sampler driven by a RandomStream.
///
/// A zero-variance member of any family is normalized to point_mass, so
/// variance() == 0 holds exactly when the law is a point mass.
class ComponentLaw {
 public:
  enum class Family {
    point_mass,                     // constant value
    normal,                         // N(mean, variance)
    rademacher_shifted,             // shift +- scale with probability 1/2 each
    convolution_rademacher_normal,  // B + Z, B Rademacher(1/2), Z standard normal
  };

  static ComponentLaw point_mass(double value) {
    return ComponentLaw(Family::point_mass, value, 0.0, value, 0.0);
  }

  static ComponentLaw normal(double mean, double variance) {
    if (!(variance >= 0.0)) {
      throw validation_error("ComponentLaw::normal: variance must be >= 0");
    }
    if (variance == 0.0) return point_mass(mean);
    return ComponentLaw(Family::normal, mean, variance, mean, variance);
  }

  static ComponentLaw rademacher_shifted(double shift, double scale) {
    if (!(scale >= 0.0)) {
      throw validation_error("ComponentLaw::rademacher_shifted: scale must be >= 0");
    }
    if (scale == 0.0) return point_mass(shift);
    return ComponentLaw(Family::rademacher_shifted, shift, scale, shift, scale * scale);
  }

  static ComponentLaw convolution_rademacher_normal() {
    // Var(B + Z) = Var(B) + Var(Z) = 1 + 1 by independence.
    return ComponentLaw(Family::convolution_rademacher_normal, 0.0, 0.0, 0.0, 2.0);
  }

  Family family() const { return family_; }
  double mean() const { return mean_; }
  double variance() const { return variance_; }
  double sigma() const { return sigma_; }

  /// Family parameters in declaration order (value | mean,variance |
  /// shift,scale | none).
  double param_a() const { return a_; }
  double param_b() const { return b_; }

  /// Invokes fn with a family-specific draw functor, letting hot loops
  /// resolve the family once per replication instead of once per draw.
  template <class Fn>
  auto visit_sampler(Fn&& fn) const {
    switch (family_) {
      case Family::normal:
        return fn([m = a_, s = sigma_](RandomStream& stream) {
          return m + s * stream.next_normal();
        });
      case Family::rademacher_shifted:
        return fn([sh = a_, sc = b_](RandomStream& stream) {
          return stream.next_uniform() < 0.5 ? sh - sc : sh + sc;
        });
      case Family::convolution_rademacher_normal:
        return fn([](RandomStream& stream) {
          const double b = stream.next_uniform() < 0.5 ? -1.0 : 1.0;
          return b + stream.next_normal();
        });
      case Family::point_mass:
      default:
        return fn([v = a_](RandomStream&) { return v; });
    }
  }

  double sample(RandomStream& stream) const {
    return visit_sampler([&stream](auto&& draw) { return draw(stream); });
  }

  std::string describe() const {
    switch (family_) {
      case Family::point_mass:
        return "point_mass(" + std::to_string(a_) + ")";
      case Family::normal:
        return "normal(" + std::to_string(a_) + ", " + std::to_string(b_) + ")";
      case Family::rademacher_shifted:
        return "rademacher_shifted(" + std::to_string(a_) + ", " + std::to_string(b_) + ")";
      case Family::convolution_rademacher_normal:
        return "convolution_rademacher_normal()";
    }
    return "?";
  }

  friend bool operator==(const ComponentLaw&, const ComponentLaw&) = default;

 private:
  ComponentLaw(Family family, double a, double b, double mean, double variance)
      : family_(family), a_(a), b_(b), mean_(mean), variance_(variance),
        sigma_(std::sqrt(variance)) {}

  Family family_;
  double a_;
  double b_;
  double mean_;
  double variance_;
  double sigma_;
};

struct WeightedComponent {
  double weight = 0.0;
  ComponentLaw law = ComponentLaw::point_mass(0.0);
  friend bool operator==(const WeightedComponent&, const WeightedComponent&) = default;
};

/// The law mu of the directing random measure, as a finite mixture of
/// component laws. Immutable once constructed; weights sum to one.
class DirectingMeasure {
 public:
  explicit DirectingMeasure(std::vector<WeightedComponent> components, std::string tag = "")
      : components_(std::move(components)), tag_(std::move(tag)) {
    if (components_.empty()) {
      throw validation_error("DirectingMeasure: at least one component required");
    }
    double total = 0.0;
    for (const auto& wc : components_) {
      if (!(wc.weight >= 0.0)) {
        throw validation_error("DirectingMeasure: weight must be >= 0, got " +
                               std::to_string(wc.weight));
      }
      total += wc.weight;
    }
    if (std::abs(total - 1.0) > kMassTolerance) {
      throw validation_error("DirectingMeasure: weights sum to " + std::to_string(total) +
                             ", expected 1 (within 1e-12)");
    }
  }

  const std::vector<WeightedComponent>& components() const { return components_; }
  const std::string& tag() const { return tag_; }

  /// Draws a component index with the mixture weights; consumes exactly
  /// one uniform. Zero-weight components are never selected.
  std::size_t sample_component(RandomStream& stream) const {
    const double u = stream.next_uniform();
    double cumulative = 0.0;
    for (std::size_t j = 0; j + 1 < components_.size(); ++j) {
      cumulative += components_[j].weight;
      if (u < cumulative) return j;
    }
    return components_.size() - 1;
  }

  bool all_components_degenerate() const {
    for (const auto& wc : components_) {
      if (wc.law.variance() > 0.0) return false;
    }
    return true;
  }

  friend bool operator==(const DirectingMeasure&, const DirectingMeasure&) = default;

 private:
  std::vector<WeightedComponent> components_;
  std::string tag_;
};

/// n conditionally independent draws from one component law.
inline std::vector<double> sample_iid(const ComponentLaw& law, std::int64_t n,
                                      RandomStream& stream) {
  if (n < 1) throw precondition_error("sample_iid: n must be >= 1");
  std::vector<double> values(static_cast<std::size_t>(n));
  law.visit_sampler([&](auto&& draw) {
    for (auto& v : values) v = draw(stream);
  });
  return values;
}

/// Exact decomposition of the mixture by sign of the conditional mean and
/// positivity of the conditional variance. Means are closed-form, so the
/// zero test uses a pure rounding tolerance.
inline ModelSummary summarize(const DirectingMeasure& measure) {
  ModelSummary summary;
  std::vector<SigmaAtom> atoms;
  for (const auto& wc : measure.components()) {
    const double mean = wc.law.mean();
    if (std::abs(mean) <= kMassTolerance) {
      if (wc.law.variance() > 0.0) {
        atoms.push_back({wc.weight, wc.law.sigma()});
      } else {
        summary.p_zero_degenerate += wc.weight;
      }
    } else if (mean < 0.0) {
      summary.p_neg += wc.weight;
    } else {
      summary.p_pos += wc.weight;
    }
  }
  summary.sigma_sub_law = SigmaLaw::discrete(std::move(atoms));
  summary.validate();
  return summary;
}

/// Random walk plus noise: X_n = Y_n + Z_n with Y_n in {-1,+1},
/// E Y1 Y2 = 0, E Y1^2 Y2^2 = 1, and Z_n i.i.d. standard normal. The
/// moment constraints force the conditional law of Y to be the fair
/// Rademacher law (a +-1 variable with conditional mean zero has
/// conditional heads-probability 1/2), so X is i.i.d.: a single
/// component, the Rademacher-normal convolution with variance 2.
inline DirectingMeasure example1_measure() {
  return DirectingMeasure({{1.0, ComponentLaw::convolution_rademacher_normal()}},
                          "example1");
}

/// Default risk model: X_n = Y xi_n with a single default indicator Y,
/// P(Y=1) = p. Conditionally on Y the sequence is i.i.d. with law xi
/// (under default) or identically zero, giving the two-atom mixture
/// { (p, xi), (1-p, delta_0) }.
inline DirectingMeasure example2_measure(double p, const ComponentLaw& xi_law) {
  if (!(p > 0.0 && p < 1.0)) {
    throw validation_error("example2_measure: p must lie in the open interval (0,1)");
  }
  if (std::abs(xi_law.mean()) > kMassTolerance) {
    throw validation_error("example2_measure: xi must have mean zero");
  }
  if (!(xi_law.variance() > 0.0)) {
    throw validation_error("example2_measure: xi must have positive variance");
  }
  return DirectingMeasure({{p, xi_law}, {1.0 - p, ComponentLaw::point_mass(0.0)}},
                          "example2");
}

}  // namespace exlimit
