#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "exlimit/errors.hpp"
#include "exlimit/normal.hpp"
#include "exlimit/probability.hpp"
#include "exlimit/quadrature.hpp"

namespace exlimit {

inline constexpr double kMassTolerance = 1e-12;

/// One atom of a discrete law of the conditional standard deviation.
struct SigmaAtom {
  double weight = 0.0;
  double sigma = 0.0;
  friend bool operator==(const SigmaAtom&, const SigmaAtom&) = default;
};

/// Law of the conditional standard deviation sigma_F, possibly carrying
/// total mass below one (the restriction of the mixing measure to an
/// event). Either a finite list of atoms or a uniform density on a
/// strictly positive interval.
class SigmaLaw {
 public:
  enum class Kind { discrete, uniform_interval };

  SigmaLaw() : kind_(Kind::discrete) {}  // empty discrete law, mass 0

  static SigmaLaw discrete(std::vector<SigmaAtom> atoms) {
    SigmaLaw law;
    law.kind_ = Kind::discrete;
    law.atoms_ = std::move(atoms);
    law.validate();
    return law;
  }

  static SigmaLaw uniform_interval(double lo, double hi, double mass = 1.0) {
    SigmaLaw law;
    law.kind_ = Kind::uniform_interval;
    law.lo_ = lo;
    law.hi_ = hi;
    law.interval_mass_ = mass;
    law.validate();
    return law;
  }

  Kind kind() const { return kind_; }
  const std::vector<SigmaAtom>& atoms() const { return atoms_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  double mass() const {
    if (kind_ == Kind::uniform_interval) return interval_mass_;
    double total = 0.0;
    for (const auto& atom : atoms_) total += atom.weight;
    return total;
  }

  /// The law of c * sigma_F for c > 0.
  SigmaLaw scaled(double c) const {
    if (!(c > 0.0)) throw validation_error("SigmaLaw::scaled: factor must be > 0");
    if (kind_ == Kind::uniform_interval) {
      return uniform_interval(c * lo_, c * hi_, interval_mass_);
    }
    std::vector<SigmaAtom> scaled_atoms = atoms_;
    for (auto& atom : scaled_atoms) atom.sigma *= c;
    return discrete(std::move(scaled_atoms));
  }

  bool has_zero_sigma_atom() const {
    for (const auto& atom : atoms_) {
      if (atom.weight > 0.0 && atom.sigma == 0.0) return true;
    }
    return false;
  }

  void validate() const {
    if (kind_ == Kind::discrete) {
      double total = 0.0;
      for (const auto& atom : atoms_) {
        if (!(atom.weight >= 0.0)) {
          throw validation_error("SigmaLaw: atom weight must be >= 0, got " +
                                 std::to_string(atom.weight));
        }
        if (!(atom.sigma >= 0.0)) {
          throw validation_error("SigmaLaw: sigma must be >= 0, got " +
                                 std::to_string(atom.sigma));
        }
        total += atom.weight;
      }
      if (total > 1.0 + kMassTolerance) {
        throw validation_error("SigmaLaw: total mass exceeds 1: " + std::to_string(total));
      }
    } else {
      if (!(lo_ > 0.0)) {
        throw validation_error("SigmaLaw: uniform_interval requires lo > 0, got " +
                               std::to_string(lo_));
      }
      if (!(hi_ >= lo_)) {
        throw validation_error("SigmaLaw: uniform_interval requires hi >= lo");
      }
      if (!(interval_mass_ >= 0.0) || interval_mass_ > 1.0 + kMassTolerance) {
        throw validation_error("SigmaLaw: interval mass outside [0,1]: " +
                               std::to_string(interval_mass_));
      }
    }
  }

  friend bool operator==(const SigmaLaw&, const SigmaLaw&) = default;

 private:
  Kind kind_;
  std::vector<SigmaAtom> atoms_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double interval_mass_ = 0.0;
};

/// Exact decomposition of a mixing measure by the sign of the conditional
/// mean and the positivity of the conditional variance:
///   p_neg              mass of { E_F X1 < 0 }
///   p_pos              mass of { E_F X1 > 0 }
///   p_zero_degenerate  mass of { E_F X1 = 0, var_F = 0 }
///   sigma_sub_law      law of sigma_F restricted to { E_F X1 = 0, var_F > 0 }
struct ModelSummary {
  double p_neg = 0.0;
  double p_pos = 0.0;
  double p_zero_degenerate = 0.0;
  SigmaLaw sigma_sub_law;

  void validate() const {
    for (double part : {p_neg, p_pos, p_zero_degenerate}) {
      if (!(part >= 0.0 && part <= 1.0 + kMassTolerance)) {
        throw validation_error("ModelSummary: component mass outside [0,1]");
      }
    }
    sigma_sub_law.validate();
    if (sigma_sub_law.has_zero_sigma_atom()) {
      throw validation_error("ModelSummary: sigma_sub_law carries a zero-sigma atom");
    }
    const double total = p_neg + p_pos + p_zero_degenerate + sigma_sub_law.mass();
    if (std::abs(total - 1.0) > kMassTolerance) {
      throw validation_error("ModelSummary: masses sum to " + std::to_string(total) +
                             ", expected 1");
    }
  }

  friend bool operator==(const ModelSummary&, const ModelSummary&) = default;
};

/// Limit law of max(S_1,...,S_n)/sqrt(n) for an i.i.d. sequence with zero
/// mean and unit variance: G(x) = (2 Phi(x) - 1) for x >= 0, else 0.
inline Probability erdos_kac_G(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("erdos_kac_G: non-finite argument");
  }
  if (x < 0.0) return Probability(0.0);
  return Probability(2.0 * std_normal_cdf(x).value() - 1.0);
}

/// Mixture of G over a law of the conditional standard deviation:
/// sum of w_j G(x/sigma_j) over the atoms with sigma_j > 0, or the
/// corresponding integral for the uniform-interval family (adaptive
/// quadrature, absolute tolerance 1e-9). Zero-sigma atoms contribute
/// nothing; the total never exceeds the law's mass.
inline Probability mixture_G_mu(double x, const SigmaLaw& sigma_law) {
  if (!std::isfinite(x)) {
    throw std::domain_error("mixture_G_mu: non-finite argument");
  }
  sigma_law.validate();
  if (x <= 0.0) return Probability(0.0);  // G(x/sigma) = 0 for every sigma > 0
  if (sigma_law.kind() == SigmaLaw::Kind::discrete) {
    double total = 0.0;
    for (const auto& atom : sigma_law.atoms()) {
      if (atom.sigma > 0.0) {
        total += atom.weight * erdos_kac_G(x / atom.sigma).value();
      }
    }
    return Probability(total);
  }
  const double lo = sigma_law.lo();
  const double hi = sigma_law.hi();
  if (lo == hi) {
    return Probability(sigma_law.mass() * erdos_kac_G(x / lo).value());
  }
  const double integral = integrate_adaptive(
      [x](double sigma) { return erdos_kac_G(x / sigma).value(); }, lo, hi, 1e-9);
  return Probability(sigma_law.mass() * integral / (hi - lo));
}

/// Limit of P(max(S_1,...,S_n) < x sqrt(n)) when the conditional mean
/// vanishes almost surely: a step of size P(var_F = 0) at the origin plus
/// the mixture term. This is a genuine distribution function.
inline Probability weak_limit(double x, const ModelSummary& summary) {
  summary.validate();
  if (summary.p_neg != 0.0 || summary.p_pos != 0.0) {
    throw precondition_error(
        "weak_limit: measure carries nonzero conditional drift; use general_limit");
  }
  const double step = x >= 0.0 ? summary.p_zero_degenerate : 0.0;
  return Probability(step + mixture_G_mu(x, summary.sigma_sub_law).value());
}

/// Limit of P(max(S_1,...,S_n) < x sqrt(n)) with no assumption on the
/// conditional mean: the mass of the negative-drift event enters as a
/// constant. Not a distribution function unless p_pos = 0 (its value at
/// +infinity is 1 - p_pos); the drift terms describe the limit for x > 0.
inline double general_limit(double x, const ModelSummary& summary) {
  summary.validate();
  if (!std::isfinite(x)) {
    throw std::domain_error("general_limit: non-finite argument");
  }
  const double step = x >= 0.0 ? summary.p_zero_degenerate : 0.0;
  return summary.p_neg + step + mixture_G_mu(x, summary.sigma_sub_law).value();
}

}  // namespace exlimit
