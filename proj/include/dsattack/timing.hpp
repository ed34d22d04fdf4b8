#pragma once

#include "dsattack/attack_spec.hpp"
#include "dsattack/special_functions.hpp"
#include "dsattack/state_series.hpp"

namespace dsattack {

/// Continuous part of the density of the attack-achieving time T_DSA at t > 0
/// (1/seconds), in closed form: a 2F3-weighted Erlang mixture plus an
/// exponential remainder. The "never succeeds" mass is not part of it.
double dsa_time_density(const AttackSpec& spec, double t, double tol = kDefaultSeriesTol);

/// P_AS(t_cut) = Pr(T_DSA < t_cut). Equals p_dsa(spec) for an infinite cut.
double attack_success_prob(const AttackSpec& spec, const SeriesOptions& options = {});

/// Mean attack success time E[T_DSA | T_DSA < t_cut] in seconds.
/// Throws UndefinedError when P_AS = 0; an infinite cut delegates to
/// expected_success_time_inf.
double expected_success_time(const AttackSpec& spec, const SeriesOptions& options = {});

/// Closed-form mean of T_DSA given eventual success, for an infinite cut.
/// Throws SingularityError at p_A = 0.5 (the symmetric walk's hitting time has
/// infinite mean).
double expected_success_time_inf(const AttackSpec& spec);

/// P_AS and E_TAS from one pass, both using the Erlang-mixture series.
struct AttackTiming {
  double p_as;
  double e_tas;
};
AttackTiming attack_timing(const AttackSpec& spec, const SeriesOptions& options = {});

/// Distribution of T_DSA on (0, inf) with an explicit point mass at infinity.
class DefectiveTimeDistribution {
 public:
  explicit DefectiveTimeDistribution(const AttackSpec& spec, SeriesOptions options = {});

  const AttackSpec& spec() const noexcept { return spec_; }
  /// 1 - P_DSA; zero iff p_A >= 0.5.
  double defect_mass() const noexcept { return defect_mass_; }
  double continuous_mass() const noexcept { return 1.0 - defect_mass_; }
  /// Density of the continuous part; requires 0 < t < inf.
  double density(double t) const;
  /// Pr(T_DSA < t); t = +inf gives the continuous mass.
  double cdf(double t) const;

 private:
  AttackSpec spec_;
  SeriesOptions options_;
  double defect_mass_;
};

}  // namespace dsattack
