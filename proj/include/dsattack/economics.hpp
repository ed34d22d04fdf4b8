#pragma once

#include <cstdint>

#include "dsattack/attack_spec.hpp"
#include "dsattack/state_series.hpp"

namespace dsattack {

/// Growth constants of a cost or reward curve
///   k * lambda_A * t * (log_{base1} arg1)^lambda_A * (log_{base2} arg2)^t.
/// base == arg in both pairs makes the curve linear in lambda_A * t.
struct GrowthConstants {
  double base1 = 2.0;
  double arg1 = 2.0;
  double base2 = 2.0;
  double arg2 = 2.0;

  bool linear() const noexcept { return base1 == arg1 && base2 == arg2; }
};

/// Cost and reward parameters of an attack, in one arbitrary currency unit.
class EconomicModel {
 public:
  /// gamma: cost per block of mining effort; beta: reward per block; value: C.
  EconomicModel(double gamma, double beta, double value, GrowthConstants cost = {},
                GrowthConstants reward = {});

  double gamma() const noexcept { return gamma_; }
  double beta() const noexcept { return beta_; }
  double mu() const noexcept { return beta_ / gamma_; }
  double value() const noexcept { return value_; }
  const GrowthConstants& cost_growth() const noexcept { return cost_; }
  const GrowthConstants& reward_growth() const noexcept { return reward_; }
  bool linear_cost() const noexcept { return cost_.linear(); }
  bool linear_reward() const noexcept { return reward_.linear(); }
  bool is_linear() const noexcept { return linear_cost() && linear_reward(); }

  EconomicModel with_value(double value) const {
    return EconomicModel(gamma_, beta_, value, cost_, reward_);
  }

 private:
  double gamma_;
  double beta_;
  double value_;
  GrowthConstants cost_;
  GrowthConstants reward_;
};

/// OPEX X(lambda_A, t) of running the attacker's hash power for t seconds.
double opex(const EconomicModel& model, double lambda_a, double t);
/// Block reward R(lambda_A, t) collected over t seconds.
double reward(const EconomicModel& model, double lambda_a, double t);

/// E_X = P_AS gamma lambda_A E_TAS + (1 - P_AS) gamma lambda_A t_cut.
/// Requires a linear cost curve (UnsupportedAnalyticError otherwise). An
/// infinite cut with p_A < 0.5 yields +inf.
double expected_opex(const EconomicModel& model, const AttackSpec& spec,
                     const SeriesOptions& options = {});

/// E_P = P_AS (C + beta lambda_A E_TAS) - E_X. Positive iff the attack is profitable.
double expected_profit(const EconomicModel& model, const AttackSpec& spec,
                       const SeriesOptions& options = {});

/// Minimum target-transaction value for a profitable attack. The infinite
/// requirement (inferior attacker without a deadline, or P_AS = 0) is a
/// regular outcome so tables can render it.
class RequiredValue {
 public:
  static RequiredValue finite(double value) noexcept { return RequiredValue(false, value); }
  static RequiredValue infinite() noexcept { return RequiredValue(true, 0.0); }

  bool is_infinite() const noexcept { return infinite_; }
  /// Throws DomainError for the infinite requirement.
  double value() const;
  /// True when every C >= 0 is profitable.
  bool always_profitable() const noexcept { return !infinite_ && value_ < 0.0; }

 private:
  RequiredValue(bool infinite, double value) noexcept : infinite_(infinite), value_(value) {}
  bool infinite_;
  double value_;
};

RequiredValue required_value(const EconomicModel& model, const AttackSpec& spec,
                             const SeriesOptions& options = {});

struct RepeatedAttackProjection {
  double expected_runtime_per_attempt;  // seconds
  double expected_net_profit;           // currency, over all attempts
};

/// Long-run behavior of n independent attempts: runtime per attempt
/// P_AS E_TAS + (1 - P_AS) t_cut and net profit n P_AS (C - C_Req).
RepeatedAttackProjection repeated_attack_projection(const EconomicModel& model,
                                                    const AttackSpec& spec, std::uint64_t attempts,
                                                    const SeriesOptions& options = {});

}  // namespace dsattack
