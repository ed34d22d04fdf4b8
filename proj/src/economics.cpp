#include "dsattack/economics.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "dsattack/errors.hpp"
#include "dsattack/stochastics.hpp"
#include "dsattack/timing.hpp"

namespace dsattack {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_growth(const GrowthConstants& g, const char* which) {
  if (!(g.base1 > 1.0 && g.arg1 > 1.0 && g.base2 > 1.0 && g.arg2 > 1.0)) {
    throw DomainError(std::string(which) + " growth constants must all exceed 1");
  }
}

double curve(double scale, const GrowthConstants& g, double lambda_a, double t) {
  if (!(lambda_a >= 0.0) || !(t >= 0.0)) {
    throw DomainError("cost and reward curves need lambda_A >= 0 and t >= 0");
  }
  const double base = scale * lambda_a * t;
  if (g.linear()) return base;
  const double rate_factor = std::log(g.arg1) / std::log(g.base1);
  const double time_factor = std::log(g.arg2) / std::log(g.base2);
  return base * std::pow(rate_factor, lambda_a) * std::pow(time_factor, t);
}

void require_linear(const EconomicModel& model) {
  if (!model.is_linear()) {
    throw UnsupportedAnalyticError(
        "closed-form expectations need linear cost and reward curves; use the Monte Carlo "
        "profit estimator for nonlinear models");
  }
}

// P_AS and, when it is positive, E_TAS. Infinite cuts follow the limiting
// forms: certain success for p_A > 0.5, divergent cost for p_A < 0.5.
struct Outlook {
  double p_as;
  std::optional<double> e_tas;
};

Outlook outlook(const AttackSpec& spec, const SeriesOptions& options) {
  if (spec.cut().is_infinite()) {
    const double p = p_dsa(spec);
    if (spec.p_a() < 0.5) return {p, std::nullopt};
    return {p, expected_success_time_inf(spec)};
  }
  const double p_as = attack_success_prob(spec, options);
  if (!(p_as > 0.0)) return {p_as, std::nullopt};
  return {p_as, expected_success_time(spec, options)};
}

}  // namespace

EconomicModel::EconomicModel(double gamma, double beta, double value, GrowthConstants cost,
                             GrowthConstants reward)
    : gamma_(gamma), beta_(beta), value_(value), cost_(cost), reward_(reward) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
  if (!std::isfinite(value)) throw DomainError("target transaction value must be finite");
  check_growth(cost, "cost");
  check_growth(reward, "reward");
}

double opex(const EconomicModel& model, double lambda_a, double t) {
  return curve(model.gamma(), model.cost_growth(), lambda_a, t);
}

double reward(const EconomicModel& model, double lambda_a, double t) {
  return curve(model.beta(), model.reward_growth(), lambda_a, t);
}

double RequiredValue::value() const {
  if (infinite_) throw DomainError("required value is infinite");
  return value_;
}

double expected_opex(const EconomicModel& model, const AttackSpec& spec,
                     const SeriesOptions& options) {
  require_linear(model);
  const double cost_rate = model.gamma() * spec.lambda_a();
  const Outlook o = outlook(spec, options);
  if (spec.cut().is_infinite()) return o.e_tas ? cost_rate * *o.e_tas : kInf;
  const double t_cut = spec.cut().seconds();
  const double success = o.e_tas ? o.p_as * cost_rate * *o.e_tas : 0.0;
  return success + (1.0 - o.p_as) * cost_rate * t_cut;
}

double expected_profit(const EconomicModel& model, const AttackSpec& spec,
                       const SeriesOptions& options) {
  require_linear(model);
  const Outlook o = outlook(spec, options);
  const double cost_rate = model.gamma() * spec.lambda_a();
  if (spec.cut().is_infinite() && !o.e_tas) return -kInf;
  const double e_tas = o.e_tas.value_or(0.0);
  double e_x = o.p_as * cost_rate * e_tas;
  if (spec.cut().is_finite()) e_x += (1.0 - o.p_as) * cost_rate * spec.cut().seconds();
  return o.p_as * (model.value() + model.beta() * spec.lambda_a() * e_tas) - e_x;
}

RequiredValue required_value(const EconomicModel& model, const AttackSpec& spec,
                             const SeriesOptions& options) {
  require_linear(model);
  const Outlook o = outlook(spec, options);
  if (!o.e_tas) return RequiredValue::infinite();
  const double cost_rate = model.gamma() * spec.lambda_a();
  const double mining_gain = (model.mu() - 1.0) * cost_rate * *o.e_tas;
  if (spec.cut().is_infinite()) return RequiredValue::finite(-mining_gain);
  const double failure_cost = (1.0 - o.p_as) / o.p_as * cost_rate * spec.cut().seconds();
  return RequiredValue::finite(failure_cost - mining_gain);
}

RepeatedAttackProjection repeated_attack_projection(const EconomicModel& model,
                                                    const AttackSpec& spec, std::uint64_t attempts,
                                                    const SeriesOptions& options) {
  require_linear(model);
  const Outlook o = outlook(spec, options);
  const double n = static_cast<double>(attempts);
  if (spec.cut().is_infinite()) {
    if (!o.e_tas) return {kInf, attempts == 0 ? 0.0 : -kInf};
    const RequiredValue c_req = required_value(model, spec, options);
    return {*o.e_tas, n * o.p_as * (model.value() - c_req.value())};
  }
  const double t_cut = spec.cut().seconds();
  const double runtime = o.p_as * o.e_tas.value_or(0.0) + (1.0 - o.p_as) * t_cut;
  const RequiredValue c_req = required_value(model, spec, options);
  if (attempts == 0) return {runtime, 0.0};
  if (c_req.is_infinite()) return {runtime, n * expected_profit(model, spec, options)};
  return {runtime, n * o.p_as * (model.value() - c_req.value())};
}

}  // namespace dsattack
