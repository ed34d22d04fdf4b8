#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "dsattack/attack_spec.hpp"
#include "dsattack/economics.hpp"

namespace dsattack {

inline constexpr std::uint64_t kDefaultEventCap = 10'000'000;

struct SimulationOptions {
  /// Maximum number of block events per trial. Without a value, finite cuts
  /// run uncapped and infinite cuts use kDefaultEventCap, which is only
  /// allowed for p_A >= 0.5.
  std::optional<std::uint64_t> event_cap;
  /// Draw honest and attacker blocks from two independent exponential clocks
  /// instead of one merged clock with Bernoulli attribution.
  bool independent_clocks = false;
  /// Worker threads; 0 picks the hardware concurrency. Results do not depend on it.
  unsigned threads = 1;
};

struct TrialOutcome {
  bool success = false;
  bool truncated = false;
  std::optional<double> t_dsa;
  std::uint64_t blocks_a = 0;
  std::uint64_t blocks_h = 0;
};

struct SimulationSummary {
  std::uint64_t trials = 0;  // completed trials; truncated ones are not counted
  std::uint64_t successes = 0;
  std::uint64_t truncated = 0;
  double p_as_hat = 0.0;
  double mean_tas = 0.0;
  double var_tas = 0.0;
  double se_p_as = 0.0;
  double se_tas = 0.0;
  std::optional<double> mean_profit;
  std::optional<double> se_profit;
  std::uint64_t seed = 0;
};

/// Seed of trial `trial` under `master_seed`: SplitMix64 finalizer applied to
/// master_seed + (trial + 1) * 0x9E3779B97F4A7C15.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial);

/// One run of the attack race: blocks arrive until both the confirmation and
/// the longer-fraudulent-chain conditions hold, or the cut time passes.
TrialOutcome simulate_one(const AttackSpec& spec, std::uint64_t stream_seed,
                          const SimulationOptions& options = {});

/// Plain Monte Carlo estimate of P_AS and E_TAS. The optional trace receives
/// one CSV row per trial (trial,success,t_dsa,blocks_A,blocks_H).
SimulationSummary estimate(const AttackSpec& spec, std::uint64_t trials,
                           std::uint64_t master_seed, const SimulationOptions& options = {},
                           std::ostream* trace = nullptr);

/// As estimate, plus the per-trial profit: C + R(T) - X(T) on success,
/// -X(t_cut) otherwise. Works for nonlinear cost and reward curves.
SimulationSummary estimate_profit(const EconomicModel& model, const AttackSpec& spec,
                                  std::uint64_t trials, std::uint64_t master_seed,
                                  const SimulationOptions& options = {},
                                  std::ostream* trace = nullptr);

inline constexpr std::size_t kEnumerationLimit = 24;

/// Exact p_DSA,i for i = 1..i_max by exhausting every +-1 transition sequence.
/// Element k holds state k + 1. Throws CostGuardError for i_max > 24.
std::vector<double> enumerate_exact(const AttackSpec& spec, std::size_t i_max);

}  // namespace dsattack
