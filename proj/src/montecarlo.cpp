#include "dsattack/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <thread>

#include "dsattack/errors.hpp"

namespace dsattack {
namespace {

constexpr std::uint64_t kBlockSize = 4096;

// 53 random mantissa bits -> [0, 1).
double uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

double exponential(std::mt19937_64& engine, double rate) {
  return -std::log1p(-uniform01(engine)) / rate;
}

std::uint64_t resolve_cap(const AttackSpec& spec, const SimulationOptions& options) {
  if (spec.cut().is_finite()) {
    return options.event_cap.value_or(std::numeric_limits<std::uint64_t>::max());
  }
  if (!options.event_cap && spec.p_a() < 0.5) {
    throw DomainError(
        "simulating an infinite cut with p_A < 0.5 needs an explicit event cap; most such "
        "runs never end");
  }
  return options.event_cap.value_or(kDefaultEventCap);
}

// Running count, mean and sum of squared deviations; merged in a fixed order.
struct Moments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / total;
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

struct BlockResult {
  std::uint64_t completed = 0;
  std::uint64_t successes = 0;
  std::uint64_t truncated = 0;
  Moments time;
  Moments profit;
  std::vector<TrialOutcome> outcomes;  // only kept for traces
};

TrialOutcome run_trial(const AttackSpec& spec, std::uint64_t seed, std::uint64_t cap,
                       bool independent_clocks) {
  std::mt19937_64 engine(seed);
  const double t_cut = spec.cut().is_finite() ? spec.cut().seconds()
                                              : std::numeric_limits<double>::infinity();
  const std::uint64_t target = spec.n_bc();
  TrialOutcome out;
  double t = 0.0;
  double next_h = 0.0;
  double next_a = 0.0;
  if (independent_clocks) {
    next_h = exponential(engine, spec.lambda_h());
    next_a = exponential(engine, spec.lambda_a());
  }
  for (std::uint64_t events = 0; events < cap; ++events) {
    bool attacker;
    if (independent_clocks) {
      attacker = next_a < next_h;
      t = attacker ? next_a : next_h;
      if (attacker) {
        next_a += exponential(engine, spec.lambda_a());
      } else {
        next_h += exponential(engine, spec.lambda_h());
      }
    } else {
      t += exponential(engine, spec.lambda_t());
      attacker = uniform01(engine) < spec.p_a();
    }
    if (!(t < t_cut)) return out;
    if (attacker) {
      ++out.blocks_a;
    } else {
      ++out.blocks_h;
    }
    if (out.blocks_h >= target && out.blocks_a > out.blocks_h) {
      out.success = true;
      out.t_dsa = t;
      return out;
    }
  }
  out.truncated = true;
  return out;
}

template <class Profit>
SimulationSummary run_estimate(const AttackSpec& spec, std::uint64_t trials,
                               std::uint64_t master_seed, const SimulationOptions& options,
                               std::ostream* trace, Profit profit) {
  if (trials == 0) throw DomainError("number of trials must be positive");
  const std::uint64_t cap = resolve_cap(spec, options);
  const std::uint64_t blocks = (trials + kBlockSize - 1) / kBlockSize;
  std::vector<BlockResult> results(blocks);

  auto run_block = [&](std::uint64_t b) {
    BlockResult& r = results[b];
    const std::uint64_t begin = b * kBlockSize;
    const std::uint64_t end = std::min(trials, begin + kBlockSize);
    if (trace) r.outcomes.reserve(end - begin);
    for (std::uint64_t k = begin; k < end; ++k) {
      const TrialOutcome o =
          run_trial(spec, trial_seed(master_seed, k), cap, options.independent_clocks);
      if (o.truncated) {
        ++r.truncated;
      } else {
        ++r.completed;
        if (o.success) {
          ++r.successes;
          r.time.add(*o.t_dsa);
        }
        if constexpr (!std::is_same_v<Profit, std::nullptr_t>) r.profit.add(profit(o));
      }
      if (trace) r.outcomes.push_back(o);
    }
  };

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.threads;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, blocks));
  if (threads <= 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t b = next++; b < blocks; b = next++) run_block(b);
      });
    }
  }

  SimulationSummary s;
  s.seed = master_seed;
  Moments time;
  Moments prof;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    const BlockResult& r = results[b];
    s.trials += r.completed;
    s.successes += r.successes;
    s.truncated += r.truncated;
    time.merge(r.time);
    prof.merge(r.profit);
    if (trace) {
      std::uint64_t k = b * kBlockSize;
      for (const TrialOutcome& o : r.outcomes) {
        *trace << k++ << ',' << (o.truncated ? "truncated" : (o.success ? "1" : "0")) << ',';
        if (o.t_dsa) *trace << *o.t_dsa;
        *trace << ',' << o.blocks_a << ',' << o.blocks_h << '\n';
      }
    }
  }
  if (s.trials > 0) {
    const double n = static_cast<double>(s.trials);
    s.p_as_hat = static_cast<double>(s.successes) / n;
    s.se_p_as = std::sqrt(s.p_as_hat * (1.0 - s.p_as_hat) / n);
  }
  if (s.successes > 0) {
    s.mean_tas = time.mean;
    s.var_tas = time.variance();
    s.se_tas = std::sqrt(s.var_tas / static_cast<double>(s.successes));
  }
  if constexpr (!std::is_same_v<Profit, std::nullptr_t>) {
    if (prof.n > 0) {
      s.mean_profit = prof.mean;
      s.se_profit = std::sqrt(prof.variance() / static_cast<double>(prof.n));
    }
  }
  return s;
}

void write_trace_header(std::ostream* trace) {
  if (trace) *trace << "trial,success,t_dsa,blocks_A,blocks_H\n";
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial) {
  std::uint64_t z = master_seed + (trial + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TrialOutcome simulate_one(const AttackSpec& spec, std::uint64_t stream_seed,
                          const SimulationOptions& options) {
  return run_trial(spec, stream_seed, resolve_cap(spec, options), options.independent_clocks);
}

SimulationSummary estimate(const AttackSpec& spec, std::uint64_t trials,
                           std::uint64_t master_seed, const SimulationOptions& options,
                           std::ostream* trace) {
  write_trace_header(trace);
  return run_estimate(spec, trials, master_seed, options, trace, nullptr);
}

SimulationSummary estimate_profit(const EconomicModel& model, const AttackSpec& spec,
                                  std::uint64_t trials, std::uint64_t master_seed,
                                  const SimulationOptions& options, std::ostream* trace) {
  write_trace_header(trace);
  const double lambda_a = spec.lambda_a();
  auto profit = [&](const TrialOutcome& o) {
    if (o.success) {
      return model.value() + reward(model, lambda_a, *o.t_dsa) - opex(model, lambda_a, *o.t_dsa);
    }
    return -opex(model, lambda_a, spec.cut().seconds());
  };
  return run_estimate(spec, trials, master_seed, options, trace, profit);
}

std::vector<double> enumerate_exact(const AttackSpec& spec, std::size_t i_max) {
  if (i_max > kEnumerationLimit) {
    throw CostGuardError("exhaustive enumeration is limited to i_max <= 24");
  }
  std::vector<double> mass(i_max, 0.0);
  const double pa = spec.p_a();
  const double ph = spec.p_h();
  const long target = spec.n_bc();

  // Every sequence of length i_max shares its first k transitions with
  // 2^(i_max - k) others, so walking prefixes visits each sequence's
  // classification exactly once: a prefix stops the moment the confirmation
  // (H >= N_BC) and the strictly longer fraudulent chain (A > H) first hold together.
  struct Frame {
    std::size_t depth;
    long honest;
    long attacker;
    double weight;
  };
  std::vector<Frame> stack{{0, 0, 0, 1.0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.depth == i_max) continue;
    for (int delta : {+1, -1}) {
      Frame g{f.depth + 1, f.honest + (delta > 0), f.attacker + (delta < 0),
              f.weight * (delta > 0 ? ph : pa)};
      if (g.honest >= target && g.attacker > g.honest) {
        mass[g.depth - 1] += g.weight;
      } else {
        stack.push_back(g);
      }
    }
  }
  return mass;
}

}  // namespace dsattack
