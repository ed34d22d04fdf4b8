#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

#include "dsattack/attack_spec.hpp"
#include "dsattack/errors.hpp"
#include "dsattack/stochastics.hpp"

namespace dsattack {

struct SeriesOptions {
  double tol = 1e-12;
  std::size_t max_terms = kDefaultSeriesCap;
};

struct SeriesSum {
  double value = 0.0;
  std::size_t terms = 0;
  double tail_bound = 0.0;
};

/// Walks p_DSA,1, p_DSA,2, ... and maintains a certified upper bound on the
/// mass of all states not yet visited.
///
/// Two bounds are combined. The geometric one uses the fact that past a
/// fixed excursion length every ballot-number term shrinks by at least
/// 4 p_A p_H per odd state, and that the negative-binomial term ratio
/// i / (i - N_BC + 1) * p_A decreases in i. The residual one subtracts the
/// partial sum from the closed-form total; it is the only bound available at
/// p_A = 0.5, where 4 p_A p_H = 1.
class StateMassSeries {
 public:
  explicit StateMassSeries(const AttackSpec& spec);

  /// Moves to the next state and returns its mass.
  double advance();
  std::size_t state() const noexcept { return state_; }
  double partial_sum() const noexcept { return partial_; }
  /// Upper bound on sum_{k > state()} p_DSA,k.
  double tail_bound() const noexcept;

 private:
  AttackSpec spec_;
  double total_;
  double ballot_ratio_;
  std::size_t ballot_settled_n_;
  std::size_t state_ = 0;
  double partial_ = 0.0;
  double last_ballot_ = 0.0;
  std::size_t last_ballot_n_ = 0;
  bool have_ballot_ = false;
  double last_binomial_ = 0.0;
};

/// Sum_i w(i) p_DSA,i. `Weight` provides value(i) and sup_beyond(i), an upper
/// bound on w(k) for every k > i (or +inf when none is known yet).
template <class Weight>
SeriesSum sum_state_series(const AttackSpec& spec, Weight& weight,
                           const SeriesOptions& options = {}) {
  StateMassSeries series(spec);
  const std::size_t first = 2 * static_cast<std::size_t>(spec.n_bc()) + 1;
  double sum = 0.0;
  for (std::size_t count = 0; count < options.max_terms; ++count) {
    const double p = series.advance();
    const std::size_t i = series.state();
    if (i < first) continue;
    const double term = weight.value(i) * p;
    sum += term;
    const double mass_tail = series.tail_bound();
    const double tail = mass_tail == 0.0 ? 0.0 : weight.sup_beyond(i) * mass_tail;
    if (term <= options.tol * sum && tail <= options.tol * sum) return {sum, i, tail};
  }
  throw ConvergenceError("state series tail bound not met within the term cap", sum,
                         options.max_terms);
}

/// w(i) = 1.
struct UnitWeight {
  double value(std::size_t) const noexcept { return 1.0; }
  double sup_beyond(std::size_t) const noexcept { return 1.0; }
};

}  // namespace dsattack
