#include "dsattack/state_series.hpp"

#include <algorithm>

namespace dsattack {

StateMassSeries::StateMassSeries(const AttackSpec& spec)
    : spec_(spec),
      total_(p_dsa(spec)),
      ballot_ratio_(4.0 * spec.p_a() * spec.p_h()) {
  // C_{n+1,m} / C_{n,m} <= 4 once 6n + m - m^2 + 6 >= 0; m ranges up to N_BC.
  const double m = spec.n_bc();
  const double need = (m * m - m - 6.0) / 6.0;
  ballot_settled_n_ = need > 0.0 ? static_cast<std::size_t>(std::ceil(need)) : 0;
}

double StateMassSeries::advance() {
  ++state_;
  const StateMass mass = state_mass_parts(spec_, state_);
  const std::size_t first = 2 * static_cast<std::size_t>(spec_.n_bc()) + 1;
  if (state_ >= first) {
    last_binomial_ = mass.binomial_part;
    if ((state_ - first) % 2 == 0) {
      last_ballot_ = mass.ballot_part;
      last_ballot_n_ = (state_ - first) / 2;
      have_ballot_ = true;
    }
  }
  partial_ += mass.total();
  return mass.total();
}

double StateMassSeries::tail_bound() const noexcept {
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double slack = 4.0 * eps * static_cast<double>(state_ + 1) * std::max(total_, partial_);
  const double residual = std::max(0.0, total_ - partial_) + slack;

  double geometric = inf;
  if (have_ballot_) {
    double ballot_tail = inf;
    if (ballot_ratio_ < 1.0 && last_ballot_n_ >= ballot_settled_n_) {
      ballot_tail = last_ballot_ * ballot_ratio_ / (1.0 - ballot_ratio_);
    }
    double binomial_tail = inf;
    const double i = static_cast<double>(state_);
    const double ratio = i / (i - spec_.n_bc() + 1.0) * spec_.p_a();
    if (ratio < 1.0) binomial_tail = last_binomial_ * ratio / (1.0 - ratio);
    geometric = ballot_tail + binomial_tail;
  }
  return std::min(geometric, residual);
}

}  // namespace dsattack
