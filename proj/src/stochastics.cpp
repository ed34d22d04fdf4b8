#include "dsattack/stochastics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "dsattack/errors.hpp"

namespace dsattack {
namespace {

constexpr double kUnderflowLog = -700.0;
constexpr double kExactDoubleLimit = 9007199254740992.0;  // 2^53
constexpr std::size_t kExactRowLimit = 125;

BallotCount checked_mul(BallotCount a, BallotCount b) {
  BallotCount out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw ArithmeticOverflowError("exact count exceeds 128-bit range");
  }
  return out;
}

BallotCount gcd128(BallotCount a, BallotCount b) {
  while (b != 0) {
    const BallotCount r = a % b;
    a = b;
    b = r;
  }
  return a;
}

// Coefficient as a double: exact when it fits the 53-bit mantissa, log-gamma otherwise.
double binomial_double(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  if (n > kExactRowLimit) return std::exp(log_binomial(n, k));
  try {
    const BallotCount exact = binomial_exact(n, k);
    if (static_cast<double>(exact) < kExactDoubleLimit) return static_cast<double>(exact);
  } catch (const ArithmeticOverflowError&) {
  }
  return std::exp(log_binomial(n, k));
}

double ballot_double(long long n, long long m) {
  if (n < 0 || m < 0) return 0.0;
  if (static_cast<std::size_t>(2 * n + m) > kExactRowLimit) {
    return std::exp(log_ballot_number(n, m));
  }
  try {
    const BallotCount exact = ballot_number(n, m);
    if (static_cast<double>(exact) < kExactDoubleLimit) return static_cast<double>(exact);
  } catch (const ArithmeticOverflowError&) {
  }
  return std::exp(log_ballot_number(n, m));
}

// coefficient * p_a^ea * p_h^eh, in log space once the powers underflow.
double weighted(double coefficient, double log_coefficient, double p_a, double ea, double p_h,
                double eh) {
  if (coefficient == 0.0) return 0.0;
  const double log_w = ea * std::log(p_a) + eh * std::log(p_h);
  if (log_w > kUnderflowLog && std::isfinite(coefficient)) {
    return coefficient * std::pow(p_a, ea) * std::pow(p_h, eh);
  }
  return std::exp(log_coefficient + log_w);
}

}  // namespace

BallotCount binomial_exact(unsigned long long n, unsigned long long k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BallotCount r = 1;
  for (unsigned long long step = 1; step <= k; ++step) {
    // r holds binom(n - k + step - 1, step - 1); the next value is r * top / step.
    const BallotCount top = n - k + step;
    const BallotCount g = gcd128(r, step);
    const BallotCount divisor = step / g;
    r = checked_mul(r / g, top / divisor);
  }
  return r;
}

BallotCount ballot_number(long long n, long long m) {
  if (n < 0 || m < 0) return 0;
  const auto un = static_cast<unsigned long long>(n);
  const auto um = static_cast<unsigned long long>(m);
  const BallotCount central = binomial_exact(2 * un + um, un);
  // central * (m+1) / (n+m+1) is an integer; split the division so only
  // `central` has to fit.
  const BallotCount num = um + 1;
  const BallotCount den = un + um + 1;
  const BallotCount g = gcd128(num, den);
  return checked_mul(central / (den / g), num / g);
}

std::string to_string(BallotCount value) {
  if (value == 0) return "0";
  std::string out;
  while (value != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

double log_ballot_number(long long n, long long m) {
  if (n < 0 || m < 0) return -std::numeric_limits<double>::infinity();
  const auto un = static_cast<std::size_t>(n);
  const auto um = static_cast<std::size_t>(m);
  return std::log(static_cast<double>(um + 1)) - std::log(static_cast<double>(un + um + 1)) +
         log_binomial(2 * un + um, un);
}

StateMass state_mass_parts(const AttackSpec& spec, std::size_t i) {
  if (i < 1) throw DomainError("state index must be >= 1");
  const std::size_t nbc = spec.n_bc();
  StateMass out;
  if (i <= 2 * nbc) return out;
  const double pa = spec.p_a();
  const double ph = spec.p_h();

  // Confirmation reached first at state i while the attacker already leads.
  out.binomial_part = weighted(binomial_double(i - 1, nbc - 1), log_binomial(i - 1, nbc - 1), pa,
                               static_cast<double>(i - nbc), ph, static_cast<double>(nbc));

  // Confirmation at j <= 2 N_BC, then a nonnegative excursion from 2 N_BC - j
  // down to -1. The excursion length fixes n = (i - 1)/2 - N_BC for every j.
  if ((i - 1 - 2 * nbc) % 2 == 0) {
    const auto n = static_cast<long long>((i - 1 - 2 * nbc) / 2);
    double coefficient = 0.0;
    double log_terms_max = -std::numeric_limits<double>::infinity();
    std::vector<double> logs;
    logs.reserve(nbc + 1);
    for (std::size_t j = nbc; j <= 2 * nbc; ++j) {
      const auto m = static_cast<long long>(2 * nbc - j);
      coefficient += binomial_double(j - 1, nbc - 1) * ballot_double(n, m);
      logs.push_back(log_binomial(j - 1, nbc - 1) + log_ballot_number(n, m));
      log_terms_max = std::max(log_terms_max, logs.back());
    }
    double scaled = 0.0;
    for (double l : logs) scaled += std::exp(l - log_terms_max);
    const double log_coefficient = log_terms_max + std::log(scaled);
    out.ballot_part = weighted(coefficient, log_coefficient, pa, static_cast<double>((i + 1) / 2),
                               ph, static_cast<double>((i - 1) / 2));
  }
  return out;
}

double p_dsa_at_state(const AttackSpec& spec, std::size_t i) {
  return state_mass_parts(spec, i).total();
}

double p_dsa(const AttackSpec& spec) {
  const double pa = spec.p_a();
  const double ph = spec.p_h();
  if (pa >= ph) return 1.0;
  const std::size_t nbc = spec.n_bc();
  double deficit = 0.0;
  for (std::size_t j = nbc; j <= 2 * nbc; ++j) {
    const double coef = binomial_double(j - 1, nbc - 1);
    const double log_coef = log_binomial(j - 1, nbc - 1);
    deficit += weighted(coef, log_coef, pa, static_cast<double>(j - nbc), ph,
                        static_cast<double>(nbc)) -
               weighted(coef, log_coef, pa, static_cast<double>(nbc + 1), ph,
                        static_cast<double>(j - nbc) - 1.0);
  }
  return 1.0 - deficit;
}

double rosenfeld_p_dsa(const AttackSpec& spec, double tol, std::size_t max_terms) {
  const double pa = spec.p_a();
  const double ph = spec.p_h();
  if (pa >= ph) return 1.0;
  const std::size_t nbc = spec.n_bc();
  const double dn = static_cast<double>(nbc);

  auto negbin = [&](std::size_t k, double extra_a, double extra_h) {
    return weighted(binomial_double(nbc + k - 1, k), log_binomial(nbc + k - 1, k), pa,
                    static_cast<double>(k) + extra_a, ph, dn + extra_h);
  };

  // Attacker holds k blocks when the honest chain confirms; it then needs to
  // gain N_BC - k + 1 blocks, which a gambler's ruin gives as (p_A/p_H)^(N_BC-k+1).
  double sum = 0.0;
  for (std::size_t k = 0; k <= nbc + 1; ++k) {
    const double gap = dn - static_cast<double>(k) + 1.0;
    sum += negbin(k, gap, -gap);
  }
  // Attacker already ahead at confirmation.
  for (std::size_t k = nbc + 2, count = 0; count < max_terms; ++k, ++count) {
    const double term = negbin(k, 0.0, 0.0);
    sum += term;
    const double ratio = (dn + static_cast<double>(k)) / (static_cast<double>(k) + 1.0) * pa;
    if (ratio < 1.0) {
      // ratio decreases in k, so the tail is dominated by a geometric series.
      const double tail = term * ratio / (1.0 - ratio);
      if (tail <= tol * sum) return sum;
    }
  }
  throw ConvergenceError("catch-up series tail bound not met within the term cap", sum, max_terms);
}

double premine_success_prob(double p_a, unsigned n_bc) {
  if (!(p_a > 0.0 && p_a < 1.0)) throw DomainError("p_A must lie in (0, 1)");
  const double p_h = 1.0 - p_a;
  if (p_a >= p_h) return 1.0;
  return std::exp((static_cast<double>(n_bc) + 1.0) * std::log(p_a / p_h));
}

double premine_success_prob(const AttackSpec& spec) {
  return premine_success_prob(spec.p_a(), spec.n_bc());
}

}  // namespace dsattack
