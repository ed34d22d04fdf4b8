#include "dsattack/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dsattack/errors.hpp"

namespace dsattack {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRescale = 1e200;
constexpr double kGammaTol = 1e-15;

bool is_nonpositive_integer(double v) { return v <= 0.0 && std::floor(v) == v; }

struct ScaledSum {
  double sum;
  double log_scale;
  std::size_t terms;
};

ScaledSum pfq_series(const HypergeomParams& params, double x, double tol, std::size_t max_terms) {
  if (!(tol > 0.0)) throw DomainError("hypergeometric tolerance must be positive");
  for (double b : params.b) {
    if (is_nonpositive_integer(b)) {
      throw DomainError("hypergeometric denominator parameter " + std::to_string(b) + " is a pole");
    }
  }
  if (x == 0.0) return {1.0, 0.0, 1};
  const std::size_t p = params.a.size();
  const std::size_t q = params.b.size();
  if (p > q + 1) throw DomainError("pFq with p > q + 1 diverges for x != 0");
  if (p == q + 1 && std::fabs(x) >= 1.0) {
    throw DomainError("pFq with p = q + 1 requires |x| < 1");
  }

  double offset = 0.0;
  for (double v : params.a) offset = std::max(offset, std::fabs(v));
  for (double v : params.b) offset = std::max(offset, std::fabs(v));

  auto ratio_at = [&](double k) {
    double r = x / (k + 1.0);
    for (double a : params.a) r *= a + k;
    for (double b : params.b) r /= b + k;
    return r;
  };

  double term = 1.0;
  double sum = 1.0;
  double log_scale = 0.0;
  double prev_ratio = kInf;
  for (std::size_t k = 0; k < max_terms; ++k) {
    const double ratio = ratio_at(static_cast<double>(k));
    if (ratio == 0.0) return {sum, log_scale, k + 1};  // terminating series
    term *= ratio;
    sum += term;
    if (std::fabs(term) > kRescale) {
      term /= kRescale;
      sum /= kRescale;
      log_scale += std::log(kRescale);
    }
    const double next = std::fabs(ratio_at(static_cast<double>(k + 1)));
    const bool settled = static_cast<double>(k) > offset + 2.0 && next <= prev_ratio;
    prev_ratio = next;
    double bound_ratio = next;
    if (p == q + 1) bound_ratio = std::max(bound_ratio, std::fabs(x));
    if (settled && bound_ratio < 1.0) {
      const double tail = std::fabs(term) * bound_ratio / (1.0 - bound_ratio);
      if (tail <= tol * std::fabs(sum)) return {sum, log_scale, k + 2};
    }
  }
  throw ConvergenceError("hypergeometric series did not converge within the term cap",
                         sum * std::exp(log_scale), max_terms);
}

double log_gamma_prefix(double a, double x) { return a * std::log(x) - x - std::lgamma(a); }

// P(a, x) by its power series, valid and fast for x < a + 1.
double gamma_p_series(double a, double x) {
  double denom = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < 1'000'000; ++n) {
    denom += 1.0;
    term *= x / denom;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kGammaTol) break;
  }
  return sum * std::exp(log_gamma_prefix(a, x));
}

// Q(a, x) by modified Lentz evaluation of its continued fraction, for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1'000'000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kGammaTol) break;
  }
  return std::exp(log_gamma_prefix(a, x)) * h;
}

void check_gamma_args(double a, double x) {
  if (!(a > 0.0)) throw DomainError("incomplete gamma requires a > 0");
  if (!(x >= 0.0)) throw DomainError("incomplete gamma requires x >= 0");
}

void check_erlang_args(std::size_t i, double rate, double t) {
  if (i < 1) throw DomainError("Erlang shape must be >= 1");
  if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("Erlang rate must be positive");
  if (!(t >= 0.0)) throw DomainError("Erlang time must be nonnegative");
}

}  // namespace

double hypergeom_pFq(const HypergeomParams& params, double x, double tol, std::size_t max_terms) {
  const ScaledSum s = pfq_series(params, x, tol, max_terms);
  const double value = s.sum * std::exp(s.log_scale);
  if (!std::isfinite(value)) {
    throw std::overflow_error("hypergeometric value exceeds double range; use hypergeom_pFq_log");
  }
  return value;
}

double hypergeom_pFq_log(const HypergeomParams& params, double x, double tol,
                         std::size_t max_terms) {
  if (!(x >= 0.0)) throw DomainError("hypergeom_pFq_log requires x >= 0");
  for (double a : params.a) {
    if (!(a > 0.0)) throw DomainError("hypergeom_pFq_log requires positive numerator parameters");
  }
  for (double b : params.b) {
    if (!(b > 0.0)) throw DomainError("hypergeom_pFq_log requires positive denominator parameters");
  }
  const ScaledSum s = pfq_series(params, x, tol, max_terms);
  return std::log(s.sum) + s.log_scale;
}

double ballot_gen_fn(unsigned k, double x) {
  if (!(x >= 0.0 && x <= 0.25)) {
    throw DomainError("ballot generating function requires 0 <= x <= 1/4");
  }
  const double root = std::sqrt(std::max(0.0, 1.0 - 4.0 * x));
  return std::pow(2.0 / (1.0 + root), static_cast<double>(k) + 1.0);
}

double ballot_gen_fn_deriv(unsigned k, double x) {
  if (x == 0.25) throw SingularityError("M'_k(x) is singular at x = 1/4 (p_A = 0.5)");
  if (!(x >= 0.0 && x < 0.25)) {
    throw DomainError("ballot generating function derivative requires 0 <= x < 1/4");
  }
  const double root = std::sqrt(1.0 - 4.0 * x);
  return (static_cast<double>(k) + 1.0) / root *
         std::pow(2.0 / (1.0 + root), static_cast<double>(k) + 2.0);
}

double binom_gen_fn(unsigned k, double x) {
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("binomial generating function requires 0 <= x < 1");
  return std::pow(x, k) / std::pow(1.0 - x, static_cast<double>(k) + 1.0);
}

double binom_gen_fn_deriv(unsigned k, double x) {
  if (!(x >= 0.0 && x < 1.0)) {
    throw DomainError("binomial generating function derivative requires 0 <= x < 1");
  }
  const double denom = std::pow(1.0 - x, static_cast<double>(k) + 2.0);
  if (k == 0) return 1.0 / denom;
  return (k * std::pow(x, k - 1) + std::pow(x, k)) / denom;
}

double regularized_gamma_p(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double erlang_pdf(std::size_t i, double rate, double t) {
  check_erlang_args(i, rate, t);
  const double rt = rate * t;
  if (rt == 0.0) return i == 1 ? rate : 0.0;
  const double shape = static_cast<double>(i - 1);
  return std::exp(std::log(rate) + shape * std::log(rt) - rt - log_factorial(i - 1));
}

double erlang_cdf(std::size_t i, double rate, double t) {
  check_erlang_args(i, rate, t);
  if (!std::isfinite(t)) return 1.0;
  return regularized_gamma_p(static_cast<double>(i), rate * t);
}

double log_factorial(std::size_t n) {
  static const std::array<double, 21> table = [] {
    std::array<double, 21> out{};
    double f = 1.0;
    out[0] = 0.0;
    for (std::size_t k = 1; k < out.size(); ++k) {
      f *= static_cast<double>(k);
      out[k] = std::log(f);
    }
    return out;
  }();
  if (n < table.size()) return table[n];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial(std::size_t n, std::size_t k) {
  if (k > n) return -kInf;
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

}  // namespace dsattack
