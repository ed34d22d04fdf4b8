#pragma once

#include <cstddef>
#include <vector>

namespace dsattack {

/// Parameter vectors of a generalized hypergeometric series pFq(a; b; x).
struct HypergeomParams {
  std::vector<double> a;
  std::vector<double> b;
};

inline constexpr double kDefaultSeriesTol = 1e-14;
inline constexpr std::size_t kDefaultSeriesCap = 1'000'000;

/// Sum_k prod (a)_k / prod (b)_k * x^k / k!, truncated once the tail bound
/// falls below tol * |partial sum|.
///
/// Throws DomainError if some b is zero or a negative integer, or if the
/// series diverges at x (p > q + 1 with x != 0, or p = q + 1 with |x| >= 1).
/// Throws ConvergenceError if the term cap is hit, std::overflow_error if the
/// value does not fit in a double (use hypergeom_pFq_log instead).
double hypergeom_pFq(const HypergeomParams& params, double x, double tol = kDefaultSeriesTol,
                     std::size_t max_terms = kDefaultSeriesCap);

/// log pFq(a; b; x) for positive-term series (all a > 0, all b > 0, x >= 0).
/// The running sum is rescaled so that arguments far beyond the double range
/// of the value itself stay representable.
double hypergeom_pFq_log(const HypergeomParams& params, double x, double tol = kDefaultSeriesTol,
                         std::size_t max_terms = kDefaultSeriesCap);

/// M_k(x) = sum_i C_{i,k} x^i = (2 / (1 + sqrt(1 - 4x)))^(k+1), 0 <= x <= 1/4.
double ballot_gen_fn(unsigned k, double x);
/// M'_k(x); the endpoint x = 1/4 is a SingularityError.
double ballot_gen_fn_deriv(unsigned k, double x);

/// G_k(x) = sum_{i>=k} binom(i, k) x^i = x^k / (1 - x)^(k+1), 0 <= x < 1.
double binom_gen_fn(unsigned k, double x);
double binom_gen_fn_deriv(unsigned k, double x);

/// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
/// Series below x = a + 1, Lentz continued fraction above.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

/// Density and CDF of the i-th arrival time of a Poisson process with the given rate.
double erlang_pdf(std::size_t i, double rate, double t);
double erlang_cdf(std::size_t i, double rate, double t);

/// ln n!, exact table through 20!, log-gamma beyond.
double log_factorial(std::size_t n);
/// ln binom(n, k); -inf when k > n.
double log_binomial(std::size_t n, std::size_t k);

}  // namespace dsattack
