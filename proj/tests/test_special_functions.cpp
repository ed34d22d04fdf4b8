#include <doctest.h>

#include <boost/math/special_functions/hypergeometric_pFq.hpp>
#include <cmath>
#include <limits>

#include "dsattack/errors.hpp"
#include "dsattack/special_functions.hpp"
#include "dsattack/stochastics.hpp"
#include "oracles.hpp"

using namespace dsattack;
using doctest::Approx;

TEST_CASE("pFq at zero argument is one") {
  CHECK(hypergeom_pFq({{1.5, 2.0}, {3.0, 4.0, 0.5}}, 0.0) == 1.0);
  CHECK(hypergeom_pFq({{}, {}}, 0.0) == 1.0);
}

TEST_CASE("0F0 reproduces the exponential") {
  for (double x : {-1.0, 0.5, 3.0}) {
    CHECK(hypergeom_pFq({{}, {}}, x) == Approx(std::exp(x)).epsilon(1e-12));
  }
}

TEST_CASE("pFq agrees with an independent implementation") {
  const std::vector<double> a{2.5, 1.75};
  const std::vector<double> b{4.0, 3.0, 2.5};
  for (double x : {0.1, 2.0, 25.0, 300.0}) {
    const double ref = boost::math::hypergeometric_pFq(a, b, x);
    CHECK(hypergeom_pFq({a, b}, x) == Approx(ref).epsilon(1e-11));
    CHECK(hypergeom_pFq_log({a, b}, x) == Approx(std::log(ref)).epsilon(1e-12));
  }
}

TEST_CASE("2F3 with the density parameters matches the ballot series it encodes") {
  // N = 3, j = 4, p_A = 0.3, lambda_T t = 5: the excursion sum
  // sum_n C_{n,m} x^n / (2n + m + j)! * (2N)!... normalised so n = 0 gives 1.
  const unsigned n_bc = 3;
  const unsigned j = 4;
  const double pa = 0.3;
  const double lt = 5.0;
  const double x = pa * (1.0 - pa) * lt * lt;
  const double jj = j;
  const double nn = n_bc;
  const HypergeomParams params{{nn + 1 - jj / 2, nn + 0.5 - jj / 2}, {2 * nn + 2 - jj, nn + 1, nn + 0.5}};
  const long m = 2 * n_bc - j;
  // term(n) = C_{n,m} x^n (2N)! / (2n + 2N)!  relative to its n = 0 value
  const double base = static_cast<double>(ballot_number(0, m));
  double direct = 0.0;
  for (long n = 0; n < 200; ++n) {
    const double log_term = log_ballot_number(n, m) + n * std::log(x) +
                            std::lgamma(2.0 * nn + 1) - std::lgamma(2.0 * n + 2 * nn + 1);
    direct += std::exp(log_term) / base;
  }
  CHECK(hypergeom_pFq(params, x) == Approx(direct).epsilon(1e-10));
}

TEST_CASE("pFq rejects denominator poles") {
  CHECK_THROWS_AS(hypergeom_pFq({{1.0}, {-2.0}}, 0.5), DomainError);
  CHECK_THROWS_AS(hypergeom_pFq({{1.0}, {0.0}}, 0.5), DomainError);
}

TEST_CASE("pFq with a terminating numerator is a polynomial") {
  // 1F0(-2;;x) = (1 - x)^2
  CHECK(hypergeom_pFq({{-2.0}, {}}, 0.3) == Approx(0.49).epsilon(1e-14));
}

TEST_CASE("pFq refuses a divergent 2F0 series") {
  CHECK_THROWS_AS(hypergeom_pFq({{1.0, 1.0}, {}}, 0.5), DomainError);
}

TEST_CASE("ballot generating function closed form") {
  for (unsigned k : {0u, 3u, 10u}) CHECK(ballot_gen_fn(k, 0.0) == 1.0);
  const double pa = 0.35;
  CHECK(ballot_gen_fn(0, pa * (1 - pa)) == Approx(1.0 / 0.65).epsilon(1e-14));
  CHECK(ballot_gen_fn(2, 0.25) == Approx(8.0).epsilon(1e-14));
  CHECK_THROWS_AS(ballot_gen_fn(1, 0.26), DomainError);
  CHECK_THROWS_AS(ballot_gen_fn(1, -0.01), DomainError);
}

TEST_CASE("ballot generating function matches its power series") {
  // 0.8^i i^{-3/2} decay at x = 0.2 needs far more than 50 terms for 1e-10.
  CHECK(ballot_gen_fn(3, 0.2) == Approx(oracle::ballot_series(3, 0.2, 200)).epsilon(1e-10));
  for (double x = 0.05; x < 0.2401; x += 0.01) {
    for (unsigned k = 0; k <= 10; ++k) {
      const double series = oracle::ballot_series(k, x, 4000);
      CHECK(ballot_gen_fn(k, x) == Approx(series).epsilon(1e-10));
    }
  }
}

TEST_CASE("binomial generating function") {
  CHECK(binom_gen_fn(0, 0.5) == Approx(2.0));
  const double pa = 0.4;
  const double ph = 0.6;
  CHECK(binom_gen_fn(2, pa) == Approx(std::pow(pa / ph, 2) / ph).epsilon(1e-14));
  CHECK(binom_gen_fn(4, 0.3) == Approx(oracle::binomial_series(4, 0.3, 200)).epsilon(1e-10));
  for (double x = 0.05; x < 0.2401; x += 0.01) {
    for (unsigned k = 0; k <= 10; ++k) {
      CHECK(binom_gen_fn(k, x) == Approx(oracle::binomial_series(k, x, 400)).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(binom_gen_fn(1, 1.0), DomainError);
}

TEST_CASE("generating function derivatives match central differences") {
  const double h = 1e-6;
  CHECK(binom_gen_fn_deriv(0, 0.0) == Approx(1.0));
  const double fd = (ballot_gen_fn(2, 0.2 + h) - ballot_gen_fn(2, 0.2 - h)) / (2 * h);
  CHECK(ballot_gen_fn_deriv(2, 0.2) == Approx(fd).epsilon(1e-6));
  for (double x = 0.05; x < 0.2401; x += 0.01) {
    for (unsigned k = 0; k <= 10; ++k) {
      const double fm = (ballot_gen_fn(k, x + h) - ballot_gen_fn(k, x - h)) / (2 * h);
      const double fg = (binom_gen_fn(k, x + h) - binom_gen_fn(k, x - h)) / (2 * h);
      CHECK(ballot_gen_fn_deriv(k, x) == Approx(fm).epsilon(1e-6));
      CHECK(binom_gen_fn_deriv(k, x) == Approx(fg).epsilon(1e-6));
    }
  }
}

TEST_CASE("ballot derivative at p_m p_M") {
  const double pa = 0.3;
  const double pm = 0.3;
  const double pM = 0.7;
  const unsigned k = 1;
  const double expected = (k + 1) / (1 - 2 * pm) * std::pow(1 / pM, k + 2);
  CHECK(ballot_gen_fn_deriv(k, pa * (1 - pa)) == Approx(expected).epsilon(1e-13));
  CHECK_THROWS_AS(ballot_gen_fn_deriv(k, 0.25), SingularityError);
}

TEST_CASE("Erlang of order one is exponential") {
  for (double t : {0.0, 10.0, 600.0, 5000.0}) {
    CHECK(erlang_cdf(1, 1.0 / 600, t) == Approx(-std::expm1(-t / 600)).epsilon(1e-14));
  }
}

TEST_CASE("Erlang densities integrate to one") {
  for (std::size_t i : {1u, 5u, 20u}) {
    const double total =
        oracle::integrate_to_infinity([&](double t) { return erlang_pdf(i, 0.5, t); }, 0.0);
    CHECK(total == Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("Erlang CDF equals the integrated density") {
  const double rate = 1.0 / 600;
  const double integral = oracle::integrate([&](double t) { return erlang_pdf(7, rate, t); }, 0.0, 5000.0);
  CHECK(std::abs(erlang_cdf(7, rate, 5000.0) - integral) < 1e-9);
}

TEST_CASE("Erlang density matches the log-gamma formula") {
  for (std::size_t i : {1u, 2u, 30u, 200u}) {
    for (double t : {0.5, 40.0, 400.0}) {
      CHECK(erlang_pdf(i, 0.5, t) == Approx(oracle::erlang_pdf(i, 0.5, t)).epsilon(1e-11));
    }
  }
}

TEST_CASE("incomplete gamma halves are complementary and monotone") {
  for (double a : {1.0, 3.0, 12.0, 80.0}) {
    double prev = 0.0;
    for (double x = 0.0; x < 3 * a + 20; x += 0.37) {
      const double p = regularized_gamma_p(a, x);
      const double q = regularized_gamma_q(a, x);
      CHECK(p >= prev);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      CHECK(std::abs(p + q - 1.0) < 1e-12);
      prev = p;
    }
  }
}

TEST_CASE("log factorial switches to log-gamma smoothly") {
  CHECK(log_factorial(0) == 0.0);
  CHECK(log_factorial(20) == Approx(std::log(2432902008176640000.0)).epsilon(1e-15));
  CHECK(log_factorial(21) == Approx(std::lgamma(22.0)).epsilon(1e-15));
  CHECK(log_binomial(10, 3) == Approx(std::log(120.0)).epsilon(1e-14));
}
