#include "dsattack/timing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dsattack/errors.hpp"
#include "dsattack/stochastics.hpp"

namespace dsattack {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogUnderflow = -750.0;  // below the smallest subnormal

// w(i) = Pr(T_i < t), nonincreasing in i.
class ErlangCdfWeight {
 public:
  ErlangCdfWeight(double rate, double t) : rate_(rate), t_(t) {}
  double value(std::size_t i) {
    if (i != cached_i_) {
      cached_i_ = i;
      cached_ = erlang_cdf(i, rate_, t_);
    }
    return cached_;
  }
  double sup_beyond(std::size_t i) { return erlang_cdf(i + 1, rate_, t_); }

 private:
  double rate_;
  double t_;
  std::size_t cached_i_ = 0;
  double cached_ = 0.0;
};

// w(i) = integral_0^t s f_{T_i}(s) ds = (i / rate) * Pr(T_{i+1} < t).
// Nonincreasing once i >= rate * t.
class ErlangMomentWeight {
 public:
  ErlangMomentWeight(double rate, double t) : rate_(rate), t_(t) {}
  double value(std::size_t i) const {
    return static_cast<double>(i) / rate_ * erlang_cdf(i + 1, rate_, t_);
  }
  double sup_beyond(std::size_t i) const {
    if (static_cast<double>(i + 1) < rate_ * t_) return kInf;
    return value(i + 1);
  }

 private:
  double rate_;
  double t_;
};

void check_density_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("density is defined only for finite t > 0");
  }
}

}  // namespace

double dsa_time_density(const AttackSpec& spec, double t, double tol) {
  check_density_time(t);
  const std::size_t nbc = spec.n_bc();
  const double dn = static_cast<double>(nbc);
  const double pa = spec.p_a();
  const double ph = spec.p_h();
  const double rate = spec.lambda_t();
  const double rt = rate * t;
  const double x = pa * ph * rt * rt;

  // C_{n,m} <= 2^(2n+m) bounds the excursion part by
  // lambda_T p_A 2^N binom(2N, N) exp(-lambda_T t (1 - 2 sqrt(p_A p_H))).
  const double log_bound = std::log(pa * rate) + dn * std::log(2.0) +
                           log_binomial(2 * nbc, nbc) - rt * (1.0 - 2.0 * std::sqrt(pa * ph));
  double excursion = 0.0;
  if (log_bound > kLogUnderflow) {
    // One 2F3 per confirmation state j; its terms peak near k = sqrt(x).
    const double log_prefix = std::log(pa * rate) - rt + dn * std::log(x) - log_factorial(2 * nbc);
    const auto cap = static_cast<std::size_t>(
        std::max(static_cast<double>(kDefaultSeriesCap), 8.0 * std::sqrt(x)));
    std::vector<double> logs;
    logs.reserve(nbc + 1);
    for (std::size_t j = nbc; j <= 2 * nbc; ++j) {
      const double dj = static_cast<double>(j);
      const HypergeomParams params{{dn + 1.0 - dj / 2.0, dn + 0.5 - dj / 2.0},
                                   {2.0 * dn + 2.0 - dj, dn + 1.0, dn + 0.5}};
      logs.push_back(log_binomial(j - 1, nbc - 1) + log_prefix +
                     hypergeom_pFq_log(params, x, tol, cap));
    }
    const double top = *std::max_element(logs.begin(), logs.end());
    if (std::isfinite(top)) {
      double scaled = 0.0;
      for (double l : logs) scaled += std::exp(l - top);
      excursion = std::exp(top) * scaled;
    }
  }

  // Attacker-already-ahead part: e^{-lambda_T t}(e^{y} - sum_{i<=N} y^i/i!) with
  // y = p_A lambda_T t equals e^{-p_H lambda_T t} P(N+1, y), free of cancellation.
  const double ht = ph * rt;
  const double ahead = std::exp(-ht + dn * std::log(ht) - std::log(t) - log_factorial(nbc - 1)) *
                       regularized_gamma_p(dn + 1.0, pa * rt);
  return excursion + ahead;
}

double attack_success_prob(const AttackSpec& spec, const SeriesOptions& options) {
  if (spec.cut().is_infinite()) return p_dsa(spec);
  ErlangCdfWeight weight(spec.lambda_t(), spec.cut().seconds());
  return sum_state_series(spec, weight, options).value;
}

AttackTiming attack_timing(const AttackSpec& spec, const SeriesOptions& options) {
  if (spec.cut().is_infinite()) return {p_dsa(spec), expected_success_time_inf(spec)};
  const double p_as = attack_success_prob(spec, options);
  if (!(p_as > 0.0)) {
    throw UndefinedError("expected success time is undefined when P_AS = 0");
  }
  ErlangMomentWeight weight(spec.lambda_t(), spec.cut().seconds());
  const double moment = sum_state_series(spec, weight, options).value;
  return {p_as, moment / p_as};
}

double expected_success_time(const AttackSpec& spec, const SeriesOptions& options) {
  return attack_timing(spec, options).e_tas;
}

double expected_success_time_inf(const AttackSpec& spec) {
  const double pa = spec.p_a();
  const double ph = spec.p_h();
  if (pa == 0.5) {
    throw SingularityError(
        "mean success time with infinite cut diverges at p_A = 0.5; use a finite cut or "
        "the Monte Carlo estimator");
  }
  const std::size_t nbc = spec.n_bc();
  const double dn = static_cast<double>(nbc);
  const double p_big = spec.p_max();
  const double p_small = spec.p_min();
  double acc = 0.0;
  for (std::size_t j = nbc; j <= 2 * nbc; ++j) {
    const double dj = static_cast<double>(j);
    const double excursion = pa * std::pow(p_small, dn) * std::pow(p_big, dj - dn - 1.0) *
                             (2.0 * dn - 2.0 * dj * p_small + 1.0) / (p_big - p_small);
    const double ahead = dj * std::pow(pa, dj - dn) * std::pow(ph, dn);
    acc += std::exp(log_binomial(j - 1, nbc - 1)) * (excursion - ahead);
  }
  return (acc + dn / ph) / spec.lambda_t() / p_dsa(spec);
}

DefectiveTimeDistribution::DefectiveTimeDistribution(const AttackSpec& spec,
                                                     SeriesOptions options)
    : spec_(spec.with_cut(CutTime::infinite())),
      options_(options),
      defect_mass_(1.0 - p_dsa(spec)) {}

double DefectiveTimeDistribution::density(double t) const {
  return dsa_time_density(spec_, t, std::min(options_.tol, kDefaultSeriesTol));
}

double DefectiveTimeDistribution::cdf(double t) const {
  if (!(t >= 0.0)) throw DomainError("cdf requires t >= 0");
  if (t == 0.0) return 0.0;
  if (std::isinf(t)) return continuous_mass();
  return attack_success_prob(spec_.with_cut(CutTime::after(t)), options_);
}

}  // namespace dsattack
