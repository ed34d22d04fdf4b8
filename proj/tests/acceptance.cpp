// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "dsattack/economics.hpp"
#include "dsattack/montecarlo.hpp"
#include "dsattack/reporting.hpp"
#include "dsattack/special_functions.hpp"
#include "dsattack/stochastics.hpp"
#include "dsattack/timing.hpp"
#include "oracles.hpp"

using namespace dsattack;

namespace {

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      if (failures_ < 5) std::printf("    miss: %s\n", what.c_str());
      ++failures_;
    }
  }
  void near(double got, double want, double tol, const std::string& what) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s: got %.10g, want %.10g +/- %.3g", what.c_str(), got, want, tol);
    expect(std::abs(got - want) <= tol, buf);
  }
  bool ok() const { return failures_ == 0; }

 private:
  int failures_ = 0;
};

struct Cell {
  unsigned n_bc;
  double p_a, p_as, e_tas, e_x, coeff, constant;
};

bool table_reproduction(Check& c) {
  const std::vector<Cell> published = {
      {1, 0.35, 0.315, 2.004, 1.815, 1.079, 4.680},  {1, 0.40, 0.411, 1.953, 2.106, 1.302, 3.819},
      {3, 0.35, 0.279, 5.518, 5.487, 2.971, 16.68},  {3, 0.40, 0.419, 5.338, 6.139, 3.559, 11.10},
      {5, 0.35, 0.218, 8.681, 9.440, 4.675, 38.62},  {5, 0.40, 0.376, 8.434, 10.44, 5.622, 22.15},
      {7, 0.35, 0.170, 11.69, 13.59, 6.297, 73.84},  {7, 0.40, 0.334, 11.42, 14.977, 7.612, 37.25},
      {9, 0.35, 0.132, 14.61, 17.859, 7.865, 127.0}, {9, 0.40, 0.297, 14.32, 19.72, 9.550, 56.96},
  };
  const std::vector<unsigned> nbc{1, 3, 5, 7, 9};
  const std::vector<double> pa{0.35, 0.4};
  const auto start = std::chrono::steady_clock::now();
  const ResourceTable table = build_resource_table(nbc, pa, 4.0);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto& p : published) {
    const auto& r = table.at(p.n_bc, p.p_a);
    const std::string cell = "N=" + std::to_string(p.n_bc) + " pA=" + std::to_string(p.p_a);
    c.near(r.p_as, p.p_as, 1e-3, cell + " P_AS");
    c.near(r.e_tas_scaled, p.e_tas, 5e-3, cell + " E_TAS");
    c.near(r.e_x_scaled, p.e_x, 5e-3, cell + " E_X");
    c.near(r.c_req_mu_coeff, p.coeff, 1e-2, cell + " C_Req coeff");
    c.near(r.c_req_const, p.constant, 1e-2, cell + " C_Req const");
  }
  c.expect(secs < 10.0, "table took " + std::to_string(secs) + " s");
  return c.ok();
}

bool case_study_check(Check& c) {
  NetworkConfig cfg;
  cfg.name = "BitcoinCash";
  cfg.beta_per_block = 0.44;
  cfg.block_time_seconds = 600;
  cfg.gamma_override = 0.422;
  const auto r = case_study(cfg, 0.35, 5, CutTime::confirmation_multiple(4, 5, 1.0 / 600));
  c.near(r.p_as, 0.218, 1e-3, "P_AS");
  c.near(*r.e_tas_seconds, 5200, 52, "E_TAS");
  c.near(r.e_x, 3.98, 0.0398, "E_X");
  c.near(r.c_req.value(), 16.22, 0.1622, "C_Req");
  c.near(r.runtime_per_attempt, 2 * 3600 + 55 * 60, 60, "runtime per attempt");
  return c.ok();
}

bool premine_check(Check& c) {
  const auto cmp = premine_comparison(0.35, 5);
  c.near(cmp.p_dsa, 0.2287, 5e-4, "P_DSA");
  c.near(cmp.p_premine, 0.0244, 5e-4, "P_pre-mine");
  for (int k = 0; k < 50; ++k) {
    const double p = 0.01 + 0.48 * k / 49.0;
    for (unsigned n = 1; n <= 9; ++n) {
      const auto g = premine_comparison(p, n);
      c.expect(g.p_dsa > g.p_premine, "inequality at pA=" + std::to_string(p) + " N=" + std::to_string(n));
    }
  }
  return c.ok();
}

bool enumeration_check(Check& c) {
  for (unsigned n : {1u, 2u, 3u}) {
    for (double p : {0.1, 0.35, 0.5, 0.65}) {
      const AttackSpec s(p, n);
      const auto exact = enumerate_exact(s, 15);
      for (std::size_t i = 1; i <= 15; ++i) {
        c.near(p_dsa_at_state(s, i), exact[i - 1], 1e-12,
               "state " + std::to_string(i) + " N=" + std::to_string(n) + " pA=" + std::to_string(p));
      }
    }
  }
  return c.ok();
}

bool monte_carlo_check(Check& c) {
  const double lambda_h = 1.0 / 600;
  const AttackSpec s(0.35, 5, CutTime::confirmation_multiple(4, 5, lambda_h), lambda_h);
  const auto a = estimate(s, 1'000'000, 20240607);
  const auto b = estimate(s, 1'000'000, 20240607);
  const AttackTiming t = attack_timing(s);
  c.near(a.p_as_hat, t.p_as, 3 * a.se_p_as, "p_as_hat");
  c.near(a.mean_tas, t.e_tas, 3 * a.se_tas, "mean success time");
  c.expect(a.successes == b.successes && a.mean_tas == b.mean_tas && a.var_tas == b.var_tas,
           "repeat run differs");
  return c.ok();
}

bool distribution_check(Check& c) {
  const double lambda_h = 1.0 / 600;
  const AttackSpec s(0.35, 5, CutTime::infinite(), lambda_h);
  const auto masses = oracle::first_passage_masses(0.35, 5, 600);
  for (int k = 1; k <= 20; ++k) {
    const double t = 1500.0 * k;
    double series = 0.0;
    for (std::size_t i = 1; i <= masses.size(); ++i) {
      series += masses[i - 1] * oracle::erlang_pdf(i, s.lambda_t(), t);
    }
    c.near(dsa_time_density(s, t), series, 1e-9, "density at t=" + std::to_string(t));
  }
  const DefectiveTimeDistribution d(s);
  const double mass = oracle::integrate_to_infinity([&](double t) { return d.density(t); }, 0.0);
  c.near(mass + d.defect_mass(), 1.0, 1e-6, "total mass");
  double prev = 0.0;
  double last = 0.0;
  for (int e = 0; e <= 7; ++e) {
    last = attack_success_prob(s.with_cut(CutTime::after(std::pow(10.0, e))));
    c.expect(last >= prev, "P_AS not monotone at 1e" + std::to_string(e));
    prev = last;
  }
  last = attack_success_prob(s.with_cut(CutTime::after(1e9)));
  c.near(last, p_dsa(s), 1e-10, "P_AS limit");
  return c.ok();
}

bool cross_formula_check(Check& c) {
  for (int k = 1; k <= 9; ++k) {
    for (unsigned n = 1; n <= 9; ++n) {
      const AttackSpec s(0.05 * k, n);
      c.near(p_dsa(s), rosenfeld_p_dsa(s), 1e-10, "closed vs catch-up");
    }
  }
  for (double p : {0.35, 0.65}) {
    for (unsigned n : {1u, 5u}) {
      const AttackSpec s(p, n);
      double num = 0.0;
      double den = 0.0;
      for (std::size_t i = 1; i <= 20000; ++i) {
        const double m = p_dsa_at_state(s, i);
        num += static_cast<double>(i) / s.lambda_t() * m;
        den += m;
      }
      const double closed = expected_success_time_inf(s);
      c.near(closed, num / den, 1e-8 * closed, "infinite-cut mean");
    }
  }
  const double h = 1e-6;
  for (unsigned k = 0; k <= 10; ++k) {
    for (double x = 0.05; x < 0.2401; x += 0.01) {
      const double fm = (ballot_gen_fn(k, x + h) - ballot_gen_fn(k, x - h)) / (2 * h);
      const double fg = (binom_gen_fn(k, x + h) - binom_gen_fn(k, x - h)) / (2 * h);
      c.near(ballot_gen_fn_deriv(k, x), fm, 1e-6 * std::abs(fm), "M' derivative");
      c.near(binom_gen_fn_deriv(k, x), fg, 1e-6 * std::abs(fg), "G' derivative");
    }
  }
  return c.ok();
}

bool limits_check(Check& c) {
  const double lambda_h = 1.0 / 600;
  const EconomicModel m(1.0, 1.04, 0.0);
  // Short cuts are also expensive (success is rare), so growth is checked
  // from the grid minimum onward.
  std::vector<double> values;
  for (int e = 3; e <= 7; ++e) {
    const AttackSpec s(0.3, 5, CutTime::after(std::pow(10.0, e)), lambda_h);
    values.push_back(required_value(m, s).value());
  }
  const auto low = std::min_element(values.begin(), values.end()) - values.begin();
  for (std::size_t k = low + 1; k < values.size(); ++k) {
    c.expect(values[k] > values[k - 1], "C_Req not increasing past the minimum");
  }
  const double far = required_value(m, AttackSpec(0.3, 5, CutTime::after(1e9), lambda_h)).value();
  c.expect(far > *std::max_element(values.begin(), values.end()), "C_Req at 1e9 s not past every grid value");
  c.expect(values.back() > 9.0 * values[values.size() - 2], "C_Req not growing linearly");
  c.expect(required_value(m, AttackSpec(0.3, 5)).is_infinite(), "infinite cut not divergent");
  const AttackSpec strong(0.6, 5);
  c.expect(required_value(m, strong).value() < 0.0, "C_Req not negative");
  c.expect(expected_profit(m, strong) > 0.0, "E_P not positive at C=0");
  const AttackSpec cut(0.35, 5, CutTime::confirmation_multiple(4, 5, lambda_h), lambda_h);
  const EconomicModel bch(0.422, 0.44, 0.0);
  const double c_req = required_value(bch, cut).value();
  c.near(expected_profit(bch.with_value(c_req), cut), 0.0, 1e-9, "E_P at C_Req");
  return c.ok();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<bool(Check&)>>> criteria = {
      {"1 resource table", table_reproduction},
      {"2 BitcoinCash case study", case_study_check},
      {"3 pre-mine comparison", premine_check},
      {"4 enumeration oracle", enumeration_check},
      {"5 Monte Carlo concordance", monte_carlo_check},
      {"6 distribution integrity", distribution_check},
      {"7 formula cross-checks", cross_formula_check},
      {"8 profitability limits", limits_check},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = fn(c);
    } catch (const std::exception& e) {
      std::printf("    exception: %s\n", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  criterion %s  (%.2f s)\n", ok ? "PASS" : "FAIL", name.c_str(), secs);
    failed += ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
