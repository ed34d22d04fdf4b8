// Command-line front end: one subcommand per analytic or simulation query.
// Exit codes: 0 success, 2 invalid input, 3 series did not converge.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dsattack/economics.hpp"
#include "dsattack/errors.hpp"
#include "dsattack/montecarlo.hpp"
#include "dsattack/reporting.hpp"
#include "dsattack/stochastics.hpp"
#include "dsattack/timing.hpp"

namespace {

using dsattack::AttackSpec;
using dsattack::CutTime;
using dsattack::OutputFormat;
using Json = nlohmann::ordered_json;

constexpr int kExitInput = 2;
constexpr int kExitConvergence = 3;
constexpr double kDefaultBlockTime = 600.0;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::optional<double> pa;
  std::optional<unsigned> nbc;
  std::vector<double> pa_list{0.35, 0.4};
  std::vector<unsigned> nbc_list{1, 3, 5, 7, 9};
  std::optional<std::string> cut_time;
  std::optional<double> cut_mult;
  std::optional<double> lambda_h;
  std::optional<double> block_time;
  std::optional<double> gamma;
  std::optional<double> beta;
  std::optional<double> value;
  double tol = 1e-12;
  std::size_t max_terms = dsattack::kDefaultSeriesCap;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::optional<std::uint64_t> event_cap;
  std::optional<std::string> trace;
  std::optional<std::string> config;
  std::string format = "text";
  std::optional<std::string> out;
  std::optional<double> t_max;
  std::size_t points = 200;
  std::optional<double> price;
  std::optional<double> hashrate;
};

// ---- flag registration ------------------------------------------------------

void add_attack_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--pa", f.pa, "Attacker share of computing power p_A in (0, 1)")->required();
  cmd->add_option("--nbc", f.nbc, "Block confirmation number N_BC >= 1")->required();
}

void add_rate_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--lambda-h", f.lambda_h, "Honest block rate (blocks/second)");
  cmd->add_option("--block-time", f.block_time, "Honest block interval 1/lambda_H (seconds)");
}

void add_cut_flags(CLI::App* cmd, Flags& f) {
  auto* t = cmd->add_option("--cut-time", f.cut_time, "Cut time in seconds, or 'inf'");
  auto* m = cmd->add_option("--cut-mult", f.cut_mult, "Cut time as c * N_BC / lambda_H");
  t->excludes(m);
}

void add_series_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--tol", f.tol, "Relative series tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-terms", f.max_terms, "Series term cap")->check(CLI::PositiveNumber);
}

void add_output_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--format", f.format, "Output format")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  cmd->add_option("--out", f.out, "Write output to this file instead of stdout");
}

void add_money_flags(CLI::App* cmd, Flags& f, bool need_value) {
  cmd->add_option("--gamma", f.gamma, "Cost per block of mining effort")->required();
  cmd->add_option("--beta", f.beta, "Reward per mined block")->required();
  auto* v = cmd->add_option("--value", f.value, "Target transaction value C");
  if (need_value) v->required();
}

// ---- resolution --------------------------------------------------------------

double resolve_lambda_h(const Flags& f, std::optional<double> config_block_time = std::nullopt) {
  if (f.lambda_h && f.block_time) {
    throw InputError("give either --lambda-h or --block-time, not both");
  }
  if (f.lambda_h) return *f.lambda_h;
  if (f.block_time) {
    if (!(*f.block_time > 0.0)) throw InputError("--block-time must be positive");
    return 1.0 / *f.block_time;
  }
  return 1.0 / config_block_time.value_or(kDefaultBlockTime);
}

CutTime resolve_cut(const Flags& f, unsigned nbc, double lambda_h) {
  if (f.cut_time) {
    const std::string& s = *f.cut_time;
    if (s == "inf" || s == "infinity" || s == "INF") return CutTime::infinite();
    std::size_t used = 0;
    double seconds = 0.0;
    try {
      seconds = std::stod(s, &used);
    } catch (const std::exception&) {
      throw InputError("--cut-time must be a number of seconds or 'inf'");
    }
    if (used != s.size()) throw InputError("--cut-time must be a number of seconds or 'inf'");
    return CutTime::after(seconds);
  }
  if (f.cut_mult) return CutTime::confirmation_multiple(*f.cut_mult, nbc, lambda_h);
  return CutTime::infinite();
}

AttackSpec resolve_spec(const Flags& f, std::optional<double> config_block_time = std::nullopt) {
  const double lambda_h = resolve_lambda_h(f, config_block_time);
  return AttackSpec(*f.pa, *f.nbc, resolve_cut(f, *f.nbc, lambda_h), lambda_h);
}

dsattack::SeriesOptions series_options(const Flags& f) { return {f.tol, f.max_terms}; }

Json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json echo_spec(const AttackSpec& spec) {
  Json j;
  j["p_a"] = spec.p_a();
  j["n_bc"] = spec.n_bc();
  j["lambda_h"] = spec.lambda_h();
  j["t_cut_seconds"] = spec.cut().is_infinite() ? Json("inf") : Json(spec.cut().seconds());
  return j;
}

// ---- rendering ---------------------------------------------------------------

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, Json>>& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      flatten(*it, key, out);
    } else {
      out.emplace_back(key, *it);
    }
  }
}

std::string scalar_text(const Json& v, bool full) {
  if (v.is_number_float()) {
    const double d = v.get<double>();
    return full ? dsattack::format_full(d) : dsattack::format_significant(d);
  }
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return full ? "" : "n/a";
  return v.dump();
}

// Document layout: {"command": ..., "inputs": {...}, "result": {...}}.
void render(std::ostream& out, const Json& doc, OutputFormat format) {
  switch (format) {
    case OutputFormat::kJson:
      out << doc.dump(2) << '\n';
      return;
    case OutputFormat::kCsv: {
      std::vector<std::pair<std::string, Json>> cells;
      flatten(doc, "", cells);
      for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << cells[k].first;
      out << '\n';
      for (std::size_t k = 0; k < cells.size(); ++k) {
        out << (k ? "," : "") << scalar_text(cells[k].second, true);
      }
      out << '\n';
      return;
    }
    case OutputFormat::kText: {
      std::vector<std::pair<std::string, Json>> cells;
      flatten(doc, "", cells);
      std::size_t width = 0;
      for (const auto& [k, v] : cells) width = std::max(width, k.size());
      for (const auto& [k, v] : cells) {
        out << k << std::string(width - k.size() + 2, ' ') << scalar_text(v, false) << '\n';
      }
      return;
    }
  }
}

// Echo of inputs as '# key=value' lines ahead of multi-row CSV bodies.
void csv_preamble(std::ostream& out, const Json& inputs) {
  std::vector<std::pair<std::string, Json>> cells;
  flatten(inputs, "", cells);
  for (const auto& [k, v] : cells) out << "# " << k << '=' << scalar_text(v, true) << '\n';
}

class Output {
 public:
  explicit Output(const Flags& f) {
    if (f.out) {
      file_.open(*f.out);
      if (!file_) throw InputError("cannot open output file '" + *f.out + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

Json make_doc(const std::string& command, Json inputs, Json result) {
  Json doc;
  doc["command"] = command;
  doc["inputs"] = std::move(inputs);
  doc["result"] = std::move(result);
  return doc;
}

// ---- subcommands -------------------------------------------------------------

void run_prob(const Flags& f) {
  const AttackSpec spec = resolve_spec(f);
  Json r;
  r["p_dsa"] = dsattack::p_dsa(spec);
  r["p_as"] = dsattack::attack_success_prob(spec, series_options(f));
  Output out(f);
  render(out.stream(), make_doc("prob", echo_spec(spec), r), dsattack::parse_output_format(f.format));
}

void run_pdf(const Flags& f) {
  const AttackSpec spec = resolve_spec(f);
  const double t_max = f.t_max.value_or(10.0 * spec.n_bc() / spec.lambda_h());
  const auto samples = dsattack::sample_time_distribution(spec, t_max, f.points, series_options(f));
  Json inputs = echo_spec(spec);
  inputs["t_max"] = t_max;
  inputs["points"] = f.points;
  inputs["defect_mass"] = 1.0 - dsattack::p_dsa(spec);
  Output out(f);
  const OutputFormat format = dsattack::parse_output_format(f.format);
  if (format == OutputFormat::kCsv) {
    csv_preamble(out.stream(), inputs);
    dsattack::write_density_csv(out.stream(), samples);
    return;
  }
  Json rows = Json::array();
  for (const auto& s : samples) {
    rows.push_back(Json{{"t_seconds", s.t_seconds}, {"density", s.density}, {"cdf", s.cdf}});
  }
  if (format == OutputFormat::kJson) {
    Json doc = make_doc("pdf", inputs, Json::object());
    doc["result"]["samples"] = rows;
    out.stream() << doc.dump(2) << '\n';
    return;
  }
  render(out.stream(), make_doc("pdf", inputs, Json::object()), format);
  out.stream() << "t_seconds density cdf\n";
  for (const auto& s : samples) {
    out.stream() << dsattack::format_significant(s.t_seconds) << ' '
                 << dsattack::format_significant(s.density) << ' '
                 << dsattack::format_significant(s.cdf) << '\n';
  }
}

void run_expect_time(const Flags& f) {
  const AttackSpec spec = resolve_spec(f);
  const auto timing = dsattack::attack_timing(spec, series_options(f));
  Json r;
  r["p_as"] = timing.p_as;
  r["e_tas_seconds"] = timing.e_tas;
  r["e_tas_scaled"] = timing.e_tas * spec.lambda_h();
  Output out(f);
  render(out.stream(), make_doc("expect-time", echo_spec(spec), r),
         dsattack::parse_output_format(f.format));
}

Json money_inputs(const Flags& f, const AttackSpec& spec, const dsattack::EconomicModel& model) {
  Json inputs = echo_spec(spec);
  inputs["gamma"] = model.gamma();
  inputs["beta"] = model.beta();
  inputs["mu"] = model.mu();
  if (f.value) inputs["value"] = *f.value;
  return inputs;
}

Json required_json(const dsattack::RequiredValue& c) {
  return c.is_infinite() ? Json("inf") : Json(c.value());
}

void run_profit(const Flags& f) {
  const AttackSpec spec = resolve_spec(f);
  const dsattack::EconomicModel model(*f.gamma, *f.beta, *f.value);
  const auto opts = series_options(f);
  Json r;
  r["p_as"] = dsattack::attack_success_prob(spec, opts);
  r["e_x"] = number_or_inf(dsattack::expected_opex(model, spec, opts));
  const double ep = dsattack::expected_profit(model, spec, opts);
  r["e_p"] = number_or_inf(ep);
  r["c_req"] = required_json(dsattack::required_value(model, spec, opts));
  r["profitable"] = ep > 0.0;
  Output out(f);
  render(out.stream(), make_doc("profit", money_inputs(f, spec, model), r),
         dsattack::parse_output_format(f.format));
}

void run_creq(const Flags& f) {
  const AttackSpec spec = resolve_spec(f);
  const dsattack::EconomicModel model(*f.gamma, *f.beta, f.value.value_or(0.0));
  const auto c = dsattack::required_value(model, spec, series_options(f));
  Json r;
  r["c_req"] = required_json(c);
  r["always_profitable"] = c.always_profitable();
  Output out(f);
  render(out.stream(), make_doc("creq", money_inputs(f, spec, model), r),
         dsattack::parse_output_format(f.format));
}

void run_table(const Flags& f) {
  const double c = f.cut_mult.value_or(4.0);
  const auto table = dsattack::build_resource_table(f.nbc_list, f.pa_list, c, series_options(f));
  Json inputs;
  inputs["cut_multiplier"] = c;
  inputs["n_bc"] = f.nbc_list;
  inputs["p_a"] = f.pa_list;
  Output out(f);
  const OutputFormat format = dsattack::parse_output_format(f.format);
  switch (format) {
    case OutputFormat::kJson: {
      Json doc;
      doc["command"] = "table";
      doc["inputs"] = inputs;
      doc["result"] = Json::parse(dsattack::to_json(table).dump());
      out.stream() << doc.dump(2) << '\n';
      return;
    }
    case OutputFormat::kCsv:
      csv_preamble(out.stream(), Json{{"cut_multiplier", c}});
      break;
    case OutputFormat::kText:
      out.stream() << "resource table, t_cut = " << dsattack::format_significant(c)
                   << " * N_BC / lambda_H\n";
      break;
  }
  dsattack::write_resource_table(out.stream(), table, format);
}

void run_case_study(const Flags& f) {
  const auto cfg = dsattack::load_network_config(*f.config);
  const AttackSpec spec = resolve_spec(f, cfg.block_time_seconds);
  const auto report = dsattack::case_study(cfg, spec.p_a(), spec.n_bc(), spec.cut(), series_options(f));
  Json inputs = echo_spec(spec);
  inputs["config"] = Json::parse(dsattack::to_json(cfg).dump());
  Json r = Json::parse(dsattack::to_json(report).dump());
  const double hours = report.runtime_per_attempt / 3600.0;
  if (std::isfinite(hours)) {
    const long total_minutes = std::lround(report.runtime_per_attempt / 60.0);
    r["runtime_per_attempt_hm"] =
        std::to_string(total_minutes / 60) + "h " + std::to_string(total_minutes % 60) + "m";
  }
  Output out(f);
  render(out.stream(), make_doc("case-study", inputs, r), dsattack::parse_output_format(f.format));
}

void run_compare_premine(const Flags& f) {
  const auto cmp = dsattack::premine_comparison(*f.pa, *f.nbc);
  Json inputs;
  inputs["p_a"] = *f.pa;
  inputs["n_bc"] = *f.nbc;
  Json r;
  r["p_dsa"] = cmp.p_dsa;
  r["p_premine"] = cmp.p_premine;
  r["ratio"] = cmp.ratio;
  Output out(f);
  render(out.stream(), make_doc("compare-premine", inputs, r),
         dsattack::parse_output_format(f.format));
}

void run_simulate(const Flags& f) {
  const AttackSpec spec = resolve_spec(f);
  dsattack::SimulationOptions sim;
  sim.event_cap = f.event_cap;
  sim.threads = f.threads;
  std::ofstream trace_file;
  std::ostream* trace = nullptr;
  if (f.trace) {
    trace_file.open(*f.trace);
    if (!trace_file) throw InputError("cannot open trace file '" + *f.trace + "'");
    trace_file.precision(17);
    trace = &trace_file;
  }
  const bool with_money = f.gamma || f.beta || f.value;
  if (with_money && !(f.gamma && f.beta && f.value)) {
    throw InputError("profit simulation needs --gamma, --beta and --value together");
  }
  Json inputs = echo_spec(spec);
  inputs["trials"] = f.trials;
  inputs["seed"] = f.seed;
  dsattack::SimulationSummary s;
  if (with_money) {
    const dsattack::EconomicModel model(*f.gamma, *f.beta, *f.value);
    inputs["gamma"] = model.gamma();
    inputs["beta"] = model.beta();
    inputs["value"] = model.value();
    s = dsattack::estimate_profit(model, spec, f.trials, f.seed, sim, trace);
  } else {
    s = dsattack::estimate(spec, f.trials, f.seed, sim, trace);
  }
  Json r = Json::parse(dsattack::to_json(s).dump());
  Json ordered;
  for (const char* key : {"trials", "successes", "truncated", "p_as_hat", "se_p_as", "mean_tas",
                          "var_tas", "se_tas", "mean_profit", "se_profit", "seed"}) {
    if (r.contains(key)) ordered[key] = r[key];
  }
  try {
    const double analytic = dsattack::attack_success_prob(spec, series_options(f));
    ordered["analytic_p_as"] = analytic;
    if (s.se_p_as > 0.0) ordered["z_p_as"] = (s.p_as_hat - analytic) / s.se_p_as;
  } catch (const dsattack::ConvergenceError&) {
  }
  Output out(f);
  render(out.stream(), make_doc("simulate", inputs, ordered),
         dsattack::parse_output_format(f.format));
}

void run_market_gamma(const Flags& f) {
  dsattack::NetworkConfig cfg;
  if (f.config) {
    cfg = dsattack::load_network_config(*f.config);
  } else {
    if (!f.price || !f.hashrate) {
      throw InputError("market-gamma needs --config or both --price and --hashrate");
    }
    cfg.name = "command-line";
    cfg.beta_per_block = 1.0;
    cfg.block_time_seconds = 1.0 / resolve_lambda_h(f);
    cfg.rental_price_per_hash = *f.price;
    cfg.network_hashrate = *f.hashrate;
  }
  if (f.price) cfg.rental_price_per_hash = *f.price;
  if (f.hashrate) cfg.network_hashrate = *f.hashrate;
  Json inputs;
  inputs["rental_price_per_hash"] = cfg.rental_price_per_hash ? Json(*cfg.rental_price_per_hash) : Json();
  inputs["network_hashrate"] = cfg.network_hashrate ? Json(*cfg.network_hashrate) : Json();
  inputs["block_time_seconds"] = cfg.block_time_seconds;
  Json r;
  r["gamma"] = dsattack::gamma_from_market(cfg);
  Output out(f);
  render(out.stream(), make_doc("market-gamma", inputs, r),
         dsattack::parse_output_format(f.format));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Double-spending attack probability, timing and profitability calculator"};
  app.require_subcommand(1);
  Flags f;

  auto* prob = app.add_subcommand("prob", "Attack success probability P_AS (and P_DSA)");
  add_attack_flags(prob, f);
  add_cut_flags(prob, f);
  add_rate_flags(prob, f);
  add_series_flags(prob, f);
  add_output_flags(prob, f);

  auto* pdf = app.add_subcommand("pdf", "Sample the density and CDF of the attack-achieving time");
  add_attack_flags(pdf, f);
  add_rate_flags(pdf, f);
  add_series_flags(pdf, f);
  add_output_flags(pdf, f);
  pdf->add_option("--t-max", f.t_max, "Largest sampled time (seconds)");
  pdf->add_option("--points", f.points, "Number of sample points")->check(CLI::PositiveNumber);

  auto* expect = app.add_subcommand("expect-time", "Expected attack success time E_TAS");
  add_attack_flags(expect, f);
  add_cut_flags(expect, f);
  add_rate_flags(expect, f);
  add_series_flags(expect, f);
  add_output_flags(expect, f);

  auto* profit = app.add_subcommand("profit", "Expected profit of one attack attempt");
  add_attack_flags(profit, f);
  add_cut_flags(profit, f);
  add_rate_flags(profit, f);
  add_money_flags(profit, f, true);
  add_series_flags(profit, f);
  add_output_flags(profit, f);

  auto* creq = app.add_subcommand("creq", "Required target-transaction value C_Req");
  add_attack_flags(creq, f);
  add_cut_flags(creq, f);
  add_rate_flags(creq, f);
  add_money_flags(creq, f, false);
  add_series_flags(creq, f);
  add_output_flags(creq, f);

  auto* table = app.add_subcommand("table", "Resource table scaled by lambda_H and gamma");
  table->add_option("--c,--cut-mult", f.cut_mult, "Cut-time multiplier c (default 4)");
  table->add_option("--nbc", f.nbc_list, "Comma-separated N_BC values")->delimiter(',');
  table->add_option("--pa", f.pa_list, "Comma-separated p_A values")->delimiter(',');
  add_series_flags(table, f);
  add_output_flags(table, f);

  auto* cs = app.add_subcommand("case-study", "Attack resources for a configured network");
  cs->add_option("--config", f.config, "Network config (JSON)")->required();
  add_attack_flags(cs, f);
  add_cut_flags(cs, f);
  add_rate_flags(cs, f);
  add_series_flags(cs, f);
  add_output_flags(cs, f);

  auto* premine = app.add_subcommand("compare-premine", "P_DSA versus the pre-mining condition");
  premine->add_option("--pa", f.pa, "Attacker share p_A in (0, 1)")->required();
  premine->add_option("--nbc", f.nbc, "Block confirmation number")->required();
  add_output_flags(premine, f);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate of P_AS and E_TAS");
  add_attack_flags(sim, f);
  add_cut_flags(sim, f);
  add_rate_flags(sim, f);
  add_money_flags(sim, f, false);
  sim->get_option("--gamma")->required(false);
  sim->get_option("--beta")->required(false);
  sim->add_option("--trials", f.trials, "Number of trials")->check(CLI::PositiveNumber);
  sim->add_option("--seed", f.seed, "Master seed");
  sim->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
  sim->add_option("--event-cap", f.event_cap, "Maximum block events per trial");
  sim->add_option("--trace", f.trace, "Write per-trial CSV trace to this file");
  add_series_flags(sim, f);
  add_output_flags(sim, f);

  auto* market = app.add_subcommand("market-gamma", "Per-block mining cost from rental prices");
  market->add_option("--config", f.config, "Network config (JSON)");
  market->add_option("--price", f.price, "Rental price per hash");
  market->add_option("--hashrate", f.hashrate, "Network hashrate (hashes/second)");
  add_rate_flags(market, f);
  add_output_flags(market, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (*prob) run_prob(f);
    else if (*pdf) run_pdf(f);
    else if (*expect) run_expect_time(f);
    else if (*profit) run_profit(f);
    else if (*creq) run_creq(f);
    else if (*table) run_table(f);
    else if (*cs) run_case_study(f);
    else if (*premine) run_compare_premine(f);
    else if (*sim) run_simulate(f);
    else if (*market) run_market_gamma(f);
  } catch (const dsattack::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << " (partial value " << e.partial_value() << " after "
              << e.terms() << " terms)\n";
    return kExitConvergence;
  } catch (const dsattack::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
