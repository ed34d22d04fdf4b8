#include "dsattack/reporting.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <set>
#include <sstream>

#include "dsattack/errors.hpp"
#include "dsattack/stochastics.hpp"
#include "dsattack/timing.hpp"

namespace dsattack {
namespace {

const std::set<std::string, std::less<>> kConfigKeys = {
    "name", "beta_per_block", "block_time_seconds", "rental_price_per_hash", "network_hashrate",
    "gamma_override"};

double positive_number(const nlohmann::json& obj, const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  const double d = v.get<double>();
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw ConfigError("config key '" + key + "' must be strictly positive");
  }
  return d;
}

std::optional<double> optional_positive(const nlohmann::json& obj, const std::string& key) {
  if (!obj.contains(key)) return std::nullopt;
  return positive_number(obj, key);
}

ResourceRow compute_row(unsigned n_bc, double p_a, double c, const SeriesOptions& options) {
  // lambda_H = 1 and gamma = 1, so every output is already in scaled units.
  const AttackSpec spec(p_a, n_bc, CutTime::confirmation_multiple(c, n_bc, 1.0), 1.0);
  const AttackTiming timing = attack_timing(spec, options);
  const double lambda_a = spec.lambda_a();
  const double t_cut = spec.cut().seconds();
  ResourceRow row{};
  row.n_bc = n_bc;
  row.p_a = p_a;
  row.p_as = timing.p_as;
  row.e_tas_scaled = timing.e_tas;
  row.e_x_scaled = timing.p_as * lambda_a * timing.e_tas + (1.0 - timing.p_as) * lambda_a * t_cut;
  row.c_req_mu_coeff = lambda_a * timing.e_tas;
  row.c_req_const = (1.0 - timing.p_as) / timing.p_as * lambda_a * t_cut;
  return row;
}

}  // namespace

double NetworkConfig::gamma() const {
  if (gamma_override) return *gamma_override;
  return gamma_from_market(*this);
}

NetworkConfig parse_network_config(std::string_view json_text) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw ConfigError("config must be a flat JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!kConfigKeys.contains(key)) throw ConfigError("unknown config key '" + key + "'");
    if (value.is_object() || value.is_array()) {
      throw ConfigError("config key '" + key + "' must be a scalar");
    }
  }
  for (const char* required : {"name", "beta_per_block", "block_time_seconds"}) {
    if (!obj.contains(required)) {
      throw ConfigError(std::string("missing required config key '") + required + "'");
    }
  }
  NetworkConfig cfg;
  if (!obj["name"].is_string()) throw ConfigError("config key 'name' must be a string");
  cfg.name = obj["name"].get<std::string>();
  cfg.beta_per_block = positive_number(obj, "beta_per_block");
  cfg.block_time_seconds = positive_number(obj, "block_time_seconds");
  cfg.rental_price_per_hash = optional_positive(obj, "rental_price_per_hash");
  cfg.network_hashrate = optional_positive(obj, "network_hashrate");
  cfg.gamma_override = optional_positive(obj, "gamma_override");
  if (!cfg.gamma_override && !(cfg.rental_price_per_hash && cfg.network_hashrate)) {
    throw ConfigError(
        "config needs gamma_override or both rental_price_per_hash and network_hashrate");
  }
  return cfg;
}

NetworkConfig load_network_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network_config(buf.str());
}

nlohmann::json to_json(const NetworkConfig& cfg) {
  nlohmann::json j{{"name", cfg.name},
                   {"beta_per_block", cfg.beta_per_block},
                   {"block_time_seconds", cfg.block_time_seconds}};
  if (cfg.rental_price_per_hash) j["rental_price_per_hash"] = *cfg.rental_price_per_hash;
  if (cfg.network_hashrate) j["network_hashrate"] = *cfg.network_hashrate;
  if (cfg.gamma_override) j["gamma_override"] = *cfg.gamma_override;
  return j;
}

double gamma_from_market(const NetworkConfig& cfg) {
  if (!cfg.rental_price_per_hash || !cfg.network_hashrate) {
    throw ConfigError("market-derived gamma needs rental_price_per_hash and network_hashrate");
  }
  const double price = *cfg.rental_price_per_hash;
  const double rate = *cfg.network_hashrate;
  if (price < 0.0 || rate < 0.0 || !(cfg.block_time_seconds > 0.0)) {
    throw ConfigError("market figures must be nonnegative and block time positive");
  }
  if (price == 0.0 || rate == 0.0) {
    std::clog << "warning: zero rental price or hashrate gives gamma = 0\n";
  }
  return price * rate * cfg.block_time_seconds;
}

const ResourceRow& ResourceTable::at(unsigned n_bc, double p_a) const {
  for (const auto& r : rows) {
    if (r.n_bc == n_bc && r.p_a == p_a) return r;
  }
  throw DomainError("no resource table cell for the requested (N_BC, p_A)");
}

ResourceTable build_resource_table(std::span<const unsigned> n_bc_list,
                                   std::span<const double> p_a_list, double cut_multiplier,
                                   const SeriesOptions& options) {
  if (!(cut_multiplier > 0.0)) throw DomainError("cut-time multiplier must be positive");
  std::vector<std::future<ResourceRow>> cells;
  cells.reserve(n_bc_list.size() * p_a_list.size());
  for (unsigned n : n_bc_list) {
    for (double p : p_a_list) {
      cells.push_back(std::async(std::launch::async, compute_row, n, p, cut_multiplier, options));
    }
  }
  ResourceTable table{cut_multiplier, {}};
  table.rows.reserve(cells.size());
  for (auto& f : cells) table.rows.push_back(f.get());
  return table;
}

CaseStudyReport case_study(const NetworkConfig& cfg, double p_a, unsigned n_bc, CutTime cut,
                           const SeriesOptions& options) {
  const double gamma = cfg.gamma();
  const AttackSpec spec(p_a, n_bc, cut, cfg.lambda_h());
  const EconomicModel model(gamma, cfg.beta_per_block, 0.0);
  CaseStudyReport r{cfg.name, p_a,  n_bc,
                    cut,      gamma, cfg.beta_per_block,
                    cfg.lambda_h(), 0.0, std::nullopt,
                    0.0,      RequiredValue::infinite(), 0.0};
  r.p_as = attack_success_prob(spec, options);
  try {
    r.e_tas_seconds = expected_success_time(spec, options);
  } catch (const UndefinedError&) {
  }
  r.e_x = expected_opex(model, spec, options);
  r.c_req = required_value(model, spec, options);
  r.runtime_per_attempt =
      repeated_attack_projection(model, spec, 1, options).expected_runtime_per_attempt;
  return r;
}

PremineComparison premine_comparison(double p_a, unsigned n_bc) {
  const AttackSpec spec(p_a, n_bc);
  const double pd = p_dsa(spec);
  const double pp = premine_success_prob(spec);
  return {pd, pp, pd / pp};
}

std::vector<DensitySample> sample_time_distribution(const AttackSpec& spec, double t_max,
                                                    std::size_t points,
                                                    const SeriesOptions& options) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw DomainError("t_max must be positive");
  if (points == 0) throw DomainError("need at least one sample point");
  const DefectiveTimeDistribution dist(spec, options);
  std::vector<DensitySample> out;
  out.reserve(points);
  for (std::size_t k = 1; k <= points; ++k) {
    const double t = t_max * static_cast<double>(k) / static_cast<double>(points);
    out.push_back({t, dist.density(t), dist.cdf(t)});
  }
  return out;
}

OutputFormat parse_output_format(std::string_view name) {
  if (name == "text") return OutputFormat::kText;
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw DomainError("unknown output format '" + std::string(name) + "' (text, csv, json)");
}

std::string format_significant(double value, int digits) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

std::string format_full(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  for (int digits = 15; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

nlohmann::json to_json(const ResourceTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"n_bc", r.n_bc},
                    {"p_a", r.p_a},
                    {"p_as", r.p_as},
                    {"e_tas_scaled", r.e_tas_scaled},
                    {"e_x_scaled", r.e_x_scaled},
                    {"c_req_mu_coeff", r.c_req_mu_coeff},
                    {"c_req_const", r.c_req_const}});
  }
  return {{"cut_multiplier", table.cut_multiplier}, {"rows", rows}};
}

nlohmann::json to_json(const CaseStudyReport& r) {
  nlohmann::json j{{"network", r.network},
                   {"p_a", r.p_a},
                   {"n_bc", r.n_bc},
                   {"gamma", r.gamma},
                   {"beta", r.beta},
                   {"mu", r.mu()},
                   {"lambda_h", r.lambda_h},
                   {"p_as", r.p_as},
                   {"always_profitable", r.always_profitable()}};
  j["t_cut_seconds"] = r.cut.is_infinite() ? nlohmann::json("inf") : nlohmann::json(r.cut.seconds());
  j["e_tas_seconds"] = r.e_tas_seconds ? nlohmann::json(*r.e_tas_seconds) : nlohmann::json();
  j["e_x"] = std::isinf(r.e_x) ? nlohmann::json("inf") : nlohmann::json(r.e_x);
  j["c_req"] = r.c_req.is_infinite() ? nlohmann::json("inf") : nlohmann::json(r.c_req.value());
  j["runtime_per_attempt_seconds"] =
      std::isinf(r.runtime_per_attempt) ? nlohmann::json("inf") : nlohmann::json(r.runtime_per_attempt);
  return j;
}

nlohmann::json to_json(const PremineComparison& cmp) {
  return {{"p_dsa", cmp.p_dsa}, {"p_premine", cmp.p_premine}, {"ratio", cmp.ratio}};
}

nlohmann::json to_json(const SimulationSummary& s) {
  nlohmann::json j{{"trials", s.trials},     {"successes", s.successes}, {"truncated", s.truncated},
                   {"p_as_hat", s.p_as_hat}, {"se_p_as", s.se_p_as},     {"mean_tas", s.mean_tas},
                   {"var_tas", s.var_tas},   {"se_tas", s.se_tas},       {"seed", s.seed}};
  if (s.mean_profit) j["mean_profit"] = *s.mean_profit;
  if (s.se_profit) j["se_profit"] = *s.se_profit;
  return j;
}

void write_resource_table(std::ostream& out, const ResourceTable& table, OutputFormat format) {
  switch (format) {
    case OutputFormat::kJson:
      out << to_json(table).dump(2) << '\n';
      return;
    case OutputFormat::kCsv:
      out << "n_bc,p_a,p_as,e_tas_scaled,e_x_scaled,c_req_mu_coeff,c_req_const\n";
      for (const auto& r : table.rows) {
        out << r.n_bc << ',' << format_full(r.p_a) << ',' << format_full(r.p_as) << ','
            << format_full(r.e_tas_scaled) << ',' << format_full(r.e_x_scaled) << ','
            << format_full(r.c_req_mu_coeff) << ',' << format_full(r.c_req_const) << '\n';
      }
      return;
    case OutputFormat::kText: {
      char line[160];
      std::snprintf(line, sizeof line, "%5s %6s %8s %14s %12s  %s\n", "N_BC", "p_A", "P_AS",
                    "E_TAS*lam_H", "E_X/gamma", "C_Req/gamma");
      out << line;
      for (const auto& r : table.rows) {
        const std::string creq = format_significant(r.c_req_mu_coeff) + "*(1-mu) + " +
                                 format_significant(r.c_req_const);
        std::snprintf(line, sizeof line, "%5u %6s %8s %14s %12s  %s\n", r.n_bc,
                      format_significant(r.p_a).c_str(), format_significant(r.p_as).c_str(),
                      format_significant(r.e_tas_scaled).c_str(),
                      format_significant(r.e_x_scaled).c_str(), creq.c_str());
        out << line;
      }
      return;
    }
  }
}

void write_density_csv(std::ostream& out, std::span<const DensitySample> samples) {
  out << "t_seconds,density,cdf\n";
  for (const auto& s : samples) {
    out << format_full(s.t_seconds) << ',' << format_full(s.density) << ',' << format_full(s.cdf)
        << '\n';
  }
}

}  // namespace dsattack
