#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dsattack/attack_spec.hpp"
#include "dsattack/economics.hpp"
#include "dsattack/montecarlo.hpp"
#include "dsattack/state_series.hpp"

namespace dsattack {

/// Network economics supplied by the user. Stored on disk as a flat JSON
/// object with exactly these keys (unknown keys are rejected):
///
///   name                   string, required
///   beta_per_block         number > 0, required
///   block_time_seconds     number > 0, required (1 / lambda_H)
///   rental_price_per_hash  number > 0, optional
///   network_hashrate       number > 0 (hashes/second), optional
///   gamma_override         number > 0, optional
///
/// Either gamma_override or both market fields must be present.
struct NetworkConfig {
  std::string name;
  double beta_per_block = 0.0;
  double block_time_seconds = 0.0;
  std::optional<double> rental_price_per_hash;
  std::optional<double> network_hashrate;
  std::optional<double> gamma_override;

  double lambda_h() const { return 1.0 / block_time_seconds; }
  /// gamma_override when present, otherwise gamma_from_market.
  double gamma() const;
};

NetworkConfig parse_network_config(std::string_view json_text);
NetworkConfig load_network_config(const std::filesystem::path& path);
nlohmann::json to_json(const NetworkConfig& cfg);

/// Cost of one block of mining effort: price per hash * hashes per second *
/// seconds per block. A zero price is accepted with a warning on std::clog.
double gamma_from_market(const NetworkConfig& cfg);

/// One (N_BC, p_A) cell with lambda_H and gamma divided out.
struct ResourceRow {
  unsigned n_bc;
  double p_a;
  double p_as;
  double e_tas_scaled;    // multiples of 1 / lambda_H
  double e_x_scaled;      // multiples of gamma
  double c_req_mu_coeff;  // C_Req / gamma = coeff * (1 - mu) + const
  double c_req_const;

  double c_req_scaled(double mu) const { return c_req_mu_coeff * (1.0 - mu) + c_req_const; }
};

struct ResourceTable {
  double cut_multiplier;
  std::vector<ResourceRow> rows;  // N_BC-major, in input order

  /// Throws DomainError when no such cell exists.
  const ResourceRow& at(unsigned n_bc, double p_a) const;
};

/// Computes every (N_BC, p_A) cell with t_cut = c * N_BC / lambda_H. Cells are
/// independent and evaluated concurrently; row order does not depend on it.
ResourceTable build_resource_table(std::span<const unsigned> n_bc_list,
                                   std::span<const double> p_a_list, double cut_multiplier,
                                   const SeriesOptions& options = {});

struct CaseStudyReport {
  std::string network;
  double p_a;
  unsigned n_bc;
  CutTime cut;
  double gamma;
  double beta;
  double lambda_h;
  double p_as;
  std::optional<double> e_tas_seconds;  // empty when undefined (P_AS = 0 or divergent)
  double e_x;
  RequiredValue c_req;
  double runtime_per_attempt;  // seconds

  double mu() const { return beta / gamma; }
  bool always_profitable() const { return c_req.always_profitable(); }
};

CaseStudyReport case_study(const NetworkConfig& cfg, double p_a, unsigned n_bc, CutTime cut,
                           const SeriesOptions& options = {});

struct PremineComparison {
  double p_dsa;
  double p_premine;
  double ratio;  // p_dsa / p_premine
};

PremineComparison premine_comparison(double p_a, unsigned n_bc);

/// Grid of (t, density, Pr(T_DSA < t)) for plotting.
struct DensitySample {
  double t_seconds;
  double density;
  double cdf;
};

/// `points` equally spaced times in (0, t_max].
std::vector<DensitySample> sample_time_distribution(const AttackSpec& spec, double t_max,
                                                    std::size_t points,
                                                    const SeriesOptions& options = {});

enum class OutputFormat { kText, kCsv, kJson };

/// "text", "csv" or "json"; anything else is a DomainError.
OutputFormat parse_output_format(std::string_view name);

/// printf %.<digits>g rendering used by the text tables.
std::string format_significant(double value, int digits = 4);
/// Shortest representation that round-trips (CSV and JSON cells).
std::string format_full(double value);

nlohmann::json to_json(const ResourceTable& table);
nlohmann::json to_json(const CaseStudyReport& report);
nlohmann::json to_json(const PremineComparison& cmp);
nlohmann::json to_json(const SimulationSummary& summary);

void write_resource_table(std::ostream& out, const ResourceTable& table, OutputFormat format);
void write_density_csv(std::ostream& out, std::span<const DensitySample> samples);

}  // namespace dsattack
