#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace eitbec::cli {

// Per-row status: "OK" or "FAIL:<reason>". Failed rows keep zeroed outputs;
// the run continues and the process exit code reports the failure.

struct RateRow {
  double y_k = 0.0;
  double t_over_tc = 0.0;
  double temperature_k = 0.0;
  double beliaev = 0.0;
  double landau = 0.0;
  double total = 0.0;
  double tau_s = 0.0;
  double quad_error = 0.0;
  std::string status = "OK";
};

/// One row per (T, y), T-major, y-minor, evaluated on `threads` workers with
/// a deterministic, order-independent assembly.
std::vector<RateRow> scan_rates(const CondensateParams& params,
                                const std::vector<double>& t_over_tc,
                                const std::vector<double>& y_grid,
                                const QuadratureSettings& quad, int threads);
void write_rates_csv(std::ostream& os, const std::vector<RateRow>& rows);

struct ZcbRow {
  double y_k = 0.0;
  double z_cb = 0.0;
  double t_over_tc = 0.0;
  double beliaev = 0.0;
  double landau = 0.0;
  double total = 0.0;
  std::string status = "OK";
};

/// Fixed temperature, one curve family per z_CB value, z_CB-major.
std::vector<ZcbRow> scan_zcb(const CondensateParams& params, double t_over_tc,
                             const std::vector<double>& zcb_values,
                             const std::vector<double>& y_grid,
                             const QuadratureSettings& quad, int threads);
void write_zcb_csv(std::ostream& os, const std::vector<ZcbRow>& rows);

struct OptimizeRow {
  double t_over_tc = 0.0;
  double y_star = 0.0;
  double gamma_min = 0.0;
  double tau_s_max = 0.0;
  bool interior_minimum = false;
  std::string status = "OK";
};

std::vector<OptimizeRow> scan_optimize(const CondensateParams& params,
                                       const std::vector<double>& t_over_tc,
                                       double y_lo, double y_hi,
                                       const QuadratureSettings& quad, int threads);
void write_optimize_csv(std::ostream& os, const std::vector<OptimizeRow>& rows);
void write_optimize_report(std::ostream& os, const std::vector<OptimizeRow>& rows);

struct ThetaSweepRow {
  double theta = 0.0;
  double time = 0.0;
  double n_sum = 0.0;
};

/// theta-major rows over a uniform [0, pi/2] angle grid.
std::vector<ThetaSweepRow> scan_theta_sweep(const CouplingBlock& block,
                                            int theta_points,
                                            const std::vector<double>& times);
void write_theta_csv(std::ostream& os, const std::vector<ThetaSweepRow>& rows,
                     double photon_number, bool normalized_column);

/// Dark-state decay time series plus the extracted tau_d (written into a
/// footer comment).
struct DecaySeries {
  EvolutionResult evolution;
  std::optional<double> tau_d;
};

DecaySeries run_decay(const CouplingBlock& block, double t_max, int points);
void write_decay_csv(std::ostream& os, const DecaySeries& series);

struct StoreSeries {
  EvolutionResult evolution;
  double recovered_photons = 0.0;
};

StoreSeries run_store(const CouplingBlock& block, const StorageRamp& ramp);
void write_store_csv(std::ostream& os, const StoreSeries& series);

/// True when every row carries "OK".
template <class Row>
bool all_rows_ok(const std::vector<Row>& rows) {
  for (const auto& r : rows) {
    if (r.status != "OK") return false;
  }
  return true;
}

}  // namespace eitbec::cli
