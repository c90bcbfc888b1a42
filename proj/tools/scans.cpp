#include "scans.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <ostream>
#include <thread>

namespace eitbec::cli {

namespace {

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must be
/// written into pre-sized slots so the output is identical for any thread
/// count. Exceptions are not expected to escape fn (rows carry status).
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min<std::size_t>(threads, count);
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

double fraction_to_kelvin(const CondensateParams& params, double frac) {
  if (!params.critical_temp()) {
    throw ConfigError("T/Tc scans require gas.critical_temp_k");
  }
  return frac * *params.critical_temp();
}

}  // namespace

std::vector<RateRow> scan_rates(const CondensateParams& params,
                                const std::vector<double>& t_over_tc,
                                const std::vector<double>& y_grid,
                                const QuadratureSettings& quad, int threads) {
  std::vector<RateRow> rows(t_over_tc.size() * y_grid.size());
  parallel_for(rows.size(), threads, [&](std::size_t idx) {
    const std::size_t ti = idx / y_grid.size();
    const std::size_t yi = idx % y_grid.size();
    RateRow& row = rows[idx];
    row.t_over_tc = t_over_tc[ti];
    row.y_k = y_grid[yi];
    try {
      row.temperature_k = fraction_to_kelvin(params, row.t_over_tc);
      const ReducedPoint pt = reduce(params, row.y_k * params.healing_wavenumber(),
                                     Temperature::kelvin(row.temperature_k));
      const RateBreakdown rb = total_rate(params, pt, quad);
      row.beliaev = rb.beliaev;
      row.landau = rb.landau;
      row.total = rb.total;
      row.quad_error = rb.quadrature_error_estimate;
      const auto tau = storage_time_tau_s(rb);
      row.tau_s = tau ? *tau : 0.0;
      if (!tau) row.status = "FAIL:zero-rate";
    } catch (const std::exception& e) {
      row.status = std::string("FAIL:") + e.what();
    }
  });
  return rows;
}

void write_rates_csv(std::ostream& os, const std::vector<RateRow>& rows) {
  write_csv_schema_line(os, "rates");
  write_csv_row(os, {"y_k", "T_over_Tc", "T_K", "beliaev_per_s", "landau_per_s",
                     "total_per_s", "tau_s_s", "quad_error_per_s", "status"});
  for (const auto& r : rows) {
    write_csv_row(os, {format_number(r.y_k), format_number(r.t_over_tc),
                       format_number(r.temperature_k), format_number(r.beliaev),
                       format_number(r.landau), format_number(r.total),
                       format_number(r.tau_s), format_number(r.quad_error), r.status});
  }
}

std::vector<ZcbRow> scan_zcb(const CondensateParams& params, double t_over_tc,
                             const std::vector<double>& zcb_values,
                             const std::vector<double>& y_grid,
                             const QuadratureSettings& quad, int threads) {
  std::vector<ZcbRow> rows(zcb_values.size() * y_grid.size());
  parallel_for(rows.size(), threads, [&](std::size_t idx) {
    const std::size_t zi = idx / y_grid.size();
    const std::size_t yi = idx % y_grid.size();
    ZcbRow& row = rows[idx];
    row.t_over_tc = t_over_tc;
    row.z_cb = zcb_values[zi];
    row.y_k = y_grid[yi];
    try {
      const double kelvin = fraction_to_kelvin(params, t_over_tc);
      const ReducedPoint base = reduce(params, row.y_k * params.healing_wavenumber(),
                                       Temperature::kelvin(kelvin));
      // The scan overrides the level splitting per curve.
      const ReducedPoint pt(base.y_k, base.t, row.z_cb);
      const RateBreakdown rb = total_rate(params, pt, quad);
      row.beliaev = rb.beliaev;
      row.landau = rb.landau;
      row.total = rb.total;
    } catch (const std::exception& e) {
      row.status = std::string("FAIL:") + e.what();
    }
  });
  return rows;
}

void write_zcb_csv(std::ostream& os, const std::vector<ZcbRow>& rows) {
  write_csv_schema_line(os, "zcb-scan");
  write_csv_row(os, {"y_k", "z_CB", "T_over_Tc", "beliaev_per_s", "landau_per_s",
                     "total_per_s", "status"});
  for (const auto& r : rows) {
    write_csv_row(os, {format_number(r.y_k), format_number(r.z_cb),
                       format_number(r.t_over_tc), format_number(r.beliaev),
                       format_number(r.landau), format_number(r.total), r.status});
  }
}

std::vector<OptimizeRow> scan_optimize(const CondensateParams& params,
                                       const std::vector<double>& t_over_tc,
                                       double y_lo, double y_hi,
                                       const QuadratureSettings& quad, int threads) {
  const double z_cb = params.level_splitting() / params.omega0();
  std::vector<OptimizeRow> rows(t_over_tc.size());
  parallel_for(rows.size(), threads, [&](std::size_t idx) {
    OptimizeRow& row = rows[idx];
    row.t_over_tc = t_over_tc[idx];
    try {
      const double kelvin = fraction_to_kelvin(params, row.t_over_tc);
      const double t = reduce(params, params.healing_wavenumber(),
                              Temperature::kelvin(kelvin))
                           .t;
      const MinimizeResult res =
          minimize_rate_over_k(params, t, z_cb, y_lo, y_hi, quad);
      row.y_star = res.y_star;
      row.gamma_min = res.rate.total;
      row.interior_minimum = res.interior_minimum;
      const auto tau = storage_time_tau_s(res.rate);
      row.tau_s_max = tau ? *tau : 0.0;
      if (!tau) row.status = "FAIL:zero-rate";
    } catch (const std::exception& e) {
      row.status = std::string("FAIL:") + e.what();
    }
  });
  return rows;
}

void write_optimize_csv(std::ostream& os, const std::vector<OptimizeRow>& rows) {
  write_csv_schema_line(os, "optimize");
  write_csv_row(os, {"T_over_Tc", "y_star", "gamma_min_per_s", "tau_s_max_s",
                     "interior_minimum", "status"});
  for (const auto& r : rows) {
    write_csv_row(os, {format_number(r.t_over_tc), format_number(r.y_star),
                       format_number(r.gamma_min), format_number(r.tau_s_max),
                       r.interior_minimum ? "1" : "0", r.status});
  }
}

void write_optimize_report(std::ostream& os, const std::vector<OptimizeRow>& rows) {
  for (const auto& r : rows) {
    os << "T/Tc = " << format_number(r.t_over_tc);
    if (r.status != "OK") {
      os << ": " << r.status << "\n";
      continue;
    }
    os << ": y_star = " << format_number(r.y_star)
       << ", gamma_min = " << format_number(r.gamma_min)
       << " 1/s, tau_s_max = " << format_number(r.tau_s_max) << " s, "
       << (r.interior_minimum ? "interior minimum" : "no interior minimum (boundary)")
       << "\n";
  }
}

std::vector<ThetaSweepRow> scan_theta_sweep(const CouplingBlock& block,
                                            int theta_points,
                                            const std::vector<double>& times) {
  if (theta_points < 2) throw ConfigError("theta sweep needs at least 2 angles");
  std::vector<double> thetas(theta_points);
  for (int i = 0; i < theta_points; ++i) {
    thetas[i] = (std::numbers::pi / 2.0) * i / (theta_points - 1);
  }
  const ThetaSweepTable table =
      theta_sweep(block.coupling, thetas, times, block.placement);
  std::vector<ThetaSweepRow> rows;
  rows.reserve(thetas.size() * times.size());
  for (std::size_t i = 0; i < table.thetas.size(); ++i) {
    for (std::size_t j = 0; j < table.times.size(); ++j) {
      rows.push_back({table.thetas[i], table.times[j], table.population_sum[i][j]});
    }
  }
  return rows;
}

void write_theta_csv(std::ostream& os, const std::vector<ThetaSweepRow>& rows,
                     double photon_number, bool normalized_column) {
  write_csv_schema_line(os, "theta-sweep");
  std::vector<std::string> header = {"theta_rad", "t_s", "n_sum"};
  if (normalized_column) header.push_back("n_sum_over_n");
  write_csv_row(os, header);
  for (const auto& r : rows) {
    std::vector<std::string> fields = {format_number(r.theta), format_number(r.time),
                                       format_number(r.n_sum)};
    if (normalized_column) fields.push_back(format_number(r.n_sum / photon_number));
    write_csv_row(os, fields);
  }
}

DecaySeries run_decay(const CouplingBlock& block, double t_max, int points) {
  if (!(t_max > 0.0) || points < 2) {
    throw ConfigError("decay needs t_max > 0 and at least 2 points");
  }
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = t_max * i / (points - 1);
  DecaySeries series;
  const MomentMatrix S0 = dark_state_moments(block.coupling);
  const Eigen::Matrix3cd K = drift_matrix(block.coupling, block.placement);
  series.evolution = evolve_moments(S0, K, grid);
  series.tau_d = delay_time_tau_d(block.coupling, 1.0 / std::numbers::e, block.placement);
  return series;
}

namespace {

void write_series_rows(std::ostream& os, const EvolutionResult& evo) {
  write_csv_row(os, {"t_s", "n_p", "n_C", "n_A", "n_sum"});
  for (std::size_t i = 0; i < evo.times.size(); ++i) {
    write_csv_row(os, {format_number(evo.times[i]),
                       format_number(evo.populations[i][2]),
                       format_number(evo.populations[i][1]),
                       format_number(evo.populations[i][0]),
                       format_number(evo.population_sum[i])});
  }
}

}  // namespace

void write_decay_csv(std::ostream& os, const DecaySeries& series) {
  write_csv_schema_line(os, "decay");
  write_series_rows(os, series.evolution);
  if (series.tau_d) {
    os << "# tau_d_s=" << format_number(*series.tau_d) << '\n';
  } else {
    os << "# tau_d_s=not-found\n";
  }
}

StoreSeries run_store(const CouplingBlock& block, const StorageRamp& ramp) {
  StoreSeries series;
  series.evolution = storage_protocol(block.coupling, ramp, block.placement);
  series.recovered_photons = series.evolution.populations.back()[2];
  return series;
}

void write_store_csv(std::ostream& os, const StoreSeries& series) {
  write_csv_schema_line(os, "store");
  write_series_rows(os, series.evolution);
  os << "# recovered_photon_number=" << format_number(series.recovered_photons) << '\n';
}

}  // namespace eitbec::cli
