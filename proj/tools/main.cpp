#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "run_config.hpp"
#include "scans.hpp"
#include "svg_plot.hpp"

using namespace eitbec;
using namespace eitbec::cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct CommonArgs {
  std::string config_path;
  std::string preset;
  std::string out_path;
  int threads = 1;
  double quad_rtol = 0.0;  // 0: keep default
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args, const std::string& default_out) {
  cmd->add_option("--config", args.config_path, "flat key = value parameter file");
  cmd->add_option("--preset", args.preset,
                  "named parameter preset (hau1999 gas, hau2001 couplings)");
  cmd->add_option("--out", args.out_path, "output path")->default_val(default_out);
  cmd->add_option("--threads", args.threads, "worker threads for scan rows")
      ->default_val(1)
      ->check(CLI::Range(1, 256));
  cmd->add_option("--quad-rtol", args.quad_rtol,
                  "override quad.relative_tolerance");
  cmd->add_option("--set", args.overrides,
                  "override a config key, e.g. --set scan.y_points=100");
}

KeyValueConfig assemble_config(const CommonArgs& args) {
  KeyValueConfig cfg;
  if (!args.config_path.empty()) cfg = KeyValueConfig::from_file(args.config_path);
  if (!args.preset.empty()) apply_preset(cfg, args.preset);
  for (const std::string& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--set expects key=value, got '" + kv + "'");
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (args.quad_rtol > 0.0) {
    cfg.set("quad.relative_tolerance", format_number(args.quad_rtol));
  }
  return cfg;
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  out << body;
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

template <class WriteFn>
void write_csv_file(const std::string& path, WriteFn&& fn) {
  std::ostringstream os;
  fn(os);
  write_text_file(path, os.str());
}

int cmd_rates(const CommonArgs& args) {
  KeyValueConfig cfg = assemble_config(args);
  const CondensateParams params = parse_gas_block(cfg);
  const QuadratureSettings quad = parse_quad_block(cfg);
  const auto t_list = cfg.get_list_or("scan.t_over_tc_list", {0.0, 0.1, 0.5});
  const auto grid = log_grid(cfg.get_double_or("scan.y_min", 0.01),
                             cfg.get_double_or("scan.y_max", 10.0),
                             cfg.get_int_or("scan.y_points", 200));
  cfg.require_fully_consumed();

  const auto rows = scan_rates(params, t_list, grid, quad, args.threads);
  write_csv_file(args.out_path, [&](std::ostream& os) { write_rates_csv(os, rows); });
  return all_rows_ok(rows) ? kExitOk : kExitNumerical;
}

int cmd_zcb_scan(const CommonArgs& args) {
  KeyValueConfig cfg = assemble_config(args);
  const CondensateParams params = parse_gas_block(cfg);
  const QuadratureSettings quad = parse_quad_block(cfg);
  const double t_over_tc = cfg.get_double_or("scan.t_over_tc", 0.1);
  const auto zcb_list = cfg.get_list_or("scan.zcb_list", {1e-4, 1e-2, 1e2});
  const auto grid = log_grid(cfg.get_double_or("scan.y_min", 0.01),
                             cfg.get_double_or("scan.y_max", 10.0),
                             cfg.get_int_or("scan.y_points", 200));
  cfg.require_fully_consumed();

  const auto rows = scan_zcb(params, t_over_tc, zcb_list, grid, quad, args.threads);
  write_csv_file(args.out_path, [&](std::ostream& os) { write_zcb_csv(os, rows); });
  return all_rows_ok(rows) ? kExitOk : kExitNumerical;
}

int cmd_optimize(const CommonArgs& args) {
  KeyValueConfig cfg = assemble_config(args);
  const CondensateParams params = parse_gas_block(cfg);
  const QuadratureSettings quad = parse_quad_block(cfg);
  const auto t_list = cfg.get_list_or("scan.t_over_tc_list", {0.0, 0.1, 0.3, 0.5});
  const double y_lo = cfg.get_double_or("scan.y_min", 0.02);
  const double y_hi = cfg.get_double_or("scan.y_max", 20.0);
  cfg.require_fully_consumed();

  const auto rows = scan_optimize(params, t_list, y_lo, y_hi, quad, args.threads);
  write_csv_file(args.out_path,
                 [&](std::ostream& os) { write_optimize_csv(os, rows); });
  write_optimize_report(std::cout, rows);
  return all_rows_ok(rows) ? kExitOk : kExitNumerical;
}

int cmd_theta_sweep(const CommonArgs& args, bool normalized) {
  KeyValueConfig cfg = assemble_config(args);
  const CouplingBlock block = parse_coupling_block(cfg);
  const double gamma_c = block.coupling.gamma_C;
  if (!(gamma_c > 0.0)) throw ConfigError("theta-sweep requires coupling.gamma_c_per_s > 0");
  const auto times = cfg.get_list_or(
      "scan.time_list_s",
      {0.0, 0.25 / gamma_c, 0.5 / gamma_c, 1.0 / gamma_c, 2.0 / gamma_c});
  const int theta_points = cfg.get_int_or("scan.theta_points", 50);
  cfg.require_fully_consumed();

  const auto rows = scan_theta_sweep(block, theta_points, times);
  write_csv_file(args.out_path, [&](std::ostream& os) {
    write_theta_csv(os, rows, block.coupling.photon_number, normalized);
  });
  return kExitOk;
}

int cmd_decay(const CommonArgs& args) {
  KeyValueConfig cfg = assemble_config(args);
  const CouplingBlock block = parse_coupling_block(cfg);
  const double gamma_c = block.coupling.gamma_C;
  if (!(gamma_c > 0.0)) throw ConfigError("decay requires coupling.gamma_c_per_s > 0");
  const double t_max = cfg.get_double_or("scan.time_max_s", 3.0 / gamma_c);
  const int points = cfg.get_int_or("scan.time_points", 200);
  cfg.require_fully_consumed();

  const DecaySeries series = run_decay(block, t_max, points);
  write_csv_file(args.out_path, [&](std::ostream& os) { write_decay_csv(os, series); });
  if (series.tau_d) {
    std::cout << "tau_d = " << format_number(*series.tau_d)
              << " s (tau_d * gamma_C = " << format_number(*series.tau_d * gamma_c)
              << ")\n";
  } else {
    std::cout << "tau_d: no crossing within 1e3/gamma_C\n";
  }
  return kExitOk;
}

int cmd_store(const CommonArgs& args) {
  KeyValueConfig cfg = assemble_config(args);
  const CouplingBlock block = parse_coupling_block(cfg);
  const RampBlock ramp = parse_ramp_block(cfg);
  cfg.require_fully_consumed();

  const StoreSeries series = run_store(block, ramp.ramp);
  write_csv_file(args.out_path, [&](std::ostream& os) { write_store_csv(os, series); });
  std::cout << "recovered photon number = " << format_number(series.recovered_photons)
            << " of " << format_number(block.coupling.photon_number) << "\n";
  return kExitOk;
}

struct PlotArgs {
  std::string csv_path;
  std::string out_path = "plot.svg";
  PlotSpec spec;
};

int cmd_plot(const PlotArgs& args) {
  std::ifstream in(args.csv_path);
  if (!in) throw ConfigError("cannot open CSV '" + args.csv_path + "'");
  const DataTable table = read_csv(in);
  const std::string svg = render_line_chart(table, args.spec);
  write_text_file(args.out_path, svg);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Collisional decay rates of momentum-tagged condensate excitations and "
      "dark-state light storage dynamics"};
  app.require_subcommand(1);

  CommonArgs rates_args, zcb_args, opt_args, theta_args, decay_args, store_args;
  bool theta_normalized = false;

  CLI::App* rates = app.add_subcommand(
      "rates", "decay-rate scan over momentum and temperature");
  add_common(rates, rates_args, "rates.csv");

  CLI::App* zcb = app.add_subcommand(
      "zcb-scan", "decay-rate scan over the level splitting z_CB");
  add_common(zcb, zcb_args, "zcb_scan.csv");

  CLI::App* optimize = app.add_subcommand(
      "optimize", "momentum minimizing the total decay rate per temperature");
  add_common(optimize, opt_args, "optimize.csv");

  CLI::App* theta = app.add_subcommand(
      "theta-sweep", "summed probe + excitation population vs mixing angle");
  add_common(theta, theta_args, "theta_sweep.csv");
  theta->add_flag("--normalized", theta_normalized, "append an n_sum/n column");

  CLI::App* decay = app.add_subcommand(
      "decay", "dark-state population decay time series and tau_d");
  add_common(decay, decay_args, "decay.csv");

  CLI::App* store = app.add_subcommand(
      "store", "light storage cycle: ramp in, hold, ramp out");
  add_common(store, store_args, "store.csv");

  PlotArgs plot_args;
  CLI::App* plot = app.add_subcommand("plot", "render a CSV as an SVG line chart");
  plot->add_option("csv", plot_args.csv_path, "input CSV produced by this tool")
      ->required();
  plot->add_option("--out", plot_args.out_path, "output SVG path")
      ->default_val("plot.svg");
  plot->add_option("--x", plot_args.spec.x_column, "x column name")->required();
  plot->add_option("--y", plot_args.spec.y_column, "y column name")->required();
  plot->add_option("--group", plot_args.spec.group_column,
                   "column whose values split the rows into curves");
  plot->add_flag("--logx", plot_args.spec.log_x, "logarithmic x axis");
  plot->add_flag("--logy", plot_args.spec.log_y, "logarithmic y axis");
  plot->add_option("--title", plot_args.spec.title, "chart title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (rates->parsed()) return cmd_rates(rates_args);
    if (zcb->parsed()) return cmd_zcb_scan(zcb_args);
    if (optimize->parsed()) return cmd_optimize(opt_args);
    if (theta->parsed()) return cmd_theta_sweep(theta_args, theta_normalized);
    if (decay->parsed()) return cmd_decay(decay_args);
    if (store->parsed()) return cmd_store(store_args);
    if (plot->parsed()) return cmd_plot(plot_args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const QuadratureError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
