// Command-line front end: loads a config, runs one experiment, writes a
// deterministic CSV (and optionally an SVG companion plot).

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <limits>
#include <optional>

#include "raresim/config.hpp"
#include "raresim/constants.hpp"
#include "raresim/errors.hpp"
#include "raresim/table.hpp"
#include "raresim/version.hpp"

namespace {

using namespace raresim;

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  bool svg = false;
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--config", opt.config_path, "config file")->required();
  cmd->add_option("--out", opt.out_path, "output CSV path")->required();
  cmd->add_flag("--svg", opt.svg, "also write an SVG line plot");
  cmd->add_option("--seed", opt.seed, "seed for randomized experiments");
  cmd->add_option("--threads", opt.threads, "worker threads")
      ->check(CLI::PositiveNumber);
}

void base_metadata(ResultTable& table, const RunConfig& cfg,
                   const std::string& command, std::uint64_t seed) {
  table.metadata.emplace_back("tool", std::string("raresim ") + kVersion);
  table.metadata.emplace_back("command", command);
  table.metadata.emplace_back("config-hash", config_hash(cfg));
  table.metadata.emplace_back("seed", std::to_string(seed));
}

void warn_scene(const RunConfig& cfg) {
  for (const auto& w : cfg.scene.validate()) std::cerr << "warning: " << w
                                                       << "\n";
  MeasurementWindow win = cfg.window();
  if (!win.aligned)
    std::cerr << "warning: window.duration is " << win.adjustment * 100
              << "% away from a whole number of beat periods; the exact "
                 "signal-energy integral is used\n";
}

void emit(const ResultTable& table, const CommonOptions& opt,
          const std::vector<std::size_t>& svg_columns,
          const std::string& title, bool log_x = false, bool log_y = false) {
  write_csv_file(table, opt.out_path);
  if (opt.svg && !svg_columns.empty())
    write_svg_file(table, svg_columns, title, opt.out_path + ".svg", log_x,
                   log_y);
}

std::vector<double> make_grid(double lo, double hi, int n, bool log_scale) {
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) {
    double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    grid[i] = log_scale ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
  }
  return grid;
}

int run_susceptibility(const CommonOptions& opt) {
  RunConfig cfg = load_config(opt.config_path);
  warn_scene(cfg);
  double rabi_l = cfg.lo_rabi();
  ChiModel chi = cfg.chi_model();

  double lo = experiment_quantity(cfg, "rabi_min", "angular_frequency",
                                  0.1 * rabi_l);
  double hi = experiment_quantity(cfg, "rabi_max", "angular_frequency",
                                  10.0 * rabi_l);
  int n = static_cast<int>(experiment_number(cfg, "points", 101));
  bool log_scale = experiment_string(cfg, "scale", "log") == "log";

  ResultTable table;
  base_metadata(table, cfg, "susceptibility", opt.seed.value_or(0));
  table.metadata.emplace_back("mode", cfg.override_mode
                                          ? "chi-override (linearized)"
                                          : "first-principles");
  table.metadata.emplace_back("chi_l_m^-1",
                              format_double(chi.point().chi));
  table.metadata.emplace_back("chi_slope_m^-1_per_radps",
                              format_double(chi.point().chi_slope));
  table.metadata.emplace_back("Omega_l_radps", format_double(rabi_l));
  table.columns = {"Omega_radps", "chi_m^-1"};
  for (double omega : make_grid(lo, hi, n, log_scale))
    table.add_row({omega, chi(omega)});
  emit(table, opt, {1}, "probe susceptibility vs RF Rabi frequency",
       log_scale, false);
  return 0;
}

int run_pattern(const CommonOptions& opt) {
  RunConfig cfg = load_config(opt.config_path);
  warn_scene(cfg);
  CellGeometry geometry = cfg.resolve_cell();
  double lambda = cfg.scene.lo.wavelength();

  int n = static_cast<int>(experiment_number(cfg, "pattern_points", 801));
  std::vector<double> lo_dirs =
      experiment_list(cfg, "lo_directions", "angle_as_sine");
  if (lo_dirs.empty()) lo_dirs = {cfg.scene.lo.direction};
  std::vector<double> lengths = experiment_list(cfg, "lengths", "length");
  if (lengths.empty()) lengths = {geometry_total_length(geometry)};

  ResultTable table;
  base_metadata(table, cfg, "pattern", opt.seed.value_or(0));
  table.columns = {"theta_delta"};
  struct Combo {
    double length, theta_l;
  };
  std::vector<Combo> combos;
  for (double length : lengths)
    for (double theta_l : lo_dirs) {
      combos.push_back({length, theta_l});
      std::string suffix = "[L=" + format_double(length) +
                           "m,theta_l=" + format_double(theta_l) + "]";
      table.columns.push_back("theta_s" + suffix);
      table.columns.push_back("G" + suffix);
    }

  for (double theta_delta : make_grid(-2.0, 2.0, n, false)) {
    std::vector<double> row{theta_delta};
    for (const auto& combo : combos) {
      CellGeometry g = geometry;
      if (std::holds_alternative<ContinuousCell>(g))
        std::get<ContinuousCell>(g).length = combo.length;
      else
        std::get<SegmentalCell>(g).total_length = combo.length;
      double gain =
          std::holds_alternative<ContinuousCell>(g)
              ? pattern_continuous(theta_delta,
                                   std::get<ContinuousCell>(g).length, lambda)
              : pattern_segmental(theta_delta, std::get<SegmentalCell>(g),
                                  lambda);
      double theta_s = combo.theta_l + theta_delta;
      bool visible = std::abs(theta_s) <= 1.0;
      row.push_back(visible ? theta_s
                            : std::numeric_limits<double>::quiet_NaN());
      row.push_back(visible ? gain
                            : std::numeric_limits<double>::quiet_NaN());
    }
    table.add_row(std::move(row));
  }

  std::vector<std::size_t> svg_cols;
  for (std::size_t i = 0; i < combos.size(); ++i) svg_cols.push_back(2 + 2 * i);
  emit(table, opt, svg_cols, "reception pattern");
  return 0;
}

ResultTable sweep_table(const RunConfig& cfg, const SweepSpec& spec,
                        const CommonOptions& opt, const char* command) {
  std::vector<SweepRow> rows = run_sweep(spec, opt.threads);
  ResultTable table;
  base_metadata(table, cfg, command, opt.seed.value_or(0));
  table.columns = {"value",   "Ps_A2s",  "Nbbr_A2s",  "Npsn_A2s", "snr_bbr",
                   "snr_psn", "snr_total", "G",       "HPBW_rad"};
  for (const auto& row : rows) {
    table.add_row({row.value, row.report.signal_energy, row.report.bbr_density,
                   row.report.psn_density, row.report.snr_bbr,
                   row.report.snr_psn, row.report.snr_total,
                   row.report.pattern_gain, row.hpbw},
                  row.failed ? row.error : "");
  }
  return table;
}

SweepVariable parse_variable(const std::string& name) {
  if (name == "L") return SweepVariable::cell_length;
  if (name == "M") return SweepVariable::segment_count;
  if (name == "theta_delta") return SweepVariable::theta_delta;
  if (name == "theta_l") return SweepVariable::theta_l;
  throw raresim::ConfigError(
      "experiment.variable: expected L, M, theta_delta or theta_l");
}

int run_snr_sweep(const CommonOptions& opt, bool segmental) {
  RunConfig cfg = load_config(opt.config_path);
  warn_scene(cfg);

  SweepSpec spec;
  spec.geometry = cfg.resolve_cell();
  if (segmental && !std::holds_alternative<SegmentalCell>(spec.geometry))
    throw raresim::ConfigError("seg-sweep requires cell.type = segmental");
  spec.chain = cfg.chain;
  spec.scene = cfg.scene;
  spec.sys = cfg.atom;
  spec.window = cfg.window();
  spec.radiance = cfg.radiance();
  spec.variable = parse_variable(
      experiment_string(cfg, "variable", segmental ? "M" : "L"));

  bool log_scale = experiment_string(cfg, "scale",
                                     segmental ? "log" : "linear") == "log";
  int points = static_cast<int>(experiment_number(cfg, "points", 40));
  double lo, hi;
  if (spec.variable == SweepVariable::cell_length) {
    lo = experiment_quantity(cfg, "min", "length", 0.01);
    hi = experiment_quantity(cfg, "max", "length", 0.40);
  } else if (spec.variable == SweepVariable::segment_count) {
    lo = experiment_number(cfg, "min", 1);
    hi = experiment_number(cfg, "max", 1024);
  } else {
    lo = experiment_quantity(cfg, "min", "angle_as_sine", -2.0);
    hi = experiment_quantity(cfg, "max", "angle_as_sine", 2.0);
  }
  std::vector<double> grid = make_grid(lo, hi, points, log_scale);
  if (spec.variable == SweepVariable::segment_count) {
    // round to integers and drop duplicates
    std::vector<double> ints;
    for (double g : grid) {
      double r = std::round(g);
      if (ints.empty() || r > ints.back()) ints.push_back(r);
    }
    grid = std::move(ints);
  }
  spec.grid = grid;
  double pitch = experiment_quantity(cfg, "fixed_pitch", "length", -1.0);
  if (pitch > 0) spec.fixed_pitch = pitch;

  ResultTable table =
      sweep_table(cfg, spec, opt, segmental ? "seg-sweep" : "snr-sweep");
  emit(table, opt, {6}, "SNR sweep", log_scale, true);
  return 0;
}

int run_capacity(const CommonOptions& opt) {
  RunConfig cfg = load_config(opt.config_path);
  warn_scene(cfg);

  CapacityConfig cap;
  cap.trials = static_cast<int>(experiment_number(cfg, "trials", 1000));
  cap.seed = opt.seed.value_or(static_cast<std::uint64_t>(
      experiment_number(cfg, "seed", 1)));
  cap.strength_fraction =
      experiment_number(cfg, "interferer_fraction", 0.5);

  CapacityResult result =
      capacity_mc(cap, cfg.resolve_cell(), cfg.chain, cfg.scene, cfg.atom,
                  cfg.window(), cfg.radiance(), opt.threads);

  ResultTable table;
  base_metadata(table, cfg, "capacity", cap.seed);
  table.metadata.emplace_back("capacity_free_bit",
                              format_double(result.capacity_free));
  table.metadata.emplace_back("capacity_mean_bit",
                              format_double(result.mean));
  table.metadata.emplace_back("capacity_std_bit",
                              format_double(result.stddev));
  table.metadata.emplace_back(
      "capacity_gap_bit", format_double(result.capacity_free - result.mean));
  table.columns = {"trial", "theta_i", "E_i_V/m", "P_I_A2s", "capacity_bit"};
  for (std::size_t i = 0; i < result.trials.size(); ++i) {
    const auto& t = result.trials[i];
    table.add_row({static_cast<double>(i), t.theta_i, t.strength,
                   t.interference, t.capacity});
  }
  emit(table, opt, {4}, "per-trial capacity");
  return 0;
}

int run_oracle_check(const CommonOptions& opt) {
  RunConfig cfg = load_config(opt.config_path);
  warn_scene(cfg);

  CellGeometry geometry = cfg.resolve_cell();
  MeasurementWindow window = cfg.window();
  double radiance = cfg.radiance();
  double ratio = experiment_number(cfg, "oracle_field_ratio", 1e-3);
  int ppw = static_cast<int>(
      experiment_number(cfg, "oracle_points_per_wavelength", 64));
  int time_samples =
      static_cast<int>(experiment_number(cfg, "oracle_time_samples", 64));
  int trials = static_cast<int>(experiment_number(cfg, "oracle_trials", 2000));
  int noise_grid =
      static_cast<int>(experiment_number(cfg, "oracle_grid", 800));
  std::uint64_t seed = opt.seed.value_or(
      static_cast<std::uint64_t>(experiment_number(cfg, "seed", 1)));

  // 1) linearized signal current vs the nonlinear photocurrent
  FieldScene scene = cfg.scene;
  scene.signal.strength = ratio * scene.lo.strength;
  PhotocurrentOracle oracle(geometry, cfg.chain, scene, cfg.atom,
                            cfg.chi_model(), ppw);
  SnrReport report =
      snr_report(geometry, cfg.chain, scene, cfg.atom, window, radiance);
  double period = constants::two_pi / std::abs(scene.beat());
  double worst = 0.0;
  double amp = std::abs(report.intrinsic_gain) * scene.signal.strength;
  for (int i = 0; i < time_samples; ++i) {
    double t = period * i / time_samples;
    double linear = -report.intrinsic_gain * scene.signal.strength *
                    std::cos(scene.beat() * t + report.signal_phase);
    double nonlinear = oracle.current(t) - oracle.dc_level();
    worst = std::max(worst, std::abs(nonlinear - linear) / amp);
  }

  // 2) Monte-Carlo BBR density vs the closed form
  double lambda = cfg.scene.lo.wavelength();
  double i_bar = oracle.dc_level();
  const SusceptibilityPoint& pt = geometry_chi_point(geometry);
  double prefactor =
      i_bar * pt.chi_slope * cfg.atom.mu34 / constants::hbar;
  double var = 0.0;
  {
    // per-segment independent complex fields, trapezoid of
    // Re{E_n e^{j k z theta_l}} over the atom-filled intervals
    auto spans = atom_intervals(geometry);
    std::vector<BbrFieldSampler> samplers;
    std::vector<std::vector<double>> grids;
    for (const auto& [a, b] : spans) {
      int n = std::max(8, static_cast<int>(noise_grid * (b - a) /
                                           geometry_total_length(geometry)));
      std::vector<double> grid(n);
      for (int i = 0; i < n; ++i)
        grid[i] = a + (b - a) * i / (n - 1);
      samplers.emplace_back(grid, lambda, radiance);
      grids.push_back(std::move(grid));
    }
    double k_l = cfg.scene.lo.wavenumber();
    double theta_l = cfg.scene.lo.direction;
    double sum = 0.0, sum2 = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      double x = 0.0;
      for (std::size_t s = 0; s < samplers.size(); ++s) {
        Eigen::VectorXcd field = samplers[s].sample_complex(
            seed, trial * samplers.size() + s);
        const auto& grid = grids[s];
        double h = grid[1] - grid[0];
        for (std::size_t i = 0; i < grid.size(); ++i) {
          double w = (i == 0 || i + 1 == grid.size()) ? 0.5 * h : h;
          double arg = k_l * grid[i] * theta_l;
          x += w * (field(static_cast<Eigen::Index>(i)) *
                    std::complex<double>(std::cos(arg), std::sin(arg)))
                       .real();
        }
      }
      double di = prefactor * x;
      sum += di;
      sum2 += di * di;
    }
    double mean = sum / trials;
    var = sum2 / trials - mean * mean;
  }
  double mc_err = std::abs(var - report.bbr_density) / report.bbr_density;

  ResultTable table;
  base_metadata(table, cfg, "oracle-check", seed);
  table.metadata.emplace_back("check_1",
                              "linearization: |oracle - closed form| / amp");
  table.metadata.emplace_back("check_2",
                              "BBR Monte-Carlo variance vs closed form");
  table.columns = {"check", "closed_form", "oracle", "rel_err", "tol",
                   "pass"};
  table.add_row({1, amp, amp * (1 + worst), worst, 0.01,
                 worst < 0.01 ? 1.0 : 0.0});
  table.add_row({2, report.bbr_density, var, mc_err, 0.05,
                 mc_err < 0.05 ? 1.0 : 0.0});
  emit(table, opt, {}, "oracle checks");

  bool ok = worst < 0.01 && mc_err < 0.05;
  if (!ok) std::cerr << "oracle-check: FAIL\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rydberg atomic receiver beamforming simulator"};
  app.set_version_flag("--version", raresim::kVersion);
  app.require_subcommand(1);

  CommonOptions opt;
  auto* susceptibility =
      app.add_subcommand("susceptibility", "chi(Omega) operating curve");
  auto* pattern = app.add_subcommand("pattern", "reception pattern");
  auto* snr_sweep =
      app.add_subcommand("snr-sweep", "continuous-cell SNR sweep");
  auto* seg_sweep =
      app.add_subcommand("seg-sweep", "segmental-cell SNR sweep");
  auto* capacity =
      app.add_subcommand("capacity", "interference capacity study");
  auto* oracle =
      app.add_subcommand("oracle-check", "closed forms vs brute force");
  for (auto* cmd :
       {susceptibility, pattern, snr_sweep, seg_sweep, capacity, oracle})
    add_common(cmd, opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (susceptibility->parsed()) return run_susceptibility(opt);
    if (pattern->parsed()) return run_pattern(opt);
    if (snr_sweep->parsed()) return run_snr_sweep(opt, false);
    if (seg_sweep->parsed()) return run_snr_sweep(opt, true);
    if (capacity->parsed()) return run_capacity(opt);
    if (oracle->parsed()) return run_oracle_check(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
