#include "raresim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "raresim/constants.hpp"
#include "raresim/errors.hpp"
#include "raresim/rng.hpp"

namespace raresim {

using namespace constants;
using Complex = std::complex<double>;

ChiModel ChiModel::linear(const SusceptibilityPoint& point) {
  ChiModel m;
  m.point_ = point;
  m.eval_ = [point](double rabi) {
    return point.chi + point.chi_slope * (rabi - point.rabi);
  };
  return m;
}

ChiModel ChiModel::tabulated(const AtomSystem& sys, const Environment& env,
                             double rabi_l, int initial_points) {
  const double lo = 0.1 * rabi_l;
  const double hi = 10.0 * rabi_l;
  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);

  int n = std::max(initial_points, 9);
  CubicSpline spline;
  for (int round = 0; round < 6; ++round) {
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
      xs[i] = std::exp(log_lo + (log_hi - log_lo) * i / (n - 1));
      ys[i] = susceptibility(sys, env, xs[i]);
    }
    spline = CubicSpline(xs, ys);

    // validate at panel midpoints against direct solves
    double worst = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
      double xm = std::sqrt(xs[i] * xs[i + 1]);
      double direct = susceptibility(sys, env, xm);
      double rel = std::abs(spline(xm) - direct) /
                   std::max(std::abs(direct), 1e-30);
      worst = std::max(worst, rel);
    }
    if (worst < 1e-6) break;
    n = 2 * n - 1;
  }

  ChiModel m;
  m.table_size_ = n;
  m.point_.rabi = rabi_l;
  m.point_.chi = susceptibility(sys, env, rabi_l);
  m.point_.chi_slope = susceptibility_slope(sys, env, rabi_l);
  m.eval_ = [spline](double rabi) { return spline(rabi); };
  return m;
}

std::vector<std::pair<double, double>> atom_intervals(
    const CellGeometry& geometry) {
  std::vector<std::pair<double, double>> spans;
  if (std::holds_alternative<ContinuousCell>(geometry)) {
    const auto& c = std::get<ContinuousCell>(geometry);
    spans.emplace_back(0.0, c.length);
  } else {
    const auto& s = std::get<SegmentalCell>(geometry);
    for (int m = 0; m < s.segments; ++m) {
      double start = m * s.pitch();
      spans.emplace_back(start, start + s.segment_length());
    }
  }
  return spans;
}

double geometry_total_length(const CellGeometry& geometry) {
  if (std::holds_alternative<ContinuousCell>(geometry))
    return std::get<ContinuousCell>(geometry).length;
  return std::get<SegmentalCell>(geometry).total_length;
}

const SusceptibilityPoint& geometry_chi_point(const CellGeometry& geometry) {
  if (std::holds_alternative<ContinuousCell>(geometry))
    return std::get<ContinuousCell>(geometry).chi_point;
  return std::get<SegmentalCell>(geometry).chi_point;
}

PhotocurrentOracle::PhotocurrentOracle(CellGeometry geometry,
                                       const ReceiverChain& chain,
                                       const FieldScene& scene,
                                       const AtomSystem& sys, ChiModel chi,
                                       int points_per_wavelength)
    : geometry_(std::move(geometry)),
      chain_(chain),
      scene_(scene),
      sys_(sys),
      chi_(std::move(chi)) {
  if (points_per_wavelength < 64)
    throw ResolutionTooCoarseError(
        "photocurrent oracle: need >= 64 grid points per wavelength");
  const double lambda = scene_.lo.wavelength();
  for (const auto& [a, b] : atom_intervals(geometry_)) {
    int n = std::max(
        9, static_cast<int>(std::ceil((b - a) / lambda *
                                      points_per_wavelength)) + 1);
    double h = (b - a) / (n - 1);
    for (int i = 0; i < n; ++i) {
      grid_.push_back(a + i * h);
      weights_.push_back((i == 0 || i == n - 1) ? 0.5 * h : h);
    }
  }
}

double PhotocurrentOracle::current(
    double t, const std::optional<Eigen::VectorXcd>& noise) const {
  if (noise && noise->size() != static_cast<Eigen::Index>(grid_.size()))
    throw Error("photocurrent oracle: noise sample size mismatch");

  const double rabi_lo = sys_.mu34 * scene_.lo.strength / hbar;
  const double k_l = scene_.lo.wavenumber();
  const double theta_l = scene_.lo.direction;
  const double mu_over_hbar = sys_.mu34 / hbar;

  double integral = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const double z = grid_[i];
    Complex rabi = Complex(rabi_lo, 0.0) + rabi_signal(scene_, sys_, t, z);
    for (const auto& w : scene_.interferers)
      rabi += rabi_relative(scene_.lo, w, sys_, t, z);
    if (noise) {
      // LO phase baseline for the sampled field: exp(+j k_l z theta_l)
      double arg = k_l * z * theta_l;
      rabi += mu_over_hbar * (*noise)(static_cast<Eigen::Index>(i)) *
              Complex(std::cos(arg), std::sin(arg));
    }
    integral += weights_[i] * chi_(std::abs(rabi));
  }
  return chain_.input_current() * std::exp(-integral);
}

double PhotocurrentOracle::dc_level() const {
  return chain_.input_current() *
         std::exp(-chi_.point().chi * geometry_total_length(geometry_));
}

namespace {

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, threads);
  if (threads == 1 || n < 2 * threads) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  for (auto& th : pool) th.join();
}

double hpbw_or_nan(const CellGeometry& geometry, double wavelength) {
  try {
    if (std::holds_alternative<ContinuousCell>(geometry))
      return hpbw_continuous(std::get<ContinuousCell>(geometry).length,
                             wavelength);
    return hpbw_segmental(std::get<SegmentalCell>(geometry), wavelength);
  } catch (const HpbwUndefinedError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

SnrReport snr_report(const CellGeometry& geometry, const ReceiverChain& chain,
                     const FieldScene& scene, const AtomSystem& sys,
                     const MeasurementWindow& window, double radiance) {
  if (std::holds_alternative<ContinuousCell>(geometry))
    return snr_continuous(std::get<ContinuousCell>(geometry), chain, scene,
                          sys, window, radiance);
  return snr_segmental(std::get<SegmentalCell>(geometry), chain, scene, sys,
                       window, radiance);
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int threads) {
  if (spec.grid.empty()) throw Error("sweep: grid must be non-empty");
  for (std::size_t i = 1; i < spec.grid.size(); ++i)
    if (!(spec.grid[i] > spec.grid[i - 1]))
      throw Error("sweep: grid must be strictly increasing");

  const int n = static_cast<int>(spec.grid.size());
  std::vector<SweepRow> rows(n);

  parallel_for(n, threads, [&](int i) {
    SweepRow& row = rows[i];
    row.value = spec.grid[i];
    try {
      CellGeometry geometry = spec.geometry;
      FieldScene scene = spec.scene;
      switch (spec.variable) {
        case SweepVariable::cell_length:
          if (std::holds_alternative<ContinuousCell>(geometry))
            std::get<ContinuousCell>(geometry).length = row.value;
          else
            std::get<SegmentalCell>(geometry).total_length = row.value;
          break;
        case SweepVariable::segment_count: {
          if (!std::holds_alternative<SegmentalCell>(geometry))
            throw Error("sweep: segment_count requires a segmental cell");
          auto& cell = std::get<SegmentalCell>(geometry);
          cell.segments = static_cast<int>(std::lround(row.value));
          if (spec.fixed_pitch) {
            cell.gap = *spec.fixed_pitch - cell.segment_length();
            if (cell.gap < -1e-12)
              throw Error("sweep: pitch smaller than segment length");
            cell.gap = std::max(cell.gap, 0.0);
          }
          break;
        }
        case SweepVariable::theta_delta:
          scene.signal.direction = scene.lo.direction + row.value;
          break;
        case SweepVariable::theta_l: {
          // moves LO and signal together (aligned steering)
          double offset = scene.signal.direction - scene.lo.direction;
          scene.lo.direction = row.value;
          scene.signal.direction = row.value + offset;
          break;
        }
      }
      row.report =
          snr_report(geometry, spec.chain, scene, spec.sys, spec.window,
                     spec.radiance);
      row.hpbw = hpbw_or_nan(geometry, scene.lo.wavelength());
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
  });
  return rows;
}

CapacityResult capacity_mc(const CapacityConfig& cfg,
                           const CellGeometry& geometry,
                           const ReceiverChain& chain,
                           const FieldScene& scene, const AtomSystem& sys,
                           const MeasurementWindow& window, double radiance,
                           int threads) {
  if (cfg.trials < 1) throw Error("capacity: trials must be >= 1");

  SnrReport base = snr_report(geometry, chain, scene, sys, window, radiance);
  const double noise = base.bbr_density + base.psn_density;

  CapacityResult result;
  result.capacity_free = std::log2(1.0 + base.signal_energy / noise);
  result.trials.resize(cfg.trials);

  parallel_for(cfg.trials, threads, [&](int i) {
    // counter-based stream per trial: order-independent draws
    Rng rng(cfg.seed, static_cast<std::uint64_t>(i));
    CapacityTrial& trial = result.trials[i];
    double angle = rng.uniform(-0.5 * pi, 0.5 * pi);
    trial.theta_i = std::sin(angle);
    trial.strength =
        rng.uniform(0.0, cfg.strength_fraction * scene.signal.strength);

    // interference energy via the same intrinsic-gain path as the signal
    FieldScene interferer_scene = scene;
    interferer_scene.signal.direction = trial.theta_i;
    interferer_scene.signal.strength = trial.strength;
    SnrReport rep = snr_report(geometry, chain, interferer_scene, sys, window,
                               radiance);
    trial.interference = rep.signal_energy;
    trial.capacity = std::log2(
        1.0 + base.signal_energy / (trial.interference + noise));
  });

  double sum = 0.0;
  for (const auto& t : result.trials) sum += t.capacity;
  result.mean = sum / cfg.trials;
  double var = 0.0;
  for (const auto& t : result.trials) {
    double d = t.capacity - result.mean;
    var += d * d;
  }
  result.stddev =
      cfg.trials > 1 ? std::sqrt(var / (cfg.trials - 1)) : 0.0;
  return result;
}

}  // namespace raresim
