#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "raresim/cell_segmental.hpp"
#include "raresim/numerics.hpp"

namespace raresim {

/// Susceptibility as a function of the total RF Rabi amplitude.
/// Override mode carries the linearized model around the operating point;
/// first-principles mode samples the quantum solver into a spline.
class ChiModel {
 public:
  /// Linear model chi(Omega) = chi_l + chi_slope (Omega - Omega_l).
  static ChiModel linear(const SusceptibilityPoint& point);

  /// Cubic-spline table over a log-spaced grid spanning
  /// [0.1 Omega_l, 10 Omega_l], refined until the midpoint interpolation
  /// error drops below 1e-6 relative against direct solves.
  static ChiModel tabulated(const AtomSystem& sys, const Environment& env,
                            double rabi_l, int initial_points = 65);

  double operator()(double rabi_amp) const { return eval_(rabi_amp); }
  const SusceptibilityPoint& point() const { return point_; }
  int table_size() const { return table_size_; }

 private:
  std::function<double(double)> eval_;
  SusceptibilityPoint point_;
  int table_size_ = 0;
};

/// Continuous or segmental illumination geometry as a list of atom-filled
/// intervals along z.
using CellGeometry = std::variant<ContinuousCell, SegmentalCell>;

std::vector<std::pair<double, double>> atom_intervals(
    const CellGeometry& geometry);
double geometry_total_length(const CellGeometry& geometry);
const SusceptibilityPoint& geometry_chi_point(const CellGeometry& geometry);

/// Full nonlinear photocurrent I(t) = I_in exp(-sum_m int chi(Omega(t,z)) dz)
/// evaluated on a trapezoid grid. Requires at least 64 grid points per LO
/// wavelength inside each atom-filled interval, else throws
/// ResolutionTooCoarseError.
class PhotocurrentOracle {
 public:
  PhotocurrentOracle(CellGeometry geometry, const ReceiverChain& chain,
                     const FieldScene& scene, const AtomSystem& sys,
                     ChiModel chi, int points_per_wavelength = 64);

  /// Photocurrent at time t. An optional complex BBR field sample (one
  /// value per grid point, LO-phase baseline applied internally) rides on
  /// top of the LO + signal fields.
  double current(double t,
                 const std::optional<Eigen::VectorXcd>& noise = {}) const;

  /// DC level I_in e^{-chi_l L} of the linearized theory.
  double dc_level() const;

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  CellGeometry geometry_;
  ReceiverChain chain_;
  FieldScene scene_;
  AtomSystem sys_;
  ChiModel chi_;
  std::vector<double> grid_;     // z samples over all intervals
  std::vector<double> weights_;  // trapezoid weights (m)
};

/// Swept variable of a parameter sweep.
enum class SweepVariable { cell_length, segment_count, theta_delta, theta_l };

struct SweepSpec {
  SweepVariable variable = SweepVariable::cell_length;
  std::vector<double> grid;  ///< strictly increasing values
  CellGeometry geometry;     ///< base geometry (modified per row)
  ReceiverChain chain;
  FieldScene scene;
  AtomSystem sys;
  MeasurementWindow window;
  double radiance = 0.0;
  /// Segment-count sweeps may hold the pitch fixed instead of the gap.
  std::optional<double> fixed_pitch;
};

struct SweepRow {
  double value = 0.0;
  SnrReport report;
  double hpbw = 0.0;  ///< NaN when undefined
  bool failed = false;
  std::string error;
};

/// Evaluates the spec row by row; failures are recorded on the row rather
/// than aborting. Rows are deterministic and ordered like the grid.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int threads = 1);

/// Monte-Carlo channel-capacity study with one random interferer.
struct CapacityConfig {
  int trials = 1000;
  std::uint64_t seed = 0;
  /// interferer angle ~ U(-pi/2, pi/2); strength ~ U(0, strength_fraction
  /// * E_s)
  double strength_fraction = 0.5;
};

struct CapacityTrial {
  double theta_i = 0.0;       ///< sin of the interferer angle
  double strength = 0.0;      ///< E_i (V/m)
  double interference = 0.0;  ///< P_I (A^2 s)
  double capacity = 0.0;      ///< bit/s/Hz with interference
};

struct CapacityResult {
  double capacity_free = 0.0;  ///< interference-free capacity
  double mean = 0.0;           ///< mean interfered capacity
  double stddev = 0.0;
  std::vector<CapacityTrial> trials;
};

CapacityResult capacity_mc(const CapacityConfig& cfg,
                           const CellGeometry& geometry,
                           const ReceiverChain& chain,
                           const FieldScene& scene, const AtomSystem& sys,
                           const MeasurementWindow& window, double radiance,
                           int threads = 1);

/// SNR report dispatching on the geometry type.
SnrReport snr_report(const CellGeometry& geometry, const ReceiverChain& chain,
                     const FieldScene& scene, const AtomSystem& sys,
                     const MeasurementWindow& window, double radiance);

}  // namespace raresim
