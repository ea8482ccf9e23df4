#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "raresim/atom.hpp"

namespace raresim {

/// Far-field plane wave restricted to the x-polarized component.
/// Spatial direction is theta = sin(vartheta) relative to the cell normal.
struct PlaneWave {
  double strength = 0.0;           ///< E (V/m), >= 0
  double angular_frequency = 0.0;  ///< omega (rad/s)
  double direction = 0.0;          ///< theta = sin(vartheta), in [-1, 1]
  double phase = 0.0;              ///< varphi (rad)

  double frequency() const;   ///< f = omega / 2 pi (Hz)
  double wavelength() const;  ///< lambda = c / f (m)
  double wavenumber() const;  ///< k = 2 pi / lambda (rad/m)

  void validate(const char* name) const;
};

/// LO + signal + optional interferer waves illuminating the cell.
struct FieldScene {
  PlaneWave lo;
  PlaneWave signal;
  std::vector<PlaneWave> interferers;

  double beat() const;              ///< omega_delta = omega_s - omega_l
  double direction_offset() const;  ///< theta_delta = theta_s - theta_l
  double phase_offset() const;      ///< varphi_delta = varphi_s - varphi_l

  /// Hard invariants throw; the narrowband condition
  /// |omega_delta| < 1e-3 omega_l only produces a warning string.
  std::vector<std::string> validate() const;
};

/// Complex signal Rabi frequency with the LO phase as baseline:
/// Omega_s(t,z) = (mu34/hbar) E_s exp(j(omega_delta t - k_l z theta_delta
/// + varphi_delta)). The modulus is independent of t and z.
std::complex<double> rabi_signal(const FieldScene& scene,
                                 const AtomSystem& sys, double t, double z);

/// Same construction for an interferer wave relative to the LO baseline.
std::complex<double> rabi_relative(const PlaneWave& lo, const PlaneWave& wave,
                                   const AtomSystem& sys, double t, double z);

/// Blackbody spectral radiance Lambda(f) = 2 pi Z0 kB T f^2 / c^2,
/// in V^2 m^-2 s (per unit bandwidth).
double bbr_radiance(double frequency, double temperature);

/// Spatial correlation of the isotropic BBR field: sinc(2 (z - z') / lambda).
double bbr_spatial_correlation(double z, double z_prime, double wavelength);

/// Samples of a zero-mean Gaussian field on a position grid whose
/// covariance is radiance * sinc(2 (z_i - z_j) / lambda) per unit
/// bandwidth. The factorization is by eigendecomposition with negative
/// eigenvalues clipped at zero (the sinc kernel is only PSD up to
/// discretization error).
class BbrFieldSampler {
 public:
  BbrFieldSampler(std::vector<double> grid, double wavelength,
                  double radiance);

  /// Real Gaussian sample; deterministic (bit-exact) for a given seed.
  Eigen::VectorXd sample(std::uint64_t seed, std::uint64_t stream = 0) const;

  /// Complex circular sample with E[e e*] matching the covariance and
  /// E[e e] = 0, as the isotropic-noise model assumes. Used by the
  /// Monte-Carlo noise-density oracles.
  Eigen::VectorXcd sample_complex(std::uint64_t seed,
                                  std::uint64_t stream = 0) const;

  const std::vector<double>& grid() const { return grid_; }
  /// Fraction of the covariance trace removed by eigenvalue clipping.
  double clipped_fraction() const { return clipped_fraction_; }
  /// True when the clipped mass exceeds 1e-6 of the trace.
  bool covariance_not_psd_warning() const { return clipped_fraction_ > 1e-6; }

 private:
  std::vector<double> grid_;
  Eigen::MatrixXd factor_;  // B with B B^T = clipped covariance
  double clipped_fraction_ = 0.0;
};

/// One-shot convenience wrapper for the sampler.
Eigen::VectorXd sample_bbr_field(const std::vector<double>& grid,
                                 double wavelength, double radiance,
                                 std::uint64_t seed);

}  // namespace raresim
