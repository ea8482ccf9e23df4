#include "raresim/fields.hpp"

#include <cmath>

#include "raresim/constants.hpp"
#include "raresim/errors.hpp"
#include "raresim/numerics.hpp"
#include "raresim/rng.hpp"

namespace raresim {

using namespace constants;
using Complex = std::complex<double>;

double PlaneWave::frequency() const { return angular_frequency / two_pi; }

double PlaneWave::wavelength() const {
  return two_pi * speed_of_light / angular_frequency;
}

double PlaneWave::wavenumber() const {
  return angular_frequency / speed_of_light;
}

void PlaneWave::validate(const char* name) const {
  if (strength < 0)
    throw Error(std::string(name) + ": field strength must be >= 0");
  if (angular_frequency <= 0)
    throw Error(std::string(name) + ": angular frequency must be > 0");
  if (std::abs(direction) > 1.0)
    throw Error(std::string(name) + ": |sin(angle)| cannot exceed 1");
}

double FieldScene::beat() const {
  return signal.angular_frequency - lo.angular_frequency;
}

double FieldScene::direction_offset() const {
  return signal.direction - lo.direction;
}

double FieldScene::phase_offset() const {
  return signal.phase - lo.phase;
}

std::vector<std::string> FieldScene::validate() const {
  lo.validate("scene.lo");
  signal.validate("scene.signal");
  for (const auto& w : interferers) w.validate("scene.interferer");
  if (lo.strength <= 0) throw Error("scene.lo: LO strength must be > 0");

  std::vector<std::string> warnings;
  if (std::abs(beat()) >= 1e-3 * lo.angular_frequency)
    warnings.push_back(
        "scene: beat frequency is not small against the carrier "
        "(narrowband model assumption stressed)");
  return warnings;
}

Complex rabi_relative(const PlaneWave& lo, const PlaneWave& wave,
                      const AtomSystem& sys, double t, double z) {
  const double omega_delta = wave.angular_frequency - lo.angular_frequency;
  const double theta_delta = wave.direction - lo.direction;
  const double phase_delta = wave.phase - lo.phase;
  const double arg =
      omega_delta * t - lo.wavenumber() * z * theta_delta + phase_delta;
  return (sys.mu34 / hbar) * wave.strength *
         Complex(std::cos(arg), std::sin(arg));
}

Complex rabi_signal(const FieldScene& scene, const AtomSystem& sys, double t,
                    double z) {
  return rabi_relative(scene.lo, scene.signal, sys, t, z);
}

double bbr_radiance(double frequency, double temperature) {
  if (frequency <= 0 || temperature <= 0)
    throw Error("bbr_radiance: frequency and temperature must be > 0");
  return two_pi * vacuum_impedance * boltzmann * temperature * frequency *
         frequency / (speed_of_light * speed_of_light);
}

double bbr_spatial_correlation(double z, double z_prime, double wavelength) {
  if (wavelength <= 0)
    throw Error("bbr_spatial_correlation: wavelength must be > 0");
  return sinc(2.0 * (z - z_prime) / wavelength);
}

BbrFieldSampler::BbrFieldSampler(std::vector<double> grid, double wavelength,
                                 double radiance)
    : grid_(std::move(grid)) {
  const auto n = static_cast<Eigen::Index>(grid_.size());
  if (n < 2) throw Error("BbrFieldSampler: grid needs >= 2 points");
  for (std::size_t i = 1; i < grid_.size(); ++i)
    if (!(grid_[i] > grid_[i - 1]))
      throw Error("BbrFieldSampler: grid must be strictly increasing");

  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      double c = radiance * bbr_spatial_correlation(grid_[i], grid_[j],
                                                    wavelength);
      cov(i, j) = c;
      cov(j, i) = c;
    }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  Eigen::VectorXd ev = es.eigenvalues();
  double clipped = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (ev(i) < 0) {
      clipped -= ev(i);
      ev(i) = 0.0;
    }
  double trace = cov.trace();
  clipped_fraction_ = trace > 0 ? clipped / trace : 0.0;
  factor_ = es.eigenvectors() * ev.cwiseSqrt().asDiagonal();
}

Eigen::VectorXd BbrFieldSampler::sample(std::uint64_t seed,
                                        std::uint64_t stream) const {
  Rng rng(seed, stream);
  Eigen::VectorXd g(factor_.cols());
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = rng.gaussian();
  return factor_ * g;
}

Eigen::VectorXcd BbrFieldSampler::sample_complex(std::uint64_t seed,
                                                 std::uint64_t stream) const {
  // Two independent real fields; 1/sqrt(2) keeps E[e e*] at the covariance.
  Eigen::VectorXd re = sample(seed, 2 * stream);
  Eigen::VectorXd im = sample(seed, 2 * stream + 1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Eigen::VectorXcd out(re.size());
  for (Eigen::Index i = 0; i < re.size(); ++i)
    out(i) = inv_sqrt2 * Complex(re(i), im(i));
  return out;
}

Eigen::VectorXd sample_bbr_field(const std::vector<double>& grid,
                                 double wavelength, double radiance,
                                 std::uint64_t seed) {
  return BbrFieldSampler(grid, wavelength, radiance).sample(seed);
}

}  // namespace raresim
