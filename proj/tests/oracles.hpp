#pragma once

// Test-only oracles, independent of the implementation paths they check:
// explicit RK4 time integration of the master equation, Riemann sums for
// the noise geometry factor, direct spatial/time integration of the
// first-order current, and a single-bin Fourier amplitude/phase fit.

#include <cmath>
#include <complex>

#include "raresim/atom.hpp"
#include "raresim/cell_continuous.hpp"
#include "raresim/constants.hpp"
#include "raresim/fields.hpp"
#include "raresim/numerics.hpp"

namespace raresim::testing {

/// RK4 integration of d rho/dt = lindblad_rhs from rho0 to t_end.
inline Matrix4c integrate_lindblad(const AtomSystem& sys,
                                   std::complex<double> rabi_rf,
                                   Matrix4c rho, double t_end, double dt) {
  auto rhs = [&](const Matrix4c& r) { return lindblad_rhs(sys, r, rabi_rf); };
  double t = 0.0;
  while (t < t_end) {
    double h = std::min(dt, t_end - t);
    Matrix4c k1 = rhs(rho);
    Matrix4c k2 = rhs(rho + 0.5 * h * k1);
    Matrix4c k3 = rhs(rho + 0.5 * h * k2);
    Matrix4c k4 = rhs(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
  }
  return rho;
}

/// Midpoint Riemann sum of the xi integrand over [-d, d].
inline double xi_riemann(double d, double theta_l, long n) {
  using constants::two_pi;
  double h = 2.0 * d / n;
  double acc = 0.0;
  for (long i = 0; i < n; ++i) {
    double u = -d + (i + 0.5) * h;
    acc += (d - std::abs(u)) * sinc(2.0 * u) *
           std::cos(two_pi * theta_l * u);
  }
  return acc * h;
}

/// Amplitude and phase of y(t) ~ A cos(w t + phi) from a single-bin
/// Fourier projection over one period (exact for a pure sinusoid).
struct SinusoidFit {
  double amplitude = 0.0;
  double phase = 0.0;
};
template <typename F>
SinusoidFit fit_sinusoid(F&& y, double omega, int samples = 256) {
  using constants::two_pi;
  double period = two_pi / omega;
  double c = 0.0, s = 0.0;
  for (int k = 0; k < samples; ++k) {
    double t = period * k / samples;
    double v = y(t);
    c += v * std::cos(omega * t);
    s += v * std::sin(omega * t);
  }
  c *= 2.0 / samples;
  s *= 2.0 / samples;
  SinusoidFit fit;
  fit.amplitude = std::hypot(c, s);
  fit.phase = std::atan2(-s, c);
  return fit;
}

/// Direct trapezoid evaluation of the first-order signal integral
/// int Re{E_s(t,z) e^{-j angle(E_l(t,z))}} dz over [z0, z1].
inline double signal_projection_integral(const FieldScene& scene, double t,
                                         double z0, double z1, long n) {
  const double omega_delta = scene.beat();
  const double k_l = scene.lo.wavenumber();
  const double theta_delta = scene.direction_offset();
  const double phase_delta = scene.phase_offset();
  double h = (z1 - z0) / n;
  double acc = 0.0;
  for (long i = 0; i <= n; ++i) {
    double z = z0 + i * h;
    double w = (i == 0 || i == n) ? 0.5 : 1.0;
    acc += w * scene.signal.strength *
           std::cos(omega_delta * t - k_l * z * theta_delta + phase_delta);
  }
  return acc * h;
}

/// Wrap an angle difference into (-pi, pi].
inline double wrap_angle(double a) {
  using constants::pi;
  using constants::two_pi;
  while (a > pi) a -= two_pi;
  while (a <= -pi) a += two_pi;
  return a;
}

}  // namespace raresim::testing
