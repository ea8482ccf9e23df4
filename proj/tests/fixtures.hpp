#pragma once

// Shared test setups: the reference receiver configuration used across the
// closed-form tests, and a heavily damped quantum system whose Doppler
// integrand is smooth enough for spectral quadrature convergence.

#include "raresim/cell_segmental.hpp"
#include "raresim/constants.hpp"

namespace raresim::testing {

struct ReferenceSetup {
  AtomSystem atom;
  FieldScene scene;
  ReceiverChain chain;
  MeasurementWindow window;
  double radiance = 0.0;
  SusceptibilityPoint chi_point;
  double lambda = 0.0;

  ContinuousCell continuous(double length) const {
    return ContinuousCell{length, chi_point};
  }
  SegmentalCell segmental(double length, int segments, double gap) const {
    return SegmentalCell{length, segments, gap, chi_point};
  }
};

/// Cs-133 superheterodyne reference configuration (chi-override mode):
/// 6.9458 GHz carrier, 34.6 mV/m LO, 154.9 uV/m signal, 120 uW probe at
/// 852 nm with eta = 0.8, 100 kHz beat over a 10 us window, 290 K, and the
/// operating point chi = 42.4 m^-1, dchi/dOmega = 2.08e-5 m^-1/(rad/s).
inline ReferenceSetup reference_setup(double theta_l = 0.0,
                                      double theta_s = 0.0) {
  using namespace constants;
  ReferenceSetup s;

  s.atom.mu34 = 2500.0 * e_times_a0;
  s.atom.probe_wavelength = 852e-9;

  s.scene.lo.strength = 34.6e-3;
  s.scene.lo.angular_frequency = two_pi * 6.9458e9;
  s.scene.lo.direction = theta_l;
  s.scene.lo.phase = 0.0;
  s.scene.signal.strength = 154.9e-6;
  s.scene.signal.angular_frequency =
      s.scene.lo.angular_frequency + two_pi * 1e5;
  s.scene.signal.direction = theta_s;
  s.scene.signal.phase = 0.0;

  s.chain.input_power = 120e-6;
  s.chain.quantum_efficiency = 0.8;
  s.chain.probe_angular_frequency = s.atom.probe_angular_frequency();

  s.window = MeasurementWindow::make(10e-6, s.scene.beat());
  s.radiance = 2.0 * pi * vacuum_impedance * boltzmann * 290.0 *
               s.scene.lo.frequency() * s.scene.lo.frequency() /
               (speed_of_light * speed_of_light);
  s.lambda = s.scene.lo.wavelength();

  s.chi_point.chi = 42.4;
  s.chi_point.chi_slope = 2.08e-5;
  s.chi_point.rabi = s.atom.mu34 * s.scene.lo.strength / hbar;
  return s;
}

/// Strongly damped ladder system: every spectral feature is much wider
/// than the Gauss-Hermite node spacing at sub-kelvin temperatures, so the
/// Doppler average converges spectrally with node count.
inline AtomSystem smooth_quantum_system() {
  using namespace constants;
  AtomSystem a;
  a.gamma2 = two_pi * 100e6;
  a.gamma3 = two_pi * 30e6;
  a.gamma4 = two_pi * 20e6;
  a.mu12 = 3.8e-29;
  a.mu34 = 2.0e-26;
  a.delta_p = 0.0;
  a.delta_c = 0.0;
  a.delta_l = 0.0;
  a.probe_rabi = two_pi * 5e6;
  a.coupling_rabi = two_pi * 20e6;
  a.probe_wavelength = 852e-9;
  a.coupling_wavelength = 509e-9;
  a.atom_mass = 2.20694650e-25;
  a.atomic_density = 4.89e16;
  return a;
}

inline Environment cold_environment(double temperature = 0.1) {
  Environment env;
  env.temperature = temperature;
  env.doppler_nodes = 41;
  env.doppler_truncation = 5.0;
  return env;
}

}  // namespace raresim::testing
