#pragma once

#include <Eigen/Dense>
#include <complex>

namespace raresim {

/// Four-level ladder system of an alkali Rydberg receiver:
/// ground |1> -- probe --> |2> -- coupling --> Rydberg |3> -- RF --> |4>.
/// All rates and detunings are angular frequencies in rad/s.
struct AtomSystem {
  double gamma2 = 0.0;  ///< spontaneous decay of |2> (rad/s)
  double gamma3 = 0.0;  ///< spontaneous decay of |3> (rad/s)
  double gamma4 = 0.0;  ///< spontaneous decay of |4> (rad/s)

  double mu12 = 0.0;  ///< |1>-|2> transition dipole moment (C m)
  double mu34 = 0.0;  ///< |3>-|4> transition dipole moment (C m)

  double delta_p = 0.0;  ///< probe detuning from |1>-|2> resonance (rad/s)
  double delta_c = 0.0;  ///< coupling detuning from |2>-|3> resonance (rad/s)
  double delta_l = 0.0;  ///< LO detuning from |3>-|4> resonance (rad/s)

  double probe_rabi = 0.0;     ///< Omega_p (rad/s, real nonnegative)
  double coupling_rabi = 0.0;  ///< Omega_c (rad/s, real nonnegative)

  double probe_wavelength = 0.0;     ///< lambda_p (m)
  double coupling_wavelength = 0.0;  ///< lambda_c (m)

  double atom_mass = 0.0;       ///< m (kg)
  double atomic_density = 0.0;  ///< N0 (m^-3)

  double probe_angular_frequency() const;  ///< omega_p = 2 pi c / lambda_p
  double probe_wavenumber() const;         ///< k_p = 2 pi / lambda_p

  /// Throws Error if an invariant (nonnegative rates/Rabi, positive
  /// wavelengths and density) is violated.
  void validate() const;
};

/// Thermal environment plus the Doppler-averaging discretization.
struct Environment {
  double temperature = 290.0;       ///< T_env (K)
  int doppler_nodes = 41;           ///< Gauss-Hermite node count (odd, >= 3)
  double doppler_truncation = 5.0;  ///< +/- multiple of u, trapezoid fallback

  /// Most probable thermal speed u = sqrt(kB T / m). This follows the
  /// one-dimensional Gaussian weight exp(-v^2/u^2)/(sqrt(pi) u) used in
  /// the averaging integral (no sqrt(2) in u).
  double thermal_velocity(const AtomSystem& sys) const;

  void validate() const;
};

/// Susceptibility and slope at the LO operating point.
struct SusceptibilityPoint {
  double chi = 0.0;        ///< chi_l (m^-1)
  double chi_slope = 0.0;  ///< d chi / d Omega at Omega_l (m^-1 per rad/s)
  double rabi = 0.0;       ///< Omega_l (rad/s)
};

using Matrix4c = Eigen::Matrix4cd;

/// Rotating-frame Hamiltonian divided by hbar (entries in rad/s).
/// rabi_rf is the total complex RF Rabi frequency Omega_l+Omega_s+Omega_n;
/// it enters the (4,3) entry as rabi_rf/2 and (3,4) as its conjugate.
Matrix4c hamiltonian_rotating_frame(const AtomSystem& sys,
                                    std::complex<double> rabi_rf);

/// Right-hand side of the master equation:
/// d rho/dt = -i [H, rho]/hbar - {Gamma, rho}/2 + Lambda(rho),
/// with Gamma = diag{0, g2, g3, g4} and
/// Lambda = diag{g2 rho22 + g4 rho44, g3 rho33, 0, 0}.
/// Trace of the result is zero (population conserving).
Matrix4c lindblad_rhs(const AtomSystem& sys, const Matrix4c& rho,
                      std::complex<double> rabi_rf);

/// Steady state of the master equation. The 16 complex entries of rho are
/// vectorized, the generator is assembled as a 16x16 linear operator, one
/// row is replaced by the trace constraint, and the system is solved
/// directly. Throws SingularSystemError when the remaining system is rank
/// deficient (no unique steady state).
Matrix4c steady_state(const AtomSystem& sys, std::complex<double> rabi_rf);

/// Doppler-averaged rho12: Gauss-Hermite quadrature of the steady-state
/// coherence over the 1-D Maxwell velocity distribution, with the probe
/// detuning shifted by -2 pi v / lambda_p and the coupling detuning by
/// +2 pi v / lambda_c (counter-propagating beams).
std::complex<double> doppler_average_rho12(const AtomSystem& sys,
                                           const Environment& env,
                                           std::complex<double> rabi_rf);

/// Trapezoid fallback on [-trunc u, +trunc u] for cross-checking the
/// Gauss-Hermite result.
std::complex<double> doppler_average_rho12_trapezoid(
    const AtomSystem& sys, const Environment& env,
    std::complex<double> rabi_rf, int n_points);

/// Probe-laser amplitude attenuation coefficient at RF Rabi amplitude
/// rabi_amp: chi = -(k_p N0 mu12^2)/(eps0 hbar Omega_p) Im(rho12_bar).
/// k_p is taken as the wavenumber 2 pi / lambda_p.
double susceptibility(const AtomSystem& sys, const Environment& env,
                      double rabi_amp);

/// d chi / d Omega at rabi_l, central difference with step
/// h = max(1e-4 rabi_l, 2 pi * 10 rad/s). The h/2 estimate is returned and
/// checked against the h estimate; more than 1e-4 relative disagreement
/// throws NonConvergedError.
double susceptibility_slope(const AtomSystem& sys, const Environment& env,
                            double rabi_l);

/// Builds the full operating point (chi, slope) at Omega_l.
SusceptibilityPoint susceptibility_point(const AtomSystem& sys,
                                         const Environment& env,
                                         double rabi_l);

// Density-matrix diagnostics used by the invariant checks.
double trace_error(const Matrix4c& rho);        ///< |tr(rho) - 1|
double hermiticity_error(const Matrix4c& rho);  ///< max |rho - rho^dagger|
double min_eigenvalue(const Matrix4c& rho);     ///< smallest eigenvalue

}  // namespace raresim
