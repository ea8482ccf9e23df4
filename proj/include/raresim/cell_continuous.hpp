#pragma once

#include <string>
#include <vector>

#include "raresim/atom.hpp"
#include "raresim/fields.hpp"

namespace raresim {

/// Continuous vapor cell of length L with its operating point.
struct ContinuousCell {
  double length = 0.0;  ///< L (m), > 0
  SusceptibilityPoint chi_point;

  void validate() const;
};

/// Photodetector chain. The equivalent input current and the PSN strength
/// constant are derived quantities.
struct ReceiverChain {
  double input_power = 0.0;         ///< P_in (W)
  double quantum_efficiency = 0.0;  ///< eta in (0, 1]
  double probe_angular_frequency = 0.0;  ///< omega_p (rad/s)

  /// I_in = q eta P_in / (hbar omega_p)
  double input_current() const;
  /// beta_l = 2 hbar^2 q / (I_in mu34^2 chi_slope^2), in V^2 s.
  double psn_beta(double mu34, double chi_slope) const;

  void validate() const;
};

/// Matched-filter window, T_s = 2 n pi / omega_delta with integer n >= 1.
struct MeasurementWindow {
  double duration = 0.0;  ///< T_s (s)
  double beat = 0.0;      ///< omega_delta (rad/s)
  bool aligned = true;    ///< requested duration within 1% of 2 n pi / beat
  double adjustment = 0.0;  ///< |T_requested - T_s| / T_s

  double bandwidth() const { return 1.0 / duration; }

  /// Rounds the requested duration to the nearest whole number of beat
  /// periods. When the rounding moves the duration by more than 1% the
  /// window is marked unaligned and the exact signal-energy integral is
  /// used downstream instead of the half-power shortcut.
  static MeasurementWindow make(double requested_duration, double beat);
};

/// Closed-form pattern gain, intrinsic gain and energy/noise budget of one
/// reception configuration.
struct SnrReport {
  double signal_energy = 0.0;   ///< P_s (A^2 s)
  double bbr_density = 0.0;     ///< N_bbr (A^2 s)
  double psn_density = 0.0;     ///< N_psn (A^2 s)
  double snr_bbr = 0.0;         ///< P_s / N_bbr (inf when N_bbr = 0)
  double snr_psn = 0.0;         ///< P_s / N_psn
  double snr_total = 0.0;       ///< P_s / (N_bbr + N_psn)
  double pattern_gain = 0.0;    ///< G(theta_delta) in [0, 1]
  double intrinsic_gain = 0.0;  ///< kappa(theta_delta) (A m / V)
  double signal_phase = 0.0;    ///< varphi_delta' (rad)
};

/// Harmonic combination snr_b snr_p / (snr_b + snr_p) with the infinite
/// and zero regimes handled explicitly.
double combine_regime_snrs(double snr_bbr, double snr_psn);

/// xi(d; theta_l) = integral over [-d, d] of
/// (d - |u|) sinc(2u) cos(2 pi theta_l u) du, evaluated by adaptive
/// quadrature to 1e-10 * max(d^2, d/2) absolute tolerance.
double xi(double d, double theta_l);

/// Intrinsic gain of the continuous cell:
/// kappa = I_in e^{-chi L} L sinc(L theta_delta / lambda) chi_slope mu34 /
/// hbar, with carrier phase varphi' = varphi_delta - pi L theta_delta /
/// lambda. The sign of kappa follows the sinc lobe.
struct IntrinsicGain {
  double kappa = 0.0;  ///< A m / V
  double phase = 0.0;  ///< rad
};
IntrinsicGain intrinsic_gain_continuous(const ContinuousCell& cell,
                                        const ReceiverChain& chain,
                                        const FieldScene& scene,
                                        const AtomSystem& sys);

/// Accumulated signal energy over the window. For aligned windows this is
/// kappa^2 E_s^2 T_s / 2 exactly; otherwise the cosine-squared integral is
/// evaluated in closed form with the carrier phase.
double signal_energy(const IntrinsicGain& gain, double field_strength,
                     const MeasurementWindow& window);

/// BBR noise power density of the continuous cell (A^2 s).
double bbr_noise_density_continuous(const ContinuousCell& cell,
                                    const ReceiverChain& chain,
                                    const AtomSystem& sys, double wavelength,
                                    double theta_l, double radiance);

/// Photon shot-noise density q I_in e^{-chi L}.
double psn_density(const ReceiverChain& chain, const ContinuousCell& cell);

/// Full exact SNR report of the continuous cell.
SnrReport snr_continuous(const ContinuousCell& cell,
                         const ReceiverChain& chain, const FieldScene& scene,
                         const AtomSystem& sys,
                         const MeasurementWindow& window, double radiance);

/// Short-cell asymptotics (L << lambda): direction-independent, the
/// noise geometry factor collapses to (L / lambda)^2.
SnrReport snr_short_cell(const ContinuousCell& cell,
                         const ReceiverChain& chain, const FieldScene& scene,
                         const AtomSystem& sys,
                         const MeasurementWindow& window, double radiance);

/// Long-cell asymptotics (L >> lambda): geometry factor L / (2 lambda),
/// pattern sinc^2 retained.
SnrReport snr_long_cell(const ContinuousCell& cell, const ReceiverChain& chain,
                        const FieldScene& scene, const AtomSystem& sys,
                        const MeasurementWindow& window, double radiance);

/// Aligned-direction regime SNRs of the long cell:
/// snr_bbr = 2 L E_s^2 T_s / (lambda Lambda),
/// snr_psn = L^2 e^{-chi L} E_s^2 T_s / beta.
struct RegimePair {
  double snr_bbr = 0.0;
  double snr_psn = 0.0;
};
RegimePair regime_snrs_long(const ContinuousCell& cell,
                            const ReceiverChain& chain,
                            const FieldScene& scene, const AtomSystem& sys,
                            const MeasurementWindow& window, double radiance);

/// Off-beam upper bounds from the sinc envelope, valid outside the HPBW.
struct OffbeamBounds {
  double bound_bbr = 0.0;
  double bound_psn = 0.0;
};
OffbeamBounds offbeam_bounds(double theta_delta, const ContinuousCell& cell,
                             const ReceiverChain& chain,
                             const FieldScene& scene, const AtomSystem& sys,
                             const MeasurementWindow& window, double radiance);

/// Atomic aperture A_q = L^2 e^{-chi L} (m^2).
double atomic_aperture(double length, double chi);

/// Analytic aperture optimum L* = 2 / chi, A* = 4 / (e^2 chi^2).
struct ApertureOptimum {
  double length = 0.0;
  double aperture = 0.0;
};
ApertureOptimum optimal_length(double chi);
/// Golden-section maximization of A_q(L); cross-check for the optimum.
ApertureOptimum optimal_length_numeric(double chi);

/// Reception pattern G = sinc^2(L theta_delta / lambda) in [0, 1].
double pattern_continuous(double theta_delta, double length,
                          double wavelength);

/// Half-power beamwidth in theta-space. The numeric value bisects the
/// exact pattern for G = 1/2; the analytic law is 0.886 lambda / L.
/// Throws HpbwUndefinedError when the beam is wider than the visible
/// region (short cells).
double hpbw_continuous(double length, double wavelength);
double hpbw_continuous_analytic(double length, double wavelength);

}  // namespace raresim
