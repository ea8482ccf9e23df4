#pragma once

#include "raresim/cell_continuous.hpp"

namespace raresim {

/// Vapor cell uniformly split into M segments of length d_s = L / M at
/// pitch d_e = d_s + d_g; clear-air gaps carry no atoms and no loss.
/// M = 1 reduces every quantity to the continuous cell of length L.
struct SegmentalCell {
  double total_length = 0.0;  ///< L (m): summed length of the segments
  int segments = 1;           ///< M >= 1
  double gap = 0.0;           ///< d_g (m) >= 0
  SusceptibilityPoint chi_point;

  double segment_length() const { return total_length / segments; }  ///< d_s
  double pitch() const { return segment_length() + gap; }            ///< d_e
  /// L_e = L + (M - 1) d_g
  double effective_length() const {
    return total_length + (segments - 1) * gap;
  }

  ContinuousCell as_continuous() const {
    return ContinuousCell{total_length, chi_point};
  }

  void validate() const;
};

/// Dirichlet sinc Xi_M(x) = sin(M pi x) / (M sin(pi x)).
/// Removable singularities at integer x evaluate to (-1)^(n (M-1)) via a
/// series expansion near the pole; |Xi_M| <= 1 everywhere.
double dirichlet(int segments, double x);

/// Intrinsic gain with pattern multiplication:
/// kappa = I_in e^{-chi L} L sinc(d_s theta/lambda) Xi_M(d_e theta/lambda)
/// chi_slope mu34 / hbar; carrier phase
/// varphi'' = varphi_delta - pi d_s theta/lambda - pi (M-1) d_e theta/lambda.
IntrinsicGain intrinsic_gain_segmental(const SegmentalCell& cell,
                                       const ReceiverChain& chain,
                                       const FieldScene& scene,
                                       const AtomSystem& sys);

/// Pattern G = sinc^2(d_s theta/lambda) Xi_M^2(d_e theta/lambda).
double pattern_segmental(double theta_delta, const SegmentalCell& cell,
                         double wavelength);

/// Segmental half-power beamwidth. Numeric: bisection of the product
/// pattern inside the array main lobe; analytic: 0.886 lambda / (M d_e).
double hpbw_segmental(const SegmentalCell& cell, double wavelength);
double hpbw_segmental_analytic(const SegmentalCell& cell, double wavelength);

/// BBR density with uncorrelated per-segment fields:
/// M xi(d_s / lambda; theta_l) replaces xi(L / lambda; theta_l).
double bbr_noise_density_segmental(const SegmentalCell& cell,
                                   const ReceiverChain& chain,
                                   const AtomSystem& sys, double wavelength,
                                   double theta_l, double radiance);

/// Full exact SNR report of the segmental cell.
SnrReport snr_segmental(const SegmentalCell& cell, const ReceiverChain& chain,
                        const FieldScene& scene, const AtomSystem& sys,
                        const MeasurementWindow& window, double radiance);

/// Short-segment asymptotics (d_s << lambda): geometry factor L^2 / (M
/// lambda^2); long-segment (d_s >> lambda): L / (2 lambda), mirroring the
/// long continuous cell.
SnrReport snr_segmental_short(const SegmentalCell& cell,
                              const ReceiverChain& chain,
                              const FieldScene& scene, const AtomSystem& sys,
                              const MeasurementWindow& window,
                              double radiance);
SnrReport snr_segmental_long(const SegmentalCell& cell,
                             const ReceiverChain& chain,
                             const FieldScene& scene, const AtomSystem& sys,
                             const MeasurementWindow& window, double radiance);

/// Aligned-direction regime SNRs. Short segments give
/// snr_bbr = M E_s^2 T_s / Lambda; long segments mirror the long
/// continuous cell's pair. The PSN regime is identical in both.
enum class SegmentRegime { short_segments, long_segments };
RegimePair regime_snrs_segmental(const SegmentalCell& cell,
                                 const ReceiverChain& chain,
                                 const FieldScene& scene,
                                 const AtomSystem& sys,
                                 const MeasurementWindow& window,
                                 double radiance,
                                 SegmentRegime regime =
                                     SegmentRegime::short_segments);

}  // namespace raresim
