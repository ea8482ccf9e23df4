#include "raresim/cell_segmental.hpp"

#include <cmath>
#include <limits>

#include "raresim/constants.hpp"
#include "raresim/errors.hpp"
#include "raresim/numerics.hpp"

namespace raresim {

using namespace constants;

void SegmentalCell::validate() const {
  if (total_length <= 0) throw Error("segmental cell: length must be > 0");
  if (segments < 1) throw Error("segmental cell: need >= 1 segment");
  if (gap < 0) throw Error("segmental cell: gap must be >= 0");
}

double dirichlet(int segments, double x) {
  if (segments < 1) throw Error("dirichlet: M must be >= 1");
  if (segments == 1) return 1.0;

  const double n = std::round(x);
  const double eps = x - n;
  const double m = segments;
  if (std::abs(eps) >= 1e-7)
    return std::sin(m * pi * x) / (m * std::sin(pi * x));

  // Series around the removable singularity at integer n:
  // Xi = (-1)^(n (M-1)) [1 - (pi eps)^2 (M^2 - 1) / 6 + O(eps^4)]
  const bool negate =
      (static_cast<long long>(n) * (segments - 1)) % 2 != 0;
  double pe = pi * eps;
  double value = 1.0 - pe * pe * (m * m - 1.0) / 6.0;
  return negate ? -value : value;
}

IntrinsicGain intrinsic_gain_segmental(const SegmentalCell& cell,
                                       const ReceiverChain& chain,
                                       const FieldScene& scene,
                                       const AtomSystem& sys) {
  const double lambda = scene.lo.wavelength();
  const double theta_delta = scene.direction_offset();
  const double xs = cell.segment_length() * theta_delta / lambda;
  const double xe = cell.pitch() * theta_delta / lambda;

  IntrinsicGain g;
  g.kappa = chain.input_current() *
            std::exp(-cell.chi_point.chi * cell.total_length) *
            cell.total_length * sinc(xs) * dirichlet(cell.segments, xe) *
            cell.chi_point.chi_slope * sys.mu34 / hbar;
  g.phase = scene.phase_offset() - pi * xs - pi * (cell.segments - 1) * xe;
  return g;
}

double pattern_segmental(double theta_delta, const SegmentalCell& cell,
                         double wavelength) {
  double s = sinc(cell.segment_length() * theta_delta / wavelength);
  double d = dirichlet(cell.segments,
                       cell.pitch() * theta_delta / wavelength);
  double g = s * d;
  return g * g;
}

double hpbw_segmental_analytic(const SegmentalCell& cell, double wavelength) {
  cell.validate();
  double w = 0.886 * wavelength / (cell.segments * cell.pitch());
  if (w >= 2.0)
    throw HpbwUndefinedError(
        "hpbw: beam wider than the visible region (short cell)");
  return w;
}

double hpbw_segmental(const SegmentalCell& cell, double wavelength) {
  cell.validate();
  if (cell.segments == 1)
    return hpbw_continuous(cell.total_length, wavelength);
  hpbw_segmental_analytic(cell, wavelength);

  // Both factors decrease monotonically over the array main lobe
  // [0, lambda / (M d_e)], so the product is bisectable there.
  double first_null = wavelength / (cell.segments * cell.pitch());
  double hi = std::min(first_null, 2.0);
  auto g = [&](double td) {
    return pattern_segmental(td, cell, wavelength) - 0.5;
  };
  if (g(hi) > 0.0)
    throw HpbwUndefinedError(
        "hpbw: pattern never reaches half power inside the visible region");
  double half = bisect_root(g, 0.0, hi, 1e-12 * hi);
  return 2.0 * half;
}

double bbr_noise_density_segmental(const SegmentalCell& cell,
                                   const ReceiverChain& chain,
                                   const AtomSystem& sys, double wavelength,
                                   double theta_l, double radiance) {
  const double i_in = chain.input_current();
  const double attenuation =
      std::exp(-2.0 * cell.chi_point.chi * cell.total_length);
  const double geometry =
      cell.segments * xi(cell.segment_length() / wavelength, theta_l);
  const double slope_mu = cell.chi_point.chi_slope * sys.mu34 / hbar;
  return 0.5 * i_in * i_in * attenuation * geometry * wavelength *
         wavelength * slope_mu * slope_mu * radiance;
}

namespace {

double safe_ratio(double num, double den) {
  if (den == 0.0)
    return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

SnrReport assemble(const SegmentalCell& cell, const ReceiverChain& chain,
                   const FieldScene& scene, const MeasurementWindow& window,
                   const IntrinsicGain& gain, double pattern,
                   double bbr_density) {
  SnrReport r;
  r.intrinsic_gain = gain.kappa;
  r.signal_phase = gain.phase;
  r.pattern_gain = pattern;
  r.signal_energy = signal_energy(gain, scene.signal.strength, window);
  r.bbr_density = bbr_density;
  r.psn_density = psn_density(chain, cell.as_continuous());
  r.snr_bbr = safe_ratio(r.signal_energy, r.bbr_density);
  r.snr_psn = safe_ratio(r.signal_energy, r.psn_density);
  r.snr_total = safe_ratio(r.signal_energy, r.bbr_density + r.psn_density);
  return r;
}

double bbr_density_from_geometry(const SegmentalCell& cell,
                                 const ReceiverChain& chain,
                                 const AtomSystem& sys, double wavelength,
                                 double geometry, double radiance) {
  const double i_in = chain.input_current();
  const double attenuation =
      std::exp(-2.0 * cell.chi_point.chi * cell.total_length);
  const double slope_mu = cell.chi_point.chi_slope * sys.mu34 / hbar;
  return 0.5 * i_in * i_in * attenuation * geometry * wavelength *
         wavelength * slope_mu * slope_mu * radiance;
}

}  // namespace

SnrReport snr_segmental(const SegmentalCell& cell, const ReceiverChain& chain,
                        const FieldScene& scene, const AtomSystem& sys,
                        const MeasurementWindow& window, double radiance) {
  cell.validate();
  chain.validate();
  const double lambda = scene.lo.wavelength();
  IntrinsicGain gain = intrinsic_gain_segmental(cell, chain, scene, sys);
  double pattern =
      pattern_segmental(scene.direction_offset(), cell, lambda);
  double nb = bbr_noise_density_segmental(cell, chain, sys, lambda,
                                          scene.lo.direction, radiance);
  return assemble(cell, chain, scene, window, gain, pattern, nb);
}

SnrReport snr_segmental_short(const SegmentalCell& cell,
                              const ReceiverChain& chain,
                              const FieldScene& scene, const AtomSystem& sys,
                              const MeasurementWindow& window,
                              double radiance) {
  cell.validate();
  chain.validate();
  const double lambda = scene.lo.wavelength();
  const double ds = cell.segment_length() / lambda;
  IntrinsicGain gain = intrinsic_gain_segmental(cell, chain, scene, sys);
  double pattern =
      pattern_segmental(scene.direction_offset(), cell, lambda);
  double nb = bbr_density_from_geometry(cell, chain, sys, lambda,
                                        cell.segments * ds * ds, radiance);
  return assemble(cell, chain, scene, window, gain, pattern, nb);
}

SnrReport snr_segmental_long(const SegmentalCell& cell,
                             const ReceiverChain& chain,
                             const FieldScene& scene, const AtomSystem& sys,
                             const MeasurementWindow& window,
                             double radiance) {
  cell.validate();
  chain.validate();
  const double lambda = scene.lo.wavelength();
  IntrinsicGain gain = intrinsic_gain_segmental(cell, chain, scene, sys);
  double pattern =
      pattern_segmental(scene.direction_offset(), cell, lambda);
  // M * d_s / (2 lambda) = L / (2 lambda): same as the long continuous cell.
  double nb = bbr_density_from_geometry(
      cell, chain, sys, lambda, 0.5 * cell.total_length / lambda, radiance);
  return assemble(cell, chain, scene, window, gain, pattern, nb);
}

RegimePair regime_snrs_segmental(const SegmentalCell& cell,
                                 const ReceiverChain& chain,
                                 const FieldScene& scene,
                                 const AtomSystem& sys,
                                 const MeasurementWindow& window,
                                 double radiance, SegmentRegime regime) {
  if (regime == SegmentRegime::long_segments)
    return regime_snrs_long(cell.as_continuous(), chain, scene, sys, window,
                            radiance);

  const double es2 = scene.signal.strength * scene.signal.strength;
  const double ts = window.duration;
  const double beta = chain.psn_beta(sys.mu34, cell.chi_point.chi_slope);

  RegimePair p;
  p.snr_bbr = cell.segments * es2 * ts / radiance;
  p.snr_psn = cell.total_length * cell.total_length *
              std::exp(-cell.chi_point.chi * cell.total_length) * es2 * ts /
              beta;
  return p;
}

}  // namespace raresim
