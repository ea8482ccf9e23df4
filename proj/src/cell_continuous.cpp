#include "raresim/cell_continuous.hpp"

#include <cmath>
#include <limits>

#include "raresim/constants.hpp"
#include "raresim/errors.hpp"
#include "raresim/numerics.hpp"

namespace raresim {

using namespace constants;

void ContinuousCell::validate() const {
  if (length <= 0) throw Error("cell: length must be > 0");
}

double ReceiverChain::input_current() const {
  return elementary_charge * quantum_efficiency * input_power /
         (hbar * probe_angular_frequency);
}

double ReceiverChain::psn_beta(double mu34, double chi_slope) const {
  double denom = input_current() * mu34 * mu34 * chi_slope * chi_slope;
  if (denom <= 0) throw Error("receiver: beta requires I_in, mu34, slope > 0");
  return 2.0 * hbar * hbar * elementary_charge / denom;
}

void ReceiverChain::validate() const {
  if (input_power <= 0) throw Error("receiver: input power must be > 0");
  if (quantum_efficiency <= 0 || quantum_efficiency > 1)
    throw Error("receiver: quantum efficiency must be in (0, 1]");
  if (probe_angular_frequency <= 0)
    throw Error("receiver: probe angular frequency must be > 0");
}

MeasurementWindow MeasurementWindow::make(double requested_duration,
                                          double beat) {
  if (requested_duration <= 0 || beat == 0)
    throw Error("window: duration and beat must be nonzero");
  double period = two_pi / std::abs(beat);
  double n = std::max(1.0, std::round(requested_duration / period));
  MeasurementWindow w;
  w.beat = beat;
  w.duration = n * period;
  w.adjustment = std::abs(requested_duration - w.duration) / w.duration;
  w.aligned = w.adjustment <= 0.01;
  if (!w.aligned) w.duration = requested_duration;
  return w;
}

double combine_regime_snrs(double snr_bbr, double snr_psn) {
  const double inf = std::numeric_limits<double>::infinity();
  if (snr_bbr == inf) return snr_psn;
  if (snr_psn == inf) return snr_bbr;
  double sum = snr_bbr + snr_psn;
  if (sum == 0.0) return 0.0;
  return snr_bbr * snr_psn / sum;
}

double xi(double d, double theta_l) {
  if (d < 0) throw Error("xi: d must be >= 0");
  if (std::abs(theta_l) > 1) throw Error("xi: |theta_l| cannot exceed 1");
  if (d == 0.0) return 0.0;

  // Even integrand; integrate [0, d] and double. The |u| kink sits at the
  // left endpoint, so every panel sees a smooth integrand.
  auto f = [d, theta_l](double u) {
    return (d - u) * sinc(2.0 * u) * std::cos(two_pi * theta_l * u);
  };
  double tol = 1e-10 * std::max(d * d, 0.5 * d);

  // Pre-split into O(1)-period panels so the oscillation is resolved
  // before adaptivity takes over.
  int panels = static_cast<int>(std::ceil(d / 0.5));
  double acc = 0.0;
  for (int i = 0; i < panels; ++i) {
    double a = d * i / panels;
    double b = d * (i + 1) / panels;
    acc += integrate_adaptive(f, a, b, tol / panels);
  }
  return 2.0 * acc;
}

IntrinsicGain intrinsic_gain_continuous(const ContinuousCell& cell,
                                        const ReceiverChain& chain,
                                        const FieldScene& scene,
                                        const AtomSystem& sys) {
  const double lambda = scene.lo.wavelength();
  const double theta_delta = scene.direction_offset();
  const double x = cell.length * theta_delta / lambda;

  IntrinsicGain g;
  g.kappa = chain.input_current() *
            std::exp(-cell.chi_point.chi * cell.length) * cell.length *
            sinc(x) * cell.chi_point.chi_slope * sys.mu34 / hbar;
  g.phase = scene.phase_offset() - pi * x;
  return g;
}

double signal_energy(const IntrinsicGain& gain, double field_strength,
                     const MeasurementWindow& window) {
  const double amp = gain.kappa * field_strength;
  if (window.aligned) return 0.5 * amp * amp * window.duration;
  // Exact integral of amp^2 cos^2(w t + phi) over [0, T].
  const double w = window.beat;
  const double t = window.duration;
  const double phi = gain.phase;
  return amp * amp *
         (0.5 * t +
          (std::sin(2.0 * (w * t + phi)) - std::sin(2.0 * phi)) / (4.0 * w));
}

double bbr_noise_density_continuous(const ContinuousCell& cell,
                                    const ReceiverChain& chain,
                                    const AtomSystem& sys, double wavelength,
                                    double theta_l, double radiance) {
  const double i_in = chain.input_current();
  const double attenuation = std::exp(-2.0 * cell.chi_point.chi * cell.length);
  const double geometry = xi(cell.length / wavelength, theta_l);
  const double slope_mu = cell.chi_point.chi_slope * sys.mu34 / hbar;
  return 0.5 * i_in * i_in * attenuation * geometry * wavelength *
         wavelength * slope_mu * slope_mu * radiance;
}

double psn_density(const ReceiverChain& chain, const ContinuousCell& cell) {
  return elementary_charge * chain.input_current() *
         std::exp(-cell.chi_point.chi * cell.length);
}

namespace {

double safe_ratio(double num, double den) {
  if (den == 0.0)
    return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

SnrReport assemble_report(const IntrinsicGain& gain, double pattern,
                          double signal_strength,
                          const MeasurementWindow& window, double bbr_density,
                          double psn) {
  SnrReport r;
  r.intrinsic_gain = gain.kappa;
  r.signal_phase = gain.phase;
  r.pattern_gain = pattern;
  r.signal_energy = signal_energy(gain, signal_strength, window);
  r.bbr_density = bbr_density;
  r.psn_density = psn;
  r.snr_bbr = safe_ratio(r.signal_energy, r.bbr_density);
  r.snr_psn = safe_ratio(r.signal_energy, r.psn_density);
  r.snr_total = safe_ratio(r.signal_energy, r.bbr_density + r.psn_density);
  return r;
}

// Noise density with the geometry factor supplied directly; shared by the
// exact and asymptotic forms.
double bbr_density_from_geometry(const ContinuousCell& cell,
                                 const ReceiverChain& chain,
                                 const AtomSystem& sys, double wavelength,
                                 double geometry, double radiance) {
  const double i_in = chain.input_current();
  const double attenuation = std::exp(-2.0 * cell.chi_point.chi * cell.length);
  const double slope_mu = cell.chi_point.chi_slope * sys.mu34 / hbar;
  return 0.5 * i_in * i_in * attenuation * geometry * wavelength *
         wavelength * slope_mu * slope_mu * radiance;
}

}  // namespace

SnrReport snr_continuous(const ContinuousCell& cell,
                         const ReceiverChain& chain, const FieldScene& scene,
                         const AtomSystem& sys,
                         const MeasurementWindow& window, double radiance) {
  cell.validate();
  chain.validate();
  const double lambda = scene.lo.wavelength();
  IntrinsicGain gain = intrinsic_gain_continuous(cell, chain, scene, sys);
  double pattern =
      pattern_continuous(scene.direction_offset(), cell.length, lambda);
  double nb = bbr_noise_density_continuous(cell, chain, sys, lambda,
                                           scene.lo.direction, radiance);
  return assemble_report(gain, pattern, scene.signal.strength, window, nb,
                         psn_density(chain, cell));
}

SnrReport snr_short_cell(const ContinuousCell& cell,
                         const ReceiverChain& chain, const FieldScene& scene,
                         const AtomSystem& sys,
                         const MeasurementWindow& window, double radiance) {
  cell.validate();
  chain.validate();
  const double lambda = scene.lo.wavelength();
  const double d = cell.length / lambda;

  // Direction-independent: sinc -> 1, xi -> d^2.
  IntrinsicGain gain;
  gain.kappa = chain.input_current() *
               std::exp(-cell.chi_point.chi * cell.length) * cell.length *
               cell.chi_point.chi_slope * sys.mu34 / hbar;
  gain.phase = scene.phase_offset();
  double nb = bbr_density_from_geometry(cell, chain, sys, lambda, d * d,
                                        radiance);
  return assemble_report(gain, 1.0, scene.signal.strength, window, nb,
                         psn_density(chain, cell));
}

SnrReport snr_long_cell(const ContinuousCell& cell, const ReceiverChain& chain,
                        const FieldScene& scene, const AtomSystem& sys,
                        const MeasurementWindow& window, double radiance) {
  cell.validate();
  chain.validate();
  const double lambda = scene.lo.wavelength();
  IntrinsicGain gain = intrinsic_gain_continuous(cell, chain, scene, sys);
  double pattern =
      pattern_continuous(scene.direction_offset(), cell.length, lambda);
  double nb = bbr_density_from_geometry(
      cell, chain, sys, lambda, 0.5 * cell.length / lambda, radiance);
  return assemble_report(gain, pattern, scene.signal.strength, window, nb,
                         psn_density(chain, cell));
}

RegimePair regime_snrs_long(const ContinuousCell& cell,
                            const ReceiverChain& chain,
                            const FieldScene& scene, const AtomSystem& sys,
                            const MeasurementWindow& window, double radiance) {
  const double lambda = scene.lo.wavelength();
  const double es2 = scene.signal.strength * scene.signal.strength;
  const double ts = window.duration;
  const double beta =
      chain.psn_beta(sys.mu34, cell.chi_point.chi_slope);

  RegimePair p;
  p.snr_bbr = 2.0 * cell.length * es2 * ts / (lambda * radiance);
  p.snr_psn = cell.length * cell.length *
              std::exp(-cell.chi_point.chi * cell.length) * es2 * ts / beta;
  return p;
}

OffbeamBounds offbeam_bounds(double theta_delta, const ContinuousCell& cell,
                             const ReceiverChain& chain,
                             const FieldScene& scene, const AtomSystem& sys,
                             const MeasurementWindow& window,
                             double radiance) {
  const double lambda = scene.lo.wavelength();
  const double es2 = scene.signal.strength * scene.signal.strength;
  const double ts = window.duration;
  const double beta = chain.psn_beta(sys.mu34, cell.chi_point.chi_slope);
  const double td2 = theta_delta * theta_delta;

  OffbeamBounds b;
  b.bound_bbr = 2.0 * lambda * es2 * ts /
                (pi * pi * td2 * cell.length * radiance);
  b.bound_psn = lambda * lambda *
                std::exp(-cell.chi_point.chi * cell.length) * es2 * ts /
                (pi * pi * td2 * beta);
  return b;
}

double atomic_aperture(double length, double chi) {
  return length * length * std::exp(-chi * length);
}

ApertureOptimum optimal_length(double chi) {
  if (chi <= 0) throw Error("optimal_length: chi must be > 0");
  ApertureOptimum o;
  o.length = 2.0 / chi;
  o.aperture = 4.0 / (std::exp(2.0) * chi * chi);
  return o;
}

ApertureOptimum optimal_length_numeric(double chi) {
  if (chi <= 0) throw Error("optimal_length_numeric: chi must be > 0");
  double hi = 10.0 / chi;
  double l = golden_section_max(
      [chi](double x) { return atomic_aperture(x, chi); }, 0.0, hi,
      1e-10 / chi);
  return {l, atomic_aperture(l, chi)};
}

double pattern_continuous(double theta_delta, double length,
                          double wavelength) {
  double s = sinc(length * theta_delta / wavelength);
  return s * s;
}

double hpbw_continuous_analytic(double length, double wavelength) {
  if (length <= 0 || wavelength <= 0)
    throw Error("hpbw: length and wavelength must be > 0");
  double w = 0.886 * wavelength / length;
  if (w >= 2.0)
    throw HpbwUndefinedError(
        "hpbw: beam wider than the visible region (short cell)");
  return w;
}

double hpbw_continuous(double length, double wavelength) {
  hpbw_continuous_analytic(length, wavelength);  // shared undefined check
  // G is monotone on [0, first null); the half-power point, if visible,
  // lies before min(first null, theta = 2).
  double first_null = wavelength / length;
  double hi = std::min(first_null, 2.0);
  auto g = [&](double td) {
    return pattern_continuous(td, length, wavelength) - 0.5;
  };
  if (g(hi) > 0.0)
    throw HpbwUndefinedError(
        "hpbw: pattern never reaches half power inside the visible region");
  double half = bisect_root(g, 0.0, hi, 1e-12 * hi);
  return 2.0 * half;
}

}  // namespace raresim
