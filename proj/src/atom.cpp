#include "raresim/atom.hpp"

#include <cmath>

#include "raresim/constants.hpp"
#include "raresim/errors.hpp"
#include "raresim/numerics.hpp"

namespace raresim {

using namespace constants;
using Complex = std::complex<double>;

double AtomSystem::probe_angular_frequency() const {
  return two_pi * speed_of_light / probe_wavelength;
}

double AtomSystem::probe_wavenumber() const {
  return two_pi / probe_wavelength;
}

void AtomSystem::validate() const {
  if (gamma2 < 0 || gamma3 < 0 || gamma4 < 0)
    throw Error("AtomSystem: decay rates must be nonnegative");
  if (probe_rabi < 0 || coupling_rabi < 0)
    throw Error("AtomSystem: Rabi frequencies must be nonnegative");
  if (probe_wavelength <= 0 || coupling_wavelength <= 0)
    throw Error("AtomSystem: wavelengths must be positive");
  if (atomic_density <= 0) throw Error("AtomSystem: N0 must be positive");
}

double Environment::thermal_velocity(const AtomSystem& sys) const {
  return std::sqrt(boltzmann * temperature / sys.atom_mass);
}

void Environment::validate() const {
  if (temperature <= 0) throw Error("Environment: temperature must be > 0");
  if (doppler_nodes < 3 || doppler_nodes % 2 == 0)
    throw Error("Environment: doppler_nodes must be odd and >= 3");
}

Matrix4c hamiltonian_rotating_frame(const AtomSystem& sys,
                                    Complex rabi_rf) {
  Matrix4c h = Matrix4c::Zero();
  h(0, 1) = 0.5 * sys.probe_rabi;
  h(1, 0) = 0.5 * sys.probe_rabi;
  h(1, 1) = -sys.delta_p;
  h(1, 2) = 0.5 * sys.coupling_rabi;
  h(2, 1) = 0.5 * sys.coupling_rabi;
  h(2, 2) = -sys.delta_p - sys.delta_c;
  h(2, 3) = 0.5 * std::conj(rabi_rf);
  h(3, 2) = 0.5 * rabi_rf;
  h(3, 3) = -sys.delta_p - sys.delta_c - sys.delta_l;
  return h;
}

// The master equation is written with the engineering imaginary j of the
// field convention E ~ e^{+j omega t} (j = -i of the physics convention).
// -j [H, rho] therefore evaluates as +i [H, rho] here; on resonance this
// gives Im(rho12) < 0, i.e. absorption with the explicit minus sign in
// the susceptibility formula.
Matrix4c lindblad_rhs(const AtomSystem& sys, const Matrix4c& rho,
                      Complex rabi_rf) {
  const Matrix4c h = hamiltonian_rotating_frame(sys, rabi_rf);
  const Complex i_unit(0.0, 1.0);

  Matrix4c out = i_unit * (h * rho - rho * h);

  // -1/2 {Gamma, rho} with Gamma = diag{0, g2, g3, g4}
  const double g[4] = {0.0, sys.gamma2, sys.gamma3, sys.gamma4};
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) out(p, q) -= 0.5 * (g[p] + g[q]) * rho(p, q);

  // repopulation Lambda = diag{g2 rho22 + g4 rho44, g3 rho33, 0, 0}
  out(0, 0) += sys.gamma2 * rho(1, 1) + sys.gamma4 * rho(3, 3);
  out(1, 1) += sys.gamma3 * rho(2, 2);
  return out;
}

namespace {

constexpr int kDim = 4;
constexpr int kVec = kDim * kDim;

inline int vec_index(int p, int q) { return p * kDim + q; }

// Assemble the 16x16 generator A with vec(d rho/dt) = A vec(rho).
Eigen::Matrix<Complex, kVec, kVec> lindblad_generator(const AtomSystem& sys,
                                                      Complex rabi_rf) {
  const Matrix4c h = hamiltonian_rotating_frame(sys, rabi_rf);
  const Complex i_unit(0.0, 1.0);
  const double g[4] = {0.0, sys.gamma2, sys.gamma3, sys.gamma4};

  Eigen::Matrix<Complex, kVec, kVec> a;
  a.setZero();
  for (int p = 0; p < kDim; ++p) {
    for (int q = 0; q < kDim; ++q) {
      const int row = vec_index(p, q);
      // -j (H rho - rho H) in the engineering convention (see lindblad_rhs)
      for (int k = 0; k < kDim; ++k) {
        a(row, vec_index(k, q)) += i_unit * h(p, k);
        a(row, vec_index(p, k)) += -i_unit * h(k, q);
      }
      a(row, vec_index(p, q)) += -0.5 * (g[p] + g[q]);
    }
  }
  a(vec_index(0, 0), vec_index(1, 1)) += sys.gamma2;
  a(vec_index(0, 0), vec_index(3, 3)) += sys.gamma4;
  a(vec_index(1, 1), vec_index(2, 2)) += sys.gamma3;
  return a;
}

}  // namespace

Matrix4c steady_state(const AtomSystem& sys, Complex rabi_rf) {
  if (sys.gamma2 <= 0 && sys.gamma3 <= 0 && sys.gamma4 <= 0)
    throw SingularSystemError(
        "steady_state: all decay rates vanish, no unique steady state");

  Eigen::Matrix<Complex, kVec, kVec> a = lindblad_generator(sys, rabi_rf);

  // Replace the rho11 row with the trace constraint tr(rho) = 1.
  const int trace_row = vec_index(0, 0);
  a.row(trace_row).setZero();
  for (int p = 0; p < kDim; ++p) a(trace_row, vec_index(p, p)) = 1.0;

  Eigen::Matrix<Complex, kVec, 1> b = Eigen::Matrix<Complex, kVec, 1>::Zero();
  b(trace_row) = 1.0;

  Eigen::FullPivLU<Eigen::Matrix<Complex, kVec, kVec>> lu(a);
  if (!lu.isInvertible())
    throw SingularSystemError(
        "steady_state: generator is rank deficient (degenerate parameters)");

  Eigen::Matrix<Complex, kVec, 1> x = lu.solve(b);
  Matrix4c rho;
  for (int p = 0; p < kDim; ++p)
    for (int q = 0; q < kDim; ++q) rho(p, q) = x(vec_index(p, q));
  return rho;
}

namespace {

Complex rho12_shifted(const AtomSystem& sys, Complex rabi_rf, double v) {
  AtomSystem shifted = sys;
  shifted.delta_p = sys.delta_p - two_pi * v / sys.probe_wavelength;
  shifted.delta_c = sys.delta_c + two_pi * v / sys.coupling_wavelength;
  return steady_state(shifted, rabi_rf)(0, 1);
}

}  // namespace

Complex doppler_average_rho12(const AtomSystem& sys, const Environment& env,
                              Complex rabi_rf) {
  env.validate();
  const double u = env.thermal_velocity(sys);
  const GaussHermiteRule rule = gauss_hermite(env.doppler_nodes);
  const double inv_sqrt_pi = 1.0 / std::sqrt(pi);

  Complex acc(0.0, 0.0);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * rho12_shifted(sys, rabi_rf, u * rule.nodes[i]);
  return acc * inv_sqrt_pi;
}

Complex doppler_average_rho12_trapezoid(const AtomSystem& sys,
                                        const Environment& env,
                                        Complex rabi_rf, int n_points) {
  env.validate();
  if (n_points < 3) throw Error("doppler trapezoid: need >= 3 points");
  const double u = env.thermal_velocity(sys);
  const double vmax = env.doppler_truncation * u;
  const double dv = 2.0 * vmax / (n_points - 1);
  const double norm = 1.0 / (std::sqrt(pi) * u);

  Complex acc(0.0, 0.0);
  for (int i = 0; i < n_points; ++i) {
    double v = -vmax + i * dv;
    double w = (i == 0 || i == n_points - 1) ? 0.5 : 1.0;
    acc += w * std::exp(-v * v / (u * u)) * rho12_shifted(sys, rabi_rf, v);
  }
  return acc * (norm * dv);
}

double susceptibility(const AtomSystem& sys, const Environment& env,
                      double rabi_amp) {
  if (sys.probe_rabi <= 0)
    throw Error("susceptibility: probe Rabi frequency must be positive");
  Complex rho12 = doppler_average_rho12(sys, env, Complex(rabi_amp, 0.0));
  double prefactor = sys.probe_wavenumber() * sys.atomic_density *
                     sys.mu12 * sys.mu12 /
                     (vacuum_permittivity * hbar * sys.probe_rabi);
  return -prefactor * rho12.imag();
}

double susceptibility_slope(const AtomSystem& sys, const Environment& env,
                            double rabi_l) {
  if (rabi_l <= 0)
    throw Error("susceptibility_slope: operating Rabi must be positive");
  const double h = std::max(1e-4 * rabi_l, two_pi * 10.0);

  auto central = [&](double step) {
    return (susceptibility(sys, env, rabi_l + step) -
            susceptibility(sys, env, rabi_l - step)) /
           (2.0 * step);
  };
  double coarse = central(h);
  double fine = central(0.5 * h);
  double scale = std::max(std::abs(fine), std::abs(coarse));
  if (scale > 0 && std::abs(coarse - fine) > 1e-4 * scale)
    throw NonConvergedError(
        "susceptibility_slope: finite-difference step check failed");
  return fine;
}

SusceptibilityPoint susceptibility_point(const AtomSystem& sys,
                                         const Environment& env,
                                         double rabi_l) {
  SusceptibilityPoint pt;
  pt.rabi = rabi_l;
  pt.chi = susceptibility(sys, env, rabi_l);
  pt.chi_slope = susceptibility_slope(sys, env, rabi_l);
  return pt;
}

double trace_error(const Matrix4c& rho) {
  return std::abs(rho.trace() - Complex(1.0, 0.0));
}

double hermiticity_error(const Matrix4c& rho) {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Matrix4c& rho) {
  Matrix4c sym = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(sym);
  return es.eigenvalues().minCoeff();
}

}  // namespace raresim
