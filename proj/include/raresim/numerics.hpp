#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace raresim {

/// sinc(u) = sin(pi u) / (pi u), sinc(0) = 1.
double sinc(double u);

/// Gauss-Hermite rule: integral over R of exp(-x^2) f(x) dx ~ sum w_i f(x_i).
/// Nodes/weights via Golub-Welsch on the Jacobi matrix.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussHermiteRule gauss_hermite(int n);

/// Adaptive Gauss-Kronrod (G7,K15) quadrature of f over [a, b] to the
/// requested absolute tolerance. Splits intervals by largest error first.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, int max_intervals = 20000);

/// Golden-section search for the maximizer of f on [a, b] (unimodal f).
/// Returns the abscissa; tol is on the bracket width.
double golden_section_max(const std::function<double(double)>& f, double a,
                          double b, double tol);

/// Bisection root of f on [a, b]; requires a sign change.
double bisect_root(const std::function<double(double)>& f, double a, double b,
                   double tol, int max_iter = 200);

/// Natural cubic spline through (x_i, y_i); x strictly increasing.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;
  double min_x() const { return x_.front(); }
  double max_x() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, m_;  // m_: second derivatives
};

}  // namespace raresim
