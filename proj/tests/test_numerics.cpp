#include <doctest.h>

#include <cmath>

#include "raresim/constants.hpp"
#include "raresim/numerics.hpp"

using namespace raresim;
using constants::pi;

TEST_CASE("sinc values") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(std::abs(sinc(1.0)) < 1e-15);
  CHECK(sinc(0.5) == doctest::Approx(2.0 / pi).epsilon(1e-12));
  CHECK(sinc(-0.5) == sinc(0.5));
}

TEST_CASE("Gauss-Hermite rule integrates exactly on polynomials") {
  for (int n : {3, 11, 41, 81}) {
    auto rule = gauss_hermite(n);
    REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));

    // weight normalization: averaging the constant 1 gives exactly 1
    double w_sum = 0.0;
    for (double w : rule.weights) w_sum += w;
    CHECK(w_sum / std::sqrt(pi) == doctest::Approx(1.0).epsilon(1e-12));

    // int x^2 exp(-x^2) = sqrt(pi)/2
    double m2 = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      m2 += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
    CHECK(m2 == doctest::Approx(0.5 * std::sqrt(pi)).epsilon(1e-12));
  }
}

TEST_CASE("adaptive quadrature on smooth and oscillatory integrands") {
  double v = integrate_adaptive([](double x) { return x * x; }, 0, 1, 1e-12);
  CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  double osc = integrate_adaptive(
      [](double x) { return std::sin(2 * pi * x); }, 0, 10, 1e-12);
  CHECK(std::abs(osc) < 1e-10);

  // kink at zero handled by endpoint split
  double kink = integrate_adaptive([](double x) { return std::abs(x); },
                                   -1, 1, 1e-12);
  CHECK(kink == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("golden-section maximizer") {
  double x = golden_section_max(
      [](double t) { return -(t - 1.3) * (t - 1.3); }, 0, 3, 1e-10);
  CHECK(x == doctest::Approx(1.3).epsilon(1e-8));
}

TEST_CASE("bisection root") {
  double r = bisect_root([](double t) { return std::cos(t); }, 0, 2, 1e-12);
  CHECK(r == doctest::Approx(pi / 2).epsilon(1e-10));
}

TEST_CASE("cubic spline reproduces a smooth function") {
  std::vector<double> xs, ys;
  for (int i = 0; i <= 40; ++i) {
    double x = i / 40.0;
    xs.push_back(x);
    ys.push_back(std::sin(2 * x));
  }
  CubicSpline spline(xs, ys);
  for (double x : {0.31, 0.52, 0.77}) {
    CHECK(spline(x) == doctest::Approx(std::sin(2 * x)).epsilon(1e-5));
  }
  // natural end conditions limit the boundary panels to O(h^2)
  for (double x : {0.013, 0.99}) {
    CHECK(spline(x) == doctest::Approx(std::sin(2 * x)).epsilon(1e-3));
  }
}
