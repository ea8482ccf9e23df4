#include "raresim/numerics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cstddef>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include "raresim/constants.hpp"

namespace raresim {

double sinc(double u) {
  double x = constants::pi * u;
  if (std::abs(x) < 1e-6) {
    double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");

  static std::mutex cache_mutex;
  static std::unordered_map<int, GaussHermiteRule> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }

  // Golub-Welsch: symmetric tridiagonal Jacobi matrix with zero diagonal
  // and off-diagonal sqrt(k/2); weights from the first eigenvector row.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = std::sqrt(k / 2.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);

  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double sqrt_pi = std::sqrt(constants::pi);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()(i);
    double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = sqrt_pi * v0 * v0;
  }

  std::lock_guard<std::mutex> lock(cache_mutex);
  cache.emplace(n, rule);
  return rule;
}

namespace {

// Gauss-Kronrod 15-point nodes/weights on [-1, 1] with the embedded
// 7-point Gauss rule (standard QUADPACK constants).
constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0};
constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
  double value;
  double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  double c = 0.5 * (a + b);
  double h = 0.5 * (b - a);
  double fc = f(c);
  double kron = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    double x = h * kKronrodNodes[i];
    double fsum = f(c - x) + f(c + x);
    kron += kKronrodWeights[i] * fsum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
  }
  kron *= h;
  gauss *= h;
  double err = std::abs(kron - gauss);
  // QUADPACK-style error sharpening
  err = std::pow(200.0 * err, 1.5);
  return {kron, std::min(err, std::abs(kron - gauss) * 200.0)};
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, int max_intervals) {
  if (a == b) return 0.0;

  struct Interval {
    double a, b, value, error;
  };
  std::vector<Interval> stack;
  auto push = [&](double lo, double hi) {
    auto r = gk15(f, lo, hi);
    stack.push_back({lo, hi, r.value, r.error});
  };
  push(a, b);

  double total_err = stack[0].error;
  while (total_err > abs_tol &&
         static_cast<int>(stack.size()) < max_intervals) {
    std::size_t worst = 0;
    for (std::size_t i = 1; i < stack.size(); ++i)
      if (stack[i].error > stack[worst].error) worst = i;
    Interval iv = stack[worst];
    if (iv.b - iv.a < 1e-15 * std::abs(b - a)) break;  // cannot refine further
    stack[worst] = stack.back();
    stack.pop_back();
    total_err -= iv.error;
    double mid = 0.5 * (iv.a + iv.b);
    push(iv.a, mid);
    total_err += stack.back().error;
    push(mid, iv.b);
    total_err += stack.back().error;
  }

  double sum = 0.0;
  for (const auto& iv : stack) sum += iv.value;
  return sum;
}

double golden_section_max(const std::function<double(double)>& f, double a,
                          double b, double tol) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

double bisect_root(const std::function<double(double)>& f, double a, double b,
                   double tol, int max_iter) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0)
    throw std::invalid_argument("bisect_root: no sign change on bracket");
  for (int i = 0; i < max_iter && b - a > tol; ++i) {
    double m = 0.5 * (a + b);
    double fm = f(m);
    if (fm == 0.0) return m;
    if (fa * fm < 0.0) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 3 || y_.size() != n)
    throw std::invalid_argument("CubicSpline: need >= 3 matching points");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1]))
      throw std::invalid_argument("CubicSpline: x must be increasing");

  // Natural spline: tridiagonal solve for second derivatives.
  m_.assign(n, 0.0);
  std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
  diag[0] = 1.0;
  diag[n - 1] = 1.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double h0 = x_[i] - x_[i - 1];
    double h1 = x_[i + 1] - x_[i];
    diag[i] = 2.0 * (h0 + h1);
    upper[i] = h1;
    rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
  }
  // Thomas algorithm (lower diagonal equals h0, boundaries are identity rows)
  std::vector<double> c(n, 0.0), d(n, 0.0);
  c[0] = 0.0;
  d[0] = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double h0 = x_[i] - x_[i - 1];
    double denom = diag[i] - h0 * c[i - 1];
    c[i] = upper[i] / denom;
    d[i] = (rhs[i] - h0 * d[i - 1]) / denom;
  }
  m_[n - 1] = 0.0;
  for (std::size_t i = n - 1; i-- > 1;) m_[i] = d[i] - c[i] * m_[i + 1];
  m_[0] = 0.0;
}

double CubicSpline::operator()(double x) const {
  // Clamp to the tabulated range; callers keep evaluations inside it.
  if (x <= x_.front()) x = x_.front();
  if (x >= x_.back()) x = x_.back();
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = static_cast<std::size_t>(
      std::max<std::ptrdiff_t>(1, it - x_.begin())) - 1;
  if (i >= x_.size() - 1) i = x_.size() - 2;
  double h = x_[i + 1] - x_[i];
  double a = (x_[i + 1] - x) / h;
  double b = (x - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

}  // namespace raresim
