#include "pdpp/quadrature.hpp"

#include <cmath>
#include <sstream>

#include "pdpp/errors.hpp"

namespace pdpp {

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int order) {
  if (order < 1) throw ConfigError("gauss_legendre: order must be >= 1");
  Eigen::VectorXd x(order), w(order);
  int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double z = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = order * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[order - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[order - 1 - i] = w[i];
  }
  return {x, w};
}

namespace {

double composite_panels(const std::function<double(double)>& f, double a, double b,
                        int panels, const Eigen::VectorXd& x, const Eigen::VectorXd& w) {
  double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double mid = a + (p + 0.5) * h;
    double acc = 0.0;
    for (int i = 0; i < x.size(); ++i) acc += w[i] * f(mid + 0.5 * h * x[i]);
    total += 0.5 * h * acc;
  }
  return total;
}

}  // namespace

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double tol, int order, int max_panels) {
  auto [x, w] = gauss_legendre(order);
  double prev = composite_panels(f, a, b, 1, x, w);
  for (int panels = 2; panels <= max_panels; panels *= 2) {
    double cur = composite_panels(f, a, b, panels, x, w);
    double scale = std::max({std::abs(cur), std::abs(prev), 1.0});
    if (std::abs(cur - prev) <= tol * scale) return cur;
    prev = cur;
  }
  double cur = composite_panels(f, a, b, 2 * max_panels, x, w);
  double scale = std::max({std::abs(cur), std::abs(prev), 1.0});
  double achieved = std::abs(cur - prev) / scale;
  if (achieved <= tol) return cur;
  std::ostringstream msg;
  msg << "integrate_1d: no convergence at " << max_panels
      << " panels; achieved relative tolerance " << achieved << " (requested " << tol << ")";
  throw NumericalError(msg.str());
}

double integrate_tensor(const std::function<double(const Eigen::VectorXd&)>& f,
                        const Domain& domain, int points_per_dim) {
  int d = domain.dim();
  if (d < 1 || d > 2) throw ConfigError("integrate_tensor: supports d = 1 or 2");
  auto [x, w] = gauss_legendre(points_per_dim);
  if (d == 1) {
    double a = domain.lower()[0], b = domain.upper()[0];
    double acc = 0.0;
    Eigen::VectorXd pt(1);
    for (int i = 0; i < points_per_dim; ++i) {
      pt[0] = 0.5 * (a + b) + 0.5 * (b - a) * x[i];
      acc += w[i] * f(pt);
    }
    return 0.5 * (b - a) * acc;
  }
  double ax = domain.lower()[0], bx = domain.upper()[0];
  double ay = domain.lower()[1], by = domain.upper()[1];
  double acc = 0.0;
  Eigen::VectorXd pt(2);
  for (int i = 0; i < points_per_dim; ++i) {
    pt[0] = 0.5 * (ax + bx) + 0.5 * (bx - ax) * x[i];
    double row = 0.0;
    for (int j = 0; j < points_per_dim; ++j) {
      pt[1] = 0.5 * (ay + by) + 0.5 * (by - ay) * x[j];
      row += w[j] * f(pt);
    }
    acc += w[i] * row;
  }
  return 0.25 * (bx - ax) * (by - ay) * acc;
}

IntegralEstimate integrate_mc(const std::function<double(const Eigen::VectorXd&)>& f,
                              const Domain& domain, int n, RandomStream& rng) {
  if (n < 2) throw ConfigError("integrate_mc: needs at least 2 points");
  double mean = 0.0, m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double v = f(domain.sample_uniform(rng));
    double delta = v - mean;
    mean += delta / (i + 1);
    m2 += delta * (v - mean);
  }
  double var = m2 / (n - 1);
  double vol = domain.volume();
  return {vol * mean, vol * std::sqrt(var / n)};
}

}  // namespace pdpp
