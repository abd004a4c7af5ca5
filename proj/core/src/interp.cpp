#include "mslab/interp.hpp"

#include <cmath>
#include <stdexcept>

namespace mslab {

UniformHermite::UniformHermite(double x0, double h, std::vector<double> values,
                               std::vector<double> slopes)
    : x0_(x0), h_(h), y_(std::move(values)), m_(std::move(slopes)) {
  if (y_.size() < 2 || y_.size() != m_.size())
    throw std::invalid_argument("UniformHermite: bad sample arrays");
  if (!(h_ > 0.0)) throw std::invalid_argument("UniformHermite: h must be > 0");
}

double UniformHermite::operator()(double x) const {
  const std::size_t last = y_.size() - 2;
  double s = (x - x0_) / h_;
  std::size_t i = 0;
  if (s > 0.0) i = std::min(last, static_cast<std::size_t>(s));
  const double t = s - static_cast<double>(i);
  const double t2 = t * t, t3 = t2 * t;
  return y_[i] * (2.0 * t3 - 3.0 * t2 + 1.0) +
         m_[i] * h_ * (t3 - 2.0 * t2 + t) +
         y_[i + 1] * (3.0 * t2 - 2.0 * t3) +
         m_[i + 1] * h_ * (t3 - t2);
}

double UniformHermite::derivative(double x) const {
  const std::size_t last = y_.size() - 2;
  double s = (x - x0_) / h_;
  std::size_t i = 0;
  if (s > 0.0) i = std::min(last, static_cast<std::size_t>(s));
  const double t = s - static_cast<double>(i);
  const double t2 = t * t;
  return (y_[i] * (6.0 * t2 - 6.0 * t) + y_[i + 1] * (6.0 * t - 6.0 * t2)) / h_ +
         m_[i] * (3.0 * t2 - 4.0 * t + 1.0) + m_[i + 1] * (3.0 * t2 - 2.0 * t);
}

std::vector<double> periodic_slopes(const std::vector<double>& y, double h,
                                    double periodic_jump) {
  const std::size_t n = y.size();
  if (n < 5) throw std::invalid_argument("periodic_slopes: need >= 5 samples");
  const std::size_t m = n - 1;  // number of cells in one period
  auto fetch = [&](long i) -> double {
    long q = i / static_cast<long>(m);
    long r = i % static_cast<long>(m);
    if (r < 0) {
      r += static_cast<long>(m);
      --q;
    }
    return y[static_cast<std::size_t>(r)] + periodic_jump * static_cast<double>(q);
  };
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long k = static_cast<long>(i);
    out[i] = (8.0 * (fetch(k + 1) - fetch(k - 1)) - (fetch(k + 2) - fetch(k - 2))) /
             (12.0 * h);
  }
  return out;
}

void monotone_clamp(const std::vector<double>& y, double h,
                    std::vector<double>& slopes, double /*periodic_jump*/) {
  const std::size_t n = y.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = (y[i + 1] - y[i]) / h;
    if (d == 0.0) {
      slopes[i] = 0.0;
      slopes[i + 1] = 0.0;
      continue;
    }
    double a = slopes[i] / d, b = slopes[i + 1] / d;
    if (a < 0.0) {
      slopes[i] = 0.0;
      a = 0.0;
    }
    if (b < 0.0) {
      slopes[i + 1] = 0.0;
      b = 0.0;
    }
    const double r2 = a * a + b * b;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      slopes[i] = tau * a * d;
      slopes[i + 1] = tau * b * d;
    }
  }
}

std::vector<double> hermite_cumulative(const std::vector<double>& y,
                                       const std::vector<double>& slopes,
                                       double h) {
  if (y.size() != slopes.size() || y.size() < 2)
    throw std::invalid_argument("hermite_cumulative: bad sample arrays");
  std::vector<double> out(y.size(), 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    acc += h * (0.5 * (y[i] + y[i + 1]) + h * (slopes[i] - slopes[i + 1]) / 12.0);
    out[i + 1] = acc;
  }
  return out;
}

double solve_increasing(const UniformHermite& f, double target, double lo,
                        double hi) {
  if (!(lo < hi)) throw std::invalid_argument("solve_increasing: bad bracket");
  const double flo = f(lo) - target, fhi = f(hi) - target;
  // absorb endpoint round-off; anything larger is a genuine bracket failure
  const double slack = 1e-9 * (1.0 + std::abs(target));
  if (flo > slack || fhi < -slack)
    throw std::domain_error("solve_increasing: target outside bracket");
  if (flo >= 0.0) return lo;
  if (fhi <= 0.0) return hi;
  // bisect to a narrow bracket, then Newton
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid) - target;
    if (fm <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    const double fx = f(x) - target;
    const double dfx = f.derivative(x);
    if (dfx <= 0.0) break;
    double step = fx / dfx;
    double nx = x - step;
    if (nx < lo || nx > hi) break;
    x = nx;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
  }
  return x;
}

}  // namespace mslab
