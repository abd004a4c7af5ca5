#pragma once

// Cubic Hermite interpolation on uniform grids, with the Fritsch-Carlson
// monotonicity clamp, plus cumulative integration and monotone root finding.
// These back the circle-diffeomorphism lifts: slopes are taken from exact
// derivative samples when the construction provides them, from fourth-order
// central differences otherwise.

#include <cstddef>
#include <vector>

namespace mslab {

// Interpolant on x_i = x0 + i*h, i = 0..n-1, given values and slopes.
class UniformHermite {
 public:
  UniformHermite() = default;
  UniformHermite(double x0, double h, std::vector<double> values,
                 std::vector<double> slopes);

  double operator()(double x) const;
  double derivative(double x) const;

  double x0() const { return x0_; }
  double h() const { return h_; }
  std::size_t size() const { return y_.size(); }
  const std::vector<double>& values() const { return y_; }
  const std::vector<double>& slopes() const { return m_; }

 private:
  double x0_ = 0.0, h_ = 1.0;
  std::vector<double> y_, m_;
};

// Fourth-order central-difference slopes. `periodic_jump` is the increment of
// the underlying function over one period (2*pi for a circle lift, 0 for a
// periodic function); samples must cover exactly one period, endpoint
// included (y[n-1] = y[0] + periodic_jump).
std::vector<double> periodic_slopes(const std::vector<double>& y,
                                    double h, double periodic_jump);

// Fritsch-Carlson clamp applied in place: keeps the cubic monotone on cells
// where the data is monotone. Inactive for smooth well-resolved data.
void monotone_clamp(const std::vector<double>& y, double h,
                    std::vector<double>& slopes, double periodic_jump);

// Exact integral of the cubic Hermite interpolant from x0 to each grid node.
// Returns n partial integrals, first entry 0.
std::vector<double> hermite_cumulative(const std::vector<double>& y,
                                       const std::vector<double>& slopes,
                                       double h);

// Solve f(x) = target for strictly increasing interpolants; bisection start,
// Newton polish.
double solve_increasing(const UniformHermite& f, double target,
                        double lo, double hi);

}  // namespace mslab
