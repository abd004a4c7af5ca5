#include "mslab/bridge.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mslab/fft.hpp"

namespace mslab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_2pi(double t) {
  double r = std::fmod(t, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r;
}
}  // namespace

std::vector<double> synthesize_sine_series(const std::vector<double>& coeff,
                                           int grid_size) {
  int m = grid_size;
  int n_modes = static_cast<int>(coeff.size());
  if (m < 2) throw std::invalid_argument("synthesize_sine_series: grid_size < 2");
  if (n_modes > m - 1)
    throw std::invalid_argument("synthesize_sine_series: more modes than grid resolves");
  std::vector<double> x(m - 1, 0.0);
  for (int n = 1; n <= n_modes; ++n) x[n - 1] = coeff[n - 1];
  std::vector<double> y = dst1(x);
  std::vector<double> values(m + 1, 0.0);
  for (int j = 1; j < m; ++j) values[j] = 0.5 * y[j - 1];
  return values;
}

std::vector<double> analyze_sine_series(const std::vector<double>& values) {
  int m = static_cast<int>(values.size()) - 1;
  if (m < 2) throw std::invalid_argument("analyze_sine_series: too few samples");
  std::vector<double> x(values.begin() + 1, values.begin() + m);
  std::vector<double> y = dst1(x);
  for (double& c : y) c /= m;
  return y;
}

BridgePath bridge_from_coefficients(double beta, std::vector<double> coeff,
                                    int grid_size) {
  BridgePath b;
  b.beta = beta;
  b.values = synthesize_sine_series(coeff, grid_size);
  b.coeff = std::move(coeff);
  return b;
}

std::vector<double> bridge_derivative_values(const BridgePath& b) {
  int m = b.grid_size();
  int n_modes = b.n_modes();
  if (n_modes > m - 1)
    throw std::invalid_argument("bridge_derivative_values: more modes than grid resolves");
  std::vector<double> x(m + 1, 0.0);
  for (int n = 1; n <= n_modes; ++n) x[n] = b.coeff[n - 1] * (0.5 * n);
  std::vector<double> y = dct1(x);
  for (double& v : y) v *= 0.5;
  return y;
}

double bridge_eval(const BridgePath& b, double t) {
  double u = 0.5 * wrap_2pi(t);
  double acc = 0.0;
  for (int n = static_cast<int>(b.coeff.size()); n >= 1; --n)
    acc += b.coeff[n - 1] * std::sin(n * u);
  return acc;
}

std::vector<double> bridge_shifted_values(const BridgePath& b, double T) {
  int m = b.grid_size();
  int n_modes = b.n_modes();
  if (n_modes > m - 1)
    throw std::invalid_argument("bridge_shifted_values: more modes than grid resolves");
  double s = wrap_2pi(T);

  // sin(n(t+s)/2) = cos(ns/2) sin(nt/2) + sin(ns/2) cos(nt/2); the unreduced
  // full series S and its odd-mode part O give the periodic extension as
  // S - 2*O past t + s = 2*pi (odd modes flip sign under t -> t - 2*pi).
  std::vector<double> sin_part(m - 1, 0.0);        // DST input, full series
  std::vector<double> sin_part_odd(m - 1, 0.0);
  std::vector<double> cos_part(m + 1, 0.0);        // DCT input, full series
  std::vector<double> cos_part_odd(m + 1, 0.0);
  for (int n = 1; n <= n_modes; ++n) {
    double a = b.coeff[n - 1] * std::cos(0.5 * n * s);
    double d = b.coeff[n - 1] * std::sin(0.5 * n * s);
    sin_part[n - 1] = a;
    cos_part[n] = d;
    if (n % 2 == 1) {
      sin_part_odd[n - 1] = a;
      cos_part_odd[n] = d;
    }
  }
  std::vector<double> ys = dst1(sin_part);
  std::vector<double> ys_odd = dst1(sin_part_odd);
  std::vector<double> yc = dct1(cos_part);
  std::vector<double> yc_odd = dct1(cos_part_odd);

  double at_shift = bridge_eval(b, s);
  std::vector<double> out(m + 1);
  for (int j = 0; j <= m; ++j) {
    double t = kTwoPi * j / m;
    double full = 0.5 * yc[j];
    double odd = 0.5 * yc_odd[j];
    if (j >= 1 && j <= m - 1) {
      full += 0.5 * ys[j - 1];
      odd += 0.5 * ys_odd[j - 1];
    }
    double v = (t + s >= kTwoPi) ? full - 2.0 * odd : full;
    out[j] = v - at_shift;
  }
  out[0] = 0.0;
  out[m] = 0.0;
  return out;
}

BridgePath sample_bridge(double beta, int n_modes, int grid_size, Rng& rng) {
  if (beta <= 0.0) throw std::invalid_argument("sample_bridge: beta must be positive");
  if (n_modes < 1 || n_modes > grid_size - 1)
    throw std::invalid_argument("sample_bridge: invalid mode count");
  const double scale = 1.0 / std::sqrt(beta);
  std::vector<double> coeff(n_modes);
  for (int n = 1; n <= n_modes; ++n) coeff[n - 1] = scale * rng.normal() / n;
  return bridge_from_coefficients(beta, std::move(coeff), grid_size);
}

double CameronMartinShift::h_norm_sq() const {
  double acc = 0.0;
  for (int n = 1; n <= static_cast<int>(coeff.size()); ++n)
    acc += static_cast<double>(n) * n * coeff[n - 1] * coeff[n - 1];
  return acc * (std::numbers::pi / 4.0);
}

}  // namespace mslab
