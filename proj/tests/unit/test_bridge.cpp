#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "mslab/bridge.hpp"
#include "mslab/mc.hpp"

using namespace mslab;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("sine synthesis matches the direct sum and vanishes at the ends") {
  const std::vector<double> coeff = {0.4, -0.3, 0.2, 0.05};
  const int m = 32;
  const std::vector<double> v = synthesize_sine_series(coeff, m);
  REQUIRE(static_cast<int>(v.size()) == m + 1);
  CHECK(v[0] == 0.0);
  CHECK(v[m] == 0.0);
  for (int j = 0; j <= m; ++j) {
    const double t = kTwoPi * j / m;
    double direct = 0.0;
    for (std::size_t n = 1; n <= coeff.size(); ++n)
      direct += coeff[n - 1] * std::sin(0.5 * n * t);
    CHECK(std::fabs(v[j] - direct) < 1e-13);
  }
}

TEST_CASE("analysis inverts synthesis exactly") {
  Rng rng(7);
  const int m = 64;
  std::vector<double> coeff(m - 1);
  for (double& c : coeff) c = rng.normal();
  const std::vector<double> v = synthesize_sine_series(coeff, m);
  const std::vector<double> back = analyze_sine_series(v);
  REQUIRE(back.size() == coeff.size());
  for (std::size_t i = 0; i < coeff.size(); ++i)
    CHECK(std::fabs(back[i] - coeff[i]) < 1e-12);
}

TEST_CASE("bridge_eval agrees with grid values and off-grid series sums") {
  BridgePath b = bridge_from_coefficients(1.0, {0.5, 0.1, -0.2}, 16);
  for (int j = 0; j <= 16; ++j)
    CHECK(std::fabs(bridge_eval(b, kTwoPi * j / 16) - b.values[j]) < 1e-13);
  for (double t : {0.13, 1.7, 3.9, 6.0}) {
    double direct = 0.0;
    for (int n = 1; n <= 3; ++n)
      direct += b.coeff[n - 1] * std::sin(0.5 * n * t);
    CHECK(std::fabs(bridge_eval(b, t) - direct) < 1e-13);
  }
}

TEST_CASE("bridge sampling is reproducible per substream") {
  Rng a = Rng::substream(42, 3);
  Rng b = Rng::substream(42, 3);
  const BridgePath x = sample_bridge(0.5, 8, 32, a);
  const BridgePath y = sample_bridge(0.5, 8, 32, b);
  CHECK(x.coeff == y.coeff);
  CHECK(x.values == y.values);
}

TEST_CASE("bridge mode variances scale as 1 / (beta n^2)") {
  const double beta = 2.0;
  const int n_samples = 6000;
  double m1 = 0.0, v1 = 0.0, v2 = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    Rng rng = Rng::substream(2024, i);
    const BridgePath b = sample_bridge(beta, 3, 16, rng);
    m1 += b.coeff[0];
    v1 += b.coeff[0] * b.coeff[0];
    v2 += b.coeff[1] * b.coeff[1];
  }
  m1 /= n_samples;
  v1 /= n_samples;
  v2 /= n_samples;
  // Var b_1 = 1/2, Var b_2 = 1/8; five standard errors of slack
  CHECK(std::fabs(m1) < 5.0 * std::sqrt(0.5 / n_samples));
  CHECK(std::fabs(v1 - 0.5) < 5.0 * 0.5 * std::sqrt(2.0 / n_samples));
  CHECK(std::fabs(v2 - 0.125) < 5.0 * 0.125 * std::sqrt(2.0 / n_samples));
}
