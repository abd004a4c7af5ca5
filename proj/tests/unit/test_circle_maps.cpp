#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "mslab/bridge.hpp"
#include "mslab/circle_maps.hpp"
#include "mslab/mc.hpp"

using namespace mslab;
using C = std::complex<double>;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_dist(double a, double b) {
  double d = std::fmod(a - b, kTwoPi);
  if (d < 0) d += kTwoPi;
  return std::min(d, kTwoPi - d);
}
}  // namespace

TEST_CASE("grid diffeomorphism round trips through its inverse") {
  const int m = 512;
  std::vector<double> lift(m + 1), d1(m + 1);
  for (int j = 0; j <= m; ++j) {
    const double t = kTwoPi * j / m;
    lift[j] = t + 0.3 * std::sin(t);
    d1[j] = 1.0 + 0.3 * std::cos(t);
  }
  const CircleDiffeo phi = CircleDiffeo::from_lift_and_derivs(lift, d1);
  for (double t : {0.0, 0.9, 2.2, 4.4, 6.1}) {
    CHECK(std::fabs(phi.inverse(phi.lift(t)) - t) < 1e-9);
    CHECK(std::fabs(phi.lift(t + kTwoPi) - phi.lift(t) - kTwoPi) < 1e-12);
  }
}

TEST_CASE("composition matches pointwise lifts and the chain rule") {
  const int m = 512;
  std::vector<double> l1(m + 1), d1(m + 1), l2(m + 1), d2(m + 1);
  for (int j = 0; j <= m; ++j) {
    const double t = kTwoPi * j / m;
    l1[j] = t + 0.25 * std::sin(t);
    d1[j] = 1.0 + 0.25 * std::cos(t);
    l2[j] = t - 0.2 * std::sin(2.0 * t) / 2.0;
    d2[j] = 1.0 - 0.2 * std::cos(2.0 * t);
  }
  const CircleDiffeo phi = CircleDiffeo::from_lift_and_derivs(l1, d1);
  const CircleDiffeo psi = CircleDiffeo::from_lift_and_derivs(l2, d2);
  const CircleDiffeo comp = compose(phi, psi);
  for (double t : {0.3, 1.9, 5.2}) {
    CHECK(std::fabs(comp.lift(t) - phi.lift(psi.lift(t))) < 1e-9);
    CHECK(std::fabs(comp.deriv(t) - phi.deriv(psi.lift(t)) * psi.deriv(t)) <
          1e-7);
  }
  const CircleDiffeo inv = invert(phi);
  for (double t : {0.3, 1.9, 5.2})
    CHECK(std::fabs(inv.lift(phi.lift(t)) - t) < 1e-8);
}

TEST_CASE("moebius lift is an equivariant diffeomorphism with exact derivatives") {
  const MoebiusElement g{C(1.3, 0.1), C(0.4, -0.25), 2};
  CHECK(std::fabs(std::norm(g.a) - std::norm(g.b) - 1.0) < 1e-12);
  for (double t : {0.0, 0.7, 2.9, 4.8}) {
    CHECK(std::fabs(g.lift(t + kTwoPi) - g.lift(t) - kTwoPi) < 1e-12);
    CHECK(g.deriv(t) > 0.0);
    const double h = 1e-5;
    const double fd1 = (g.lift(t + h) - g.lift(t - h)) / (2.0 * h);
    const double fd2 = (g.deriv(t + h) - g.deriv(t - h)) / (2.0 * h);
    const double fd3 = (g.second_deriv(t + h) - g.second_deriv(t - h)) / (2.0 * h);
    CHECK(std::fabs(fd1 - g.deriv(t)) < 1e-8);
    CHECK(std::fabs(fd2 - g.second_deriv(t)) < 1e-7);
    CHECK(std::fabs(fd3 - g.third_deriv(t)) < 1e-6);
  }
}

TEST_CASE("moebius composition and inverse act on lifts") {
  const MoebiusElement g1{C(1.2, 0.0), C(0.3, 0.2), 1};
  const MoebiusElement g2{C(1.1, -0.3), C(0.1, -0.15), 1};
  const MoebiusElement g12 = compose(g1, g2);
  for (double t : {0.4, 1.5, 3.3, 5.9})
    CHECK(wrap_dist(g12.lift(t), g1.lift(g2.lift(t))) < 1e-12);
  const MoebiusElement inv = g1.inverse();
  for (double t : {0.4, 1.5, 3.3, 5.9})
    CHECK(wrap_dist(inv.lift(g1.lift(t)), t) < 1e-12);
}

TEST_CASE("moebius grid map matches the closed form on nodes") {
  const MoebiusElement g{C(1.4, 0.2), C(0.5, 0.1), 1};
  const CircleDiffeo phi = moebius_diffeo(g, 64);
  for (int j = 0; j <= 64; ++j) {
    const double t = kTwoPi * j / 64;
    CHECK(std::fabs(phi.lift_values()[j] - g.lift(t)) < 1e-12);
    CHECK(std::fabs(phi.deriv_values()[j] - g.deriv(t)) < 1e-12);
  }
}

TEST_CASE("smooth based map: normalization, inverse, and derivatives") {
  const SmoothBasedMap psi({0.3, -0.1}, {0.05, 0.2});
  CHECK(psi.b(0.0) == 0.0);
  CHECK(std::fabs(psi.lift(0.0)) < 1e-12);
  CHECK(std::fabs(psi.lift(kTwoPi) - kTwoPi) < 1e-10);
  for (double t : {0.5, 1.8, 4.0, 5.7}) {
    CHECK(std::fabs(psi.deriv(t) - psi.alpha() * std::exp(psi.b(t))) < 1e-12);
    CHECK(std::fabs(psi.inverse(psi.lift(t)) - t) < 1e-10);
    const double h = 1e-5;
    const double fd2 = (psi.deriv(t + h) - psi.deriv(t - h)) / (2.0 * h);
    const double fd3 =
        (psi.second_deriv(t + h) - psi.second_deriv(t - h)) / (2.0 * h);
    CHECK(std::fabs(fd2 - psi.second_deriv(t)) < 1e-7);
    CHECK(std::fabs(fd3 - psi.third_deriv(t)) < 1e-6);
  }
}

TEST_CASE("smooth based map expands in the bridge basis") {
  const SmoothBasedMap psi({0.2}, {0.1});
  const std::vector<double> coeff = psi.bridge_coefficients(256);
  BridgePath b = bridge_from_coefficients(1.0, coeff, 1024);
  double sup = 0.0;
  for (int j = 0; j <= 1024; ++j) {
    const double t = kTwoPi * j / 1024;
    sup = std::max(sup, std::fabs(b.values[j] - psi.b(t)));
  }
  CHECK(sup < 1e-5);
}

TEST_CASE("vector field flows compose additively in time") {
  const TrigVectorField xi = TrigVectorField::cosine(2);
  const CircleDiffeo a = xi.flow(0.15, 256);
  const CircleDiffeo b = xi.flow(0.1, 256);
  const CircleDiffeo ab = xi.flow(0.25, 256);
  const CircleDiffeo comp = compose(a, b);
  for (double t : {0.2, 2.5, 5.5})
    CHECK(std::fabs(comp.lift(t) - ab.lift(t)) < 1e-8);
  const CircleDiffeo back = compose(xi.flow(-0.15, 256), a);
  for (double t : {0.2, 2.5, 5.5}) CHECK(std::fabs(back.lift(t) - t) < 1e-8);
}

TEST_CASE("flow linearizes at small time") {
  const TrigVectorField xi = TrigVectorField::sine(3);
  const double eps = 1e-3;
  const CircleDiffeo f = xi.flow(eps, 256);
  for (double t : {0.4, 1.3, 4.9}) {
    const double v = xi.eval(t).real();
    CHECK(std::fabs(f.lift(t) - t - eps * v) < 5.0 * eps * eps);
  }
}

TEST_CASE("bott cocycle vanishes on rotations and satisfies the identity") {
  const CircleDiffeo r1 = CircleDiffeo::rotation(128, 0.7);
  const CircleDiffeo r2 = CircleDiffeo::rotation(128, 2.1);
  CHECK(std::fabs(bott_cocycle(r1, r2)) < 1e-12);

  const int m = 2048;
  const CircleDiffeo phi = TrigVectorField::cosine(1).flow(0.4, m);
  const CircleDiffeo psi = TrigVectorField::sine(2).flow(0.3, m);
  const CircleDiffeo rho = TrigVectorField::cosine(3).flow(0.2, m);
  const double lhs = bott_cocycle(compose(phi, psi), rho) + bott_cocycle(phi, psi);
  const double rhs = bott_cocycle(phi, compose(psi, rho)) + bott_cocycle(psi, rho);
  CHECK(std::fabs(lhs - rhs) < 1e-8);
}

TEST_CASE("bott second variation recovers the virasoro cocycle") {
  const TrigVectorField xi = TrigVectorField::cosine(2);
  const TrigVectorField eta = TrigVectorField::sine(2);
  const double eps = 0.02;
  const int m = 4096;
  const double anti =
      bott_cocycle(xi.flow(eps, m), eta.flow(eps, m)) -
      bott_cocycle(eta.flow(eps, m), xi.flow(eps, m));
  // anti-second variation = (1/24 pi) int (xi''' + xi') eta = i c(xi, eta)
  const C expected = virasoro_cocycle(xi, eta) * C(0.0, 1.0);
  CHECK(std::fabs(expected.imag()) < 1e-12);
  // i c(cos 2, sin 2) = (2^3 - 2)/24 = 0.25
  CHECK(std::fabs(expected.real() - 0.25) < 1e-12);
  CHECK(std::fabs(anti / (eps * eps) - expected.real()) <
        0.02 * std::fabs(expected.real()));
}

TEST_CASE("virasoro cocycle closed form equals quadrature") {
  for (int n : {1, 2, 3}) {
    for (int m : {-3, -2, -1, 1, 2, 3}) {
      const TrigVectorField xi = TrigVectorField::complex_mode(n);
      const TrigVectorField eta = TrigVectorField::complex_mode(m);
      const C closed = virasoro_cocycle(xi, eta);
      const C quad = virasoro_cocycle_quadrature(xi, eta, 512);
      CHECK(std::abs(closed - quad) < 1e-12);
      const C expected =
          (n + m == 0) ? C(n * (n * n - 1) / 12.0) : C(0.0);
      CHECK(std::abs(closed - expected) < 1e-13);
    }
  }
}

TEST_CASE("log-derivative chart inverts the sampling map") {
  BridgePath b = bridge_from_coefficients(1.0, {0.4, -0.2, 0.1}, 256);
  const double rot = 2.345;
  const CircleDiffeo phi = diffeo_from_log_derivative(b, rot);
  CHECK(std::fabs(rotation_part(phi) - rot) < 1e-9);
  const std::vector<double> back = log_derivative(phi);
  REQUIRE(back.size() == b.values.size());
  for (std::size_t j = 0; j < back.size(); ++j)
    CHECK(std::fabs(back[j] - b.values[j]) < 1e-9);
}

TEST_CASE("left rotation action keeps the same circle map") {
  BridgePath b = bridge_from_coefficients(1.0, {0.35, 0.15, -0.1}, 512);
  const double s = 1.234;
  const BridgePoint moved = left_rotation_action(s, b);
  const CircleDiffeo lhs = compose(CircleDiffeo::rotation(512, s),
                                   based_from_bridge(b));
  const CircleDiffeo rhs = compose(based_from_bridge(moved.b),
                                   CircleDiffeo::rotation(512, moved.rotation));
  for (double t : {0.0, 0.8, 2.9, 5.6})
    CHECK(wrap_dist(lhs.lift(t), rhs.lift(t)) < 1e-6);
}

TEST_CASE("left action composes as a group action on bridge coordinates") {
  const CircleDiffeo phi = moebius_diffeo({C(1.1, 0.1), C(0.2, 0.1), 1}, 512);
  const CircleDiffeo psi = moebius_diffeo({C(1.2, -0.2), C(0.1, -0.2), 1}, 512);
  auto sup_diff = [&](const BridgePath& b) {
    const BridgePath one = left_action(compose(phi, psi), b);
    const BridgePath two = left_action(phi, left_action(psi, b));
    REQUIRE(one.values.size() == two.values.size());
    double sup = 0.0;
    for (std::size_t j = 0; j < one.values.size(); ++j)
      sup = std::max(sup, std::fabs(one.values[j] - two.values[j]));
    return sup;
  };
  // even modes are 2*pi-periodic, so every intermediate stays smooth
  CHECK(sup_diff(bridge_from_coefficients(1.0, {0.0, 0.3, 0.0, -0.15}, 512)) <
        1e-6);
  // odd modes carry a basepoint derivative corner; the rotation part moves it
  // into the interior where the sine chart resolves it only to O(1/grid)
  CHECK(sup_diff(bridge_from_coefficients(1.0, {0.3, -0.15}, 512)) < 5e-3);
}

TEST_CASE("right rotation factor never moves the based coordinate") {
  BridgePoint g;
  g.b = bridge_from_coefficients(1.0, {0.25, 0.1}, 256);
  g.rotation = 0.4;
  const CircleDiffeo phi = moebius_diffeo({C(1.05, 0.0), C(0.15, 0.1), 1}, 256);
  const BridgePoint moved = left_action(phi, g);
  const BridgePath direct = left_action(phi, g.b);
  double sup = 0.0;
  for (std::size_t j = 0; j < direct.values.size(); ++j)
    sup = std::max(sup, std::fabs(moved.b.values[j] - direct.values[j]));
  CHECK(sup < 1e-9);
}
