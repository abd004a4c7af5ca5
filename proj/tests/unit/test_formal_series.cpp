#include <complex>
#include <vector>

#include "doctest.h"
#include "mslab/formal_series.hpp"

using namespace mslab;
using C = std::complex<double>;

namespace {
double cdist(C a, C b) { return std::abs(a - b); }
}  // namespace

TEST_CASE("composition with the identity") {
  FormalSeries f = FormalSeries::from_coefficients(
      {C(1.0), C(0.5, 0.25), C(-0.125), C(0.0, 1.0 / 3.0)});
  const FormalSeries id = FormalSeries::identity(4);
  const FormalSeries l = compose(f, id);
  const FormalSeries r = compose(id, f);
  for (int k = 1; k <= 4; ++k) {
    CHECK(cdist(l.coeff(k), f.coeff(k)) < 1e-14);
    CHECK(cdist(r.coeff(k), f.coeff(k)) < 1e-14);
  }
}

TEST_CASE("inverse of z + z^2 is the signed Catalan series") {
  FormalSeries f(5);
  f.set_coeff(1, 1.0);
  f.set_coeff(2, 1.0);
  const FormalSeries g = invert(f);
  const double expected[] = {1.0, -1.0, 2.0, -5.0, 14.0};
  for (int k = 1; k <= 5; ++k)
    CHECK(cdist(g.coeff(k), C(expected[k - 1])) < 1e-12);
}

TEST_CASE("inverse round trip at random coefficients") {
  FormalSeries f = FormalSeries::from_coefficients(
      {C(0.7, 0.2), C(0.3, -0.1), C(-0.2, 0.05), C(0.1), C(0.0, 0.4),
       C(-0.6, -0.3)});
  const FormalSeries g = invert(f);
  const FormalSeries fg = compose(f, g);
  const FormalSeries gf = compose(g, f);
  CHECK(cdist(fg.coeff(1), C(1.0)) < 1e-12);
  CHECK(cdist(gf.coeff(1), C(1.0)) < 1e-12);
  for (int k = 2; k <= 6; ++k) {
    CHECK(cdist(fg.coeff(k), C(0.0)) < 1e-10);
    CHECK(cdist(gf.coeff(k), C(0.0)) < 1e-10);
  }
}

TEST_CASE("flow of z^2 d/dz is z / (1 - z)") {
  FormalVectorField v(7);
  v.set_coeff(2, 1.0);
  const FormalSeries f = exp_vector_field(v, 7);
  for (int k = 1; k <= 7; ++k) CHECK(cdist(f.coeff(k), C(1.0)) < 1e-12);
}

TEST_CASE("flow of z^3 d/dz is z (1 - 2 z^2)^{-1/2}") {
  FormalVectorField v(9);
  v.set_coeff(3, 1.0);
  const FormalSeries f = exp_vector_field(v, 9);
  const double odd[] = {1.0, 1.0, 1.5, 2.5, 35.0 / 8.0};
  for (int k = 1; k <= 9; ++k) {
    const C expected = (k % 2 == 1) ? C(odd[(k - 1) / 2]) : C(0.0);
    CHECK(cdist(f.coeff(k), expected) < 1e-12);
  }
}

TEST_CASE("quartic coefficient of the unit-coefficient flow") {
  // v = z^2 + z^3 + z^4: z^4 coefficient of exp(v d/dz) z is
  // v4 + (v2 v3 terms)/2 + v2^3/6 = 1 + 5/2 + 1 = 4.5
  FormalVectorField v(4);
  v.set_coeff(2, 1.0);
  v.set_coeff(3, 1.0);
  v.set_coeff(4, 1.0);
  const FormalSeries f = exp_vector_field(v, 4);
  CHECK(cdist(f.coeff(4), C(4.5)) < 1e-12);
}

TEST_CASE("scaling-flow decomposition round trip") {
  const C lambda = std::polar(0.8, 0.3);
  FormalVectorField v(5);
  v.set_coeff(2, C(0.1, 0.2));
  v.set_coeff(3, C(-0.05, 0.0));
  v.set_coeff(4, C(0.0, -0.15));
  v.set_coeff(5, C(0.07, 0.01));
  FormalSeries t = exp_vector_field(v, 5);
  t *= lambda;

  const auto [lam, field] = decompose_lambda_exp(t);
  CHECK(cdist(lam, lambda) < 1e-12);
  for (int k = 2; k <= 5; ++k) CHECK(cdist(field.coeff(k), v.coeff(k)) < 1e-10);

  // extract from u with u^{-1} = t
  const auto [lam2, field2] = extract_lambda_v(invert(t));
  CHECK(cdist(lam2, lambda) < 1e-12);
  for (int k = 2; k <= 5; ++k)
    CHECK(cdist(field2.coeff(k), v.coeff(k)) < 1e-10);
}

TEST_CASE("json round trip") {
  FormalSeries f = FormalSeries::from_coefficients(
      {C(1.25, -0.5), C(0.0, 1e-3), C(-7.0, 0.0)});
  const FormalSeries g = FormalSeries::from_json(f.to_json());
  REQUIRE(g.order() == f.order());
  for (int k = 1; k <= f.order(); ++k)
    CHECK(cdist(g.coeff(k), f.coeff(k)) == 0.0);
}
