#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "mslab/circle_maps.hpp"
#include "mslab/mc.hpp"
#include "mslab/measures.hpp"
#include "mslab/welding.hpp"

using namespace mslab;
using C = std::complex<double>;

TEST_CASE("identity composition blocks are the identity") {
  const CompositionBlocks blocks =
      composition_blocks(CircleDiffeo::identity(256), 24);
  CHECK((blocks.A - Eigen::MatrixXcd::Identity(24, 24)).cwiseAbs().maxCoeff() <
        1e-10);
  CHECK(blocks.B.cwiseAbs().maxCoeff() < 1e-10);
  CHECK(blocks.C.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("level-1 moebius welds to its closed-form triple") {
  const C a = C(1.25) * std::polar(1.0, 0.3);
  const C b = C(0.75) * std::polar(1.0, std::numbers::pi / 5.0);
  const MoebiusElement g{a, b, 1};
  const C w = b / a;
  const WeldingTriple t = weld(g, 64);

  CHECK(std::abs(t.diag - 1.0 / (a * a)) < 1e-9);
  REQUIRE(t.u_coefficients.size() >= 3);
  CHECK(std::abs(t.u_coefficients[0] + w) < 1e-9);
  CHECK(std::abs(t.u_coefficients[1] - w * w) < 1e-9);
  CHECK(std::abs(t.u_coefficients[2] + w * w * w) < 1e-9);
  REQUIRE(t.l_inverse_coefficients.size() >= 3);
  CHECK(std::abs(t.l_inverse_coefficients[0] + std::conj(b) / a) < 1e-9);
  CHECK(std::abs(t.l_inverse_coefficients[1]) < 1e-9);
  CHECK(std::abs(t.l_inverse_coefficients[2]) < 1e-9);
  CHECK(t.leak < 1e-12);
  // singular values of the positive block are >= 1; the QR-diagonal
  // estimate can sit a hair below in floating point
  CHECK(t.condition >= 1.0 - 1e-9);

  CHECK(std::fabs(area_defect(t)) < 1e-9);
  CHECK(max_mode_bound(t) <= 1.0 + 1e-9);

  const WeldVerification v = verify_weld(g, t);
  CHECK(v.sup_error < 1e-8);
  CHECK(v.winding == 1);
  CHECK(v.univalent);
}

TEST_CASE("level-2 moebius welds to its closed-form triple") {
  // |a|^2 - |b|^2 = 1 normalization: the map only sees w = b/a, but the
  // closed-form diagonal a^{-1} does not, so pin the representative.
  const double s = std::sqrt(std::norm(C(1.2)) - std::norm(C(0.5, 0.3)));
  const C a = C(1.2) / s;
  const C b = C(0.5, 0.3) / s;
  const MoebiusElement g{a, b, 2};
  const C w = b / a;
  const C c = std::conj(w) * std::conj(a) / a;
  const WeldingTriple t = weld(g, 64);

  CHECK(std::abs(t.diag - std::pow(a, -1.0)) < 1e-7);
  REQUIRE(t.u_coefficients.size() >= 4);
  CHECK(std::abs(t.u_coefficients[0]) < 1e-7);           // u_1 = 0
  CHECK(std::abs(t.u_coefficients[1] + 0.5 * w) < 1e-7); // u_2 = -w/2
  CHECK(std::abs(t.u_coefficients[2]) < 1e-7);
  CHECK(std::abs(t.u_coefficients[3] - 0.375 * w * w) < 1e-7);
  REQUIRE(t.l_inverse_coefficients.size() >= 4);
  CHECK(std::abs(t.l_inverse_coefficients[0]) < 1e-7);          // b_0 = 0
  CHECK(std::abs(t.l_inverse_coefficients[1] + 0.5 * c) < 1e-7);
  CHECK(std::abs(t.l_inverse_coefficients[2]) < 1e-7);
  CHECK(std::abs(t.l_inverse_coefficients[3] + 0.125 * c * c) < 1e-7);

  const WeldVerification v = verify_weld(g, t);
  CHECK(v.sup_error < 1e-6);
  CHECK(v.winding == 1);
  CHECK(v.univalent);
}

TEST_CASE("grid and closed-form welds agree") {
  const MoebiusElement g{C(1.3), C(0.55, 0.35), 2};
  const WeldingTriple closed = weld(g, 48);
  const WeldingTriple grid = weld(moebius_diffeo(g, 1024), 48);
  CHECK(std::abs(closed.diag - grid.diag) < 1e-6);
  CHECK(std::abs(closed.u_coefficients[1] - grid.u_coefficients[1]) < 1e-6);
  CHECK(std::abs(closed.l_inverse_coefficients[1] -
                 grid.l_inverse_coefficients[1]) < 1e-6);
}

TEST_CASE("determinant ratio reproduces the welding diagonal") {
  const double r = 0.5;
  const double a0 = 1.0 / std::sqrt(1.0 - r * r);
  const MoebiusElement g{C(a0), C(a0 * r) * std::polar(1.0, 0.4), 2};
  const double from_dets = diag_from_determinants(g, 64);
  const double expected = std::sqrt(1.0 - r * r);  // |a|^{-2/n}
  CHECK(std::fabs(from_dets - expected) < 1e-6);
  CHECK(std::fabs(std::abs(weld(g, 64).diag) - from_dets) < 1e-6);
}

TEST_CASE("composition matrix is symplectic up to truncation") {
  const CircleDiffeo phi = TrigVectorField::cosine(2).flow(0.35, 512);
  const CompositionBlocks blocks = composition_blocks(phi, 48);
  CHECK(symplectic_defect(blocks, 12) < 1e-6);
}

TEST_CASE("sampled diffeomorphism welds inside the support bounds") {
  Rng rng = Rng::substream(314, 0);
  const CircleDiffeo phi = sample_nu_beta(1.0, 64, 512, rng);
  const WeldingTriple t = weld(phi, 64);
  CHECK(std::abs(t.diag) <= 1.0 + 1e-2);
  CHECK(area_defect(t) >= -1e-2);
  CHECK(max_mode_bound(t) <= 1.0 + 1e-2);
  const WeldVerification v = verify_weld(phi, t);
  CHECK(v.winding == 1);
  CHECK(v.univalent);
}
