#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "mslab/bridge.hpp"
#include "mslab/circle_maps.hpp"
#include "mslab/mc.hpp"
#include "mslab/measures.hpp"
#include "mslab/operators.hpp"

using namespace mslab;
using C = std::complex<double>;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

TEST_CASE("gaussian exponent normalization") {
  CHECK(std::fabs(beta_hat(kPi / 4.0) - 1.0) < 1e-14);
  CHECK_THROWS(beta_hat(0.0));
}

TEST_CASE("measure sampling is the chart applied to one bridge draw") {
  Rng manual = Rng::substream(17, 4);
  const BridgePath b = sample_bridge(0.7, 16, 128, manual);
  const double rot = manual.uniform(0.0, kTwoPi);
  const CircleDiffeo direct = diffeo_from_log_derivative(b, rot);

  Rng rng = Rng::substream(17, 4);
  const CircleDiffeo phi = sample_nu_beta(0.7, 16, 128, rng);
  CHECK(phi.lift_values() == direct.lift_values());
  CHECK(std::fabs(rotation_part(phi) - rot) < 1e-9);
}

TEST_CASE("radon-nikodym derivative of a rotation is one") {
  const MoebiusElement rot{std::polar(1.0, -0.45), C(0.0), 1};
  BridgePath c = bridge_from_coefficients(0.8, {0.4, -0.2, 0.1}, 256);
  CHECK(std::fabs(rn_derivative(rot, c) - 1.0) < 1e-12);
  CHECK(std::fabs(rn_derivative(rot, c, 2.1) - 1.0) < 1e-12);
}

TEST_CASE("radon-nikodym derivative is multiplicative along compositions") {
  const MoebiusElement g1{C(1.15), C(0.25, 0.15), 1};
  const MoebiusElement g2{C(1.1, -0.1), C(0.1, -0.2), 1};
  BridgePath c = bridge_from_coefficients(1.2, {0.3, -0.1, 0.05}, 1024);
  const MoebiusElement eta1 = g1.inverse();

  // pull (rotation, bridge) back through g1^{-1}: the rotation coordinate
  // goes to eta1(u), the bridge picks up log eta1' sampled along Psi_c + u
  for (const double u : {0.7, 4.3}) {
    const double lhs = rn_derivative(compose(g1, g2), c, u);
    const BridgePath pulled = left_based_action(
        [&](double t) {
          return std::log(eta1.deriv(t + u)) - std::log(eta1.deriv(u));
        },
        c);
    const double rhs =
        rn_derivative(g1, c, u) * rn_derivative(g2, pulled, eta1.lift(u));
    CHECK(std::fabs(lhs / rhs - 1.0) < 1e-5);
  }

  // the rotation = 0 slice composes along based maps: rebase both factors
  // so they fix 0, then the slice density obeys the same chain rule
  const MoebiusElement r1{std::polar(1.0, -0.5 * eta1.lift(0.0)), C(0.0), 1};
  const MoebiusElement g1b = compose(g1, r1);
  const MoebiusElement eta2 = g2.inverse();
  const MoebiusElement r2{std::polar(1.0, -0.5 * eta2.lift(0.0)), C(0.0), 1};
  const MoebiusElement g2b = compose(g2, r2);
  const MoebiusElement eta1b = g1b.inverse();
  CHECK(std::fabs(std::sin(0.5 * g1b.lift(0.0))) < 1e-12);
  const double lhs0 = rn_derivative(compose(g1b, g2b), c);
  const BridgePath pulled0 = left_based_action(
      [&](double t) {
        return std::log(eta1b.deriv(t)) - std::log(eta1b.deriv(0.0));
      },
      c);
  const double rhs0 = rn_derivative(g1b, c) * rn_derivative(g2b, pulled0);
  CHECK(std::fabs(lhs0 / rhs0 - 1.0) < 1e-5);
}

TEST_CASE("radon-nikodym derivative integrates to one") {
  const double beta = 0.7;
  const MoebiusElement g{C(1.1), C(0.2, 0.1), 1};
  const SmoothBasedMap psi({0.3}, {});
  std::vector<double> rn_m(800), rn_s(800), rn_mj(800), rn_sj(800);
  parallel_for(rn_m.size(), 1, [&](std::size_t i) {
    Rng rng = Rng::substream(2718, i);
    const BridgePath c = sample_bridge(beta, 48, 256, rng);
    const double u = rng.uniform(0.0, kTwoPi);
    rn_m[i] = rn_derivative(g, c);
    rn_s[i] = rn_derivative(psi, c);
    rn_mj[i] = rn_derivative(g, c, u);
    rn_sj[i] = rn_derivative(psi, c, u);
  });
  for (const auto* s : {&rn_m, &rn_s, &rn_mj, &rn_sj}) {
    const MCEstimate e = MCEstimate::from_samples(*s, {});
    CHECK(std::fabs(e.mean - 1.0) <= 4.0 * e.stderr_of_mean);
  }
}

TEST_CASE("shift bound: monte carlo LHS matches the lognormal closed form") {
  const double beta = 0.5;
  const std::vector<double> h = {0.4, 0.0, 0.1};
  const ShiftBoundResult r = shift_bound_check(h, beta, 2.0, 20000, 7, 1);
  const double hh = (kPi / 4.0) * (0.16 + 9.0 * 0.01);
  CHECK(std::fabs(r.h_norm_sq - hh) < 1e-12);
  const double sigma_sq = beta_hat(beta) * hh;
  CHECK(std::fabs(r.sigma_sq - sigma_sq) < 1e-12);
  CHECK(std::fabs(r.lhs - std::expm1(sigma_sq)) <= 5.0 * r.lhs_stderr);
  CHECK(std::fabs(r.rhs - std::sqrt(kPi) * sigma_sq) < 1e-12);
  CHECK(r.holds(3.0));
}

TEST_CASE("sup-shifted integrals of the flat path") {
  BridgePath flat = bridge_from_coefficients(1.0, {0.0}, 64);
  const ShiftedExpIntegrals s = shifted_exp_integrals(flat, 0.2);
  CHECK(s.sup == 0.0);
  CHECK(std::fabs(s.i1 - kTwoPi) < 1e-12);
  CHECK(std::fabs(s.i2 - kTwoPi) < 1e-12);
  CHECK(std::fabs(pitman_yor_functional(0.2, flat) - kTwoPi / 0.04) < 1e-9);
}

TEST_CASE("heavy-tail estimator: statistics exceed one and stay uncensored") {
  const HeavyTailReport rep = question_3220_estimator(1.0, 1, 64, 512, 200, 41, 1);
  CHECK(rep.all_above_one);
  CHECK(rep.min_statistic > 1.0);
  CHECK(rep.censored_fraction == 0.0);
  CHECK(rep.mean > 1.0);
  REQUIRE(rep.exponent_quantiles.size() == 4);
  for (std::size_t i = 1; i < rep.exponent_quantiles.size(); ++i)
    CHECK(rep.exponent_quantiles[i] >= rep.exponent_quantiles[i - 1]);
}

TEST_CASE("weights reduce to one at c = h = 0 and factor as documented") {
  const std::vector<double> deltas = default_delta_schedule();
  const EnergyTable table = build_energy_table(1.0, 128, 32, deltas, 40, 3, 1);
  Rng rng = Rng::substream(5, 0);
  const CircleDiffeo phi = sample_nu_beta(1.0, 32, 128, rng);
  const WeightParts parts = weight_parts(phi, 1.0, table, 24);
  CHECK(parts.weight({0.0, 0.0}) == 1.0);
  const VirasoroWeight w{0.4, 0.05};
  const double expected = std::exp(-(0.4 / (8.0 * kPi * kPi)) * parts.energy) *
                          std::pow(parts.det2, 0.4) *
                          std::pow(parts.diag_abs, 0.8);
  CHECK(std::fabs(weight_ch(phi, w, 1.0, table, 24) - expected) < 1e-12);
  CHECK(parts.det2 <= 1.0 + 1e-12);
  CHECK(parts.diag_abs <= 1.0 + 1e-2);
}

TEST_CASE("importance ensemble: uniform weights at the base measure") {
  const BchEnsemble e =
      sample_nu_bch(1.0, {0.0, 0.0}, 24, 128, 24, nullptr, 64, 12, 1);
  CHECK(e.ess == doctest::Approx(64.0));
  CHECK(!e.low_ess_warning);
  for (const BchSample& s : e.samples)
    CHECK(std::fabs(s.weight - 1.0 / 64.0) < 1e-15);
  CHECK_THROWS(sample_nu_bch(1.0, {0.5, 0.0}, 24, 128, 24, nullptr, 8, 1, 1));
}

TEST_CASE("positive h tilts the diagonal toward one") {
  const int n = 400;
  const BchEnsemble base =
      sample_nu_bch(1.0, {0.0, 0.0}, 32, 256, 32, nullptr, n, 77, 1);
  const BchEnsemble tilted =
      sample_nu_bch(1.0, {0.0, 0.1}, 32, 256, 32, nullptr, n, 77, 1);
  double mean_base = 0.0, mean_tilted = 0.0;
  for (int i = 0; i < n; ++i) {
    mean_base += base.samples[i].weight * std::abs(base.samples[i].diag);
    mean_tilted += tilted.samples[i].weight * std::abs(tilted.samples[i].diag);
  }
  CHECK(mean_tilted > mean_base);
}

TEST_CASE("ensemble summaries compute weighted statistics") {
  BchEnsemble e;
  e.beta = 0.5;
  e.ess = 2.0;
  BchSample s1, s2;
  s1.weight = 0.25;
  s1.diag = C(0.8);
  s1.u_head = {C(0.5), C(1.0), C(0.2), C(0.1)};
  s1.b_head = {C(0.3)};
  s2.weight = 0.75;
  s2.diag = C(0.4);
  s2.u_head = {C(2.5), C(0.1), C(0.3), C(0.2)};
  s2.b_head = {C(0.1)};
  s2.in_support_box = false;
  e.samples = {s1, s2};

  const BetaSweepRow row = summarize_ensemble(e, {2}, {0.3}, {1.0});
  CHECK(std::fabs(row.mean_u1_abs - (0.25 * 0.5 + 0.75 * 2.5)) < 1e-12);
  CHECK(std::fabs(row.mean_b0_abs - (0.25 * 0.3 + 0.75 * 0.1)) < 1e-12);
  CHECK(std::fabs(row.mean_diag_abs - (0.25 * 0.8 + 0.75 * 0.4)) < 1e-12);
  CHECK(std::fabs(row.box_violation_fraction - 0.75) < 1e-12);
  REQUIRE(row.tails.size() == 1);
  // |u_2| > 0.9: only s1 (1.0 > 0.9); |u_1| > 0.6: only s2
  CHECK(std::fabs(row.tails[0].prob_high - 0.25) < 1e-12);
  CHECK(std::fabs(row.tails[0].prob_low - 0.75) < 1e-12);
  REQUIRE(row.mellin.size() == 1);
  const C expected = 0.25 * std::polar(1.0, -std::log(0.8)) +
                     0.75 * std::polar(1.0, -std::log(0.4));
  CHECK(std::abs(row.mellin[0] - expected) < 1e-12);
}

TEST_CASE("beta sweep produces one summary row per beta") {
  const BetaSweepReport rep = beta_sweep_limits(
      {0.0, 0.0}, {1.0, 0.5}, 24, 128, 24, "beta-sweep-test-cache", 20, 60, 23, 1);
  REQUIRE(rep.rows.size() == 2);
  for (const BetaSweepRow& row : rep.rows) {
    CHECK(row.ess > 0.0);
    CHECK(row.mean_diag_abs > 0.0);
    CHECK(row.mean_diag_abs <= 1.0 + 1e-2);
    CHECK(row.box_violation_fraction >= 0.0);
    CHECK(row.box_violation_fraction <= 1.0);
    CHECK(row.tails.size() == 9);
    CHECK(row.mellin.size() == 4);
  }
  std::filesystem::remove_all("beta-sweep-test-cache");
}
