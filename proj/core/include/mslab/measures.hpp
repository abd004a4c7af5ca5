#pragma once
// Sampling of the diffeomorphism measures, the Radon-Nikodym derivative of
// the left action, quasi-invariance experiments, heavy-tailed functionals of
// the bridge, and the weighted ensembles used for the small-beta sweeps.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mslab/bridge.hpp"
#include "mslab/circle_maps.hpp"
#include "mslab/mc.hpp"
#include "mslab/operators.hpp"
#include "mslab/welding.hpp"

namespace mslab {

// Gaussian weight exponent per unit |.|_H^2; the product law with
// Var b_n = 1/(beta n^2) has formal density exp(-(beta_hat/2) int b'^2).
double beta_hat(double beta);

// One draw of the rotation-biinvariant measure: the based map of one bridge
// draw composed on the right with a uniform rotation.  Consumes n_modes
// normals, then one uniform.
CircleDiffeo sample_nu_beta(double beta, int n_modes, int grid_size, Rng& rng);

// Densities for the left action of phi on the law of sample_nu_beta.  In the
// chart psi = Rot_u . Psi_b (u = psi(0) = rotation_part, b = log_derivative),
// the action sends (u, b) to (phi(u), b + log phi'(Psi_b + u) - log phi'(u)),
// and its density w.r.t. (uniform u) x (bridge law) at (rotation, c) is
//   rn = eta'(rotation) |det(I + DK)|
//          exp( beta_hat int S_eta(Psi_c + rotation) Psi_c'^2 dtau ),
// eta = phi^{-1}, S the Schwarzian, K(b) = log(eta') . (Psi_b + rotation).
// This density is exactly multiplicative along compositions of phi and is
// identically 1 for rotations.  The Carleman-Fredholm factor det(I + DK) is
// essential: DK has genuinely complex spectrum, so the determinant is not 1;
// dropping it inflates E[RN] by exp(var/2).  DK = Volterra + rank-one
// collapses the determinant to a single integrating-factor pass (O(grid)).
//
// The two-argument overloads are the rotation = 0 slice without the eta'
// marginal factor: the density of the bridge-only action
// b -> b + log(eta') . Psi_b, i.e. of the based representative
// phi . Rot(phi^{-1}(0)) acting on the bridge law alone.  The bridge law is
// NOT invariant under the basepoint-moving rotation action (its random time
// shift correlates with the path), so the slice density is multiplicative
// only along based maps; use the rotation-aware overloads for group
// compositions.
//
// Quadrature is the rectangle rule on c's grid, so phi must supply exact
// derivatives; all overloads use closed forms for log Phi' and its
// derivatives.
double rn_derivative(const MoebiusElement& phi, const BridgePath& c);
double rn_derivative(const SmoothBasedMap& phi, const BridgePath& c);
double rn_derivative(const MoebiusElement& phi, const BridgePath& c,
                     double rotation);
double rn_derivative(const SmoothBasedMap& phi, const BridgePath& c,
                     double rotation);

// Monte Carlo check of the affine quasi-invariance bound
//   E | RN_h - 1 |^p  <=  2 Gamma((p+1)/2) sigma^p,  sigma^2 = beta_hat |h|_H^2,
// for the translation b -> b + h with RN_h = exp(beta_hat(<h,b>_H - |h|_H^2/2)).
// Sampling is exact in mode space.  The bound has slack only for sigma^2
// below ~1.19 when p = 2, so callers should keep beta_hat |h|_H^2 small.
struct ShiftBoundResult {
  double beta = 0.0;
  double p = 1.0;
  double h_norm_sq = 0.0;  // |h|_H^2 = (pi/4) sum n^2 h_n^2
  double sigma_sq = 0.0;   // beta_hat * h_norm_sq
  double lhs = 0.0;        // Monte Carlo estimate of E |RN - 1|^p
  double lhs_stderr = 0.0;
  double rhs = 0.0;        // 2 Gamma((p+1)/2) sigma^p
  int n_samples = 0;
  bool holds(double n_stderr) const { return lhs <= rhs + n_stderr * lhs_stderr; }
};
ShiftBoundResult shift_bound_check(const std::vector<double>& h_coefficients,
                                   double beta, double p, int n_samples,
                                   std::uint64_t seed, unsigned workers = 1);

// Trapezoid integrals of the sup-shifted exponentials of one bridge path,
//   i1 = int exp((b - sup b)/beta),  i2 = int exp(2(b - sup b)/beta).
// Shifting by the supremum keeps both integrands in (0, 1]; callers needing
// resolution at small beta should synthesize the path on a fine grid first
// (the decay scale around the maximum is ~beta^2 for a unit bridge).
struct ShiftedExpIntegrals {
  double sup = 0.0;
  double i1 = 0.0;
  double i2 = 0.0;
};
ShiftedExpIntegrals shifted_exp_integrals(const BridgePath& b, double beta);

// Per-sample statistic exp(X) with X = n beta^2 i2 / i1^2 for a unit bridge
// (the reference law is always beta = 1; beta enters only the functional).
// X > 0 always, so every statistic exceeds 1.  Samples with X > x_censor
// would overflow exp and are censored: they are excluded from the means and
// reported via censored_fraction, and quantiles are taken over min(X, x_censor).
struct HeavyTailReport {
  double beta = 0.0;
  int n = 1;
  int n_samples = 0;
  int n_censored = 0;
  double censored_fraction = 0.0;
  double mean = 0.0;           // mean of exp(X) over uncensored samples
  double stderr_mean = 0.0;
  double trimmed_mean = 0.0;   // central 98% of the uncensored exp(X)
  double min_statistic = 0.0;  // min over all samples of exp(min(X, x_censor))
  std::vector<double> quantile_levels;
  std::vector<double> exponent_quantiles;  // quantiles of min(X, x_censor)
  bool all_above_one = false;
};
HeavyTailReport question_3220_estimator(double beta, int n, int n_modes,
                                        int grid_size, int n_samples,
                                        std::uint64_t seed, unsigned workers = 1,
                                        double x_censor = 700.0);

// beta^{-2} int exp((b - sup b)/beta) dt for one path; the classical limit
// law of this functional as beta -> 0 is beta-independent, which the CLI
// probes by comparing empirical laws at beta and beta/2.
double pitman_yor_functional(double beta, const BridgePath& b);

// Multiplicative weight of the regularized measure relative to the base
// bridge law, split into its three factors:
//   exp(-(c / 8 pi^2) energy) * det2^c * diag_abs^{16 h}
// where energy is the centered regularized kernel energy, det2 is the
// Carleman determinant det2|A_a|^2 of the antiperiodic block, and diag_abs
// is |diag| of the welding triple.
struct WeightParts {
  double energy = 0.0;    // centered regularized energy (finest level)
  bool energy_converged = true;
  double det2 = 1.0;      // det2 |A_a|^2, in [0, 1]
  double diag_abs = 1.0;  // |diag| of the welding factorization
  double weight(const VirasoroWeight& w) const;
};
WeightParts weight_parts(const CircleDiffeo& phi, double beta,
                         const EnergyTable& table, int cutoff);
double weight_ch(const CircleDiffeo& phi, const VirasoroWeight& w, double beta,
                 const EnergyTable& table, int cutoff);

// Self-normalized importance-sampling ensemble targeting the weighted
// measure: proposals from sample_nu_beta, weights from weight_parts.  Each
// sample keeps the leading welding coefficients and the support-box /
// area-bound diagnostics used by the sweeps.
struct BchSample {
  double weight = 1.0;  // self-normalized, sums to 1 over the ensemble
  double rotation = 0.0;
  std::complex<double> diag{1.0, 0.0};
  std::vector<std::complex<double>> u_head;  // u_k, k = 1..head
  std::vector<std::complex<double>> b_head;  // b_n, n = 0..head-1
  double energy = 0.0;
  double det2 = 1.0;
  double area = 0.0;       // area defect of the welding triple
  double max_bound = 0.0;  // sup_n n(|b_n|^2 + |diag|^2 |u_n|^2)
  double weld_error = 0.0;
  bool univalent = true;
  bool in_support_box = true;  // |diag|<=1, |u_k|<=k+1, |b_n|<=1/n, up to slack
};
struct BchEnsemble {
  double beta = 0.0;
  VirasoroWeight w;
  std::vector<BchSample> samples;
  double ess = 0.0;  // (sum w)^2 / sum w^2 of the raw weights
  bool low_ess_warning = false;
  double mean_raw_weight = 0.0;
};
BchEnsemble sample_nu_bch(double beta, const VirasoroWeight& w, int n_modes,
                          int grid_size, int cutoff, const EnergyTable* table,
                          int n_samples, std::uint64_t seed,
                          unsigned workers = 1, int head = 16,
                          double box_slack = 1e-2);

// Weighted summary statistics of one ensemble per beta: moments of |u_1|,
// |b_0|, |diag|, tail probabilities comparing |u_n| > (n+1) R against
// |u_{n-1}| > n R, Mellin samples E |diag|^{-i lambda}, and the fraction of
// samples outside the support box.
struct TailCell {
  int n = 2;
  double r = 0.0;
  double prob_high = 0.0;  // weighted P(|u_n| > (n+1) R)
  double prob_low = 0.0;   // weighted P(|u_{n-1}| > n R)
};
struct BetaSweepRow {
  double beta = 0.0;
  double ess = 0.0;
  double mean_u1_abs = 0.0;
  double mean_b0_abs = 0.0;
  double mean_diag_abs = 0.0;
  double sd_diag_abs = 0.0;
  double box_violation_fraction = 0.0;
  std::vector<TailCell> tails;
  std::vector<double> mellin_lambdas;
  std::vector<std::complex<double>> mellin;  // weighted E |diag|^{-i lambda}
};
struct BetaSweepReport {
  VirasoroWeight w;
  std::vector<BetaSweepRow> rows;
};
BetaSweepRow summarize_ensemble(const BchEnsemble& ensemble,
                                const std::vector<int>& tail_ns,
                                const std::vector<double>& tail_rs,
                                const std::vector<double>& mellin_lambdas);
BetaSweepReport beta_sweep_limits(const VirasoroWeight& w,
                                  const std::vector<double>& betas, int n_modes,
                                  int grid_size, int cutoff,
                                  const std::filesystem::path& table_dir,
                                  int table_samples, int n_samples,
                                  std::uint64_t seed, unsigned workers = 1);

}  // namespace mslab
