#include "mslab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace mslab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// density of the bridge action b -> b + log(eta') . Psi_b for eta = phi^{-1}:
// |det(I + DK)| exp(beta_hat int S_eta(Psi) Psi'^2).  DK is Volterra plus
// rank one, so det(I + DK) = 1 + <g, (I+V)^{-1} f> collapses to one scalar
// integrating-factor pass.  hp = (log eta')', sp = Schwarzian of eta,
// ep = eta', all as functions of the angle.
template <typename Hp, typename Sp, typename Ep>
double rn_assemble(const BridgePath& c, Hp&& hp, Sp&& sp, Ep&& ep) {
  const CircleDiffeo psi = based_from_bridge(c);
  const int m = psi.grid_size();
  const double h = kTwoPi / m;
  const std::vector<double>& lift = psi.lift_values();
  const std::vector<double>& d1 = psi.deriv_values();
  double s_int = 0.0;   // rectangle rule; integrand is periodic
  double acc_z = 0.0;   // trapezoid cumulative of eta'(Psi) Psi' f
  double prev = 0.0;
  std::vector<double> y(m + 1);
  for (int j = 0; j <= m; ++j) {
    const double x = lift[j];
    const double hpx = hp(x);
    const double epx = ep(x);
    if (j < m) s_int += sp(x) * d1[j] * d1[j];
    const double f = -hpx * lift[j];
    const double integ = epx * d1[j] * f;
    if (j > 0) acc_z += 0.5 * h * (prev + integ);
    prev = integ;
    y[j] = f - hpx * (acc_z / epx);
  }
  double det_acc = 0.0;
  for (int j = 0; j < m; ++j)
    det_acc += 0.5 * h * (d1[j] * y[j] + d1[j + 1] * y[j + 1]);
  const double det = 1.0 + det_acc / kTwoPi;
  return std::fabs(det) * std::exp(beta_hat(c.beta) * s_int * h);
}

// group point Rot_u . Psi_c: eta = phi^{-1} is sampled at angle + u (its
// derivatives are periodic closed forms, so no wrapping is needed); the
// rank-one lift factor comes from D Psi and stays unshifted.
double rn_at(const MoebiusElement& eta, const BridgePath& c, double u) {
  return rn_assemble(
      c,
      [&](double x) { return eta.second_deriv(x + u) / eta.deriv(x + u); },
      [&](double x) {
        const double d1 = eta.deriv(x + u);
        const double r = eta.second_deriv(x + u) / d1;
        return eta.third_deriv(x + u) / d1 - 1.5 * r * r;
      },
      [&](double x) { return eta.deriv(x + u); });
}

// eta = phi^{-1} expressed through phi at H = Phi^{-1}(x + u):
// eta' = 1/phi'(H), (log eta')' = -b1(H)/phi'(H),
// S_eta = -(b2(H) - b1(H)^2/2)/phi'(H)^2
double rn_at(const SmoothBasedMap& phi, const BridgePath& c, double u) {
  return rn_assemble(
      c,
      [&](double x) {
        const double hx = phi.inverse(x + u);
        return -phi.b1(hx) / phi.deriv(hx);
      },
      [&](double x) {
        const double hx = phi.inverse(x + u);
        const double b1 = phi.b1(hx);
        const double dp = phi.deriv(hx);
        return -(phi.b2(hx) - 0.5 * b1 * b1) / (dp * dp);
      },
      [&](double x) { return 1.0 / phi.deriv(phi.inverse(x + u)); });
}

}  // namespace

double beta_hat(double beta) {
  if (!(beta > 0.0))
    throw std::invalid_argument("beta_hat: beta must be positive");
  return 4.0 * beta / kPi;
}

CircleDiffeo sample_nu_beta(double beta, int n_modes, int grid_size, Rng& rng) {
  const BridgePath b = sample_bridge(beta, n_modes, grid_size, rng);
  const double rotation = rng.uniform(0.0, kTwoPi);
  return diffeo_from_log_derivative(b, rotation);
}

double rn_derivative(const MoebiusElement& phi, const BridgePath& c) {
  return rn_at(phi.inverse(), c, 0.0);
}

double rn_derivative(const SmoothBasedMap& phi, const BridgePath& c) {
  return rn_at(phi, c, 0.0);
}

double rn_derivative(const MoebiusElement& phi, const BridgePath& c,
                     double rotation) {
  const MoebiusElement eta = phi.inverse();
  return eta.deriv(rotation) * rn_at(eta, c, rotation);
}

double rn_derivative(const SmoothBasedMap& phi, const BridgePath& c,
                     double rotation) {
  return rn_at(phi, c, rotation) / phi.deriv(phi.inverse(rotation));
}

ShiftBoundResult shift_bound_check(const std::vector<double>& h_coefficients,
                                   double beta, double p, int n_samples,
                                   std::uint64_t seed, unsigned workers) {
  if (!(p >= 1.0))
    throw std::invalid_argument("shift_bound_check: p must be >= 1");
  if (n_samples < 2)
    throw std::invalid_argument("shift_bound_check: need at least 2 samples");
  const double bh = beta_hat(beta);
  const int n = static_cast<int>(h_coefficients.size());
  double hh = 0.0;
  for (int k = 1; k <= n; ++k)
    hh += static_cast<double>(k) * k * h_coefficients[k - 1] * h_coefficients[k - 1];
  hh *= kPi / 4.0;
  if (!(hh > 0.0))
    throw std::invalid_argument("shift_bound_check: shift must be nonzero");

  const double scale = kPi / (4.0 * std::sqrt(beta));
  std::vector<double> samples(n_samples);
  parallel_for(n_samples, workers, [&](std::size_t i) {
    Rng rng = Rng::substream(seed, i);
    double dot = 0.0;  // <h, b>_H with b_k = g_k / (sqrt(beta) k)
    for (int k = 1; k <= n; ++k) dot += k * h_coefficients[k - 1] * rng.normal();
    const double z = bh * (scale * dot - 0.5 * hh);
    samples[i] = std::pow(std::fabs(std::expm1(z)), p);
  });
  const MCEstimate est = MCEstimate::from_samples(samples, {});

  ShiftBoundResult r;
  r.beta = beta;
  r.p = p;
  r.h_norm_sq = hh;
  r.sigma_sq = bh * hh;
  r.lhs = est.mean;
  r.lhs_stderr = est.stderr_of_mean;
  r.rhs = 2.0 * std::tgamma(0.5 * (p + 1.0)) * std::pow(r.sigma_sq, 0.5 * p);
  r.n_samples = n_samples;
  return r;
}

ShiftedExpIntegrals shifted_exp_integrals(const BridgePath& b, double beta) {
  if (!(beta > 0.0))
    throw std::invalid_argument("shifted_exp_integrals: beta must be positive");
  const int m = b.grid_size();
  if (m < 2)
    throw std::invalid_argument("shifted_exp_integrals: path too coarse");
  ShiftedExpIntegrals out;
  out.sup = *std::max_element(b.values.begin(), b.values.end());
  const double h = kTwoPi / m;
  double i1 = 0.0;
  double i2 = 0.0;
  for (int j = 0; j <= m; ++j) {
    const double w = (j == 0 || j == m) ? 0.5 : 1.0;
    const double e = std::exp((b.values[j] - out.sup) / beta);
    i1 += w * e;
    i2 += w * e * e;
  }
  out.i1 = i1 * h;
  out.i2 = i2 * h;
  return out;
}

HeavyTailReport question_3220_estimator(double beta, int n, int n_modes,
                                        int grid_size, int n_samples,
                                        std::uint64_t seed, unsigned workers,
                                        double x_censor) {
  if (!(beta > 0.0) || n < 1)
    throw std::invalid_argument("question_3220_estimator: bad parameters");
  if (n_samples < 2)
    throw std::invalid_argument("question_3220_estimator: need >= 2 samples");

  std::vector<double> xs(n_samples);
  parallel_for(n_samples, workers, [&](std::size_t i) {
    Rng rng = Rng::substream(seed, i);
    const BridgePath b = sample_bridge(1.0, n_modes, grid_size, rng);
    const ShiftedExpIntegrals s = shifted_exp_integrals(b, beta);
    xs[i] = n * beta * beta * s.i2 / (s.i1 * s.i1);
  });

  HeavyTailReport rep;
  rep.beta = beta;
  rep.n = n;
  rep.n_samples = n_samples;
  std::vector<double> uncensored;
  uncensored.reserve(xs.size());
  std::vector<double> clipped(xs.size());
  double min_x = xs[0];
  for (std::size_t i = 0; i < xs.size(); ++i) {
    min_x = std::min(min_x, xs[i]);
    clipped[i] = std::min(xs[i], x_censor);
    if (xs[i] > x_censor)
      ++rep.n_censored;
    else
      uncensored.push_back(std::exp(xs[i]));
  }
  rep.censored_fraction =
      static_cast<double>(rep.n_censored) / static_cast<double>(n_samples);
  if (!uncensored.empty()) {
    const MCEstimate est = MCEstimate::from_samples(uncensored, {});
    rep.mean = est.mean;
    rep.stderr_mean = est.stderr_of_mean;
    std::sort(uncensored.begin(), uncensored.end());
    const std::size_t trim = uncensored.size() / 100;
    double acc = 0.0;
    for (std::size_t i = trim; i + trim < uncensored.size(); ++i)
      acc += uncensored[i];
    rep.trimmed_mean = acc / static_cast<double>(uncensored.size() - 2 * trim);
  }
  const MCEstimate clipped_est =
      MCEstimate::from_samples(clipped, {0.5, 0.9, 0.99, 0.999});
  rep.quantile_levels = clipped_est.quantile_levels;
  rep.exponent_quantiles = clipped_est.quantiles;
  rep.min_statistic = std::exp(std::min(min_x, x_censor));
  rep.all_above_one = min_x > 0.0;
  return rep;
}

double pitman_yor_functional(double beta, const BridgePath& b) {
  return shifted_exp_integrals(b, beta).i1 / (beta * beta);
}

double WeightParts::weight(const VirasoroWeight& w) const {
  const double energy_factor = std::exp(-(w.c / (8.0 * kPi * kPi)) * energy);
  return energy_factor * std::pow(det2, w.c) * std::pow(diag_abs, 16.0 * w.h);
}

WeightParts weight_parts(const CircleDiffeo& phi, double beta,
                         const EnergyTable& table, int cutoff) {
  BridgePath b;
  b.beta = beta;
  b.values = log_derivative(phi);
  b.coeff = analyze_sine_series(b.values);

  WeightParts parts;
  const RegularizedEnergy e = regularized_energy(b, beta, table.deltas, table);
  parts.energy = e.value;
  parts.energy_converged = e.converged;
  parts.det2 = det2_abs_A(build_blocks(phi, Spin::antiperiodic, cutoff));
  parts.diag_abs = std::abs(weld(phi, cutoff).diag);
  return parts;
}

double weight_ch(const CircleDiffeo& phi, const VirasoroWeight& w, double beta,
                 const EnergyTable& table, int cutoff) {
  return weight_parts(phi, beta, table, cutoff).weight(w);
}

BchEnsemble sample_nu_bch(double beta, const VirasoroWeight& w, int n_modes,
                          int grid_size, int cutoff, const EnergyTable* table,
                          int n_samples, std::uint64_t seed, unsigned workers,
                          int head, double box_slack) {
  if (n_samples < 1)
    throw std::invalid_argument("sample_nu_bch: n_samples must be positive");
  if (w.c != 0.0 && table == nullptr)
    throw std::invalid_argument("sample_nu_bch: energy table required for c != 0");

  BchEnsemble out;
  out.beta = beta;
  out.w = w;
  out.samples.resize(n_samples);
  std::vector<double> raw(n_samples, 1.0);

  parallel_for(n_samples, workers, [&](std::size_t i) {
    Rng rng = Rng::substream(seed, i);
    const BridgePath b = sample_bridge(beta, n_modes, grid_size, rng);
    const double rotation = rng.uniform(0.0, kTwoPi);
    const CircleDiffeo phi = diffeo_from_log_derivative(b, rotation);

    WeightParts parts;
    if (w.c != 0.0) {
      const RegularizedEnergy e =
          regularized_energy(b, beta, table->deltas, *table);
      parts.energy = e.value;
      parts.energy_converged = e.converged;
      parts.det2 = det2_abs_A(build_blocks(phi, Spin::antiperiodic, cutoff));
    }
    const WeldingTriple t = weld(phi, cutoff);
    parts.diag_abs = std::abs(t.diag);
    const WeldVerification v = verify_weld(phi, t);

    BchSample& s = out.samples[i];
    s.rotation = rotation;
    s.diag = t.diag;
    s.energy = parts.energy;
    s.det2 = parts.det2;
    s.area = area_defect(t);
    s.max_bound = max_mode_bound(t);
    s.weld_error = v.sup_error;
    s.univalent = v.univalent;

    const std::size_t uh =
        std::min<std::size_t>(head, t.u_coefficients.size());
    s.u_head.assign(t.u_coefficients.begin(), t.u_coefficients.begin() + uh);
    const std::size_t bh =
        std::min<std::size_t>(head, t.l_inverse_coefficients.size());
    s.b_head.assign(t.l_inverse_coefficients.begin(),
                    t.l_inverse_coefficients.begin() + bh);

    bool in_box = parts.diag_abs <= 1.0 + box_slack;
    for (std::size_t k = 1; k <= t.u_coefficients.size() && in_box; ++k)
      in_box = std::abs(t.u_coefficients[k - 1]) <= (k + 1.0) * (1.0 + box_slack);
    for (std::size_t m = 1; m < t.l_inverse_coefficients.size() && in_box; ++m)
      in_box = std::abs(t.l_inverse_coefficients[m]) <= (1.0 + box_slack) / m;
    s.in_support_box = in_box;

    raw[i] = parts.weight(w);
  });

  double total = 0.0;
  double total_sq = 0.0;
  for (double r : raw) {
    total += r;
    total_sq += r * r;
  }
  if (!(total > 0.0) || !std::isfinite(total))
    throw std::runtime_error("sample_nu_bch: degenerate importance weights");
  out.ess = total * total / total_sq;
  out.low_ess_warning = out.ess < n_samples / 10.0;
  out.mean_raw_weight = total / n_samples;
  for (int i = 0; i < n_samples; ++i) out.samples[i].weight = raw[i] / total;
  return out;
}

BetaSweepRow summarize_ensemble(const BchEnsemble& ensemble,
                                const std::vector<int>& tail_ns,
                                const std::vector<double>& tail_rs,
                                const std::vector<double>& mellin_lambdas) {
  BetaSweepRow row;
  row.beta = ensemble.beta;
  row.ess = ensemble.ess;

  double diag_sq = 0.0;
  for (const BchSample& s : ensemble.samples) {
    const double d = std::abs(s.diag);
    row.mean_u1_abs += s.weight * (s.u_head.empty() ? 0.0 : std::abs(s.u_head[0]));
    row.mean_b0_abs += s.weight * (s.b_head.empty() ? 0.0 : std::abs(s.b_head[0]));
    row.mean_diag_abs += s.weight * d;
    diag_sq += s.weight * d * d;
    if (!s.in_support_box) row.box_violation_fraction += s.weight;
  }
  row.sd_diag_abs = std::sqrt(
      std::max(0.0, diag_sq - row.mean_diag_abs * row.mean_diag_abs));

  for (int n : tail_ns) {
    if (n < 2) throw std::invalid_argument("summarize_ensemble: tail index >= 2");
    for (double r : tail_rs) {
      TailCell cell;
      cell.n = n;
      cell.r = r;
      for (const BchSample& s : ensemble.samples) {
        if (static_cast<int>(s.u_head.size()) < n)
          throw std::invalid_argument("summarize_ensemble: head too short");
        if (std::abs(s.u_head[n - 1]) > (n + 1.0) * r) cell.prob_high += s.weight;
        if (std::abs(s.u_head[n - 2]) > n * r) cell.prob_low += s.weight;
      }
      row.tails.push_back(cell);
    }
  }

  row.mellin_lambdas = mellin_lambdas;
  for (double lambda : mellin_lambdas) {
    std::complex<double> acc = 0.0;
    for (const BchSample& s : ensemble.samples)
      acc += s.weight * std::polar(1.0, -lambda * std::log(std::abs(s.diag)));
    row.mellin.push_back(acc);
  }
  return row;
}

BetaSweepReport beta_sweep_limits(const VirasoroWeight& w,
                                  const std::vector<double>& betas, int n_modes,
                                  int grid_size, int cutoff,
                                  const std::filesystem::path& table_dir,
                                  int table_samples, int n_samples,
                                  std::uint64_t seed, unsigned workers) {
  const std::vector<int> tail_ns = {2, 3, 4};
  const std::vector<double> tail_rs = {0.25, 0.5, 0.75};
  const std::vector<double> lambdas = {0.5, 1.0, 2.0, 4.0};

  BetaSweepReport rep;
  rep.w = w;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    EnergyTable table;
    const EnergyTable* tp = nullptr;
    if (w.c != 0.0) {
      table = cached_energy_table(betas[i], grid_size, n_modes,
                                  default_delta_schedule(), table_samples,
                                  seed ^ 0x9e3779b97f4a7c15ull, table_dir,
                                  workers);
      tp = &table;
    }
    const BchEnsemble e =
        sample_nu_bch(betas[i], w, n_modes, grid_size, cutoff, tp, n_samples,
                      seed + i, workers, 8, 1e-2);
    rep.rows.push_back(summarize_ensemble(e, tail_ns, tail_rs, lambdas));
  }
  return rep;
}

}  // namespace mslab
