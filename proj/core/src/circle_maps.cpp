#include "mslab/circle_maps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mslab/fft.hpp"

namespace mslab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_2pi(double t) {
  double r = std::fmod(t, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r;
}

std::vector<double> grid_points(int m) {
  std::vector<double> t(m + 1);
  for (int j = 0; j <= m; ++j) t[j] = kTwoPi * j / m;
  return t;
}

// reduce t to [0, 2*pi] and report the number of subtracted periods
double reduce(double t, double& periods) {
  double k = std::floor(t / kTwoPi);
  double u = t - kTwoPi * k;
  if (u > kTwoPi) {  // guard against floor round-off
    u -= kTwoPi;
    k += 1.0;
  }
  periods = k;
  return u;
}

}  // namespace

// ---- CircleDiffeo ----------------------------------------------------------

void CircleDiffeo::build(std::vector<double> lift, std::vector<double> d1,
                         std::vector<double> d2) {
  const int m = static_cast<int>(lift.size()) - 1;
  if (m < 4) throw std::invalid_argument("CircleDiffeo: need at least 5 lift samples");
  if (std::abs(lift[m] - lift[0] - kTwoPi) > 1e-8)
    throw std::domain_error("CircleDiffeo: lift does not wind once around");
  lift[m] = lift[0] + kTwoPi;
  for (int j = 0; j < m; ++j)
    if (!(lift[j + 1] > lift[j]))
      throw std::domain_error("CircleDiffeo: lift is not strictly increasing");
  const double h = kTwoPi / m;

  if (d1.empty()) {
    d1 = periodic_slopes(lift, h, kTwoPi);
    monotone_clamp(lift, h, d1, kTwoPi);
  } else {
    if (d1.size() != lift.size())
      throw std::invalid_argument("CircleDiffeo: derivative sample count mismatch");
    for (double v : d1)
      if (!(v > 0.0)) throw std::domain_error("CircleDiffeo: derivative must be positive");
  }
  if (!d2.empty() && d2.size() != lift.size())
    throw std::invalid_argument("CircleDiffeo: second-derivative sample count mismatch");

  lift_ = std::move(lift);
  d1_ = std::move(d1);
  d2_ = std::move(d2);
  interp_lift_ = UniformHermite(0.0, h, lift_, d1_);
  interp_d1_ = UniformHermite(0.0, h, d1_,
                              d2_.empty() ? periodic_slopes(d1_, h, 0.0) : d2_);
  if (!d2_.empty())
    interp_d2_ = UniformHermite(0.0, h, d2_, periodic_slopes(d2_, h, 0.0));
  inv_lift_.clear();
}

CircleDiffeo CircleDiffeo::from_lift(std::vector<double> lift) {
  CircleDiffeo phi;
  phi.build(std::move(lift), {}, {});
  return phi;
}

CircleDiffeo CircleDiffeo::from_lift_and_derivs(std::vector<double> lift,
                                                std::vector<double> d1,
                                                std::vector<double> d2) {
  CircleDiffeo phi;
  phi.build(std::move(lift), std::move(d1), std::move(d2));
  return phi;
}

CircleDiffeo CircleDiffeo::identity(int grid_size) {
  return rotation(grid_size, 0.0);
}

CircleDiffeo CircleDiffeo::rotation(int grid_size, double angle) {
  std::vector<double> lift = grid_points(grid_size);
  for (double& v : lift) v += angle;
  std::vector<double> ones(grid_size + 1, 1.0);
  std::vector<double> zeros(grid_size + 1, 0.0);
  return from_lift_and_derivs(std::move(lift), std::move(ones), std::move(zeros));
}

double CircleDiffeo::lift(double t) const {
  double k;
  const double u = reduce(t, k);
  return interp_lift_(u) + kTwoPi * k;
}

double CircleDiffeo::deriv(double t) const {
  double k;
  return interp_d1_(reduce(t, k));
}

double CircleDiffeo::second_deriv(double t) const {
  double k;
  const double u = reduce(t, k);
  if (!d2_.empty()) return interp_d2_(u);
  return interp_d1_.derivative(u);
}

void CircleDiffeo::build_inverse() const {
  const int m = grid_size();
  const double h = kTwoPi / m;
  inv_lift_.assign(m + 1, 0.0);
  std::vector<double> slopes(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double y = h * i;
    const double k = std::floor((y - lift_[0]) / kTwoPi);
    const double x = solve_increasing(interp_lift_, y - kTwoPi * k, 0.0, kTwoPi);
    inv_lift_[i] = x + kTwoPi * k;
  }
  inv_lift_[m] = inv_lift_[0] + kTwoPi;
  for (int i = 0; i <= m; ++i) slopes[i] = 1.0 / deriv(inv_lift_[i]);
  interp_inv_ = UniformHermite(0.0, h, inv_lift_, slopes);
}

const std::vector<double>& CircleDiffeo::inverse_lift_values() const {
  if (inv_lift_.empty()) build_inverse();
  return inv_lift_;
}

double CircleDiffeo::inverse(double t) const {
  if (inv_lift_.empty()) build_inverse();
  double k;
  const double u = reduce(t, k);
  return interp_inv_(u) + kTwoPi * k;
}

CircleDiffeo compose(const CircleDiffeo& phi, const CircleDiffeo& psi) {
  const int m = std::max(phi.grid_size(), psi.grid_size());
  std::vector<double> lift(m + 1), d1(m + 1), d2(m + 1);
  for (int j = 0; j <= m; ++j) {
    const double t = kTwoPi * j / m;
    const double p = psi.lift(t);
    const double dp = psi.deriv(t);
    lift[j] = phi.lift(p);
    d1[j] = phi.deriv(p) * dp;
    d2[j] = phi.second_deriv(p) * dp * dp + phi.deriv(p) * psi.second_deriv(t);
  }
  return CircleDiffeo::from_lift_and_derivs(std::move(lift), std::move(d1),
                                            std::move(d2));
}

CircleDiffeo invert(const CircleDiffeo& phi) {
  const int m = phi.grid_size();
  std::vector<double> lift = phi.inverse_lift_values();
  std::vector<double> d1(m + 1), d2(m + 1);
  for (int j = 0; j <= m; ++j) {
    const double dp = phi.deriv(lift[j]);
    d1[j] = 1.0 / dp;
    d2[j] = -phi.second_deriv(lift[j]) / (dp * dp * dp);
  }
  return CircleDiffeo::from_lift_and_derivs(std::move(lift), std::move(d1),
                                            std::move(d2));
}

// ---- MoebiusElement --------------------------------------------------------

MoebiusElement::MoebiusElement(std::complex<double> a_in,
                               std::complex<double> b_in, int level_in)
    : a(a_in), b(b_in), level(level_in) {
  if (level < 1) throw std::invalid_argument("MoebiusElement: level must be >= 1");
  const double det = std::norm(a) - std::norm(b);
  if (!(det > 1e-12)) throw std::domain_error("MoebiusElement: |a|^2 - |b|^2 must be positive");
  const double s = 1.0 / std::sqrt(det);
  a *= s;
  b *= s;
}

double MoebiusElement::lift(double t) const {
  const std::complex<double> w = b / a;
  const std::complex<double> z = std::polar(1.0, level * t);
  return t - (2.0 / level) * (std::arg(a) + std::arg(1.0 + w * z));
}

double MoebiusElement::deriv(double t) const {
  const std::complex<double> q = std::conj(a) * b * std::polar(1.0, level * t);
  return 1.0 / (std::norm(a) + std::norm(b) + 2.0 * q.real());
}

double MoebiusElement::second_deriv(double t) const {
  const std::complex<double> q = std::conj(a) * b * std::polar(1.0, level * t);
  const double d = 1.0 / (std::norm(a) + std::norm(b) + 2.0 * q.real());
  return 2.0 * level * q.imag() * d * d;
}

double MoebiusElement::third_deriv(double t) const {
  const std::complex<double> q = std::conj(a) * b * std::polar(1.0, level * t);
  const double d = 1.0 / (std::norm(a) + std::norm(b) + 2.0 * q.real());
  const double d2 = 2.0 * level * q.imag() * d * d;
  return 2.0 * level * level * q.real() * d * d + 4.0 * level * q.imag() * d * d2;
}

MoebiusElement compose(const MoebiusElement& g1, const MoebiusElement& g2) {
  if (g1.level != g2.level)
    throw std::invalid_argument("compose(MoebiusElement): level mismatch");
  return {g1.a * g2.a + g1.b * std::conj(g2.b),
          g1.a * g2.b + g1.b * std::conj(g2.a), g1.level};
}

CircleDiffeo moebius_diffeo(const MoebiusElement& g, int grid_size) {
  std::vector<double> lift(grid_size + 1), d1(grid_size + 1), d2(grid_size + 1);
  for (int j = 0; j <= grid_size; ++j) {
    const double t = kTwoPi * j / grid_size;
    lift[j] = g.lift(t);
    d1[j] = g.deriv(t);
    d2[j] = g.second_deriv(t);
  }
  return CircleDiffeo::from_lift_and_derivs(std::move(lift), std::move(d1),
                                            std::move(d2));
}

// ---- SmoothBasedMap --------------------------------------------------------

SmoothBasedMap::SmoothBasedMap(std::vector<double> sin_coeff,
                               std::vector<double> cos_coeff)
    : s_(std::move(sin_coeff)), c_(std::move(cos_coeff)) {
  const int k_max = static_cast<int>(std::max(s_.size(), c_.size()));
  int m0 = 4096;
  while (m0 < 32 * k_max) m0 *= 2;
  std::vector<std::complex<double>> v(m0);
  for (int j = 0; j < m0; ++j) v[j] = std::exp(b(kTwoPi * j / m0));
  fft(v, false);
  const double a0 = v[0].real() / m0;
  if (!(a0 > 0.0)) throw std::domain_error("SmoothBasedMap: degenerate density");
  int keep = 0;
  for (int k = 1; k < m0 / 2; ++k)
    if (std::abs(v[k]) / m0 > 1e-16 * a0) keep = k;
  fourier_.resize(keep + 1);
  for (int k = 0; k <= keep; ++k) fourier_[k] = v[k] / static_cast<double>(m0);
  fourier_[0] = a0;
  alpha_ = 1.0 / a0;
}

double SmoothBasedMap::b(double t) const {
  double acc = 0.0;
  for (int k = 1; k <= static_cast<int>(s_.size()); ++k)
    acc += s_[k - 1] * std::sin(k * t);
  for (int k = 1; k <= static_cast<int>(c_.size()); ++k)
    acc += c_[k - 1] * (std::cos(k * t) - 1.0);
  return acc;
}

double SmoothBasedMap::b1(double t) const {
  double acc = 0.0;
  for (int k = 1; k <= static_cast<int>(s_.size()); ++k)
    acc += s_[k - 1] * k * std::cos(k * t);
  for (int k = 1; k <= static_cast<int>(c_.size()); ++k)
    acc -= c_[k - 1] * k * std::sin(k * t);
  return acc;
}

double SmoothBasedMap::b2(double t) const {
  double acc = 0.0;
  for (int k = 1; k <= static_cast<int>(s_.size()); ++k)
    acc -= s_[k - 1] * k * k * std::sin(k * t);
  for (int k = 1; k <= static_cast<int>(c_.size()); ++k)
    acc -= c_[k - 1] * k * k * std::cos(k * t);
  return acc;
}

double SmoothBasedMap::b3(double t) const {
  double acc = 0.0;
  for (int k = 1; k <= static_cast<int>(s_.size()); ++k)
    acc -= s_[k - 1] * k * k * k * std::cos(k * t);
  for (int k = 1; k <= static_cast<int>(c_.size()); ++k)
    acc += c_[k - 1] * k * k * k * std::sin(k * t);
  return acc;
}

double SmoothBasedMap::lift(double t) const {
  // int_0^t e^b = A_0 t + sum_k 2 Im(A_k (e^{ikt} - 1)) / k
  double acc = fourier_[0].real() * t;
  const std::complex<double> z = std::polar(1.0, t);
  std::complex<double> zk = 1.0;
  for (int k = 1; k < static_cast<int>(fourier_.size()); ++k) {
    zk *= z;
    acc += 2.0 * ((fourier_[k] * (zk - 1.0)).imag()) / k;
  }
  return alpha_ * acc;
}

double SmoothBasedMap::third_deriv(double t) const {
  const double g1 = b1(t);
  return deriv(t) * (g1 * g1 + b2(t));
}

double SmoothBasedMap::inverse(double t) const {
  double k;
  const double u = reduce(t, k);
  double lo = 0.0, hi = kTwoPi;
  for (int it = 0; it < 48; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (lift(mid) <= u)
      lo = mid;
    else
      hi = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) x -= (lift(x) - u) / deriv(x);
  return x + kTwoPi * k;
}

CircleDiffeo SmoothBasedMap::to_grid(int grid_size) const {
  std::vector<double> l(grid_size + 1), d1(grid_size + 1), d2(grid_size + 1);
  for (int j = 0; j <= grid_size; ++j) {
    const double t = kTwoPi * j / grid_size;
    l[j] = lift(t);
    d1[j] = deriv(t);
    d2[j] = second_deriv(t);
  }
  return CircleDiffeo::from_lift_and_derivs(std::move(l), std::move(d1),
                                            std::move(d2));
}

std::vector<double> SmoothBasedMap::bridge_coefficients(int n_modes) const {
  // int_0^{2pi} sin(kt) sin(nt/2) dt = pi delta_{n,2k};
  // for odd n, int (cos(kt) - 1) sin(nt/2) dt = n/(n^2/4 - k^2) - 4/n.
  std::vector<double> out(n_modes, 0.0);
  for (int n = 1; n <= n_modes; ++n) {
    double v = 0.0;
    if (n % 2 == 0 && n / 2 <= static_cast<int>(s_.size())) v += kPi * s_[n / 2 - 1];
    if (n % 2 == 1) {
      for (int k = 1; k <= static_cast<int>(c_.size()); ++k)
        v += c_[k - 1] * (n / (0.25 * n * n - k * k) - 4.0 / n);
    }
    out[n - 1] = v / kPi;
  }
  return out;
}

// ---- TrigVectorField -------------------------------------------------------

TrigVectorField::TrigVectorField(std::vector<std::complex<double>> coeff)
    : c_(std::move(coeff)) {
  if (c_.empty() || c_.size() % 2 == 0)
    throw std::invalid_argument("TrigVectorField: need coefficients for k = -K..K");
  k_max_ = static_cast<int>(c_.size()) / 2;
}

TrigVectorField TrigVectorField::complex_mode(int n) {
  const int k = std::abs(n);
  std::vector<std::complex<double>> c(2 * k + 1, 0.0);
  c[k + n] = {0.0, 1.0};
  return TrigVectorField(std::move(c));
}

TrigVectorField TrigVectorField::cosine(int n) {
  const int k = std::abs(n);
  std::vector<std::complex<double>> c(2 * k + 1, 0.0);
  c[k + n] += 0.5;
  c[k - n] += 0.5;
  return TrigVectorField(std::move(c));
}

TrigVectorField TrigVectorField::sine(int n) {
  const int k = std::abs(n);
  std::vector<std::complex<double>> c(2 * k + 1, 0.0);
  c[k + n] += std::complex<double>(0.0, -0.5);
  c[k - n] += std::complex<double>(0.0, 0.5);
  return TrigVectorField(std::move(c));
}

std::complex<double> TrigVectorField::coeff(int k) const {
  if (std::abs(k) > k_max_) return 0.0;
  return c_[k + k_max_];
}

std::complex<double> TrigVectorField::eval(double theta, int deriv_order) const {
  std::complex<double> acc = deriv_order == 0 ? c_[k_max_] : 0.0;
  const std::complex<double> z = std::polar(1.0, theta);
  std::complex<double> zk = 1.0;
  for (int k = 1; k <= k_max_; ++k) {
    zk *= z;
    std::complex<double> fp = 1.0, fm = 1.0;
    for (int m = 0; m < deriv_order; ++m) {
      fp *= std::complex<double>(0.0, k);
      fm *= std::complex<double>(0.0, -k);
    }
    acc += c_[k_max_ + k] * fp * zk + c_[k_max_ - k] * fm * std::conj(zk);
  }
  return acc;
}

bool TrigVectorField::is_real() const {
  for (int k = 0; k <= k_max_; ++k)
    if (std::abs(std::conj(c_[k_max_ + k]) - c_[k_max_ - k]) > 1e-14) return false;
  return true;
}

CircleDiffeo TrigVectorField::flow(double time, int grid_size, int substeps) const {
  if (!is_real()) throw std::domain_error("TrigVectorField::flow: field must be real");
  if (substeps < 1) throw std::invalid_argument("TrigVectorField::flow: substeps < 1");
  // eval once, reusing powers of e^{i theta}, for f, f', f''
  auto rhs = [this](double theta, double& f0, double& f1, double& f2) {
    std::complex<double> a0 = c_[k_max_], a1 = 0.0, a2 = 0.0;
    const std::complex<double> z = std::polar(1.0, theta);
    std::complex<double> zk = 1.0;
    for (int k = 1; k <= k_max_; ++k) {
      zk *= z;
      const std::complex<double> up = c_[k_max_ + k] * zk;
      const std::complex<double> dn = c_[k_max_ - k] * std::conj(zk);
      const std::complex<double> ik(0.0, k);
      a0 += up + dn;
      a1 += ik * (up - dn);
      a2 -= static_cast<double>(k) * k * (up + dn);
    }
    f0 = a0.real();
    f1 = a1.real();
    f2 = a2.real();
  };

  const double dt = time / substeps;
  const int m = grid_size;
  std::vector<double> l(m + 1), d1(m + 1), d2(m + 1);
  for (int j = 0; j <= m; ++j) {
    double th = kTwoPi * j / m, jac = 1.0, kv = 0.0;
    for (int step = 0; step < substeps; ++step) {
      double f0, f1, f2;
      // RK4 on (theta, J, K): theta' = f, J' = f'(theta) J, K' = f'' J^2 + f' K
      double kth[4], kj[4], kk[4];
      double th0 = th, j0 = jac, k0 = kv;
      rhs(th0, f0, f1, f2);
      kth[0] = f0; kj[0] = f1 * j0; kk[0] = f2 * j0 * j0 + f1 * k0;
      double th1 = th + 0.5 * dt * kth[0], j1 = jac + 0.5 * dt * kj[0], k1 = kv + 0.5 * dt * kk[0];
      rhs(th1, f0, f1, f2);
      kth[1] = f0; kj[1] = f1 * j1; kk[1] = f2 * j1 * j1 + f1 * k1;
      double th2 = th + 0.5 * dt * kth[1], j2 = jac + 0.5 * dt * kj[1], k2 = kv + 0.5 * dt * kk[1];
      rhs(th2, f0, f1, f2);
      kth[2] = f0; kj[2] = f1 * j2; kk[2] = f2 * j2 * j2 + f1 * k2;
      double th3 = th + dt * kth[2], j3 = jac + dt * kj[2], k3 = kv + dt * kk[2];
      rhs(th3, f0, f1, f2);
      kth[3] = f0; kj[3] = f1 * j3; kk[3] = f2 * j3 * j3 + f1 * k3;
      th += dt / 6.0 * (kth[0] + 2 * kth[1] + 2 * kth[2] + kth[3]);
      jac += dt / 6.0 * (kj[0] + 2 * kj[1] + 2 * kj[2] + kj[3]);
      kv += dt / 6.0 * (kk[0] + 2 * kk[1] + 2 * kk[2] + kk[3]);
    }
    l[j] = th;
    d1[j] = jac;
    d2[j] = kv;
  }
  l[m] = l[0] + kTwoPi;
  return CircleDiffeo::from_lift_and_derivs(std::move(l), std::move(d1),
                                            std::move(d2));
}

// ---- cocycles --------------------------------------------------------------

double bott_cocycle(const CircleDiffeo& phi, const CircleDiffeo& psi) {
  const int m = std::max(phi.grid_size(), psi.grid_size());
  const double h = kTwoPi / m;
  double acc = 0.0;
  for (int j = 0; j < m; ++j) {
    const double t = h * j;
    const double p = psi.lift(t);
    const double p1 = psi.deriv(t);
    const double p2 = psi.second_deriv(t);
    acc += std::log(phi.deriv(p)) * (p2 / p1) - (phi.lift(p) - p) * (p1 - 1.0);
  }
  return acc * h / (48.0 * kPi);
}

std::complex<double> virasoro_cocycle(const TrigVectorField& xi,
                                      const TrigVectorField& eta) {
  const int km = std::min(xi.max_mode(), eta.max_mode());
  std::complex<double> acc = 0.0;
  for (int k = -km; k <= km; ++k)
    acc += static_cast<double>(k) * (static_cast<double>(k) * k - 1.0) *
           xi.coeff(k) * eta.coeff(-k);
  return -acc / 12.0;
}

std::complex<double> virasoro_cocycle_quadrature(const TrigVectorField& xi,
                                                 const TrigVectorField& eta,
                                                 int grid_size) {
  const double h = kTwoPi / grid_size;
  std::complex<double> acc = 0.0;
  for (int j = 0; j < grid_size; ++j) {
    const double t = h * j;
    acc += xi.eval(t) * (eta.eval(t, 3) + eta.eval(t, 1));
  }
  return std::complex<double>(0.0, 1.0) * acc * h / (24.0 * kPi);
}

// ---- bridge coordinates and the left action --------------------------------

std::vector<double> log_derivative(const CircleDiffeo& psi) {
  const std::vector<double>& d1 = psi.deriv_values();
  const int m = psi.grid_size();
  const double base = std::log(d1[0]);
  std::vector<double> out(m + 1);
  for (int j = 0; j <= m; ++j) out[j] = std::log(d1[j]) - base;
  out[m] = 0.0;  // Psi' is periodic, so the endpoint value is exact
  return out;
}

double rotation_part(const CircleDiffeo& psi) {
  return wrap_2pi(psi.lift_values()[0]);
}

CircleDiffeo based_from_log_derivative(const std::vector<double>& b_values,
                                       const std::vector<double>& b_deriv) {
  const int m = static_cast<int>(b_values.size()) - 1;
  if (m < 4) throw std::invalid_argument("based_from_log_derivative: grid too small");
  const double h = kTwoPi / m;
  std::vector<double> ev(m + 1), slopes(m + 1);
  for (int j = 0; j <= m; ++j) ev[j] = std::exp(b_values[j]);
  const std::vector<double> b1 =
      b_deriv.empty() ? periodic_slopes(b_values, h, 0.0) : b_deriv;
  if (b1.size() != b_values.size())
    throw std::invalid_argument("based_from_log_derivative: derivative size mismatch");
  for (int j = 0; j <= m; ++j) slopes[j] = ev[j] * b1[j];
  std::vector<double> cum = hermite_cumulative(ev, slopes, h);
  const double alpha = kTwoPi / cum[m];
  std::vector<double> lift(m + 1), d1(m + 1), d2(m + 1);
  for (int j = 0; j <= m; ++j) {
    lift[j] = alpha * cum[j];
    d1[j] = alpha * ev[j];
    d2[j] = alpha * slopes[j];
  }
  return CircleDiffeo::from_lift_and_derivs(std::move(lift), std::move(d1),
                                            std::move(d2));
}

CircleDiffeo based_from_bridge(const BridgePath& b) {
  if (!b.coeff.empty()) return based_from_log_derivative(b.values, bridge_derivative_values(b));
  BridgePath tmp = b;
  tmp.coeff = analyze_sine_series(tmp.values);
  return based_from_log_derivative(tmp.values, bridge_derivative_values(tmp));
}

CircleDiffeo diffeo_from_log_derivative(const BridgePath& b, double rotation) {
  if (b.values.size() < 5)
    throw std::domain_error("diffeo_from_log_derivative: grid too small");
  const double tol = 1e-9;
  if (std::abs(b.values.front()) > tol || std::abs(b.values.back()) > tol)
    throw std::domain_error(
        "diffeo_from_log_derivative: b must vanish at both endpoints");
  const CircleDiffeo based = based_from_bridge(b);
  std::vector<double> lift = based.lift_values();
  for (double& v : lift) v += rotation;
  return CircleDiffeo::from_lift_and_derivs(
      std::move(lift), based.deriv_values(), based.second_deriv_values());
}

BridgePoint left_rotation_action(double s, const BridgePath& b) {
  const CircleDiffeo psi = based_from_bridge(b);
  const double target = kTwoPi - wrap_2pi(s);
  const double big_t = psi.inverse(target);
  BridgePoint out;
  // Rot(s) psi_b = psi~ Rot(2 pi - T): the based shift T and the emitted
  // rotation are complementary (b == 0, psi = id forces rotation == s)
  out.rotation = wrap_2pi(kTwoPi - big_t);
  out.b.beta = b.beta;
  out.b.values = bridge_shifted_values(
      b.coeff.empty()
          ? bridge_from_coefficients(b.beta, analyze_sine_series(b.values), b.grid_size())
          : b,
      big_t);
  out.b.coeff = analyze_sine_series(out.b.values);
  return out;
}

BridgePath left_based_action(const std::function<double(double)>& b_phi,
                             const BridgePath& b) {
  const CircleDiffeo psi = based_from_bridge(b);
  const std::vector<double>& l = psi.lift_values();
  const int m = b.grid_size();
  BridgePath out;
  out.beta = b.beta;
  out.values.resize(m + 1);
  for (int j = 0; j <= m; ++j) out.values[j] = b.values[j] + b_phi(l[j]);
  out.values[0] = 0.0;
  out.values[m] = 0.0;
  out.coeff = analyze_sine_series(out.values);
  return out;
}

BridgePath left_based_action(const std::vector<double>& b_phi_values,
                             const BridgePath& b) {
  const int m = static_cast<int>(b_phi_values.size()) - 1;
  const double h = kTwoPi / m;
  UniformHermite interp(0.0, h, b_phi_values, periodic_slopes(b_phi_values, h, 0.0));
  return left_based_action(
      [&interp](double t) {
        double r = std::fmod(t, kTwoPi);
        if (r < 0) r += kTwoPi;
        return interp(r);
      },
      b);
}

BridgePath left_action(const CircleDiffeo& phi, const BridgePath& b) {
  const BridgePath based = left_based_action(log_derivative(phi), b);
  return left_rotation_action(rotation_part(phi), based).b;
}

BridgePoint left_action(const CircleDiffeo& phi, const BridgePoint& g) {
  const BridgePath based = left_based_action(log_derivative(phi), g.b);
  BridgePoint out = left_rotation_action(rotation_part(phi), based);
  out.rotation = wrap_2pi(out.rotation + g.rotation);
  return out;
}

}  // namespace mslab
