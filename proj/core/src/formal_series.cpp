#include "mslab/formal_series.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace mslab {

namespace {
void check_same_order(int a, int b, const char* who) {
  if (a != b)
    throw std::invalid_argument(std::string(who) + ": truncation orders differ");
}
}  // namespace

FormalSeries::FormalSeries(int order) {
  if (order < 1) throw std::invalid_argument("FormalSeries: order must be >= 1");
  c_.assign(static_cast<std::size_t>(order), C(0.0, 0.0));
}

FormalSeries FormalSeries::identity(int order) {
  FormalSeries f(order);
  f.c_[0] = C(1.0, 0.0);
  return f;
}

FormalSeries FormalSeries::from_coefficients(std::vector<C> c) {
  if (c.empty()) throw std::invalid_argument("FormalSeries: empty coefficients");
  FormalSeries f(static_cast<int>(c.size()));
  f.c_ = std::move(c);
  return f;
}

FormalSeries::C FormalSeries::coeff(int k) const {
  if (k < 1 || k > order()) throw std::out_of_range("FormalSeries::coeff");
  return c_[static_cast<std::size_t>(k - 1)];
}

void FormalSeries::set_coeff(int k, C value) {
  if (k < 1 || k > order()) throw std::out_of_range("FormalSeries::set_coeff");
  c_[static_cast<std::size_t>(k - 1)] = value;
}

FormalSeries& FormalSeries::operator+=(const FormalSeries& other) {
  check_same_order(order(), other.order(), "FormalSeries::operator+=");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
  return *this;
}

FormalSeries& FormalSeries::operator-=(const FormalSeries& other) {
  check_same_order(order(), other.order(), "FormalSeries::operator-=");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= other.c_[i];
  return *this;
}

FormalSeries& FormalSeries::operator*=(C scalar) {
  for (auto& x : c_) x *= scalar;
  return *this;
}

FormalSeries FormalSeries::multiply(const FormalSeries& other) const {
  check_same_order(order(), other.order(), "FormalSeries::multiply");
  const int n = order();
  FormalSeries out(n);
  for (int i = 1; i <= n; ++i) {
    if (c_[i - 1] == C(0.0, 0.0)) continue;
    for (int j = 1; i + j <= n; ++j)
      out.c_[i + j - 1] += c_[i - 1] * other.c_[j - 1];
  }
  return out;
}

double FormalSeries::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& x : c_) m = std::max(m, std::abs(x));
  return m;
}

std::string FormalSeries::to_json() const {
  nlohmann::json j;
  j["order"] = order();
  auto arr = nlohmann::json::array();
  for (const auto& x : c_) arr.push_back({x.real(), x.imag()});
  j["coefficients"] = arr;
  return j.dump();
}

FormalSeries FormalSeries::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const int order = j.at("order").get<int>();
  const auto& arr = j.at("coefficients");
  if (static_cast<int>(arr.size()) != order)
    throw std::invalid_argument("FormalSeries::from_json: length mismatch");
  std::vector<C> c;
  c.reserve(arr.size());
  for (const auto& e : arr) c.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  return from_coefficients(std::move(c));
}

FormalSeries compose(const FormalSeries& f, const FormalSeries& g) {
  check_same_order(f.order(), g.order(), "compose");
  const int n = f.order();
  FormalSeries out(n);
  FormalSeries power = g;  // g^k, truncated
  for (int k = 1; k <= n; ++k) {
    out += f.coeff(k) * power;
    if (k < n) power = power.multiply(g);
  }
  return out;
}

FormalSeries invert(const FormalSeries& f) {
  const int n = f.order();
  const auto c1 = f.coeff(1);
  if (std::abs(c1) == 0.0)
    throw std::domain_error("invert: z-coefficient vanishes, not invertible");
  FormalSeries g(n);
  g.set_coeff(1, 1.0 / c1);
  // The z^k coefficient of f(g(z)) is c1 * g_k plus terms using only
  // g_1..g_{k-1}; correct one order per pass.
  for (int k = 2; k <= n; ++k) {
    const FormalSeries fg = compose(f, g);
    g.set_coeff(k, g.coeff(k) - fg.coeff(k) / c1);
  }
  return g;
}

FormalVectorField::FormalVectorField(int order) : order_(order) {
  if (order < 2)
    throw std::invalid_argument("FormalVectorField: order must be >= 2");
  v_.assign(static_cast<std::size_t>(order - 1), C(0.0, 0.0));
}

FormalVectorField FormalVectorField::from_coefficients(int order,
                                                       std::vector<C> v) {
  FormalVectorField out(order);
  if (static_cast<int>(v.size()) != order - 1)
    throw std::invalid_argument("FormalVectorField: need order-1 coefficients");
  out.v_ = std::move(v);
  return out;
}

FormalVectorField::C FormalVectorField::coeff(int k) const {
  if (k < 2 || k > order_) throw std::out_of_range("FormalVectorField::coeff");
  return v_[static_cast<std::size_t>(k - 2)];
}

void FormalVectorField::set_coeff(int k, C value) {
  if (k < 2 || k > order_) throw std::out_of_range("FormalVectorField::set_coeff");
  v_[static_cast<std::size_t>(k - 2)] = value;
}

FormalSeries apply_field(const FormalVectorField& V, const FormalSeries& f) {
  check_same_order(V.order(), f.order(), "apply_field");
  const int n = f.order();
  FormalSeries out(n);
  // (v f')_m = sum_{j+k-1=m, j>=2, k>=1} v_j * k * f_k
  for (int j = 2; j <= n; ++j) {
    const auto vj = V.coeff(j);
    if (vj == FormalSeries::C(0.0, 0.0)) continue;
    for (int k = 1; j + k - 1 <= n; ++k)
      out.set_coeff(j + k - 1,
                    out.coeff(j + k - 1) + vj * static_cast<double>(k) * f.coeff(k));
  }
  return out;
}

FormalSeries exp_vector_field(const FormalVectorField& V, int order) {
  check_same_order(V.order(), order, "exp_vector_field");
  FormalSeries sum = FormalSeries::identity(order);
  FormalSeries term = FormalSeries::identity(order);
  for (int n = 1; n <= order; ++n) {
    term = apply_field(V, term);
    term *= FormalSeries::C(1.0 / static_cast<double>(n), 0.0);
    if (term.max_abs_coeff() == 0.0) break;
    sum += term;
  }
  return sum;
}

std::pair<std::complex<double>, FormalVectorField> decompose_lambda_exp(
    const FormalSeries& t) {
  const int n = t.order();
  const auto lambda = t.coeff(1);
  if (std::abs(lambda) == 0.0)
    throw std::domain_error("decompose_lambda_exp: z-coefficient vanishes");
  FormalSeries s = t;
  s *= 1.0 / lambda;
  FormalVectorField V(n);
  for (int k = 2; k <= n; ++k) {
    const FormalSeries e = exp_vector_field(V, n);
    V.set_coeff(k, V.coeff(k) + s.coeff(k) - e.coeff(k));
  }
  return {lambda, V};
}

std::pair<std::complex<double>, FormalVectorField> extract_lambda_v(
    const FormalSeries& u) {
  return decompose_lambda_exp(invert(u));
}

}  // namespace mslab
