#pragma once

// Truncated formal power series f(z) = c_1 z + c_2 z^2 + ... + c_N z^N under
// composition, and the subgroup generated by scalings and flows of vector
// fields v(z) d/dz with v = O(z^2). Composition with a fixed invertible
// element acts as an algebra automorphism of the truncated polynomial
// algebra; extract_lambda_v splits a group element into scaling and flow
// data, inverting f = lambda * exp(V) z order by order.

#include <complex>
#include <string>
#include <vector>

namespace mslab {

class FormalVectorField;

class FormalSeries {
 public:
  using C = std::complex<double>;

  explicit FormalSeries(int order);
  static FormalSeries identity(int order);  // z
  static FormalSeries from_coefficients(std::vector<C> c);  // c[k] -> z^{k+1}

  int order() const { return static_cast<int>(c_.size()); }

  // coefficient of z^k, k in [1, order]
  C coeff(int k) const;
  void set_coeff(int k, C value);

  FormalSeries& operator+=(const FormalSeries& other);
  FormalSeries& operator-=(const FormalSeries& other);
  FormalSeries& operator*=(C scalar);
  friend FormalSeries operator+(FormalSeries a, const FormalSeries& b) { return a += b; }
  friend FormalSeries operator-(FormalSeries a, const FormalSeries& b) { return a -= b; }
  friend FormalSeries operator*(C s, FormalSeries a) { return a *= s; }

  // truncated Cauchy product
  FormalSeries multiply(const FormalSeries& other) const;

  double max_abs_coeff() const;

  std::string to_json() const;
  static FormalSeries from_json(const std::string& text);

 private:
  std::vector<C> c_;  // c_[k-1] is the coefficient of z^k
};

// f(g(z)) truncated at the common order; throws on order mismatch.
FormalSeries compose(const FormalSeries& f, const FormalSeries& g);

// compositional inverse; throws if the z-coefficient vanishes
FormalSeries invert(const FormalSeries& f);

// v(z) d/dz with v = v_2 z^2 + ... + v_N z^N
class FormalVectorField {
 public:
  using C = std::complex<double>;

  explicit FormalVectorField(int order);
  static FormalVectorField from_coefficients(int order, std::vector<C> v2_to_vN);

  int order() const { return order_; }
  C coeff(int k) const;           // k in [2, order]
  void set_coeff(int k, C value);

 private:
  int order_;
  std::vector<C> v_;  // v_[k-2] is the coefficient of z^k
};

// (v d/dz) applied to f: v * f'
FormalSeries apply_field(const FormalVectorField& V, const FormalSeries& f);

// exp(V) z = sum_n (1/n!) (v d/dz)^n z; the sum terminates at the truncation
// order because (v d/dz)^n z = O(z^{n+1}).
FormalSeries exp_vector_field(const FormalVectorField& V, int order);

// Solve lambda * exp(V) z = t order by order (t_1 = lambda; the z^k
// coefficient of exp(V) z is v_k plus terms in v_2..v_{k-1}).
std::pair<std::complex<double>, FormalVectorField> decompose_lambda_exp(
    const FormalSeries& t);

// Split data of u: lambda * exp(V) z = u^{-1}.
std::pair<std::complex<double>, FormalVectorField> extract_lambda_v(
    const FormalSeries& u);

}  // namespace mslab
