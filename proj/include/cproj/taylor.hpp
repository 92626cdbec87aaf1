#pragma once

#include <boost/container/small_vector.hpp>

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace cpg {

// Monomial bookkeeping for truncated Taylor polynomials in n variables.
// Monomials are ordered by total degree, so the space of order k is a prefix
// of the space of order k+1.
class TaylorSpace {
 public:
  struct Term {
    std::uint16_t i, j, k;
  };
  struct DerivTerm {
    std::uint16_t src, dst;
    double factor;
  };

  static const TaylorSpace& get(int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(degree_.size()); }
  int size_upto(int k) const { return upto_[k]; }
  int degree(int idx) const { return degree_[idx]; }
  std::span<const std::uint8_t> exponents(int idx) const {
    return {exps_.data() + static_cast<std::size_t>(idx) * nvars_, static_cast<std::size_t>(nvars_)};
  }
  int index_of(std::span<const int> e) const;

  // products c_k += a_i b_j with deg(k) <= k_max, sorted by deg(k)
  std::span<const Term> products_upto(int k_max) const {
    return {terms_.data(), static_cast<std::size_t>(terms_upto_[k_max])};
  }
  std::span<const DerivTerm> derivative(int var) const { return deriv_[var]; }

 private:
  TaylorSpace(int nvars, int order);

  int nvars_, order_;
  std::vector<std::uint8_t> exps_;
  std::vector<int> degree_;
  std::vector<int> upto_;
  std::vector<Term> terms_;
  std::vector<int> terms_upto_;
  std::vector<std::vector<DerivTerm>> deriv_;
  std::unordered_map<std::uint64_t, int> index_;
};

// Truncated multivariate Taylor polynomial in displacement variables dx.
class Taylor {
 public:
  using Storage = boost::container::small_vector<double, 16>;

  Taylor() : nvars_(0), order_(0), c_(1, 0.0) {}
  Taylor(int nvars, int order, double value = 0.0);

  static Taylor variable(int nvars, int order, int var, double at);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(c_.size()); }
  const TaylorSpace& space() const { return TaylorSpace::get(nvars_, order_); }

  double value() const { return c_[0]; }
  double d1(int i) const;
  double d2(int i, int j) const;
  double coeff(int idx) const { return c_[idx]; }
  double& coeff(int idx) { return c_[idx]; }
  const Storage& coeffs() const { return c_; }

  Taylor truncated(int order) const;
  Taylor derivative(int var) const;

  Taylor& operator+=(const Taylor& o);
  Taylor& operator-=(const Taylor& o);
  Taylor& operator*=(const Taylor& o);
  Taylor& operator/=(const Taylor& o);
  Taylor& operator+=(double s) { c_[0] += s; return *this; }
  Taylor& operator-=(double s) { c_[0] -= s; return *this; }
  Taylor& operator*=(double s);
  Taylor& operator/=(double s) { return *this *= 1.0 / s; }
  Taylor operator-() const;

  // fused a += s*b
  void axpy(double s, const Taylor& b);
  // fused a += b*c
  void add_product(const Taylor& b, const Taylor& c);

 private:
  void shrink_to(int order);

  std::uint8_t nvars_, order_;
  Storage c_;
};

Taylor operator+(Taylor a, const Taylor& b);
Taylor operator-(Taylor a, const Taylor& b);
Taylor operator*(const Taylor& a, const Taylor& b);
Taylor operator/(const Taylor& a, const Taylor& b);
Taylor operator+(Taylor a, double s);
Taylor operator+(double s, Taylor a);
Taylor operator-(Taylor a, double s);
Taylor operator-(double s, const Taylor& a);
Taylor operator*(Taylor a, double s);
Taylor operator*(double s, Taylor a);
Taylor operator/(Taylor a, double s);
Taylor operator/(double s, const Taylor& a);

Taylor reciprocal(const Taylor& a);
Taylor sqrt(const Taylor& a);
Taylor log(const Taylor& a);
Taylor exp(const Taylor& a);
Taylor pow(const Taylor& a, double e);

// scalar helpers so templated code works for double and Taylor alike
inline double value_of(double x) { return x; }
inline double value_of(const Taylor& x) { return x.value(); }

}  // namespace cpg
