#pragma once

#include "cproj/taylor.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cpg {

// Dense array of rank r over dimension n, row-major. Upper indices come
// first in every valence used by the library.
template <class T>
class TensorOf {
 public:
  TensorOf() = default;
  TensorOf(int dim, int rank, const T& fill) : dim_(dim), rank_(rank) {
    std::size_t n = 1;
    for (int k = 0; k < rank; ++k) n *= static_cast<std::size_t>(dim);
    data_.assign(n, fill);
  }

  int dim() const { return dim_; }
  int rank() const { return rank_; }
  std::size_t size() const { return data_.size(); }

  template <class... I>
  T& operator()(I... idx) {
    return data_[offset(idx...)];
  }
  template <class... I>
  const T& operator()(I... idx) const {
    return data_[offset(idx...)];
  }
  T& operator[](std::size_t k) { return data_[k]; }
  const T& operator[](std::size_t k) const { return data_[k]; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

 private:
  template <class... I>
  std::size_t offset(I... idx) const {
    std::size_t off = 0;
    ((off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx)), ...);
    return off;
  }

  int dim_ = 0;
  int rank_ = 0;
  std::vector<T> data_;
};

using Tensor = TensorOf<double>;
using JetTensor = TensorOf<Taylor>;

// zero jet tensor with given Taylor shape
inline JetTensor jet_zeros(int dim, int rank, int nvars, int order) {
  return JetTensor(dim, rank, Taylor(nvars, order));
}

inline Tensor values(const JetTensor& t) {
  Tensor out(t.dim(), t.rank(), 0.0);
  for (std::size_t k = 0; k < t.size(); ++k) out[k] = t[k].value();
  return out;
}

inline JetTensor truncated(const JetTensor& t, int order) {
  JetTensor out = t;
  for (auto& x : out.data()) x = x.truncated(order);
  return out;
}

// constant jet from a numeric tensor
inline JetTensor constant_jet(const Tensor& t, int nvars, int order) {
  JetTensor out(t.dim(), t.rank(), Taylor(nvars, order));
  for (std::size_t k = 0; k < t.size(); ++k) out[k] = Taylor(nvars, order, t[k]);
  return out;
}

// partial derivative of every component; derivative index placed first
inline JetTensor partial(const JetTensor& t) {
  const int n = t.dim();
  JetTensor out(n, t.rank() + 1, Taylor());
  const std::size_t blk = t.size();
  for (int c = 0; c < n; ++c)
    for (std::size_t k = 0; k < blk; ++k) out[c * blk + k] = t[k].derivative(c);
  return out;
}

inline double max_abs(const Tensor& t) {
  double m = 0.0;
  for (double x : t.data()) m = std::max(m, std::abs(x));
  return m;
}

inline double frobenius(const Tensor& t) {
  double s = 0.0;
  for (double x : t.data()) s += x * x;
  return std::sqrt(s);
}

inline Tensor operator-(const Tensor& a, const Tensor& b) {
  if (a.size() != b.size()) throw std::invalid_argument("tensor shape mismatch");
  Tensor out = a;
  for (std::size_t k = 0; k < a.size(); ++k) out[k] -= b[k];
  return out;
}

inline Eigen::MatrixXd to_matrix(const Tensor& t) {
  if (t.rank() != 2) throw std::invalid_argument("to_matrix needs a rank-2 tensor");
  const int n = t.dim();
  Eigen::MatrixXd m(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m(a, b) = t(a, b);
  return m;
}

inline Tensor from_matrix(const Eigen::MatrixXd& m) {
  Tensor t(static_cast<int>(m.rows()), 2, 0.0);
  for (int a = 0; a < m.rows(); ++a)
    for (int b = 0; b < m.cols(); ++b) t(a, b) = m(a, b);
  return t;
}

inline Eigen::VectorXd to_vector(const Tensor& t) {
  Eigen::VectorXd v(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) v(k) = t[k];
  return v;
}

inline Tensor from_vector(const Eigen::VectorXd& v) {
  Tensor t(static_cast<int>(v.size()), 1, 0.0);
  for (int k = 0; k < v.size(); ++k) t(k) = v(k);
  return t;
}

}  // namespace cpg
